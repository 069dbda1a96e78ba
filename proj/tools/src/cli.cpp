#include "cli.hpp"

#include "manifest.hpp"

#include "holoscope/error.hpp"
#include "holoscope/event_table.hpp"
#include "holoscope/reconstruct.hpp"
#include "holoscope/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

namespace holo::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Parse: return kParseError;
    case ErrorKind::Validation:
    case ErrorKind::Domain:
    case ErrorKind::Geometry: return kValidationError;
    case ErrorKind::InsufficientData: return kInsufficientData;
    case ErrorKind::Residual: return kResidualFailure;
    default: return kFailure;
    }
}

std::string default_out_dir() {
    if (const char* env = std::getenv("HOLOSCOPE_OUT_DIR"); env && *env) return env;
    return ".";
}

class Stopwatch {
public:
    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct CommonOptions {
    std::string out_dir = default_out_dir();
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
    bool record_timings = false;
};

struct SimulateOptions {
    std::string scenario;
    std::optional<int> ball_radius;
};

struct ReconstructArgs {
    std::string events;
    std::string mode;
};

struct RoundtripArgs {
    std::string scenario;
    std::string mode = "auto";
    std::optional<int> ball_radius;
    bool write_outputs = false;
};

struct MakeScenarioArgs {
    int genus = 2;
    std::vector<double> tip{0.0, 0.0, 0.0};
    std::string graft_word;
    double graft_weight = 0.0;
    std::vector<double> velocity{1.0, 0.0, 0.0};
    std::vector<double> position;
    std::vector<double> times{2.0};
    int ball_radius = 3;
    std::uint64_t seed = 1;
    bool random_frame = false;
    std::string out;
};

MinkowskiVector vec3(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

Scenario load_checked(const std::string& path, std::optional<double> relator_tolerance) {
    Scenario s = load_scenario(path);
    if (relator_tolerance) s.relator_tolerance = *relator_tolerance;
    validate_scenario(s);
    return s;
}

int cmd_simulate(const SimulateOptions& o, const CommonOptions& c, std::ostream& out) {
    Stopwatch clock;
    RunManifest m;
    m.command = "simulate";
    const std::string input = read_file(o.scenario);
    m.input_name = fs::path(o.scenario).filename().string();
    m.input_sha256 = sha256_hex(input);
    m.seed = c.seed;

    const Scenario s = load_checked(o.scenario, c.tolerance);
    m.timings_ms["load"] = clock.lap_ms();
    const int radius = o.ball_radius.value_or(s.ball_radius);
    m.settings["ball-radius"] = std::to_string(radius);
    const auto events = simulate_scan(s.observer, s.holonomy, s.times, {radius, c.threads});
    m.timings_ms["simulate"] = clock.lap_ms();

    const fs::path dir = c.out_dir;
    write_file(dir / "events.csv", events_to_csv(events));
    m.outputs.push_back(dir / "events.csv");
    m.timings_ms["write"] = clock.lap_ms();
    write_manifest(dir, m, c.record_timings);
    out << fmt::format("{} events ({} words x {} times) -> {}\n", events.size(),
                       s.times.empty() ? 0 : events.size() / s.times.size(), s.times.size(),
                       (dir / "events.csv").string());
    return kOk;
}

Reconstruction run_reconstruction(const std::vector<ReturnEvent>& events, const std::string& mode, double tol) {
    ReconstructOptions options;
    options.tolerance = tol;
    if (mode == "static") return reconstruct_static(events, options);
    return reconstruct_evolving(events, options);
}

Scenario recovered_scenario(const Reconstruction& r, int ball_radius) {
    return Scenario{*r.holonomy, r.gauge_observer(), r.times, ball_radius, kRelatorTolerance, 1e-5};
}

int cmd_reconstruct(const ReconstructArgs& o, const CommonOptions& c, std::ostream& out) {
    Stopwatch clock;
    RunManifest m;
    m.command = "reconstruct";
    const std::string input = read_file(o.events);
    m.input_name = fs::path(o.events).filename().string();
    m.input_sha256 = sha256_hex(input);
    m.seed = c.seed;
    m.settings["mode"] = o.mode;
    const double tol = c.tolerance.value_or(1e-6);
    m.settings["tolerance"] = fmt::format("{:.17g}", tol);

    std::istringstream in(input);
    const auto events = read_events_csv(in);
    m.timings_ms["load"] = clock.lap_ms();
    const Reconstruction r = run_reconstruction(events, o.mode, tol);
    m.timings_ms["reconstruct"] = clock.lap_ms();

    const fs::path dir = c.out_dir;
    write_file(dir / "reconstruction.txt", format_report(r, tol));
    m.outputs.push_back(dir / "reconstruction.txt");
    if (r.holonomy) {
        write_file(dir / "recovered.scenario", format_scenario(recovered_scenario(r, 3)));
        m.outputs.push_back(dir / "recovered.scenario");
    }
    write_manifest(dir, m, c.record_timings);

    const bool ok = r.passed(tol);
    out << fmt::format("{} reconstruction: {} sides, {} pairings, worst residual {:.3e} (tolerance {:.1e}): {}\n",
                       o.mode, r.domain.sides().size(), r.pairings.size(), r.worst_residual(), tol,
                       ok ? "ok" : "FAILED");
    return ok ? kOk : kResidualFailure;
}

int cmd_roundtrip(const RoundtripArgs& o, const CommonOptions& c, std::ostream& out) {
    Stopwatch clock;
    const Scenario s = load_checked(o.scenario, std::nullopt);
    const int radius = o.ball_radius.value_or(s.ball_radius);
    const auto events = simulate_scan(s.observer, s.holonomy, s.times, {radius, c.threads});
    const std::string csv = events_to_csv(events);
    std::istringstream in(csv);
    const auto table = read_events_csv(in);
    const double sim_ms = clock.lap_ms();

    std::string mode = o.mode;
    if (mode == "auto") mode = s.times.size() >= 2 ? "evolving" : "static";
    const Reconstruction r = run_reconstruction(table, mode, 1e-6);
    const auto words = comparison_words(s.holonomy, 2);
    const double deviation = invariant_compare(s.holonomy, s.observer, *r.holonomy, r.gauge_observer(), words);
    const double rec_ms = clock.lap_ms();
    const double limit = c.tolerance.value_or(s.reconstruction_tolerance);
    const bool ok = r.passed(1e-6) && deviation < limit;

    if (o.write_outputs) {
        const fs::path dir = c.out_dir;
        RunManifest m;
        m.command = "roundtrip";
        m.input_name = fs::path(o.scenario).filename().string();
        m.input_sha256 = sha256_hex(read_file(o.scenario));
        m.seed = c.seed;
        m.settings["mode"] = mode;
        m.settings["ball-radius"] = std::to_string(radius);
        m.settings["deviation"] = fmt::format("{:.3e}", deviation);
        m.timings_ms["simulate"] = sim_ms;
        m.timings_ms["reconstruct"] = rec_ms;
        write_file(dir / "events.csv", csv);
        write_file(dir / "reconstruction.txt", format_report(r, 1e-6));
        m.outputs = {dir / "events.csv", dir / "reconstruction.txt"};
        write_manifest(dir, m, c.record_timings);
    }
    out << fmt::format("roundtrip {} mode: {} events, {} words compared, max deviation {:.3e} (limit {:.1e}): {}\n",
                       mode, events.size(), words.size(), deviation, limit, ok ? "pass" : "FAIL");
    return ok ? kOk : kResidualFailure;
}

int cmd_make_scenario(const MakeScenarioArgs& o, std::ostream& out) {
    ScenarioRecipe recipe;
    recipe.genus = o.genus;
    recipe.tip = vec3(o.tip);
    if (!o.graft_word.empty()) recipe.grafting = GraftingDatum{GroupWord::parse(o.graft_word), o.graft_weight};
    recipe.observer_velocity = vec3(o.velocity);
    if (!o.position.empty()) recipe.observer_position = vec3(o.position);
    recipe.times = o.times;
    recipe.ball_radius = o.ball_radius;
    recipe.random_frame = o.random_frame;
    recipe.seed = o.seed;
    const Scenario s = make_scenario(recipe);
    validate_scenario(s);
    const std::string text = format_scenario(s);
    // Parse back so a written file is always loadable.
    parse_scenario(text);
    write_file(o.out, text);
    out << fmt::format("genus {} scenario -> {}\n", o.genus, o.out);
    return kOk;
}

void add_common(CLI::App* sub, CommonOptions& c, bool with_out = true) {
    if (with_out)
        sub->add_option("--out", c.out_dir, "Output directory (default: $HOLOSCOPE_OUT_DIR or .)");
    sub->add_option("--threads", c.threads, "Worker threads; outputs do not depend on this")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Seed recorded in the manifest");
    sub->add_flag("--record-timings", c.record_timings, "Add per-stage wall-clock timings to manifest.json");
}

} // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Returning-light measurements in flat (2+1)-dimensional universes: forward simulation and "
                 "reconstruction of the holonomies",
                 "holoscope"};
    app.set_version_flag("--version", std::string(HOLOSCOPE_VERSION));
    app.require_subcommand(1);

    CommonOptions common;
    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Scan a scenario and write events.csv and manifest.json");
    simulate->add_option("--scenario", sim.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--ball-radius", sim.ball_radius, "Override the scenario's word-length radius")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--tolerance", common.tolerance, "Relator tolerance used to validate the scenario");
    add_common(simulate, common);

    ReconstructArgs rec;
    auto* reconstruct = app.add_subcommand("reconstruct", "Rebuild the holonomies from an event table");
    reconstruct->add_option("--events", rec.events, "events.csv written by simulate")
        ->required()
        ->check(CLI::ExistingFile);
    reconstruct->add_option("--mode", rec.mode, "static: one emission time; evolving: two or more")
        ->required()
        ->check(CLI::IsMember({"static", "evolving"}));
    reconstruct->add_option("--tolerance", common.tolerance, "Largest acceptable residual (default 1e-6)");
    add_common(reconstruct, common);

    RoundtripArgs rt;
    auto* roundtrip = app.add_subcommand("roundtrip", "Simulate, reconstruct and compare against the input");
    roundtrip->add_option("--scenario", rt.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    roundtrip->add_option("--mode", rt.mode, "auto picks evolving when there are two or more emission times")
        ->check(CLI::IsMember({"auto", "static", "evolving"}));
    roundtrip->add_option("--ball-radius", rt.ball_radius, "Override the scenario's word-length radius")
        ->check(CLI::PositiveNumber);
    roundtrip->add_option("--tolerance", common.tolerance, "Largest acceptable invariant deviation");
    roundtrip->add_flag("--write", rt.write_outputs, "Also write events, report and manifest to --out");
    add_common(roundtrip, common);

    MakeScenarioArgs mk;
    auto* make = app.add_subcommand("make-scenario", "Write a scenario for the regular 4g-gon group");
    make->add_option("--genus", mk.genus, "Genus (>= 2)")->check(CLI::Range(2, 64));
    make->add_option("--tip", mk.tip, "Translation making the static spacetime's cone tip")->expected(3);
    make->add_option("--graft-word", mk.graft_word, "Closed curve to graft along, e.g. a1");
    make->add_option("--graft-weight", mk.graft_weight, "Width of the inserted strip")->check(CLI::NonNegativeNumber);
    make->add_option("--observer-velocity", mk.velocity, "Observer 3-velocity (rescaled to unit length)")
        ->expected(3);
    make->add_option("--observer-position", mk.position, "Observer position at t = 0 (default: the tip)")
        ->expected(3);
    make->add_option("--times", mk.times, "Emission times")->expected(1, 1 << 20);
    make->add_option("--ball-radius", mk.ball_radius, "Word-length radius of the scan")->check(CLI::PositiveNumber);
    make->add_option("--seed", mk.seed, "Seed of the random frame");
    make->add_flag("--random-frame", mk.random_frame, "Conjugate by a random Poincare transform");
    make->add_option("--out", mk.out, "Scenario file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*simulate) return cmd_simulate(sim, common, out);
        if (*reconstruct) return cmd_reconstruct(rec, common, out);
        if (*roundtrip) return cmd_roundtrip(rt, common, out);
        if (*make) return cmd_make_scenario(mk, out);
    } catch (const Error& e) {
        const nlohmann::ordered_json diag = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
        err << diag.dump() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        const nlohmann::ordered_json diag = {{"error", "internal"}, {"message", e.what()}};
        err << diag.dump() << "\n";
        return kFailure;
    }
    return kFailure;
}

} // namespace holo::cli
