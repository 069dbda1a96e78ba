#include "cli.hpp"

#include "holoscope/event_table.hpp"
#include "holoscope/scenario.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = HOLOSCOPE_SCENARIO_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result holoscope(std::vector<std::string> args) {
    args.insert(args.begin(), "holoscope");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = holo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("holoscope-test-" + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t data_rows(const fs::path& csv) {
    std::size_t lines = 0;
    for (char c : slurp(csv)) lines += c == '\n';
    return lines - 1;
}

std::string scenario(const char* name) { return (kScenarios / name).string(); }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes the event table and a manifest") {
    TempDir dir;
    const Result r = holoscope({"simulate", "--scenario", scenario("static_octagon.scenario"), "--ball-radius", "1",
                                "--out", dir.path().string(), "--threads", "2", "--seed", "17"});
    REQUIRE(r.code == 0);
    CHECK(data_rows(dir.path() / "events.csv") == 8);

    const auto manifest = nlohmann::json::parse(slurp(dir.path() / "manifest.json"));
    CHECK(manifest["tool"] == "holoscope");
    CHECK(manifest["command"] == "simulate");
    CHECK(manifest["seed"] == 17);
    CHECK(manifest["input"]["name"] == "static_octagon.scenario");
    CHECK(manifest["input"]["sha256"].get<std::string>().size() == 64);
    REQUIRE(manifest["outputs"].size() == 1);
    CHECK(manifest["outputs"][0]["file"] == "events.csv");
    CHECK(manifest["outputs"][0]["bytes"] == fs::file_size(dir.path() / "events.csv"));
    CHECK_FALSE(manifest.contains("timings_ms"));
}

TEST_CASE("reruns are byte-identical across thread counts") {
    TempDir a, b;
    const std::string s = scenario("grafted_a1.scenario");
    REQUIRE(holoscope({"simulate", "--scenario", s, "--out", a.path().string(), "--threads", "1"}).code == 0);
    REQUIRE(holoscope({"simulate", "--scenario", s, "--out", b.path().string(), "--threads", "4"}).code == 0);
    CHECK(slurp(a.path() / "events.csv") == slurp(b.path() / "events.csv"));
    CHECK(slurp(a.path() / "manifest.json") == slurp(b.path() / "manifest.json"));

    REQUIRE(holoscope({"simulate", "--scenario", s, "--out", b.path().string(), "--record-timings"}).code == 0);
    CHECK(nlohmann::json::parse(slurp(b.path() / "manifest.json")).contains("timings_ms"));
}

TEST_CASE("invalid scenarios") {
    TempDir dir;
    std::string text = slurp(scenario("static_octagon.scenario"));
    const auto at = text.find("generator b1");
    text.replace(at, text.find('\n', at) - at, "generator b1 1 0 0 0 0 -1 0 1 0 0 0 0");
    std::ofstream(dir / "elliptic.scenario") << text;
    const fs::path out = dir.path() / "out";
    const Result r = holoscope({"simulate", "--scenario", dir / "elliptic.scenario", "--out", out.string()});
    CHECK(r.code == holo::cli::kValidationError);
    CHECK_FALSE(fs::exists(out / "events.csv"));
    const auto diag = nlohmann::json::parse(r.err);
    CHECK(diag["error"] == "validation");

    std::ofstream(dir / "broken.scenario") << "holoscope-scenario 1\ngenus two\n";
    const Result p = holoscope({"simulate", "--scenario", dir / "broken.scenario", "--out", out.string()});
    CHECK(p.code == holo::cli::kParseError);
    CHECK(nlohmann::json::parse(p.err)["message"].get<std::string>().find("line 2, column 7") != std::string::npos);
}

TEST_CASE("reconstruct in both modes") {
    TempDir dir;
    REQUIRE(holoscope({"simulate", "--scenario", scenario("static_octagon.scenario"), "--out", dir / "static"}).code == 0);
    const Result ok = holoscope({"reconstruct", "--events", dir / "static/events.csv", "--mode", "static", "--out",
                                 dir / "static"});
    CHECK(ok.code == 0);
    const std::string report = slurp(dir.path() / "static/reconstruction.txt");
    std::size_t pairings = 0;
    for (std::size_t p = report.find("\npairing "); p != std::string::npos; p = report.find("\npairing ", p + 1)) ++pairings;
    CHECK(pairings == 4);
    CHECK(report.find("status ok") != std::string::npos);
    const holo::Scenario recovered = holo::load_scenario(dir.path() / "static/recovered.scenario");
    CHECK_NOTHROW(holo::validate_scenario(recovered));

    const Result single = holoscope({"reconstruct", "--events", dir / "static/events.csv", "--mode", "evolving",
                                     "--out", dir / "static"});
    CHECK(single.code == holo::cli::kInsufficientData);

    const std::string csv = slurp(dir.path() / "static/events.csv");
    std::ofstream(dir / "cut.csv") << csv.substr(0, csv.size() / 2);
    const Result cut = holoscope({"reconstruct", "--events", dir / "cut.csv", "--mode", "static", "--out", dir / "x"});
    CHECK(cut.code == holo::cli::kParseError);
    CHECK(cut.err.find("line ") != std::string::npos);
}

TEST_CASE("round trips of the bundled scenarios") {
    for (const char* name : {"static_octagon.scenario", "static_shifted_tip.scenario", "grafted_a1.scenario",
                             "static_genus3.scenario"}) {
        CAPTURE(name);
        const Result r = holoscope({"roundtrip", "--scenario", scenario(name)});
        CHECK(r.code == 0);
        CHECK(r.out.find(": pass") != std::string::npos);
    }
    const Result strict = holoscope({"roundtrip", "--scenario", scenario("static_octagon.scenario"), "--tolerance", "1e-30"});
    CHECK(strict.code == holo::cli::kResidualFailure);
}

TEST_CASE("make-scenario writes a loadable file") {
    TempDir dir;
    const Result r = holoscope({"make-scenario", "--genus", "2", "--graft-word", "b1", "--graft-weight", "0.3",
                                "--times", "2", "3", "--random-frame", "--seed", "4", "--out", dir / "made.scenario"});
    REQUIRE(r.code == 0);
    const holo::Scenario s = holo::load_scenario(dir.path() / "made.scenario");
    CHECK(s.times.size() == 2);
    REQUIRE(s.holonomy.provenance().has_value());
    CHECK(s.holonomy.provenance()->curve.to_string() == "b1");
}

TEST_CASE("usage errors and help") {
    CHECK(holoscope({"--help"}).code == 0);
    CHECK(holoscope({"simulate", "--help"}).out.find("--threads") != std::string::npos);
    CHECK(holoscope({}).code != 0);
    CHECK(holoscope({"simulate"}).code != 0);
    CHECK(holoscope({"reconstruct", "--events", scenario("static_octagon.scenario"), "--mode", "sideways"}).code != 0);
}

TEST_CASE("output directory from the environment") {
    TempDir dir;
    ::setenv("HOLOSCOPE_OUT_DIR", dir.path().c_str(), 1);
    const Result r = holoscope({"simulate", "--scenario", scenario("static_octagon.scenario"), "--ball-radius", "1"});
    ::unsetenv("HOLOSCOPE_OUT_DIR");
    CHECK(r.code == 0);
    CHECK(fs::exists(dir.path() / "events.csv"));
}

} // TEST_SUITE
