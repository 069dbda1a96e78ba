#include "holoscope/scenario.hpp"

#include "holoscope/error.hpp"
#include "holoscope/fuchsian.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace holo {

namespace {

struct Token {
    std::string_view text;
    std::size_t column;
};

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    // Next non-empty, comment-stripped line split into tokens; false at end of input.
    bool next(std::vector<Token>& tokens) {
        while (pos_ < text_.size()) {
            const std::size_t nl = std::min(text_.find('\n', pos_), text_.size());
            std::string_view line = text_.substr(pos_, nl - pos_);
            pos_ = nl == text_.size() ? nl : nl + 1;
            ++line_no_;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            tokens.clear();
            std::size_t i = 0;
            while (i < line.size()) {
                while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
                const std::size_t start = i;
                while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
                if (i > start) tokens.push_back({line.substr(start, i - start), start + 1});
            }
            if (!tokens.empty()) return true;
        }
        return false;
    }

    std::size_t line() const { return line_no_; }

    [[noreturn]] void error(std::size_t column, const std::string& message) const {
        fail(ErrorKind::Parse, fmt::format("line {}, column {}: {}", line_no_, column, message));
    }

    double number(const Token& t) const {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size() || !std::isfinite(v))
            error(t.column, fmt::format("expected a number, found '{}'", t.text));
        return v;
    }

    int integer(const Token& t) const {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            error(t.column, fmt::format("expected an integer, found '{}'", t.text));
        return v;
    }

    void arity(const std::vector<Token>& tokens, std::size_t n) const {
        if (tokens.size() != n)
            error(tokens.front().column, fmt::format("'{}' takes {} value(s), found {}", tokens.front().text, n - 1,
                                                     tokens.size() - 1));
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

MinkowskiVector vector_at(const LineReader& r, const std::vector<Token>& t, std::size_t first) {
    return {r.number(t[first]), r.number(t[first + 1]), r.number(t[first + 2])};
}

} // namespace

Scenario parse_scenario(std::string_view text) {
    LineReader r(text);
    std::vector<Token> t;
    if (!r.next(t)) fail(ErrorKind::Parse, "line 1, column 1: empty scenario");
    if (t[0].text != "holoscope-scenario") r.error(t[0].column, "expected 'holoscope-scenario' header");
    r.arity(t, 2);
    if (r.integer(t[1]) != kScenarioSchema)
        r.error(t[1].column, fmt::format("unsupported schema version {}", t[1].text));

    std::optional<int> genus;
    std::vector<PoincareElement> gens;
    std::optional<MinkowskiVector> velocity;
    std::optional<MinkowskiVector> position;
    std::vector<double> times;
    std::optional<int> radius;
    double relator_tol = kRelatorTolerance;
    double recon_tol = 1e-5;
    std::optional<GraftingProvenance> provenance;
    bool ended = false;

    while (r.next(t)) {
        const std::string_view key = t[0].text;
        if (ended) r.error(t[0].column, "content after 'end'");
        if (key == "genus") {
            r.arity(t, 2);
            genus = r.integer(t[1]);
            if (*genus < 2) r.error(t[1].column, "genus must be >= 2");
        } else if (key == "generator") {
            if (!genus) r.error(t[0].column, "'genus' must come before the generators");
            r.arity(t, 14);
            const SurfaceGroupPresentation p(*genus);
            if (static_cast<int>(gens.size()) >= p.generator_count()) r.error(t[0].column, "too many generators");
            const std::string expected = p.generator_label(static_cast<int>(gens.size()));
            if (t[1].text != expected)
                r.error(t[1].column, fmt::format("expected generator {}, found '{}'", expected, t[1].text));
            Eigen::Matrix3d m;
            for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = r.number(t[2 + static_cast<std::size_t>(i)]);
            LorentzTransform v;
            try {
                v = LorentzTransform::from_matrix(m);
            } catch (const Error& e) {
                r.error(t[2].column, fmt::format("generator {}: {}", expected, e.what()));
            }
            gens.push_back({v, vector_at(r, t, 11)});
        } else if (key == "observer-velocity") {
            r.arity(t, 4);
            const MinkowskiVector x = vector_at(r, t, 1);
            try {
                velocity = HyperbolicPoint(x).vector();
            } catch (const Error& e) {
                r.error(t[1].column, e.what());
            }
        } else if (key == "observer-position") {
            r.arity(t, 4);
            position = vector_at(r, t, 1);
        } else if (key == "emission-times") {
            if (t.size() < 2) r.error(t[0].column, "'emission-times' needs at least one value");
            times.clear();
            for (std::size_t i = 1; i < t.size(); ++i) {
                times.push_back(r.number(t[i]));
                if (i > 1 && !(times[i - 1] > times[i - 2]))
                    r.error(t[i].column, "emission times must be strictly increasing");
            }
        } else if (key == "ball-radius") {
            r.arity(t, 2);
            radius = r.integer(t[1]);
            if (*radius < 1) r.error(t[1].column, "ball radius must be >= 1");
        } else if (key == "tolerance") {
            r.arity(t, 3);
            const double v = r.number(t[2]);
            if (!(v > 0.0)) r.error(t[2].column, "tolerance must be positive");
            if (t[1].text == "relator")
                relator_tol = v;
            else if (t[1].text == "reconstruction")
                recon_tol = v;
            else
                r.error(t[1].column, fmt::format("unknown tolerance '{}'", t[1].text));
        } else if (key == "grafting") {
            r.arity(t, 4);
            GraftingProvenance g;
            try {
                g.curve = GroupWord::parse(t[1].text);
            } catch (const Error& e) {
                r.error(t[1].column, e.what());
            }
            g.weight = r.number(t[2]);
            g.search_radius = r.integer(t[3]);
            provenance = g;
        } else if (key == "end") {
            r.arity(t, 1);
            ended = true;
        } else {
            r.error(t[0].column, fmt::format("unknown key '{}'", key));
        }
    }

    const std::size_t last = r.line();
    auto missing = [&](const char* what) {
        fail(ErrorKind::Parse, fmt::format("line {}, column 1: missing '{}'", last, what));
    };
    if (!ended) missing("end");
    if (!genus) missing("genus");
    if (static_cast<int>(gens.size()) != 2 * *genus)
        fail(ErrorKind::Parse, fmt::format("line {}, column 1: expected {} generators, found {}", last, 2 * *genus,
                                           gens.size()));
    if (!velocity) missing("observer-velocity");
    if (!position) missing("observer-position");
    if (times.empty()) missing("emission-times");
    if (!radius) missing("ball-radius");

    return Scenario{HolonomyMap(SurfaceGroupPresentation(*genus), std::move(gens), provenance),
                    ObserverWorldline{HyperbolicPoint(*velocity), *position},
                    std::move(times),
                    *radius,
                    relator_tol,
                    recon_tol};
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidArgument, fmt::format("cannot open scenario {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string format_scenario(const Scenario& s) {
    std::string out = fmt::format("holoscope-scenario {}\n", kScenarioSchema);
    const auto& h = s.holonomy;
    out += fmt::format("genus {}\n", h.genus());
    for (int i = 0; i < h.presentation().generator_count(); ++i) {
        const auto& g = h.generator(i);
        out += fmt::format("generator {}", h.presentation().generator_label(i));
        for (int row = 0; row < 3; ++row)
            for (int col = 0; col < 3; ++col) out += fmt::format(" {:.17g}", g.v(row, col));
        out += fmt::format(" {:.17g} {:.17g} {:.17g}\n", g.a[0], g.a[1], g.a[2]);
    }
    const auto& x = s.observer.velocity.vector();
    const auto& x0 = s.observer.position;
    out += fmt::format("observer-velocity {:.17g} {:.17g} {:.17g}\n", x[0], x[1], x[2]);
    out += fmt::format("observer-position {:.17g} {:.17g} {:.17g}\n", x0[0], x0[1], x0[2]);
    out += "emission-times";
    for (double t : s.times) out += fmt::format(" {:.17g}", t);
    out += fmt::format("\nball-radius {}\n", s.ball_radius);
    out += fmt::format("tolerance relator {:.17g}\n", s.relator_tolerance);
    out += fmt::format("tolerance reconstruction {:.17g}\n", s.reconstruction_tolerance);
    if (const auto& g = h.provenance())
        out += fmt::format("grafting {} {:.17g} {}\n", g->curve.to_string(), g->weight, g->search_radius);
    out += "end\n";
    return out;
}

void validate_scenario(const Scenario& s) {
    require_valid(s.holonomy, s.relator_tolerance);
    if (s.times.empty()) fail(ErrorKind::Validation, "scenario has no emission times");
}

namespace {

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

PoincareElement random_poincare(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double two_pi = 2.0 * std::numbers::pi;
    const double a = two_pi * unit(rng);
    const double rapidity = 1.5 * unit(rng);
    const double dir = two_pi * unit(rng);
    const LorentzTransform v = LorentzTransform::rotation(a) *
                               LorentzTransform::boost(rapidity, Eigen::Vector2d(std::cos(dir), std::sin(dir)));
    MinkowskiVector t;
    for (int i = 0; i < 3; ++i) t[i] = 2.0 * unit(rng) - 1.0;
    return {v, t};
}

Scenario make_scenario(const ScenarioRecipe& recipe) {
    const auto lorentz = genus_g_surface_group(recipe.genus);
    HolonomyMap h = static_holonomy(lorentz, recipe.tip);
    if (recipe.grafting) {
        const HolonomyMap graft = grafting_cocycle_single_curve(lorentz, *recipe.grafting, HyperbolicPoint());
        std::vector<PoincareElement> gens;
        for (std::size_t i = 0; i < lorentz.size(); ++i)
            gens.push_back({lorentz[i], h.generators()[i].a + graft.generators()[i].a});
        h = HolonomyMap(h.presentation(), std::move(gens), graft.provenance());
    }
    ObserverWorldline obs{HyperbolicPoint::normalized(recipe.observer_velocity),
                          recipe.observer_position.value_or(recipe.tip)};
    if (recipe.random_frame) {
        const PoincareElement g = random_poincare(recipe.seed);
        h = conjugate_global(h, g);
        obs = obs.transformed(g);
    }
    return Scenario{std::move(h), obs, recipe.times, recipe.ball_radius, kRelatorTolerance, 1e-5};
}

} // namespace holo
