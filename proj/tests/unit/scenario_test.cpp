#include "holoscope/error.hpp"
#include "holoscope/scenario.hpp"

#include <doctest.h>

#include <filesystem>

using namespace holo;

namespace {

const std::filesystem::path kScenarios = HOLOSCOPE_SCENARIO_DIR;

std::string parse_error(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        return e.what();
    }
    return "no error";
}

// Replace the first line starting with `key` by `line`.
std::string with_line(std::string text, const std::string& key, const std::string& line) {
    const auto at = text.find("\n" + key) + 1;
    const auto end = text.find('\n', at);
    return text.replace(at, end - at, line);
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("format and parse are inverse") {
    ScenarioRecipe r;
    r.tip = {0.1, 0.2, -0.3};
    r.grafting = GraftingDatum{GroupWord{1}, 0.5};
    r.times = {2.0, 4.0};
    r.random_frame = true;
    r.seed = 9;
    const Scenario s = make_scenario(r);
    const std::string text = format_scenario(s);
    const Scenario back = parse_scenario(text);
    CHECK(format_scenario(back) == text);
    for (int k = 0; k < 4; ++k) CHECK(back.holonomy.generator(k).distance(s.holonomy.generator(k)) == 0.0);
    REQUIRE(back.holonomy.provenance().has_value());
    CHECK(back.holonomy.provenance()->curve == GroupWord{1});
    CHECK(back.times == s.times);
    CHECK_NOTHROW(validate_scenario(back));
}

TEST_CASE("bundled scenarios load and validate") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kScenarios)) {
        if (entry.path().extension() != ".scenario") continue;
        CAPTURE(entry.path().filename().string());
        const Scenario s = load_scenario(entry.path());
        CHECK_NOTHROW(validate_scenario(s));
        ++count;
    }
    CHECK(count >= 4);
}

TEST_CASE("comments and blank lines") {
    const std::string text = format_scenario(make_scenario({}));
    std::string commented = "# leading comment\n\n" + text;
    commented.insert(commented.find("genus"), "   # indented comment\n");
    CHECK(format_scenario(parse_scenario(commented)) == text);
}

TEST_CASE("errors carry line and column") {
    const std::string text = format_scenario(make_scenario({}));
    CHECK(parse_error("") == "line 1, column 1: empty scenario");
    CHECK(parse_error("holoscope-scenario 2\n").find("unsupported schema") != std::string::npos);
    CHECK(parse_error(with_line(text, "ball-radius", "ball-radius three")).find("column 13") != std::string::npos);
    CHECK(parse_error(with_line(text, "ball-radius", "bal-radius 3")).find("unknown key") != std::string::npos);
    CHECK(parse_error(with_line(text, "emission-times", "emission-times 2 1")).find("column 18") != std::string::npos);
    CHECK(parse_error(text.substr(0, text.find("end"))).find("missing 'end'") != std::string::npos);
    CHECK(parse_error(text + "genus 2\n").find("after 'end'") != std::string::npos);

    std::string relabelled = text;
    relabelled.replace(relabelled.find("generator b1"), 12, "generator a2");
    const std::string msg = parse_error(relabelled);
    CHECK(msg.find("line 4, column 11") != std::string::npos);
    CHECK(msg.find("expected generator b1") != std::string::npos);

    std::string skewed = text;
    const auto at = skewed.find("generator a1 ") + 13;
    skewed.replace(at, skewed.find(' ', at) - at, "42");
    CHECK(parse_error(skewed).find("line 3, column 14") != std::string::npos);
}

TEST_CASE("validation of parsed scenarios") {
    std::string text = format_scenario(make_scenario({}));
    // Replace b1 by a quarter turn: a valid Lorentz matrix, but elliptic.
    const auto at = text.find("generator b1");
    const auto end = text.find('\n', at);
    text.replace(at, end - at, "generator b1 1 0 0 0 0 -1 0 1 0 0 0 0");
    const Scenario s = parse_scenario(text);
    try {
        validate_scenario(s);
        FAIL("expected a validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
    }
}

TEST_CASE("random frames are reproducible") {
    const PoincareElement a = random_poincare(5), b = random_poincare(5), c = random_poincare(6);
    CHECK(a.distance(b) == 0.0);
    CHECK(a.distance(c) > 1e-3);
    CHECK(a.v.eta_defect() < 1e-12);
}

} // TEST_SUITE
