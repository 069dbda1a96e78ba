#pragma once

#include "holoscope/holonomy.hpp"
#include "holoscope/lightpath.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace holo {

inline constexpr int kScenarioSchema = 1;

// A spacetime (holonomy map), an observer and the scan to run.
//
//   holoscope-scenario 1
//   genus 2
//   generator a1 <9 matrix entries, row-major> <3 translation components>
//   ...                                   one line per generator, in order a1 b1 a2 b2 ...
//   observer-velocity <3 components>
//   observer-position <3 components>
//   emission-times <t1> <t2> ...
//   ball-radius <L>
//   tolerance relator <value>             optional
//   tolerance reconstruction <value>      optional
//   grafting <word> <weight> <radius>     optional, provenance only
//   end
//
// Blank lines and '#' comments are ignored.
struct Scenario {
    HolonomyMap holonomy;
    ObserverWorldline observer;
    std::vector<double> times;
    int ball_radius = 3;
    double relator_tolerance = kRelatorTolerance;
    double reconstruction_tolerance = 1e-5;
};

// Syntax and Lorentz checks only; errors carry "line L, column C".
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
// Numbers at 17 significant digits, so parse(format(s)) reproduces s exactly.
std::string format_scenario(const Scenario& s);

// Throws a Validation error naming the offending word or residual.
void validate_scenario(const Scenario& s);

struct ScenarioRecipe {
    int genus = 2;
    MinkowskiVector tip = MinkowskiVector::Zero();
    std::optional<GraftingDatum> grafting;
    MinkowskiVector observer_velocity = MinkowskiVector(1.0, 0.0, 0.0);
    // Defaults to the tip, i.e. an observer comoving with a static spacetime.
    std::optional<MinkowskiVector> observer_position;
    std::vector<double> times{2.0};
    int ball_radius = 3;
    // Conjugate everything by a random Poincare transform drawn from the seed.
    bool random_frame = false;
    std::uint64_t seed = 1;
};

Scenario make_scenario(const ScenarioRecipe& recipe);

// Deterministic Poincare transform for a seed: moderate boost, any rotation,
// translation components in [-1, 1].
PoincareElement random_poincare(std::uint64_t seed);

} // namespace holo
