#pragma once

#include "holoscope/dirichlet.hpp"
#include "holoscope/holonomy.hpp"
#include "holoscope/lightpath.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace holo {

// Max absolute deviation of (rho, sigma, tau, nu) between two (map, observer)
// pairs over the given words. Zero iff they agree up to a global Poincare transform.
double invariant_compare(const HolonomyMap& a, const ObserverWorldline& obs_a, const HolonomyMap& b,
                         const ObserverWorldline& obs_b, std::span<const GroupWord> words);

// Non-identity words of length <= max_length in the ball of h.
std::vector<GroupWord> comparison_words(const HolonomyMap& h, int max_length = 2);

// Unit future timelike vector orthogonal to every recorded direction.
MinkowskiVector infer_observer_velocity(std::span<const ReturnEvent> events);

// Events re-expressed in the rest frame of the observer (velocity becomes (1,0,0)).
std::vector<ReturnEvent> to_rest_frame(std::span<const ReturnEvent> events, const LorentzTransform& rest);

// Bisector images from one emission time, read as if the spacetime were static:
// rho = ln(1 + dt / t) along the measured emission direction.
std::vector<ImagePoint> static_images(std::span<const ReturnEvent> events_at_time);

struct WordFit {
    RelativeParams params;
    bool orthogonal = false;  // nu == 0: sigma, tau separated through the inverse word
    double residual = 0.0;    // max deviation of the closed forms from the measurements
    std::size_t samples = 0;
};

// Per-word fit of (rho, sigma, tau, nu) from measurements at >= 2 emission times
// (rest-frame events). Words with nu = 0 need their inverse in the table.
std::map<GroupWord, WordFit, ShortlexLess> fit_evolving_params(std::span<const ReturnEvent> events);

enum class ReconstructionMode { Static, Evolving };

struct ReconstructOptions {
    double tolerance = 1e-6;
    DirichletOptions dirichlet;
};

struct Reconstruction {
    ReconstructionMode mode = ReconstructionMode::Static;
    MinkowskiVector observer_velocity;  // in the frame of the event table
    std::vector<double> times;
    DirichletDomain domain;
    std::vector<SidePairing> pairings;
    std::optional<HolonomyMap> holonomy;  // gauge x = (1,0,0), x0 = 0
    std::map<GroupWord, WordFit, ShortlexLess> fits;
    ValidationReport validation;
    double side_pairing_residual = 0.0;
    double fit_residual = 0.0;
    double static_residual = 0.0;
    std::vector<std::string> notes;

    ObserverWorldline gauge_observer() const { return {}; }
    double worst_residual() const;
    bool passed(double tolerance) const;
};

Reconstruction reconstruct_static(std::span<const ReturnEvent> events, const ReconstructOptions& options = {});
Reconstruction reconstruct_evolving(std::span<const ReturnEvent> events, const ReconstructOptions& options = {});

std::string format_report(const Reconstruction& r, double tolerance);

// Polygon an observer would draw at emission time t treating the spacetime as static.
DirichletDomain deformed_polygon(std::span<const ReturnEvent> rest_frame_events, double t,
                                 const DirichletOptions& options = {});

// Limit at t -> infinity of values sampled at times t (ascending), by polynomial
// extrapolation in 1/t through the last `points` samples.
double richardson_limit(std::span<const double> t, std::span<const double> values, int points = 3);

} // namespace holo
