#pragma once

#include "holoscope/group_word.hpp"
#include "holoscope/holonomy.hpp"
#include "holoscope/minkowski.hpp"

#include <span>
#include <vector>

namespace holo {

// Freely falling observer t -> t x + x0 with unit future velocity x.
struct ObserverWorldline {
    HyperbolicPoint velocity;
    MinkowskiVector position = MinkowskiVector::Zero();

    MinkowskiVector at(double t) const { return t * velocity.vector() + position; }
    // (x, x0) -> (v x, v x0 + a).
    ObserverWorldline transformed(const PoincareElement& g) const;
    // Same worldline with the clock started t0 later: (t, x0) -> (t - t0, x0 + t0 x).
    ObserverWorldline time_shifted(double t0) const;
};

// Position of the image worldline relative to the observer, written in the
// frame (v x - x, v x, x ^ v x).
struct RelativeParams {
    double rho = 0.0;
    double sigma = 0.0;
    double tau = 0.0;
    double nu = 0.0;
};

RelativeParams relative_params(const ObserverWorldline& obs, const PoincareElement& h);

// sigma (v x - x) + tau v x + nu x ^ v x.
MinkowskiVector recompose(const ObserverWorldline& obs, const LorentzTransform& v, const RelativeParams& p);

double return_time(double t, const RelativeParams& p);
// Root of (h g(t + dt) - g(t))^2 = 0 with h g(t + dt) on the future light cone of g(t).
double return_time_oracle(double t, const ObserverWorldline& obs, const PoincareElement& h);

double emission_angle(double t, const RelativeParams& p);
double return_angle(double t, const RelativeParams& p);

struct Directions {
    MinkowskiVector emission;  // unit, orthogonal to x: where the light is sent
    MinkowskiVector arrival;   // unit, orthogonal to x: where the light comes back from
    double phi_e = 0.0;
    double phi_r = 0.0;
};

Directions emission_return_directions(double t, const ObserverWorldline& obs, const PoincareElement& h,
                                      const RelativeParams& p);
// Projects the actual light segment into the observer's rest frames at emission and return.
Directions directions_oracle(double t, const ObserverWorldline& obs, const PoincareElement& h);

double frequency_shift(double t, const RelativeParams& p);
// Ratio of the observer's energies (u.k) at return and emission for the light segment k.
double frequency_shift_oracle(double t, const ObserverWorldline& obs, const PoincareElement& h);

struct ReturnEvent {
    GroupWord word;
    double t_e = 0.0;
    double dt = 0.0;
    double phi_e = 0.0;
    double phi_r = 0.0;
    MinkowskiVector p_e = MinkowskiVector::Zero();
    MinkowskiVector p_r = MinkowskiVector::Zero();
    double freq_ratio = 0.0;
    RelativeParams params;
};

// Throws a Domain error when t + sigma <= 0.
ReturnEvent make_event(const GroupWord& word, double t, const ObserverWorldline& obs, const PoincareElement& h);

// Sort key of the event tables: (t_e, dt), then shortlex word.
bool event_less(const ReturnEvent& lhs, const ReturnEvent& rhs);

struct ScanOptions {
    int ball_radius = 3;
    int threads = 1;
};

// One event per non-identity ball element and emission time, sorted by event_less.
// The result does not depend on the thread count.
std::vector<ReturnEvent> simulate_scan(const ObserverWorldline& obs, const HolonomyMap& h,
                                       std::span<const double> times, const ScanOptions& options = {});

} // namespace holo
