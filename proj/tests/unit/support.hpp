#pragma once

#include "holoscope/minkowski.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace holo::test {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline LorentzTransform random_lorentz(std::mt19937_64& rng, double max_rapidity = 1.5) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double dir = uniform(rng, 0.0, two_pi);
    return LorentzTransform::rotation(uniform(rng, 0.0, two_pi)) *
           LorentzTransform::boost(uniform(rng, 0.0, max_rapidity), Eigen::Vector2d(std::cos(dir), std::sin(dir)));
}

inline MinkowskiVector random_vector(std::mt19937_64& rng, double scale = 1.0) {
    return {uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

inline HyperbolicPoint random_point(std::mt19937_64& rng, double max_distance = 1.5) {
    return HyperbolicPoint::normalized(random_lorentz(rng, max_distance) * MinkowskiVector(1.0, 0.0, 0.0));
}

inline PoincareElement random_poincare(std::mt19937_64& rng) {
    return {random_lorentz(rng), random_vector(rng)};
}

inline double max_abs(const MinkowskiVector& v) { return v.cwiseAbs().maxCoeff(); }

// Angle between two unit directions in the same observer's rest frame.
inline double angle_between(const MinkowskiVector& a, const MinkowskiVector& b) {
    return 2.0 * std::asin(std::min(1.0, 0.5 * std::sqrt(std::max(0.0, minkowski_square(a - b)))));
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

} // namespace holo::test
