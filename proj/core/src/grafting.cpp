#include "holoscope/error.hpp"
#include "holoscope/holonomy.hpp"

#include <fmt/format.h>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace holo {

namespace {

// Unit spacelike vector fixed by a hyperbolic v; its orthogonal plane cuts H^2 in the axis.
MinkowskiVector axis_normal(const LorentzTransform& v) {
    const Eigen::Matrix3d m = v.matrix() - Eigen::Matrix3d::Identity();
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullV);
    MinkowskiVector n = svd.matrixV().col(2);
    const double sq = minkowski_square(n);
    if (sq <= kEpsilon) fail(ErrorKind::Geometry, "fixed vector of the grafting curve is not spacelike");
    return n / std::sqrt(sq);
}

bool same_up_to_sign(const MinkowskiVector& a, const MinkowskiVector& b) {
    return (a - b).cwiseAbs().maxCoeff() < 1e-7 || (a + b).cwiseAbs().maxCoeff() < 1e-7;
}

} // namespace

GraftingLifts::GraftingLifts(std::span<const LorentzTransform> generators, const GraftingDatum& datum,
                             const HyperbolicPoint& base, int search_radius, double basepoint_margin)
    : generators_(generators.begin(), generators.end()), base_(base.vector()), weight_(datum.weight),
      search_radius_(search_radius), margin_(basepoint_margin) {
    if (datum.curve.empty()) fail(ErrorKind::InvalidArgument, "grafting curve must be a non-trivial word");
    if (!(datum.weight >= 0.0) || !std::isfinite(datum.weight))
        fail(ErrorKind::InvalidArgument, fmt::format("grafting weight must be >= 0, got {}", datum.weight));
    const LorentzTransform gamma = evaluate_lorentz(generators_, datum.curve);
    const double length = translation_length(gamma);
    curve_normal_ = axis_normal(gamma);

    double max_step = 0.0;
    for (const auto& g : generators_) max_step = std::max(max_step, hyperbolic_distance(base_, g * base_));
    const double to_axis = std::asinh(std::abs(minkowski_dot(base_, curve_normal_)));
    // Some lift point of every crossing lift lies within length/2 + to_axis of the
    // segment; the extra 2 * max_step keeps the search connected through the tiles.
    tube_radius_ = 0.5 * length + to_axis + 2.0 * max_step;
}

std::vector<MinkowskiVector> GraftingLifts::separating(const MinkowskiVector& target) const {
    const double span = hyperbolic_distance(base_, target);
    const double budget = span + 2.0 * tube_radius_;
    BallOptions options;
    options.base_point = base_;
    options.keep = [&](const MinkowskiVector& y) {
        return hyperbolic_distance(base_, y) + hyperbolic_distance(target, y) <= budget;
    };
    const GroupBall ball = enumerate_ball(generators_, search_radius_, options);

    std::vector<MinkowskiVector> found;
    for (const auto& e : ball.elements()) {
        const MinkowskiVector n = e.matrix * curve_normal_;
        const double at_base = minkowski_dot(base_, n);
        if (std::abs(at_base) < margin_)
            fail(ErrorKind::Geometry,
                 fmt::format("base point lies on a lift of the grafting curve (|x.n| = {:.3g})", std::abs(at_base)));
        const double at_target = minkowski_dot(target, n);
        if (at_base * at_target >= 0.0) continue;
        const MinkowskiVector oriented = at_base < 0.0 ? n : MinkowskiVector(-n);
        if (std::none_of(found.begin(), found.end(),
                         [&](const MinkowskiVector& m) { return same_up_to_sign(m, oriented); }))
            found.push_back(oriented);
    }
    return found;
}

MinkowskiVector GraftingLifts::translation_to(const MinkowskiVector& target) const {
    MinkowskiVector sum = MinkowskiVector::Zero();
    for (const auto& n : separating(target)) sum += n;
    return weight_ * sum;
}

HolonomyMap grafting_cocycle_single_curve(std::span<const LorentzTransform> generators,
                                          const GraftingDatum& datum, const HyperbolicPoint& base,
                                          const GraftingOptions& options) {
    const SurfaceGroupPresentation presentation(static_cast<int>(generators.size()) / 2);
    double last_residual = 0.0;
    for (int radius = options.initial_radius; radius <= options.max_radius; ++radius) {
        const GraftingLifts lifts(generators, datum, base, radius, options.basepoint_margin);
        std::vector<PoincareElement> images;
        images.reserve(generators.size());
        for (const auto& v : generators) images.push_back({v, lifts.translation_to(v * base.vector())});
        HolonomyMap h(presentation, std::move(images), GraftingProvenance{datum.curve, datum.weight, radius});
        last_residual = poincare_relator_residual(h);
        if (last_residual < options.tolerance) return h;
    }
    fail(ErrorKind::Residual,
         fmt::format("grafting cocycle does not close: relator residual {:.3e} at search radius {}",
                     last_residual, options.max_radius));
}

} // namespace holo
