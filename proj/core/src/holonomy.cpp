#include "holoscope/holonomy.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>

#include <Eigen/LU>

#include <cmath>

namespace holo {

HolonomyMap::HolonomyMap(SurfaceGroupPresentation presentation, std::vector<PoincareElement> generators,
                         std::optional<GraftingProvenance> provenance)
    : presentation_(presentation), generators_(std::move(generators)), provenance_(std::move(provenance)) {
    if (static_cast<int>(generators_.size()) != presentation_.generator_count())
        fail(ErrorKind::InvalidArgument, fmt::format("genus {} needs {} generators, got {}", presentation_.genus(),
                                                     presentation_.generator_count(), generators_.size()));
}

std::vector<LorentzTransform> HolonomyMap::lorentz_generators() const {
    std::vector<LorentzTransform> out;
    out.reserve(generators_.size());
    for (const auto& g : generators_) out.push_back(g.v);
    return out;
}

HolonomyMap static_holonomy(std::span<const LorentzTransform> generators, const MinkowskiVector& tip) {
    const SurfaceGroupPresentation presentation(static_cast<int>(generators.size()) / 2);
    if (static_cast<int>(generators.size()) != presentation.generator_count())
        fail(ErrorKind::InvalidArgument, "generator count must be even");
    std::vector<PoincareElement> images;
    images.reserve(generators.size());
    for (const auto& v : generators) images.push_back({v, tip - v * tip});
    return HolonomyMap(presentation, std::move(images));
}

PoincareElement evaluate_word(const HolonomyMap& h, const GroupWord& word) {
    PoincareElement result;
    LorentzChain chain;
    const auto gens = h.generators();
    for (int l : word.letters()) {
        const auto i = static_cast<std::size_t>(std::abs(l) - 1);
        if (i >= gens.size()) fail(ErrorKind::InvalidArgument, fmt::format("letter {} out of range", l));
        const PoincareElement step = l > 0 ? gens[i] : gens[i].inverse();
        result.a = result.a + chain.value() * step.a;
        chain.multiply(step.v);
    }
    result.v = chain.value();
    return result;
}

double poincare_relator_residual(const HolonomyMap& h) {
    using Matrix3l = Eigen::Matrix<long double, 3, 3>;
    using Vector3l = Eigen::Matrix<long double, 3, 1>;
    Matrix3l v = Matrix3l::Identity();
    Vector3l a = Vector3l::Zero();
    const auto gens = h.generators();
    const GroupWord relator = h.presentation().relator();
    for (int l : relator.letters()) {
        const auto& g = gens[static_cast<std::size_t>(std::abs(l) - 1)];
        Matrix3l gv = g.v.matrix().cast<long double>();
        Vector3l ga = g.a.cast<long double>();
        if (l < 0) {
            gv = gv.inverse().eval();
            ga = -(gv * ga);
        }
        a = a + v * ga;
        v = v * gv;
    }
    const long double dv = (v - Matrix3l::Identity()).cwiseAbs().maxCoeff();
    const long double da = a.cwiseAbs().maxCoeff();
    return static_cast<double>(std::max(dv, da));
}

std::string ValidationReport::summary() const {
    std::string s = fmt::format("lorentz relator residual {:.3e}, poincare relator residual {:.3e} (tolerance {:.1e}); "
                                "{} ball elements (L={}) classified",
                                lorentz_residual, poincare_residual, tolerance, elements_checked, ball_radius);
    if (offending_word)
        s += fmt::format("; offending word {} is {}", offending_word->to_string(), to_string(offending_class));
    return s;
}

ValidationReport validate_holonomy(const HolonomyMap& h, double tolerance, int ball_radius) {
    ValidationReport report;
    report.tolerance = tolerance;
    report.ball_radius = ball_radius;
    const auto lorentz = h.lorentz_generators();
    report.lorentz_residual = relator_residual(h.presentation(), lorentz);
    report.poincare_residual = poincare_relator_residual(h);

    const GroupBall ball = enumerate_ball(lorentz, ball_radius);
    report.elements_checked = ball.size();
    for (const auto& e : ball.elements()) {
        if (e.word.empty()) continue;
        const LorentzClass c = classify_lorentz(e.matrix);
        if (c != LorentzClass::Hyperbolic) {
            report.offending_word = e.word;
            report.offending_class = c;
            break;
        }
    }
    return report;
}

void require_valid(const HolonomyMap& h, double tolerance, int ball_radius) {
    const ValidationReport report = validate_holonomy(h, tolerance, ball_radius);
    if (!report.passed()) fail(ErrorKind::Validation, "holonomy validation failed: " + report.summary());
}

HolonomyMap conjugate_global(const HolonomyMap& h, const PoincareElement& g) {
    const PoincareElement gi = g.inverse();
    std::vector<PoincareElement> images;
    images.reserve(h.generators().size());
    for (const auto& x : h.generators()) images.push_back(g * x * gi);
    return HolonomyMap(h.presentation(), std::move(images), h.provenance());
}

HolonomyMap add_cocycles(const HolonomyMap& lhs, const HolonomyMap& rhs) {
    if (!(lhs.presentation() == rhs.presentation()))
        fail(ErrorKind::InvalidArgument, "cannot add cocycles of different presentations");
    std::vector<PoincareElement> images;
    for (std::size_t i = 0; i < lhs.generators().size(); ++i) {
        const auto& l = lhs.generators()[i];
        const auto& r = rhs.generators()[i];
        if (l.v.distance(r.v) > kEpsilon)
            fail(ErrorKind::InvalidArgument, "cocycles must share their Lorentz parts");
        images.push_back({l.v, l.a + r.a});
    }
    return HolonomyMap(lhs.presentation(), std::move(images));
}

} // namespace holo
