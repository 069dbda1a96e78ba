#pragma once

#include "holoscope/fuchsian.hpp"
#include "holoscope/group_word.hpp"
#include "holoscope/minkowski.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace holo {

inline constexpr double kRelatorTolerance = 1e-8;

// Where a grafted map came from; carried along into scenario files.
struct GraftingProvenance {
    GroupWord curve;
    double weight = 0.0;
    int search_radius = 0;
};

// Homomorphism pi_1(M) -> ISO+(2,1), stored as the images of a1, b1, ..., ag, bg.
class HolonomyMap {
public:
    HolonomyMap(SurfaceGroupPresentation presentation, std::vector<PoincareElement> generators,
                std::optional<GraftingProvenance> provenance = std::nullopt);

    const SurfaceGroupPresentation& presentation() const { return presentation_; }
    int genus() const { return presentation_.genus(); }
    std::span<const PoincareElement> generators() const { return generators_; }
    const PoincareElement& generator(int index) const { return generators_.at(static_cast<std::size_t>(index)); }
    std::vector<LorentzTransform> lorentz_generators() const;
    const std::optional<GraftingProvenance>& provenance() const { return provenance_; }

private:
    SurfaceGroupPresentation presentation_;
    std::vector<PoincareElement> generators_;
    std::optional<GraftingProvenance> provenance_;
};

// h(lambda) = (1, p)(v_lambda, 0)(1, -p) = (v_lambda, p - v_lambda p).
HolonomyMap static_holonomy(std::span<const LorentzTransform> generators, const MinkowskiVector& tip);

// Left-to-right product under the Poincare group law; empty word is the identity.
PoincareElement evaluate_word(const HolonomyMap& h, const GroupWord& word);

// Max-norm distance from the identity of the full Poincare relator.
double poincare_relator_residual(const HolonomyMap& h);

struct ValidationReport {
    double lorentz_residual = 0.0;
    double poincare_residual = 0.0;
    double tolerance = kRelatorTolerance;
    int ball_radius = 0;
    std::size_t elements_checked = 0;
    std::optional<GroupWord> offending_word;
    LorentzClass offending_class = LorentzClass::Hyperbolic;

    bool relator_ok() const { return lorentz_residual < tolerance && poincare_residual < tolerance; }
    bool passed() const { return relator_ok() && !offending_word; }
    std::string summary() const;
};

// Relator residuals plus classification of every ball element up to the radius;
// all non-identity elements must be hyperbolic.
ValidationReport validate_holonomy(const HolonomyMap& h, double tolerance = kRelatorTolerance,
                                   int ball_radius = 4);

// Throws a Validation error carrying the report summary if validation fails.
void require_valid(const HolonomyMap& h, double tolerance = kRelatorTolerance, int ball_radius = 4);

// h(lambda) -> g h(lambda) g^-1 for every generator.
HolonomyMap conjugate_global(const HolonomyMap& h, const PoincareElement& g);

// Adds translational cocycles of two maps sharing Lorentz parts (multicurve grafting).
HolonomyMap add_cocycles(const HolonomyMap& lhs, const HolonomyMap& rhs);

// ---------------------------------------------------------------------------
// Grafting along one simple closed geodesic

struct GraftingDatum {
    GroupWord curve;  // primitive hyperbolic element whose axis is the grafting geodesic
    double weight = 0.0;
};

struct GraftingOptions {
    int initial_radius = 6;
    int max_radius = 10;
    double basepoint_margin = 1e-8;
    double tolerance = kRelatorTolerance;
};

// Lifts of the grafting geodesic to H^2. Lifts are found on demand: only those
// crossing the segment from the base point to a given target are enumerated,
// by a breadth-first search restricted to a tube around that segment.
class GraftingLifts {
public:
    GraftingLifts(std::span<const LorentzTransform> generators, const GraftingDatum& datum,
                  const HyperbolicPoint& base, int search_radius, double basepoint_margin = 1e-8);

    const MinkowskiVector& curve_normal() const { return curve_normal_; }
    int search_radius() const { return search_radius_; }
    double weight() const { return weight_; }

    // Unit normals of the lifts with opposite signs of y.n at the base point and at
    // target, each oriented away from the base point.
    std::vector<MinkowskiVector> separating(const MinkowskiVector& target) const;
    // weight * sum of separating(target).
    MinkowskiVector translation_to(const MinkowskiVector& target) const;

private:
    std::vector<LorentzTransform> generators_;
    MinkowskiVector base_;
    MinkowskiVector curve_normal_;
    double tube_radius_;
    double weight_;
    int search_radius_;
    double margin_;
};

HolonomyMap grafting_cocycle_single_curve(std::span<const LorentzTransform> generators,
                                          const GraftingDatum& datum, const HyperbolicPoint& base,
                                          const GraftingOptions& options = {});

} // namespace holo
