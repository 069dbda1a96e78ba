#pragma once

#include "holoscope/group_word.hpp"
#include "holoscope/minkowski.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace holo {

// q = cosh(rho) x + sinh(rho) direction, the point at distance rho from x along
// the unit tangent `direction` (which must be orthogonal to x).
HyperbolicPoint locate_image(double rho, const MinkowskiVector& direction,
                             const MinkowskiVector& x = MinkowskiVector(1.0, 0.0, 0.0));

struct ImagePoint {
    GroupWord word;
    MinkowskiVector point;  // on the hyperboloid
    double distance = 0.0;  // from the centre
};

// Side of a Dirichlet polygon: part of the perpendicular bisector of [x, image].
struct DomainSide {
    GroupWord word;
    MinkowskiVector image;
    MinkowskiVector normal;  // unit, image - x direction; the polygon is y.normal <= 0
    MinkowskiVector start;
    MinkowskiVector end;
    double length = 0.0;
};

struct DirichletOptions {
    double tolerance = 1e-9;
    // Insert every bisector instead of stopping once the remaining images are
    // farther than twice the circumradius.
    bool exhaustive = false;
};

class DirichletDomain {
public:
    const MinkowskiVector& centre() const { return centre_; }
    // Counter-clockwise; vertex i starts side i.
    std::span<const MinkowskiVector> vertices() const { return vertices_; }
    std::span<const DomainSide> sides() const { return sides_; }
    double circumradius() const { return circumradius_; }
    std::size_t bisectors_inserted() const { return inserted_; }
    bool bounded() const { return bounded_; }
    // For unbounded polygons: the directions (radians, around the centre) not closed off.
    std::optional<std::pair<double, double>> uncovered_cone() const { return uncovered_; }

    // Whether y lies in the closed polygon, within tol.
    bool contains(const MinkowskiVector& y, double tol = 1e-9) const;
    std::optional<std::size_t> side_of(const GroupWord& word) const;

private:
    friend DirichletDomain build_dirichlet_polygon(const MinkowskiVector&, std::span<const ImagePoint>,
                                                   const DirichletOptions&);

    MinkowskiVector centre_;
    std::vector<MinkowskiVector> vertices_;
    std::vector<DomainSide> sides_;
    double circumradius_ = 0.0;
    std::size_t inserted_ = 0;
    bool bounded_ = false;
    std::optional<std::pair<double, double>> uncovered_;
};

// Incremental half-plane intersection in ascending distance order. May return
// an unbounded polygon (vertices outside H^2).
DirichletDomain build_dirichlet_polygon(const MinkowskiVector& centre, std::span<const ImagePoint> images,
                                        const DirichletOptions& options = {});

// As above, but an unbounded result is an InsufficientData error naming the open cone.
DirichletDomain dirichlet_domain(const MinkowskiVector& centre, std::vector<ImagePoint> images,
                                 const DirichletOptions& options = {});

// The orientation-preserving isometry with a -> a2 and b -> b2 (requires d(a,b) = d(a2,b2)).
LorentzTransform isometry_from_point_pairs(const MinkowskiVector& a, const MinkowskiVector& a2,
                                           const MinkowskiVector& b, const MinkowskiVector& b2);

struct SidePairing {
    GroupWord word;            // side on the bisector of [x, lambda x]
    std::size_t side = 0;
    std::size_t partner = 0;   // side of the inverse word
    LorentzTransform transform;  // partner side -> side; x -> lambda x
    double length_mismatch = 0.0;
    double endpoint_mismatch = 0.0;
    // Other sides of equal length: geometry alone cannot rule them out.
    std::vector<GroupWord> equal_length_candidates;
};

// Pairs each side with the side of the inverse word. Pairings are listed once,
// for the word that comes first in shortlex order.
std::vector<SidePairing> side_pairings(const DirichletDomain& domain, double length_tolerance = 1e-8);

// Distance from a point of H^2 to the closed polygon (0 inside).
double distance_to_polygon(const MinkowskiVector& y, const DirichletDomain& domain);
double hausdorff_distance(const DirichletDomain& a, const DirichletDomain& b);

} // namespace holo
