#pragma once

#include <Eigen/Core>

#include <string_view>

namespace holo {

// Global tolerance for every "within eps" comparison in the library.
inline constexpr double kEpsilon = 1e-9;

// Components (x^0, x^1, x^2) of a vector in 2+1 Minkowski space, signature (-,+,+).
using MinkowskiVector = Eigen::Vector3d;

double minkowski_dot(const MinkowskiVector& x, const MinkowskiVector& y);

inline double minkowski_square(const MinkowskiVector& x) { return minkowski_dot(x, x); }

// (x ^ y)^mu = eta^{mu nu} eps_{nu a b} x^a y^b with eps_{012} = +1.
// Antisymmetric, bilinear, eta-orthogonal to both arguments.
MinkowskiVector wedge(const MinkowskiVector& x, const MinkowskiVector& y);

enum class CausalType { Timelike, Lightlike, Spacelike };

CausalType causal_type(const MinkowskiVector& x, double eps = kEpsilon);

// Projection onto the eta-orthogonal complement of a unit timelike vector.
MinkowskiVector project_orthogonal(const MinkowskiVector& y, const MinkowskiVector& unit_timelike);

// Euclidean-signature norm of a spacelike vector, sqrt(x.x).
double spacelike_norm(const MinkowskiVector& x);

enum class LorentzClass { Identity, Elliptic, Parabolic, Hyperbolic };

std::string_view to_string(LorentzClass c);

// Element of SO+(2,1) acting on column vectors.
class LorentzTransform {
public:
    LorentzTransform() : m_(Eigen::Matrix3d::Identity()) {}

    // Checks M^T eta M = eta, det M = +1 and M00 >= 1 within eps.
    static LorentzTransform from_matrix(const Eigen::Matrix3d& m, double eps = kEpsilon);
    // Skips validation; for matrices known to be Lorentz up to rounding.
    static LorentzTransform unchecked(const Eigen::Matrix3d& m) { return LorentzTransform(m); }

    // Boost of the given rapidity along a unit spatial axis (a1, a2):
    // (1,0,0) maps to (cosh xi, sinh xi a1, sinh xi a2).
    static LorentzTransform boost(double rapidity, const Eigen::Vector2d& axis);
    static LorentzTransform boost(double rapidity) { return boost(rapidity, Eigen::Vector2d::UnitX()); }
    // Euclidean rotation of the x1 x2 plane, fixing (1,0,0).
    static LorentzTransform rotation(double angle);
    // The pure boost taking the unit future timelike x to (1,0,0).
    static LorentzTransform boost_to_rest(const MinkowskiVector& x);

    const Eigen::Matrix3d& matrix() const { return m_; }
    double operator()(int row, int col) const { return m_(row, col); }

    LorentzTransform operator*(const LorentzTransform& other) const {
        return LorentzTransform(m_ * other.m_);
    }
    MinkowskiVector operator*(const MinkowskiVector& x) const { return m_ * x; }

    // Group inverse eta M^T eta.
    LorentzTransform inverse() const;
    double trace() const { return m_.trace(); }
    // max |M^T eta M - eta|.
    double eta_defect() const;
    // Gram-Schmidt with respect to eta on the columns, timelike column first.
    LorentzTransform reorthonormalized() const;

    // Max-norm distance between matrices.
    double distance(const LorentzTransform& other) const;

private:
    explicit LorentzTransform(const Eigen::Matrix3d& m) : m_(m) {}

    Eigen::Matrix3d m_;
};

// Running product of Lorentz transforms with periodic re-orthonormalisation,
// so long words do not drift off the group.
class LorentzChain {
public:
    static constexpr int kRenormInterval = 64;

    void multiply(const LorentzTransform& next);
    const LorentzTransform& value() const { return value_; }
    int length() const { return count_; }

private:
    LorentzTransform value_;
    int count_ = 0;
};

LorentzClass classify_lorentz(const LorentzTransform& v, double eps = kEpsilon);

// Element (v, a) of ISO+(2,1); acts as y -> v y + a.
struct PoincareElement {
    LorentzTransform v;
    MinkowskiVector a = MinkowskiVector::Zero();

    static PoincareElement identity() { return {}; }
    static PoincareElement translation(const MinkowskiVector& a) { return {LorentzTransform(), a}; }

    // (v1, a1)(v2, a2) = (v1 v2, a1 + v1 a2)
    PoincareElement operator*(const PoincareElement& other) const {
        return {v * other.v, a + v * other.a};
    }
    MinkowskiVector apply(const MinkowskiVector& y) const { return v * y + a; }
    PoincareElement inverse() const;
    // Max over the matrix and translation max-norm differences.
    double distance(const PoincareElement& other) const;
};

// Point of the upper sheet of the hyperboloid x.x = -1.
class HyperbolicPoint {
public:
    HyperbolicPoint() : x_(1.0, 0.0, 0.0) {}
    // Requires |x.x + 1| <= eps and x^0 > 0.
    explicit HyperbolicPoint(const MinkowskiVector& x, double eps = kEpsilon);

    // Rescales a future timelike vector onto the hyperboloid.
    static HyperbolicPoint normalized(const MinkowskiVector& timelike);
    static HyperbolicPoint origin() { return HyperbolicPoint(); }

    const MinkowskiVector& vector() const { return x_; }
    operator const MinkowskiVector&() const { return x_; }

private:
    MinkowskiVector x_;
};

// arccosh(-p.q); symmetric, zero iff p == q.
double hyperbolic_distance(const MinkowskiVector& p, const MinkowskiVector& q, double eps = kEpsilon);

// Plane {y : y.n = 0} with unit spacelike normal; meets H^2 in a complete geodesic.
class GeodesicPlane {
public:
    explicit GeodesicPlane(const MinkowskiVector& normal);

    const MinkowskiVector& normal() const { return n_; }
    // sinh of the signed hyperbolic distance from a point of H^2 to the geodesic.
    double signed_sinh_distance(const MinkowskiVector& y) const { return minkowski_dot(y, n_); }

private:
    MinkowskiVector n_;
};

// Cosmological time of a point in the future light cone of the tip p: sqrt|(y-p)^2|.
double cosmological_time_static(const MinkowskiVector& y, const MinkowskiVector& tip);

} // namespace holo
