#include "holoscope/minkowski.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace holo {

namespace {

const Eigen::Matrix3d& eta() {
    static const Eigen::Matrix3d m = Eigen::Vector3d(-1.0, 1.0, 1.0).asDiagonal();
    return m;
}

} // namespace

double minkowski_dot(const MinkowskiVector& x, const MinkowskiVector& y) {
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

MinkowskiVector wedge(const MinkowskiVector& x, const MinkowskiVector& y) {
    // Lower-index components are the Euclidean cross product; raising flips the time slot.
    return {-(x[1] * y[2] - x[2] * y[1]), x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

CausalType causal_type(const MinkowskiVector& x, double eps) {
    const double s = minkowski_square(x);
    if (s < -eps) return CausalType::Timelike;
    if (s > eps) return CausalType::Spacelike;
    return CausalType::Lightlike;
}

MinkowskiVector project_orthogonal(const MinkowskiVector& y, const MinkowskiVector& unit_timelike) {
    return y + minkowski_dot(y, unit_timelike) * unit_timelike;
}

double spacelike_norm(const MinkowskiVector& x) {
    return std::sqrt(std::max(0.0, minkowski_square(x)));
}

std::string_view to_string(LorentzClass c) {
    switch (c) {
    case LorentzClass::Identity: return "identity";
    case LorentzClass::Elliptic: return "elliptic";
    case LorentzClass::Parabolic: return "parabolic";
    case LorentzClass::Hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

LorentzTransform LorentzTransform::from_matrix(const Eigen::Matrix3d& m, double eps) {
    LorentzTransform v(m);
    // Entries of boosts grow like cosh(distance); compare relative to their scale.
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (v.eta_defect() > eps * scale * scale)
        fail(ErrorKind::InvalidArgument,
             fmt::format("matrix is not eta-orthogonal (defect {:.3g})", v.eta_defect()));
    if (std::abs(m.determinant() - 1.0) > eps * scale * scale * scale)
        fail(ErrorKind::InvalidArgument, "Lorentz matrix must have determinant +1");
    if (m(0, 0) < 1.0 - eps)
        fail(ErrorKind::InvalidArgument, "Lorentz matrix must be orthochronous (M00 >= 1)");
    return v;
}

LorentzTransform LorentzTransform::boost(double rapidity, const Eigen::Vector2d& axis) {
    if (std::abs(axis.norm() - 1.0) > kEpsilon)
        fail(ErrorKind::InvalidArgument, "boost axis must be a unit spatial vector");
    const MinkowskiVector e0(1.0, 0.0, 0.0);
    const MinkowskiVector u(0.0, axis[0], axis[1]);
    const double c = std::cosh(rapidity);
    const double s = std::sinh(rapidity);
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    m += s * (e0 * u.transpose() + u * e0.transpose());
    m += (c - 1.0) * (e0 * e0.transpose() + u * u.transpose());
    return LorentzTransform(m);
}

LorentzTransform LorentzTransform::rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix3d m;
    m << 1.0, 0.0, 0.0,
         0.0, c, -s,
         0.0, s, c;
    return LorentzTransform(m);
}

LorentzTransform LorentzTransform::boost_to_rest(const MinkowskiVector& x) {
    const Eigen::Vector2d spatial(x[1], x[2]);
    const double r = spatial.norm();
    if (r == 0.0) return LorentzTransform();
    return boost(-std::asinh(r), spatial / r);
}

LorentzTransform LorentzTransform::inverse() const {
    return LorentzTransform(eta() * m_.transpose() * eta());
}

double LorentzTransform::eta_defect() const {
    return (m_.transpose() * eta() * m_ - eta()).cwiseAbs().maxCoeff();
}

LorentzTransform LorentzTransform::reorthonormalized() const {
    MinkowskiVector c0 = m_.col(0);
    MinkowskiVector c1 = m_.col(1);
    MinkowskiVector c2 = m_.col(2);
    c0 /= std::sqrt(-minkowski_square(c0));
    c1 += minkowski_dot(c1, c0) * c0;
    c1 /= std::sqrt(minkowski_square(c1));
    c2 += minkowski_dot(c2, c0) * c0;
    c2 -= minkowski_dot(c2, c1) * c1;
    c2 /= std::sqrt(minkowski_square(c2));
    Eigen::Matrix3d m;
    m.col(0) = c0;
    m.col(1) = c1;
    m.col(2) = c2;
    return LorentzTransform(m);
}

double LorentzTransform::distance(const LorentzTransform& other) const {
    return (m_ - other.m_).cwiseAbs().maxCoeff();
}

void LorentzChain::multiply(const LorentzTransform& next) {
    value_ = value_ * next;
    if (++count_ % kRenormInterval == 0) value_ = value_.reorthonormalized();
}

LorentzClass classify_lorentz(const LorentzTransform& v, double eps) {
    if (v.distance(LorentzTransform()) <= eps) return LorentzClass::Identity;
    // tr = 1 + 2 cosh(l), 3, 1 + 2 cos(theta)
    const double tr = v.trace();
    if (tr > 3.0 + eps) return LorentzClass::Hyperbolic;
    if (tr < 3.0 - eps) return LorentzClass::Elliptic;
    return LorentzClass::Parabolic;
}

PoincareElement PoincareElement::inverse() const {
    const LorentzTransform vi = v.inverse();
    return {vi, -(vi * a)};
}

double PoincareElement::distance(const PoincareElement& other) const {
    return std::max(v.distance(other.v), (a - other.a).cwiseAbs().maxCoeff());
}

HyperbolicPoint::HyperbolicPoint(const MinkowskiVector& x, double eps) : x_(x) {
    if (std::abs(minkowski_square(x) + 1.0) > eps * std::max(1.0, x.squaredNorm()) || x[0] <= 0.0)
        fail(ErrorKind::InvalidArgument,
             fmt::format("({}, {}, {}) is not on the future unit hyperboloid", x[0], x[1], x[2]));
}

HyperbolicPoint HyperbolicPoint::normalized(const MinkowskiVector& timelike) {
    const double s = minkowski_square(timelike);
    if (!(s < 0.0) || timelike[0] <= 0.0)
        fail(ErrorKind::Domain, "cannot normalise a vector that is not future timelike");
    HyperbolicPoint p;
    p.x_ = timelike / std::sqrt(-s);
    return p;
}

double hyperbolic_distance(const MinkowskiVector& p, const MinkowskiVector& q, double eps) {
    const double c = -minkowski_dot(p, q);
    if (c < 1.0 - eps * std::max(1.0, p.norm() * q.norm()))
        fail(ErrorKind::Domain, fmt::format("invalid hyperboloid points: -p.q = {} < 1", c));
    if (c > 2.0) return std::acosh(c);
    // Near points: (p - q)^2 = 4 sinh^2(d / 2) keeps the digits that acosh(-p.q) loses.
    const double chord = minkowski_square(p - q);
    return chord > 0.0 ? 2.0 * std::asinh(0.5 * std::sqrt(chord)) : 0.0;
}

GeodesicPlane::GeodesicPlane(const MinkowskiVector& normal) {
    const double s = minkowski_square(normal);
    if (!(s > 0.0)) fail(ErrorKind::InvalidArgument, "geodesic plane normal must be spacelike");
    n_ = normal / std::sqrt(s);
}

double cosmological_time_static(const MinkowskiVector& y, const MinkowskiVector& tip) {
    const MinkowskiVector d = y - tip;
    const double s = minkowski_square(d);
    if (!(s < 0.0) || d[0] <= 0.0)
        fail(ErrorKind::Domain, "point is not in the open future cone of the tip");
    return std::sqrt(-s);
}

} // namespace holo
