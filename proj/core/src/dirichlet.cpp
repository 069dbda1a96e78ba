#include "holoscope/dirichlet.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace holo {

HyperbolicPoint locate_image(double rho, const MinkowskiVector& direction, const MinkowskiVector& x) {
    if (!(rho >= 0.0)) fail(ErrorKind::InvalidArgument, fmt::format("image distance must be >= 0, got {}", rho));
    return HyperbolicPoint::normalized(std::cosh(rho) * x + std::sinh(rho) * direction);
}

namespace {

constexpr int kBoundary = -1;

struct Corner {
    MinkowskiVector y;  // projective; y0 = 1 (Klein chart)
    int label;          // image index of the side starting here, kBoundary for the initial triangle
};

// Value of y.n on the hyperboloid-normalised point (Klein chart for points
// outside H^2), so one tolerance fits every vertex.
double side_value(const MinkowskiVector& y, const MinkowskiVector& n) {
    const double sq = minkowski_square(y);
    const double scale = sq < 0.0 ? std::sqrt(-sq) : y[0];
    return minkowski_dot(y, n) / scale;
}

std::vector<Corner> clip(const std::vector<Corner>& poly, const MinkowskiVector& n, int label, double tol) {
    std::vector<Corner> out;
    const std::size_t m = poly.size();
    std::vector<double> f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = side_value(poly[i].y, n);
    for (std::size_t i = 0; i < m; ++i) {
        const Corner& p = poly[i];
        const Corner& q = poly[(i + 1) % m];
        const double fp = f[i];
        const double fq = f[(i + 1) % m];
        const bool p_in = fp <= tol;
        const bool q_in = fq <= tol;
        if (p_in) {
            // A vertex on the new line starts the new side itself.
            const bool leaves = !q_in;
            out.push_back({p.y, leaves && std::abs(fp) <= tol ? label : p.label});
            if (leaves && std::abs(fp) > tol) {
                const double gp = minkowski_dot(p.y, n);
                const double gq = minkowski_dot(q.y, n);
                const MinkowskiVector y = (gq * p.y - gp * q.y) / (gq - gp);
                out.push_back({y / y[0], label});
            }
        } else if (q_in && std::abs(fq) > tol) {
            const double gp = minkowski_dot(p.y, n);
            const double gq = minkowski_dot(q.y, n);
            const MinkowskiVector y = (gq * p.y - gp * q.y) / (gq - gp);
            out.push_back({y / y[0], p.label});
        }
    }
    return out;
}

bool corners_bounded(const std::vector<Corner>& poly) {
    if (poly.size() < 3) return false;
    for (const auto& c : poly)
        if (c.label == kBoundary || minkowski_square(c.y) >= -1e-12) return false;
    return true;
}

double corners_circumradius(const std::vector<Corner>& poly, const MinkowskiVector& centre) {
    double r = 0.0;
    for (const auto& c : poly) {
        const MinkowskiVector p = c.y / std::sqrt(-minkowski_square(c.y));
        r = std::max(r, std::acosh(std::max(1.0, -minkowski_dot(p, centre))));
    }
    return r;
}

} // namespace

DirichletDomain build_dirichlet_polygon(const MinkowskiVector& centre, std::span<const ImagePoint> images,
                                        const DirichletOptions& options) {
    if (centre[0] <= 0.0 || std::abs(minkowski_square(centre) + 1.0) > 1e-9)
        fail(ErrorKind::InvalidArgument, "polygon centre must lie on the hyperboloid");
    for (std::size_t i = 1; i < images.size(); ++i)
        if (images[i].distance < images[i - 1].distance)
            fail(ErrorKind::InvalidArgument, "images must be sorted by distance");

    std::vector<Corner> poly;
    for (int k = 0; k < 3; ++k) {
        const double a = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / 3.0;
        poly.push_back({MinkowskiVector(1.0, 4.0 * std::cos(a), 4.0 * std::sin(a)), kBoundary});
    }

    std::vector<MinkowskiVector> normals(images.size());
    DirichletDomain d;
    d.centre_ = centre;
    bool bounded = false;
    double radius = 0.0;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const ImagePoint& img = images[i];
        if (img.distance <= options.tolerance)
            fail(ErrorKind::InvalidArgument, fmt::format("image of {} coincides with the centre", img.word.to_string()));
        if (bounded && !options.exhaustive && img.distance > 2.0 * radius) break;
        MinkowskiVector n = img.point - centre;
        n /= std::sqrt(minkowski_square(n));
        normals[i] = n;
        poly = clip(poly, n, static_cast<int>(i), options.tolerance);
        if (poly.empty()) fail(ErrorKind::Geometry, "half-plane intersection became empty");
        ++d.inserted_;
        bounded = corners_bounded(poly);
        if (bounded) radius = corners_circumradius(poly, centre);
    }

    d.bounded_ = bounded;
    for (const auto& c : poly) {
        const double sq = minkowski_square(c.y);
        d.vertices_.push_back(sq < 0.0 ? MinkowskiVector(c.y / std::sqrt(-sq)) : c.y);
    }
    if (bounded) {
        d.circumradius_ = radius;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const auto& img = images[static_cast<std::size_t>(poly[i].label)];
            DomainSide s;
            s.word = img.word;
            s.image = img.point;
            s.normal = normals[static_cast<std::size_t>(poly[i].label)];
            s.start = d.vertices_[i];
            s.end = d.vertices_[(i + 1) % poly.size()];
            s.length = hyperbolic_distance(s.start, s.end);
            d.sides_.push_back(std::move(s));
        }
    } else {
        // Angles (seen from the centre) of the corners still outside H^2; the open
        // cone is the complement of the largest gap between them.
        const LorentzTransform rest = LorentzTransform::boost_to_rest(centre);
        std::vector<double> angles;
        for (const auto& c : poly) {
            if (c.label != kBoundary && minkowski_square(c.y) < -1e-12) continue;
            const MinkowskiVector y = rest * c.y;
            angles.push_back(std::atan2(y[2], y[1]));
        }
        if (angles.empty())
            for (const auto& c : poly) {
                const MinkowskiVector y = rest * c.y;
                angles.push_back(std::atan2(y[2], y[1]));
            }
        std::sort(angles.begin(), angles.end());
        double best_gap = -1.0;
        std::pair<double, double> cone{angles.front(), angles.back()};
        for (std::size_t i = 0; i < angles.size(); ++i) {
            const double a = angles[i];
            const double b = i + 1 < angles.size() ? angles[i + 1] : angles.front() + 2.0 * std::numbers::pi;
            if (b - a > best_gap) {
                best_gap = b - a;
                cone = {b, a + 2.0 * std::numbers::pi};
            }
        }
        if (cone.first > std::numbers::pi) {
            cone.first -= 2.0 * std::numbers::pi;
            cone.second -= 2.0 * std::numbers::pi;
        }
        d.uncovered_ = cone;
    }
    return d;
}

DirichletDomain dirichlet_domain(const MinkowskiVector& centre, std::vector<ImagePoint> images,
                                 const DirichletOptions& options) {
    std::stable_sort(images.begin(), images.end(),
                     [](const ImagePoint& a, const ImagePoint& b) { return a.distance < b.distance; });
    DirichletDomain d = build_dirichlet_polygon(centre, images, options);
    if (!d.bounded()) {
        const auto cone = d.uncovered_cone().value_or(std::pair{0.0, 0.0});
        fail(ErrorKind::InsufficientData,
             fmt::format("Dirichlet polygon is not closed after {} images: directions from {:.1f} to {:.1f} degrees "
                         "are not covered; scan a larger ball or later emission times",
                         images.size(), cone.first * 180.0 / std::numbers::pi,
                         cone.second * 180.0 / std::numbers::pi));
    }
    return d;
}

bool DirichletDomain::contains(const MinkowskiVector& y, double tol) const {
    for (const auto& s : sides_)
        if (minkowski_dot(y, s.normal) > tol) return false;
    return bounded_;
}

std::optional<std::size_t> DirichletDomain::side_of(const GroupWord& word) const {
    for (std::size_t i = 0; i < sides_.size(); ++i)
        if (sides_[i].word == word) return i;
    return std::nullopt;
}

LorentzTransform isometry_from_point_pairs(const MinkowskiVector& a, const MinkowskiVector& a2,
                                           const MinkowskiVector& b, const MinkowskiVector& b2) {
    auto frame = [](MinkowskiVector p, const MinkowskiVector& q) {
        p /= std::sqrt(-minkowski_square(p));
        MinkowskiVector t = q + minkowski_dot(p, q) * p;
        const double len = spacelike_norm(t);
        if (len < 1e-12) fail(ErrorKind::Geometry, "isometry needs two distinct points");
        t /= len;
        Eigen::Matrix3d f;
        f.col(0) = p;
        f.col(1) = t;
        f.col(2) = wedge(p, t);
        return f;
    };
    const Eigen::Matrix3d f1 = frame(a, b);
    const Eigen::Matrix3d f2 = frame(a2, b2);
    // Both frames are orthonormal, so f1^-1 = eta f1^T eta. Gram-Schmidt afterwards would smear the
    // rounding of far images across the columns.
    const Eigen::Matrix3d eta = Eigen::Vector3d(-1.0, 1.0, 1.0).asDiagonal();
    return LorentzTransform::unchecked(f2 * eta * f1.transpose() * eta);
}

std::vector<SidePairing> side_pairings(const DirichletDomain& domain, double length_tolerance) {
    if (!domain.bounded()) fail(ErrorKind::InsufficientData, "side pairing needs a closed polygon");
    const auto sides = domain.sides();
    const MinkowskiVector& x = domain.centre();
    std::vector<SidePairing> out;
    for (std::size_t i = 0; i < sides.size(); ++i) {
        const GroupWord inv = sides[i].word.inverse();
        if (!shortlex_less(sides[i].word, inv)) continue;
        const auto j = domain.side_of(inv);
        if (!j)
            fail(ErrorKind::Geometry, fmt::format("side {} has no partner: no side comes from {}",
                                                  sides[i].word.to_string(), inv.to_string()));
        SidePairing p;
        p.word = sides[i].word;
        p.side = i;
        p.partner = *j;
        // lambda^-1 x -> x and x -> lambda x
        p.transform = isometry_from_point_pairs(sides[*j].image, x, x, sides[i].image);
        p.length_mismatch = std::abs(sides[i].length - sides[*j].length);
        const MinkowskiVector s0 = p.transform * sides[*j].start;
        const MinkowskiVector s1 = p.transform * sides[*j].end;
        const double direct = std::max((s0 - sides[i].start).cwiseAbs().maxCoeff(),
                                       (s1 - sides[i].end).cwiseAbs().maxCoeff());
        const double swapped = std::max((s0 - sides[i].end).cwiseAbs().maxCoeff(),
                                        (s1 - sides[i].start).cwiseAbs().maxCoeff());
        p.endpoint_mismatch = std::min(direct, swapped);
        for (std::size_t k = 0; k < sides.size(); ++k)
            if (k != i && k != *j && std::abs(sides[k].length - sides[*j].length) <= length_tolerance)
                p.equal_length_candidates.push_back(sides[k].word);
        out.push_back(std::move(p));
    }
    return out;
}

namespace {

double distance_to_segment(const MinkowskiVector& y, const DomainSide& s) {
    const double h = minkowski_dot(y, s.normal);
    const MinkowskiVector foot = y - h * s.normal;
    // foot = alpha start + beta end; between the endpoints iff both are >= 0.
    const double pq = minkowski_dot(s.start, s.end);
    Eigen::Matrix2d m;
    m << -1.0, pq, pq, -1.0;
    const Eigen::Vector2d rhs(minkowski_dot(foot, s.start), minkowski_dot(foot, s.end));
    const Eigen::Vector2d ab = m.inverse() * rhs;
    if (ab[0] >= 0.0 && ab[1] >= 0.0) return std::asinh(std::abs(h));
    return std::min(hyperbolic_distance(y, s.start), hyperbolic_distance(y, s.end));
}

} // namespace

double distance_to_polygon(const MinkowskiVector& y, const DirichletDomain& domain) {
    if (domain.contains(y, 0.0)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : domain.sides()) best = std::min(best, distance_to_segment(y, s));
    return best;
}

double hausdorff_distance(const DirichletDomain& a, const DirichletDomain& b) {
    if (!a.bounded() || !b.bounded()) fail(ErrorKind::InvalidArgument, "Hausdorff distance needs closed polygons");
    double h = 0.0;
    for (const auto& v : a.vertices()) h = std::max(h, distance_to_polygon(v, b));
    for (const auto& v : b.vertices()) h = std::max(h, distance_to_polygon(v, a));
    return h;
}

} // namespace holo
