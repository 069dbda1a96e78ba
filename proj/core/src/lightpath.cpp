#include "holoscope/lightpath.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>


#include <algorithm>
#include <cmath>
#include <thread>

namespace holo {

ObserverWorldline ObserverWorldline::transformed(const PoincareElement& g) const {
    return {HyperbolicPoint::normalized(g.v * velocity.vector()), g.apply(position)};
}

ObserverWorldline ObserverWorldline::time_shifted(double t0) const {
    return {velocity, position + t0 * velocity.vector()};
}

RelativeParams relative_params(const ObserverWorldline& obs, const PoincareElement& h) {
    const MinkowskiVector& x = obs.velocity.vector();
    const MinkowskiVector vx = h.v * x;
    // cosh rho - 1; for small rho from (v x - x)^2 = 2 (cosh rho - 1), which avoids the
    // cancellation in -x.vx - 1.
    const double c = -minkowski_dot(x, vx);
    const double c_minus_1 = c > 2.0 ? c - 1.0 : 0.5 * minkowski_square(vx - x);
    if (!(c_minus_1 > 1e-14))
        fail(ErrorKind::Internal, "relative parameters need v x != x (non-hyperbolic holonomy?)");
    const MinkowskiVector w = wedge(x, vx);
    const MinkowskiVector a = h.apply(obs.position) - obs.position;
    // Dual basis: a.x = -sigma (c - 1) - tau c, a.vx = sigma (c - 1) - tau, a.w = nu w^2.
    // The LU solve on the nearly parallel columns v x - x and v x loses digits for large rho.
    const double ax = minkowski_dot(a, x);
    const double avx = minkowski_dot(a, vx);
    RelativeParams p;
    p.rho = c > 2.0 ? std::acosh(c) : 2.0 * std::asinh(0.5 * std::sqrt(2.0 * c_minus_1));
    p.tau = -(ax + avx) / (c_minus_1 + 2.0);
    p.sigma = (avx + p.tau) / c_minus_1;
    p.nu = minkowski_dot(a, w) / minkowski_square(w);
    return p;
}

MinkowskiVector recompose(const ObserverWorldline& obs, const LorentzTransform& v, const RelativeParams& p) {
    const MinkowskiVector& x = obs.velocity.vector();
    const MinkowskiVector vx = v * x;
    return p.sigma * (vx - x) + p.tau * vx + p.nu * wedge(x, vx);
}

namespace {

double offset_time(double t, const RelativeParams& p) {
    const double b = t + p.sigma;
    if (!(b > 0.0)) fail(ErrorKind::Domain, fmt::format("emission time {} is before the admissible range (t + sigma = {})", t, b));
    return b;
}

// Unit vectors (u, w) of x^perp: u points towards y, w = x ^ u.
std::pair<MinkowskiVector, MinkowskiVector> frame_towards(const MinkowskiVector& x, const MinkowskiVector& y) {
    MinkowskiVector u = y + minkowski_dot(x, y) * x;
    u /= spacelike_norm(u);
    return {u, wedge(x, u)};
}

MinkowskiVector unit_spacelike(const MinkowskiVector& y) {
    const double sq = minkowski_square(y);
    if (!(sq > 0.0)) fail(ErrorKind::Internal, "light direction has no spatial part");
    return y / std::sqrt(sq);
}

} // namespace

double return_time(double t, const RelativeParams& p) {
    const double b = offset_time(t, p);
    return b * (std::cosh(p.rho) - 1.0) - p.tau + std::sinh(p.rho) * std::hypot(b, p.nu);
}

namespace {

// Light segment y from g(t) to h g(t + dt), together with dt.
std::pair<double, MinkowskiVector> light_segment(double t, const ObserverWorldline& obs, const PoincareElement& h) {
    const MinkowskiVector a = h.v * obs.velocity.vector();
    const MinkowskiVector b = h.apply(obs.at(t)) - obs.at(t);
    const double ab = minkowski_dot(a, b);
    const double bb = minkowski_square(b);
    const double disc = std::sqrt(ab * ab + bb);
    // Roots ab +- disc; the product of the roots is -bb. The larger root is where the
    // image crosses the future light cone of g(t), the smaller one the past cone.
    const double dt = ab >= 0.0 ? ab + disc : bb / (disc - ab);
    if (!(dt > 0.0))
        fail(ErrorKind::Geometry, fmt::format("light from t = {} never reaches the image (root {})", t, dt));
    return {dt, b + dt * a};
}

} // namespace

double return_time_oracle(double t, const ObserverWorldline& obs, const PoincareElement& h) {
    return light_segment(t, obs, h).first;
}

double emission_angle(double t, const RelativeParams& p) {
    const double b = offset_time(t, p);
    return std::atan2(p.nu, b * std::cosh(p.rho) + std::sinh(p.rho) * std::hypot(b, p.nu));
}

double return_angle(double t, const RelativeParams& p) { return std::atan2(p.nu, offset_time(t, p)); }

Directions emission_return_directions(double t, const ObserverWorldline& obs, const PoincareElement& h,
                                      const RelativeParams& p) {
    const MinkowskiVector& x = obs.velocity.vector();
    Directions d;
    d.phi_e = emission_angle(t, p);
    d.phi_r = return_angle(t, p);
    const auto [ue, we] = frame_towards(x, h.v * x);
    d.emission = std::cos(d.phi_e) * ue + std::sin(d.phi_e) * we;
    const auto [ur, wr] = frame_towards(x, h.v.inverse() * x);
    d.arrival = std::cos(d.phi_r) * ur + std::sin(d.phi_r) * wr;
    return d;
}

Directions directions_oracle(double t, const ObserverWorldline& obs, const PoincareElement& h) {
    const MinkowskiVector& x = obs.velocity.vector();
    const MinkowskiVector y = light_segment(t, obs, h).second;
    Directions d;
    d.emission = unit_spacelike(project_orthogonal(y, x));
    const MinkowskiVector vx = h.v * x;
    // y and b = h g(t) - g(t) differ by a multiple of v x, so they project alike; b avoids
    // the cancellation in y when the return time is long.
    const MinkowskiVector b = h.apply(obs.at(t)) - obs.at(t);
    d.arrival = unit_spacelike(-(h.v.inverse() * project_orthogonal(b, vx)));

    const auto [ue, we] = frame_towards(x, vx);
    d.phi_e = std::atan2(minkowski_dot(d.emission, we), minkowski_dot(d.emission, ue));
    const auto [ur, wr] = frame_towards(x, h.v.inverse() * x);
    d.phi_r = std::atan2(minkowski_dot(d.arrival, wr), minkowski_dot(d.arrival, ur));
    return d;
}

double frequency_shift(double t, const RelativeParams& p) {
    const double b = offset_time(t, p);
    const double s = std::hypot(b, p.nu);
    return s / (std::cosh(p.rho) * s + std::sinh(p.rho) * b);
}

double frequency_shift_oracle(double t, const ObserverWorldline& obs, const PoincareElement& h) {
    const MinkowskiVector& x = obs.velocity.vector();
    const MinkowskiVector y = light_segment(t, obs, h).second;
    return minkowski_dot(h.v * x, y) / minkowski_dot(x, y);
}

ReturnEvent make_event(const GroupWord& word, double t, const ObserverWorldline& obs, const PoincareElement& h) {
    ReturnEvent e;
    e.word = word;
    e.t_e = t;
    e.params = relative_params(obs, h);
    if (!(t + e.params.sigma > 0.0))
        fail(ErrorKind::Domain, fmt::format("word {}: t_e + sigma = {} is not positive at t_e = {}",
                                            word.to_string(), t + e.params.sigma, t));
    e.dt = return_time(t, e.params);
    const Directions d = emission_return_directions(t, obs, h, e.params);
    e.phi_e = d.phi_e;
    e.phi_r = d.phi_r;
    e.p_e = d.emission;
    e.p_r = d.arrival;
    e.freq_ratio = frequency_shift(t, e.params);
    return e;
}

bool event_less(const ReturnEvent& lhs, const ReturnEvent& rhs) {
    if (lhs.t_e != rhs.t_e) return lhs.t_e < rhs.t_e;
    if (lhs.dt != rhs.dt) return lhs.dt < rhs.dt;
    return shortlex_less(lhs.word, rhs.word);
}

std::vector<ReturnEvent> simulate_scan(const ObserverWorldline& obs, const HolonomyMap& h,
                                       std::span<const double> times, const ScanOptions& options) {
    for (double t : times)
        if (!std::isfinite(t)) fail(ErrorKind::InvalidArgument, "emission times must be finite");
    const GroupBall ball = enumerate_ball(h.lorentz_generators(), options.ball_radius);
    std::vector<PoincareElement> elements;
    std::vector<GroupWord> words;
    for (const auto& e : ball.elements()) {
        if (e.word.empty()) continue;
        words.push_back(e.word);
        elements.push_back(evaluate_word(h, e.word));
    }

    const std::size_t total = words.size() * times.size();
    std::vector<ReturnEvent> events(total);
    std::vector<std::exception_ptr> errors(total);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t ti = k / words.size();
            const std::size_t wi = k % words.size();
            try {
                events[k] = make_event(words[wi], times[ti], obs, elements[wi]);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };

    const std::size_t threads =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), 1, std::max<std::size_t>(total, 1));
    if (threads == 1) {
        work(0, total);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (total + threads - 1) / threads;
        for (std::size_t i = 0; i < threads; ++i)
            pool.emplace_back(work, std::min(total, i * chunk), std::min(total, (i + 1) * chunk));
    }
    // Report the first failure in table order so the message does not depend on scheduling.
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    std::sort(events.begin(), events.end(), event_less);
    return events;
}

} // namespace holo
