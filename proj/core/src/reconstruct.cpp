#include "holoscope/reconstruct.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace holo {

double invariant_compare(const HolonomyMap& a, const ObserverWorldline& obs_a, const HolonomyMap& b,
                         const ObserverWorldline& obs_b, std::span<const GroupWord> words) {
    if (!(a.presentation() == b.presentation()))
        fail(ErrorKind::InvalidArgument, "invariant_compare needs maps of the same genus");
    double worst = 0.0;
    for (const auto& w : words) {
        const RelativeParams pa = relative_params(obs_a, evaluate_word(a, w));
        const RelativeParams pb = relative_params(obs_b, evaluate_word(b, w));
        worst = std::max({worst, std::abs(pa.rho - pb.rho), std::abs(pa.sigma - pb.sigma),
                          std::abs(pa.tau - pb.tau), std::abs(pa.nu - pb.nu)});
    }
    return worst;
}

std::vector<GroupWord> comparison_words(const HolonomyMap& h, int max_length) {
    const GroupBall ball = enumerate_ball(h.lorentz_generators(), max_length);
    std::vector<GroupWord> words;
    for (const auto& e : ball.elements())
        if (!e.word.empty()) words.push_back(e.word);
    return words;
}

MinkowskiVector infer_observer_velocity(std::span<const ReturnEvent> events) {
    Eigen::MatrixXd rows(2 * static_cast<Eigen::Index>(events.size()), 3);
    Eigen::Index r = 0;
    for (const auto& e : events)
        for (const MinkowskiVector& p : {e.p_e, e.p_r}) rows.row(r++) << -p[0], p[1], p[2];
    if (rows.rows() < 2) fail(ErrorKind::InsufficientData, "event table is empty");
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
    MinkowskiVector x = svd.matrixV().col(2);
    if (x[0] < 0.0) x = -x;
    if (!(minkowski_square(x) < -1e-12))
        fail(ErrorKind::Geometry, "recorded directions do not share a timelike orthogonal vector");
    return HyperbolicPoint::normalized(x).vector();
}

std::vector<ReturnEvent> to_rest_frame(std::span<const ReturnEvent> events, const LorentzTransform& rest) {
    std::vector<ReturnEvent> out(events.begin(), events.end());
    for (auto& e : out) {
        e.p_e = rest * e.p_e;
        e.p_r = rest * e.p_r;
    }
    return out;
}

std::vector<ImagePoint> static_images(std::span<const ReturnEvent> events_at_time) {
    std::vector<ImagePoint> images;
    images.reserve(events_at_time.size());
    for (const auto& e : events_at_time) {
        if (!(e.t_e > 0.0))
            fail(ErrorKind::InvalidArgument,
                 fmt::format("static reading needs a positive emission time, got {}", e.t_e));
        const double rho = std::log1p(e.dt / e.t_e);
        images.push_back({e.word, locate_image(rho, e.p_e).vector(), rho});
    }
    std::stable_sort(images.begin(), images.end(),
                     [](const ImagePoint& a, const ImagePoint& b) { return a.distance < b.distance; });
    return images;
}

namespace {

using WordTable = std::map<GroupWord, std::vector<ReturnEvent>, ShortlexLess>;

WordTable group_by_word(std::span<const ReturnEvent> events) {
    WordTable table;
    for (const auto& e : events) table[e.word].push_back(e);
    for (auto& [word, list] : table)
        std::sort(list.begin(), list.end(), [](const ReturnEvent& a, const ReturnEvent& b) { return a.t_e < b.t_e; });
    return table;
}

std::vector<double> distinct_times(std::span<const ReturnEvent> events) {
    std::set<double> times;
    for (const auto& e : events) times.insert(e.t_e);
    return {times.begin(), times.end()};
}

// e^rho > 1 from F = f_e / f_r: (1+u) X^2 - 2 F X + (1-u) = 0, u = (t+sigma)/sqrt((t+sigma)^2+nu^2).
double rho_from_frequency(double freq_ratio, double u) {
    const double f = 1.0 / freq_ratio;
    const double disc = std::sqrt(std::max(0.0, f * f - 1.0 + u * u));
    const double x = (f + disc) / (1.0 + u);
    if (!(x > 1.0)) fail(ErrorKind::Residual, fmt::format("frequency ratio {} admits no distance", freq_ratio));
    return std::log(x);
}

double closed_form_residual(const std::vector<ReturnEvent>& samples, const RelativeParams& p) {
    double worst = 0.0;
    for (const auto& e : samples) {
        const double dt = return_time(e.t_e, p);
        worst = std::max({worst, std::abs(dt - e.dt) / std::max(1.0, e.dt),
                          std::abs(return_angle(e.t_e, p) - e.phi_r),
                          std::abs(emission_angle(e.t_e, p) - e.phi_e),
                          std::abs(frequency_shift(e.t_e, p) - e.freq_ratio)});
    }
    return worst;
}

// Largest |tan phi_r| still read as "no deflection".
constexpr double kUndeflected = 1e-10;

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

std::map<GroupWord, WordFit, ShortlexLess> fit_evolving_params(std::span<const ReturnEvent> events) {
    const WordTable table = group_by_word(events);
    std::map<GroupWord, WordFit, ShortlexLess> fits;
    std::map<GroupWord, double, ShortlexLess> intercepts;  // dt - t (e^rho - 1) for orthogonal words

    for (const auto& [word, samples] : table) {
        if (distinct_times(samples).size() < 2)
            fail(ErrorKind::InsufficientData,
                 fmt::format("word {} is measured at fewer than two emission times", word.to_string()));
        WordFit fit;
        fit.samples = samples.size();
        // A word and its inverse share nu, so they are classified together.
        double max_tan = 0.0;
        for (const auto& e : samples) max_tan = std::max(max_tan, std::abs(std::tan(e.phi_r)));
        if (const auto inv = table.find(word.inverse()); inv != table.end())
            for (const auto& e : inv->second) max_tan = std::max(max_tan, std::abs(std::tan(e.phi_r)));

        if (max_tan <= kUndeflected) {
            // No deflection: the return angle carries nothing and e^-rho is the frequency ratio.
            fit.orthogonal = true;
            std::vector<double> rhos;
            for (const auto& e : samples) rhos.push_back(-std::log(e.freq_ratio));
            fit.params.rho = mean(rhos);
            std::vector<double> k;
            for (const auto& e : samples) k.push_back(e.dt - e.t_e * std::expm1(fit.params.rho));
            intercepts[word] = mean(k);
        } else {
            // (t + sigma) tan(phi_r) = nu, linear in (sigma, nu).
            Eigen::MatrixXd m(static_cast<Eigen::Index>(samples.size()), 2);
            Eigen::VectorXd rhs(static_cast<Eigen::Index>(samples.size()));
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const double tn = std::tan(samples[i].phi_r);
                m.row(static_cast<Eigen::Index>(i)) << tn, -1.0;
                rhs[static_cast<Eigen::Index>(i)] = -samples[i].t_e * tn;
            }
            const Eigen::Vector2d sn = m.colPivHouseholderQr().solve(rhs);
            fit.params.sigma = sn[0];
            fit.params.nu = sn[1];
            std::vector<double> rhos;
            for (const auto& e : samples) {
                const double b = e.t_e + fit.params.sigma;
                if (!(b > 0.0))
                    fail(ErrorKind::Residual, fmt::format("word {}: fitted t + sigma is not positive", word.to_string()));
                rhos.push_back(rho_from_frequency(e.freq_ratio, b / std::hypot(b, fit.params.nu)));
            }
            fit.params.rho = mean(rhos);
            std::vector<double> taus;
            for (const auto& e : samples) {
                const double b = e.t_e + fit.params.sigma;
                taus.push_back(b * (std::cosh(fit.params.rho) - 1.0) +
                               std::sinh(fit.params.rho) * std::hypot(b, fit.params.nu) - e.dt);
            }
            fit.params.tau = mean(taus);
        }
        fits[word] = fit;
    }

    // Orthogonal words only fix sigma (e^rho - 1) - tau; the inverse word, with
    // sigma' = sigma + tau and tau' = -tau, supplies the second equation.
    for (const auto& [word, k] : intercepts) {
        const auto partner = intercepts.find(word.inverse());
        if (partner == intercepts.end())
            fail(ErrorKind::InsufficientData,
                 fmt::format("word {} returns undeflected; its inverse {} is needed to separate the time offsets",
                             word.to_string(), word.inverse().to_string()));
        WordFit& fit = fits[word];
        const double e = std::exp(fit.params.rho);
        fit.params.tau = (partner->second - k) / (e + 1.0);
        fit.params.sigma = (k + fit.params.tau) / (e - 1.0);
    }

    for (auto& [word, fit] : fits) fit.residual = closed_form_residual(table.at(word), fit.params);
    return fits;
}

double Reconstruction::worst_residual() const {
    return std::max({validation.lorentz_residual, validation.poincare_residual, side_pairing_residual, fit_residual,
                     static_residual});
}

bool Reconstruction::passed(double tolerance) const {
    return holonomy && !validation.offending_word && worst_residual() <= tolerance;
}

namespace {

int genus_of(std::span<const ReturnEvent> events) {
    int top = 0;
    for (const auto& e : events)
        for (int l : e.word.letters()) top = std::max(top, std::abs(l));
    if (top < 4) fail(ErrorKind::InsufficientData, "event table mentions fewer than four generators");
    return (top + 1) / 2;
}

const ImagePoint& image_of(const std::vector<ImagePoint>& images, const GroupWord& word) {
    for (const auto& img : images)
        if (img.word == word) return img;
    fail(ErrorKind::InsufficientData, fmt::format("no returning light recorded for {}", word.to_string()));
}

// Shared tail of both pipelines: domain, pairings, Lorentz generators.
void assemble(Reconstruction& r, const std::vector<ImagePoint>& images, int genus, const ReconstructOptions& options,
              const std::function<MinkowskiVector(int, const MinkowskiVector&)>& translation) {
    const MinkowskiVector x(1.0, 0.0, 0.0);
    r.domain = dirichlet_domain(x, images, options.dirichlet);
    r.pairings = side_pairings(r.domain);

    const SurfaceGroupPresentation presentation(genus);
    std::vector<PoincareElement> gens;
    std::vector<LorentzTransform> lorentz;
    for (int k = 1; k <= presentation.generator_count(); ++k) {
        const ImagePoint& fwd = image_of(images, GroupWord::letter(k));
        const ImagePoint& back = image_of(images, GroupWord::letter(-k));
        const LorentzTransform v = isometry_from_point_pairs(back.point, x, x, fwd.point);
        lorentz.push_back(v);
        gens.push_back({v, translation(k, fwd.point)});
    }
    r.holonomy.emplace(presentation, std::move(gens));

    double worst = 0.0;
    for (const auto& p : r.pairings) {
        const LorentzTransform expected = evaluate_lorentz(lorentz, p.word);
        worst = std::max({worst, p.length_mismatch, p.endpoint_mismatch, p.transform.distance(expected)});
    }
    r.side_pairing_residual = worst;
    r.validation = validate_holonomy(*r.holonomy, options.tolerance);
    if (r.pairings.size() != static_cast<std::size_t>(2 * genus))
        r.notes.push_back(fmt::format("domain has {} side pairings for genus {} (the minimum is {})",
                                      r.pairings.size(), genus, 2 * genus));
    for (const auto& p : r.pairings)
        if (!p.equal_length_candidates.empty()) {
            r.notes.push_back(fmt::format("side pairings are geometrically ambiguous (equal side lengths); "
                                          "resolved by word bookkeeping"));
            break;
        }
}

} // namespace

Reconstruction reconstruct_static(std::span<const ReturnEvent> events, const ReconstructOptions& options) {
    if (events.empty()) fail(ErrorKind::InsufficientData, "event table is empty");
    Reconstruction r;
    r.mode = ReconstructionMode::Static;
    r.observer_velocity = infer_observer_velocity(events);
    const auto rest_events = to_rest_frame(events, LorentzTransform::boost_to_rest(r.observer_velocity));
    r.times = distinct_times(rest_events);
    const double t = r.times.front();
    if (r.times.size() > 1)
        r.notes.push_back(fmt::format("static mode reads only the first emission time ({:.17g})", t));

    std::vector<ReturnEvent> first;
    for (const auto& e : rest_events)
        if (e.t_e == t) first.push_back(e);
    double worst = 0.0;
    for (const auto& e : first)
        worst = std::max({worst, std::abs(e.freq_ratio - e.t_e / (e.t_e + e.dt)), std::abs(e.phi_e),
                          std::abs(e.phi_r)});
    r.static_residual = worst;

    const auto images = static_images(first);
    for (const auto& img : images) {
        WordFit f;
        f.params.rho = img.distance;
        f.samples = 1;
        r.fits[img.word] = f;
    }
    assemble(r, images, genus_of(events), options,
             [](int, const MinkowskiVector&) { return MinkowskiVector(MinkowskiVector::Zero()); });
    return r;
}

Reconstruction reconstruct_evolving(std::span<const ReturnEvent> events, const ReconstructOptions& options) {
    if (events.empty()) fail(ErrorKind::InsufficientData, "event table is empty");
    Reconstruction r;
    r.mode = ReconstructionMode::Evolving;
    r.observer_velocity = infer_observer_velocity(events);
    const auto rest_events = to_rest_frame(events, LorentzTransform::boost_to_rest(r.observer_velocity));
    r.times = distinct_times(rest_events);
    if (r.times.size() < 2)
        fail(ErrorKind::InsufficientData, "evolving mode needs events at two or more emission times");

    r.fits = fit_evolving_params(rest_events);
    for (const auto& [word, fit] : r.fits) r.fit_residual = std::max(r.fit_residual, fit.residual);

    // Undo the deflection of the latest emission direction to point at the static image.
    const MinkowskiVector x(1.0, 0.0, 0.0);
    const WordTable table = group_by_word(rest_events);
    std::vector<ImagePoint> images;
    for (const auto& [word, fit] : r.fits) {
        const ReturnEvent& e = table.at(word).back();
        const double phi = emission_angle(e.t_e, fit.params);
        const MinkowskiVector u = std::cos(phi) * e.p_e - std::sin(phi) * wedge(x, e.p_e);
        images.push_back({word, locate_image(fit.params.rho, u).vector(), fit.params.rho});
    }
    std::stable_sort(images.begin(), images.end(),
                     [](const ImagePoint& a, const ImagePoint& b) { return a.distance < b.distance; });

    const auto& fits = r.fits;
    assemble(r, images, genus_of(events), options, [&](int k, const MinkowskiVector& vx) {
        const RelativeParams& p = fits.at(GroupWord::letter(k)).params;
        return MinkowskiVector(p.sigma * (vx - x) + p.tau * vx + p.nu * wedge(x, vx));
    });
    return r;
}

std::string format_report(const Reconstruction& r, double tolerance) {
    std::string out = "holoscope-reconstruction 1\n";
    out += fmt::format("mode {}\n", r.mode == ReconstructionMode::Static ? "static" : "evolving");
    out += fmt::format("observer-velocity {:.17g} {:.17g} {:.17g}\n", r.observer_velocity[0],
                       r.observer_velocity[1], r.observer_velocity[2]);
    out += "emission-times";
    for (double t : r.times) out += fmt::format(" {:.17g}", t);
    out += "\n";
    out += "gauge velocity 1 0 0 position 0 0 0\n";

    const auto& d = r.domain;
    out += fmt::format("domain vertices {} circumradius {:.17g} bisectors-inserted {}\n", d.vertices().size(),
                       d.circumradius(), d.bisectors_inserted());
    for (std::size_t i = 0; i < d.vertices().size(); ++i) {
        const auto& v = d.vertices()[i];
        out += fmt::format("vertex {} {:.17g} {:.17g} {:.17g}\n", i, v[0], v[1], v[2]);
    }
    for (std::size_t i = 0; i < d.sides().size(); ++i) {
        const auto& s = d.sides()[i];
        out += fmt::format("side {} word {} length {:.17g}\n", i, s.word.to_string(), s.length);
    }
    for (const auto& p : r.pairings) {
        out += fmt::format("pairing {} sides {} {} length-mismatch {:.3e} endpoint-mismatch {:.3e} "
                           "equal-length-candidates {}\n",
                           p.word.to_string(), p.partner, p.side, p.length_mismatch, p.endpoint_mismatch,
                           p.equal_length_candidates.size());
    }
    if (r.holonomy) {
        out += fmt::format("genus {}\n", r.holonomy->genus());
        for (int i = 0; i < r.holonomy->presentation().generator_count(); ++i) {
            const auto& g = r.holonomy->generator(i);
            const auto& m = g.v.matrix();
            out += fmt::format("generator {}", r.holonomy->presentation().generator_label(i));
            for (int row = 0; row < 3; ++row)
                for (int col = 0; col < 3; ++col) out += fmt::format(" {:.17g}", m(row, col));
            out += fmt::format(" translation {:.17g} {:.17g} {:.17g}\n", g.a[0], g.a[1], g.a[2]);
        }
    }
    for (const auto& [word, fit] : r.fits) {
        if (word.length() != 1) continue;
        out += fmt::format("params {} rho {:.17g} sigma {:.17g} tau {:.17g} nu {:.17g} samples {} fit-residual {:.3e}{}\n",
                           word.to_string(), fit.params.rho, fit.params.sigma, fit.params.tau, fit.params.nu,
                           fit.samples, fit.residual, fit.orthogonal ? " undeflected" : "");
    }
    out += fmt::format("residual lorentz-relator {:.3e}\n", r.validation.lorentz_residual);
    out += fmt::format("residual poincare-relator {:.3e}\n", r.validation.poincare_residual);
    out += fmt::format("residual side-pairing {:.3e}\n", r.side_pairing_residual);
    out += fmt::format("residual fit {:.3e}\n", r.fit_residual);
    out += fmt::format("residual static-consistency {:.3e}\n", r.static_residual);
    if (r.validation.offending_word)
        out += fmt::format("non-hyperbolic {} {}\n", r.validation.offending_word->to_string(),
                           to_string(r.validation.offending_class));
    for (const auto& n : r.notes) out += "note " + n + "\n";
    out += fmt::format("tolerance {:.3e}\n", tolerance);
    out += fmt::format("status {}\n", r.passed(tolerance) ? "ok" : "failed");
    out += "end\n";
    return out;
}

DirichletDomain deformed_polygon(std::span<const ReturnEvent> rest_frame_events, double t,
                                 const DirichletOptions& options) {
    std::vector<ReturnEvent> at;
    for (const auto& e : rest_frame_events)
        if (e.t_e == t) at.push_back(e);
    if (at.empty()) fail(ErrorKind::InsufficientData, fmt::format("no events at emission time {}", t));
    return dirichlet_domain(MinkowskiVector(1.0, 0.0, 0.0), static_images(at), options);
}

double richardson_limit(std::span<const double> t, std::span<const double> values, int points) {
    if (t.size() != values.size() || t.empty()) fail(ErrorKind::InvalidArgument, "richardson_limit: size mismatch");
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(points, 1)), t.size());
    const std::size_t first = t.size() - n;
    std::vector<double> h(n);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = 1.0 / t[first + i];
        p[i] = values[first + i];
    }
    // Neville's scheme evaluated at h = 0.
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            p[i] = (h[i] * p[i + 1] - h[i + level] * p[i]) / (h[i] - h[i + level]);
    return p[0];
}

} // namespace holo
