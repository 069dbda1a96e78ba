#include "holoscope/fuchsian.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

namespace holo {

namespace {

using Matrix3l = Eigen::Matrix<long double, 3, 3>;

Matrix3l rotation_l(long double angle) {
    const long double c = std::cos(angle);
    const long double s = std::sin(angle);
    Matrix3l m;
    m << 1.0L, 0.0L, 0.0L,
         0.0L, c, -s,
         0.0L, s, c;
    return m;
}

Matrix3l boost_x_l(long double rapidity) {
    const long double c = std::cosh(rapidity);
    const long double s = std::sinh(rapidity);
    Matrix3l m;
    m << c, s, 0.0L,
         s, c, 0.0L,
         0.0L, 0.0L, 1.0L;
    return m;
}

} // namespace

std::vector<LorentzTransform> genus_g_surface_group(int genus) {
    if (genus < 2) fail(ErrorKind::InvalidArgument, fmt::format("genus must be >= 2, got {}", genus));
    const int sides = 4 * genus;
    const long double pi = std::numbers::pi_v<long double>;
    // Centre-to-side-midpoint distance of the regular polygon with interior angle 2 pi / sides.
    const long double apothem = std::acosh(1.0L / std::tan(pi / sides));
    auto side_angle = [&](int k) { return 2.0L * pi * k / sides; };
    // Orientation-preserving isometry carrying side `from` onto side `to`, with
    // the polygon landing on the far side of `to`.
    auto pairing = [&](int from, int to) {
        const Matrix3l m = rotation_l(side_angle(to)) * boost_x_l(2.0L * apothem) *
                           rotation_l(pi - side_angle(from));
        return LorentzTransform::unchecked(m.cast<double>());
    };

    std::vector<LorentzTransform> gens;
    gens.reserve(2 * genus);
    // Side block 4k..4k+3 carries the pattern a b a^-1 b^-1. The first handle is
    // labelled with a and b swapped so the relator reads [b_g,a_g]...[b_2,a_2][a_1,b_1].
    gens.push_back(pairing(1, 3));
    gens.push_back(pairing(2, 0));
    for (int k = 1; k < genus; ++k) {
        gens.push_back(pairing(4 * k + 2, 4 * k));
        gens.push_back(pairing(4 * k + 1, 4 * k + 3));
    }
    return gens;
}

double relator_residual(const SurfaceGroupPresentation& presentation,
                        std::span<const LorentzTransform> generators) {
    if (static_cast<int>(generators.size()) != presentation.generator_count())
        fail(ErrorKind::InvalidArgument,
             fmt::format("expected {} generators, got {}", presentation.generator_count(), generators.size()));
    std::vector<Matrix3l> forward;
    std::vector<Matrix3l> backward;
    for (const auto& g : generators) {
        forward.push_back(g.matrix().cast<long double>());
        backward.push_back(forward.back().inverse());
    }
    Matrix3l product = Matrix3l::Identity();
    const GroupWord relator = presentation.relator();
    for (int l : relator.letters()) {
        const auto i = static_cast<std::size_t>(std::abs(l) - 1);
        product = product * (l > 0 ? forward[i] : backward[i]);
    }
    return static_cast<double>((product - Matrix3l::Identity()).cwiseAbs().maxCoeff());
}

LorentzTransform evaluate_lorentz(std::span<const LorentzTransform> generators, const GroupWord& word) {
    LorentzChain chain;
    for (int l : word.letters()) {
        const auto i = static_cast<std::size_t>(std::abs(l) - 1);
        if (i >= generators.size())
            fail(ErrorKind::InvalidArgument, fmt::format("letter {} out of range", l));
        chain.multiply(l > 0 ? generators[i] : generators[i].inverse());
    }
    return chain.value();
}

double translation_length(const LorentzTransform& v) {
    if (classify_lorentz(v) != LorentzClass::Hyperbolic)
        fail(ErrorKind::Domain, fmt::format("translation length needs a hyperbolic element (class {})",
                                            to_string(classify_lorentz(v))));
    return std::acosh((v.trace() - 1.0) / 2.0);
}

GroupBall::GroupBall(int radius, std::vector<BallElement> elements, std::vector<std::string> warnings)
    : radius_(radius), elements_(std::move(elements)), warnings_(std::move(warnings)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i].word, i);
}

std::optional<std::size_t> GroupBall::find(const GroupWord& word) const {
    const auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

// Buckets elements by the quantised image of the base point; candidates within
// 10 * dedup of each other always land in adjacent cells.
class ElementIndex {
public:
    explicit ElementIndex(double cell) : cell_(cell) {}

    using Key = std::array<std::int64_t, 3>;

    Key key_of(const MinkowskiVector& p) const {
        return {static_cast<std::int64_t>(std::floor(p[0] / cell_)),
                static_cast<std::int64_t>(std::floor(p[1] / cell_)),
                static_cast<std::int64_t>(std::floor(p[2] / cell_))};
    }

    template <class Fn>
    void for_neighbours(const MinkowskiVector& p, Fn&& fn) const {
        const Key k = key_of(p);
        for (std::int64_t d0 = -1; d0 <= 1; ++d0)
            for (std::int64_t d1 = -1; d1 <= 1; ++d1)
                for (std::int64_t d2 = -1; d2 <= 1; ++d2) {
                    const auto it = buckets_.find({k[0] + d0, k[1] + d1, k[2] + d2});
                    if (it == buckets_.end()) continue;
                    for (std::size_t i : it->second) fn(i);
                }
    }

    void insert(const MinkowskiVector& p, std::size_t i) { buckets_[key_of(p)].push_back(i); }

private:
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t h = 1469598103934665603ULL;
            for (auto v : k) {
                h ^= static_cast<std::uint64_t>(v);
                h *= 1099511628211ULL;
            }
            return static_cast<std::size_t>(h);
        }
    };

    double cell_;
    std::unordered_map<Key, std::vector<std::size_t>, KeyHash> buckets_;
};

} // namespace

GroupBall enumerate_ball(std::span<const LorentzTransform> generators, int radius, const BallOptions& options) {
    if (radius < 0) fail(ErrorKind::InvalidArgument, "ball radius must be >= 0");
    const double dedup = options.dedup_tolerance;
    const MinkowskiVector& base = options.base_point;

    std::vector<BallElement> elements;
    std::vector<std::string> warnings;
    std::vector<LorentzTransform> letters;  // ordered by letter_rank
    std::vector<int> letter_ids;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        letters.push_back(generators[i]);
        letter_ids.push_back(static_cast<int>(i) + 1);
        letters.push_back(generators[i].inverse());
        letter_ids.push_back(-static_cast<int>(i) - 1);
    }

    ElementIndex index(std::max(300.0 * dedup * std::max(1.0, base.cwiseAbs().maxCoeff()), 1e-12));
    elements.push_back({GroupWord(), LorentzTransform()});
    index.insert(base, 0);

    std::size_t frontier_begin = 0;
    std::size_t frontier_end = 1;
    for (int length = 1; length <= radius; ++length) {
        for (std::size_t parent = frontier_begin; parent < frontier_end; ++parent) {
            const auto parent_span = elements[parent].word.letters();
            const std::vector<int> parent_letters(parent_span.begin(), parent_span.end());
            const int last = parent_letters.empty() ? 0 : parent_letters.back();
            for (std::size_t li = 0; li < letters.size(); ++li) {
                if (letter_ids[li] == -last) continue;
                LorentzTransform m = elements[parent].matrix * letters[li];
                if (length % LorentzChain::kRenormInterval == 0) m = m.reorthonormalized();
                const MinkowskiVector image = m * base;
                if (-minkowski_dot(image, base) > std::cosh(options.max_displacement)) continue;
                if (options.keep && !options.keep(image)) continue;

                bool duplicate = false;
                index.for_neighbours(image, [&](std::size_t j) {
                    if (duplicate) return;
                    const double d = m.distance(elements[j].matrix);
                    if (d < dedup) {
                        duplicate = true;
                    } else if (d < 10.0 * dedup) {
                        warnings.push_back(fmt::format(
                            "ambiguous dedup: {} vs {} at matrix distance {:.3g}",
                            (elements[parent].word * GroupWord::letter(letter_ids[li])).to_string(),
                            elements[j].word.to_string(), d));
                    }
                });
                if (duplicate) continue;
                std::vector<int> w = parent_letters;
                w.push_back(letter_ids[li]);
                index.insert(image, elements.size());
                elements.push_back({GroupWord(std::move(w)), m});
            }
        }
        frontier_begin = frontier_end;
        frontier_end = elements.size();
    }
    return GroupBall(radius, std::move(elements), std::move(warnings));
}

} // namespace holo
