#pragma once

#include "holoscope/group_word.hpp"
#include "holoscope/minkowski.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace holo {

inline constexpr double kDedupTolerance = 1e-6;

// Generators a1, b1, ..., ag, bg of the cocompact Fuchsian group obtained by
// pairing the sides of the regular 4g-gon centred at (1,0,0) with interior
// angles 2 pi / 4g. The canonical relator evaluates to the identity.
std::vector<LorentzTransform> genus_g_surface_group(int genus);

// Max-norm distance of the evaluated relator from the identity. Evaluated in
// extended precision with true matrix inverses.
double relator_residual(const SurfaceGroupPresentation& presentation,
                        std::span<const LorentzTransform> generators);

// Left-to-right product of the generator matrices along a word.
LorentzTransform evaluate_lorentz(std::span<const LorentzTransform> generators, const GroupWord& word);

// arccosh((tr v - 1) / 2); throws for non-hyperbolic input.
double translation_length(const LorentzTransform& v);

struct BallElement {
    GroupWord word;
    LorentzTransform matrix;
};

struct BallOptions {
    double dedup_tolerance = kDedupTolerance;
    // Elements moving the base point farther than this are dropped and not extended.
    double max_displacement = std::numeric_limits<double>::infinity();
    MinkowskiVector base_point = MinkowskiVector(1.0, 0.0, 0.0);
    // Optional region test on the image of the base point; rejected elements are not extended.
    std::function<bool(const MinkowskiVector&)> keep;
};

// Deduplicated group elements reachable by freely reduced words of length
// <= radius, each labelled by its shortlex-least word, in shortlex order.
class GroupBall {
public:
    GroupBall(int radius, std::vector<BallElement> elements, std::vector<std::string> warnings);

    int radius() const { return radius_; }
    std::span<const BallElement> elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    const BallElement& operator[](std::size_t i) const { return elements_[i]; }
    // Dedup near-misses (distance in [delta, 10 delta)); never silently dropped.
    std::span<const std::string> warnings() const { return warnings_; }

    std::optional<std::size_t> find(const GroupWord& word) const;

private:
    int radius_;
    std::vector<BallElement> elements_;
    std::vector<std::string> warnings_;
    std::map<GroupWord, std::size_t, ShortlexLess> index_;
};

GroupBall enumerate_ball(std::span<const LorentzTransform> generators, int radius,
                         const BallOptions& options = {});

} // namespace holo
