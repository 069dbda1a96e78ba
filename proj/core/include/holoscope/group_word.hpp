#pragma once

#include <compare>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace holo {

// Freely reduced word in the generators of a surface group.
//
// Letters are signed 1-based generator indices: +k is generator k, -k its
// inverse. Generator order is a1, b1, a2, b2, ..., so letter 2i-1 is a_i and
// letter 2i is b_i. Construction always freely reduces.
class GroupWord {
public:
    GroupWord() = default;
    GroupWord(std::initializer_list<int> letters);
    explicit GroupWord(std::vector<int> letters);

    static GroupWord letter(int l) { return GroupWord({l}); }

    std::span<const int> letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }

    GroupWord inverse() const;
    GroupWord operator*(const GroupWord& other) const;

    // "a1.B2" style: lowercase generator, uppercase inverse, '.' separated, "e" for identity.
    std::string to_string() const;
    static GroupWord parse(std::string_view text);

    bool operator==(const GroupWord&) const = default;

private:
    std::vector<int> letters_;
};

// Position of a letter in the shortlex alphabet: 1, -1, 2, -2, ...
int letter_rank(int letter);

// Shortlex order: shorter first, then lexicographic by letter_rank.
bool shortlex_less(const GroupWord& lhs, const GroupWord& rhs);

struct ShortlexLess {
    bool operator()(const GroupWord& lhs, const GroupWord& rhs) const { return shortlex_less(lhs, rhs); }
};

// Canonical genus-g surface group presentation with generators a1, b1, ..., ag, bg.
class SurfaceGroupPresentation {
public:
    explicit SurfaceGroupPresentation(int genus);

    int genus() const { return genus_; }
    int generator_count() const { return 2 * genus_; }
    // [b_g, a_g] ... [b_2, a_2] [a_1, b_1] with [x, y] = x y x^-1 y^-1.
    GroupWord relator() const;
    std::string generator_label(int index) const;
    bool operator==(const SurfaceGroupPresentation&) const = default;

private:
    int genus_;
};

GroupWord commutator(int x, int y);

} // namespace holo
