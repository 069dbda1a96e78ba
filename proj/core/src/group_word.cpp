#include "holoscope/group_word.hpp"

#include "holoscope/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace holo {

namespace {

std::vector<int> freely_reduce(const std::vector<int>& letters) {
    std::vector<int> out;
    out.reserve(letters.size());
    for (int l : letters) {
        if (l == 0) fail(ErrorKind::InvalidArgument, "group word letters must be non-zero");
        if (!out.empty() && out.back() == -l)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

} // namespace

GroupWord::GroupWord(std::initializer_list<int> letters)
    : letters_(freely_reduce(std::vector<int>(letters))) {}

GroupWord::GroupWord(std::vector<int> letters) : letters_(freely_reduce(letters)) {}

GroupWord GroupWord::inverse() const {
    std::vector<int> inv(letters_.rbegin(), letters_.rend());
    for (int& l : inv) l = -l;
    return GroupWord(std::move(inv));
}

GroupWord GroupWord::operator*(const GroupWord& other) const {
    std::vector<int> joined = letters_;
    joined.insert(joined.end(), other.letters_.begin(), other.letters_.end());
    return GroupWord(std::move(joined));
}

std::string GroupWord::to_string() const {
    if (letters_.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        const int l = letters_[i];
        const int index = std::abs(l) - 1;
        const bool is_a = index % 2 == 0;
        char c = is_a ? 'a' : 'b';
        if (l < 0) c = static_cast<char>(std::toupper(c));
        if (i > 0) out += '.';
        out += c;
        out += std::to_string(index / 2 + 1);
    }
    return out;
}

GroupWord GroupWord::parse(std::string_view text) {
    if (text == "e") return {};
    std::vector<int> letters;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t dot = std::min(text.find('.', pos), text.size());
        const std::string_view token = text.substr(pos, dot - pos);
        if (token.size() < 2)
            fail(ErrorKind::Parse, fmt::format("malformed group word '{}'", text));
        const char c = token.front();
        const bool inverse = std::isupper(static_cast<unsigned char>(c)) != 0;
        const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lower != 'a' && lower != 'b')
            fail(ErrorKind::Parse, fmt::format("malformed group word '{}'", text));
        int handle = 0;
        const auto [ptr, ec] = std::from_chars(token.data() + 1, token.data() + token.size(), handle);
        if (ec != std::errc() || ptr != token.data() + token.size() || handle < 1)
            fail(ErrorKind::Parse, fmt::format("malformed group word '{}'", text));
        const int index = 2 * (handle - 1) + (lower == 'a' ? 0 : 1);
        letters.push_back(inverse ? -(index + 1) : index + 1);
        pos = dot + 1;
    }
    return GroupWord(std::move(letters));
}

int letter_rank(int letter) { return 2 * (std::abs(letter) - 1) + (letter < 0 ? 1 : 0); }

bool shortlex_less(const GroupWord& lhs, const GroupWord& rhs) {
    if (lhs.length() != rhs.length()) return lhs.length() < rhs.length();
    const auto a = lhs.letters();
    const auto b = rhs.letters();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](int x, int y) { return letter_rank(x) < letter_rank(y); });
}

SurfaceGroupPresentation::SurfaceGroupPresentation(int genus) : genus_(genus) {
    if (genus < 2) fail(ErrorKind::InvalidArgument, fmt::format("genus must be >= 2, got {}", genus));
}

GroupWord commutator(int x, int y) { return GroupWord({x, y, -x, -y}); }

GroupWord SurfaceGroupPresentation::relator() const {
    GroupWord w;
    for (int i = genus_; i >= 2; --i) {
        const int a = 2 * i - 1;
        const int b = 2 * i;
        w = w * commutator(b, a);
    }
    return w * commutator(1, 2);
}

std::string SurfaceGroupPresentation::generator_label(int index) const {
    return GroupWord::letter(index + 1).to_string();
}

} // namespace holo
