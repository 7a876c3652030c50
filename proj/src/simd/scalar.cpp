#include "nbclones/simd.hpp"

#include <algorithm>

namespace nbc::simd::scalar {

namespace {
constexpr bool is_ascii_space(unsigned char c) noexcept { return c == 0x20 || (c >= 0x09 && c <= 0x0D); }
}  // namespace

std::size_t compact_ascii_whitespace(std::string_view in, char* out) noexcept {
    std::size_t w = 0;
    for (char c : in) {
        if (!is_ascii_space(static_cast<unsigned char>(c))) out[w++] = c;
    }
    return w;
}

bool has_non_ascii(std::string_view in) noexcept {
    return std::any_of(in.begin(), in.end(), [](char c) { return static_cast<unsigned char>(c) >= 0x80; });
}

void classify(std::string_view in, const AsciiSet& set, std::span<std::uint64_t> bits) noexcept {
    std::fill(bits.begin(), bits.end(), 0);
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (set.contains(static_cast<unsigned char>(in[i]))) bits[i / 64] |= std::uint64_t{1} << (i % 64);
    }
}

std::uint64_t bag_overlap(std::span<const std::uint32_t> ids_a, std::span<const std::uint32_t> counts_a,
                          std::span<const std::uint32_t> ids_b, std::span<const std::uint32_t> counts_b) noexcept {
    std::uint64_t total = 0;
    std::size_t i = 0, j = 0;
    while (i < ids_a.size() && j < ids_b.size()) {
        if (ids_a[i] < ids_b[j]) {
            ++i;
        } else if (ids_b[j] < ids_a[i]) {
            ++j;
        } else {
            total += std::min(counts_a[i], counts_b[j]);
            ++i;
            ++j;
        }
    }
    return total;
}

}  // namespace nbc::simd::scalar
