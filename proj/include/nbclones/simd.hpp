#pragma once

// Data-parallel inner loops. Each kernel has a portable scalar reference and,
// on x86-64, an AVX2 variant; the variant is chosen once at runtime from CPUID
// and can be pinned with NBC_SIMD=scalar|avx2 or force_backend().

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace nbc::simd {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b) noexcept;
bool backend_available(Backend b) noexcept;
Backend active_backend() noexcept;
/// Throws std::invalid_argument if `b` is unavailable on this CPU.
void force_backend(Backend b);

/// Membership table over ASCII. Bytes >= 0x80 are never members.
struct AsciiSet {
    std::array<bool, 128> member{};

    static AsciiSet of(std::string_view chars) noexcept {
        AsciiSet s;
        for (char c : chars) {
            const auto u = static_cast<unsigned char>(c);
            if (u < 128) s.member[u] = true;
        }
        return s;
    }
    bool contains(unsigned char c) const noexcept { return c < 128 && member[c]; }
};

/// Copies `in` to `out`, dropping bytes 0x09..0x0D and 0x20. Returns the
/// number of bytes written; `out` must hold at least in.size() bytes.
std::size_t compact_ascii_whitespace(std::string_view in, char* out) noexcept;

/// True if any byte is >= 0x80.
bool has_non_ascii(std::string_view in) noexcept;

/// Sets bit i of `bits` (64-bit words, LSB first) iff in[i] is in `set`.
/// `bits` must hold ceil(in.size() / 64) words; they are overwritten.
void classify(std::string_view in, const AsciiSet& set, std::span<std::uint64_t> bits) noexcept;

/// Multiset intersection size of two bags in struct-of-arrays form: ids
/// strictly ascending, counts positive. Returns sum over common ids of
/// min(count_a, count_b).
std::uint64_t bag_overlap(std::span<const std::uint32_t> ids_a, std::span<const std::uint32_t> counts_a,
                          std::span<const std::uint32_t> ids_b, std::span<const std::uint32_t> counts_b) noexcept;

namespace scalar {
std::size_t compact_ascii_whitespace(std::string_view in, char* out) noexcept;
bool has_non_ascii(std::string_view in) noexcept;
void classify(std::string_view in, const AsciiSet& set, std::span<std::uint64_t> bits) noexcept;
std::uint64_t bag_overlap(std::span<const std::uint32_t> ids_a, std::span<const std::uint32_t> counts_a,
                          std::span<const std::uint32_t> ids_b, std::span<const std::uint32_t> counts_b) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define NBC_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::size_t compact_ascii_whitespace(std::string_view in, char* out) noexcept;
bool has_non_ascii(std::string_view in) noexcept;
void classify(std::string_view in, const AsciiSet& set, std::span<std::uint64_t> bits) noexcept;
std::uint64_t bag_overlap(std::span<const std::uint32_t> ids_a, std::span<const std::uint32_t> counts_a,
                          std::span<const std::uint32_t> ids_b, std::span<const std::uint32_t> counts_b) noexcept;
}  // namespace avx2
#endif

}  // namespace nbc::simd
