// Compiled with -mavx2; only reached through the dispatcher after a CPUID check.

#include "nbclones/simd.hpp"

#include <immintrin.h>

#include <algorithm>
#include <array>

namespace nbc::simd::avx2 {

namespace {

// For each 8-bit keep-mask, the indices of the kept bytes packed to the front.
struct CompactTable {
    alignas(16) std::array<std::array<std::uint8_t, 8>, 256> shuffle{};
    std::array<std::uint8_t, 256> popcount{};

    constexpr CompactTable() {
        for (unsigned m = 0; m < 256; ++m) {
            unsigned k = 0;
            for (unsigned b = 0; b < 8; ++b) {
                if (m & (1u << b)) shuffle[m][k++] = static_cast<std::uint8_t>(b);
            }
            for (unsigned r = k; r < 8; ++r) shuffle[m][r] = 0x80;
            popcount[m] = static_cast<std::uint8_t>(k);
        }
    }
};

constexpr CompactTable kCompact{};

inline __m256i ascii_space_mask(__m256i v) {
    // 0x09..0x0D or 0x20; bytes >= 0x80 are negative in signed compares and fail the range test.
    const __m256i lo = _mm256_cmpgt_epi8(v, _mm256_set1_epi8(0x08));
    const __m256i hi = _mm256_cmpgt_epi8(_mm256_set1_epi8(0x0E), v);
    const __m256i sp = _mm256_cmpeq_epi8(v, _mm256_set1_epi8(0x20));
    return _mm256_or_si256(_mm256_and_si256(lo, hi), sp);
}

}  // namespace

std::size_t compact_ascii_whitespace(std::string_view in, char* out) noexcept {
    const char* p = in.data();
    const std::size_t n = in.size();
    std::size_t i = 0, w = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        const auto keep = ~static_cast<std::uint32_t>(_mm256_movemask_epi8(ascii_space_mask(v)));
        if (keep == 0xFFFFFFFFu) {
            _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + w), v);
            w += 32;
            continue;
        }
        alignas(32) char block[32];
        _mm256_store_si256(reinterpret_cast<__m256i*>(block), v);
        for (int q = 0; q < 4; ++q) {
            const unsigned m = (keep >> (8 * q)) & 0xFFu;
            const __m128i src = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(block + 8 * q));
            const __m128i shuf = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(kCompact.shuffle[m].data()));
            // Writes 8 bytes; the caller guarantees in.size() bytes of room and w + 8 <= i + 32 <= n.
            _mm_storel_epi64(reinterpret_cast<__m128i*>(out + w), _mm_shuffle_epi8(src, shuf));
            w += kCompact.popcount[m];
        }
    }
    for (; i < n; ++i) {
        const auto c = static_cast<unsigned char>(p[i]);
        if (!(c == 0x20 || (c >= 0x09 && c <= 0x0D))) out[w++] = p[i];
    }
    return w;
}

bool has_non_ascii(std::string_view in) noexcept {
    const char* p = in.data();
    const std::size_t n = in.size();
    std::size_t i = 0;
    __m256i acc = _mm256_setzero_si256();
    for (; i + 32 <= n; i += 32) {
        acc = _mm256_or_si256(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i)));
    }
    if (_mm256_movemask_epi8(acc) != 0) return true;
    for (; i < n; ++i) {
        if (static_cast<unsigned char>(p[i]) >= 0x80) return true;
    }
    return false;
}

void classify(std::string_view in, const AsciiSet& set, std::span<std::uint64_t> bits) noexcept {
    // Nibble lookup: row[lo] holds bit (hi) for every member byte (hi << 4 | lo), hi < 8.
    alignas(16) std::uint8_t row[16] = {};
    for (unsigned c = 0; c < 128; ++c) {
        if (set.member[c]) row[c & 0xF] |= static_cast<std::uint8_t>(1u << (c >> 4));
    }
    const __m128i row128 = _mm_load_si128(reinterpret_cast<const __m128i*>(row));
    const __m256i row_lut = _mm256_broadcastsi128_si256(row128);
    // hi nibble 8..15 (non-ASCII) maps to 0 so such bytes never match.
    const __m256i bit_lut = _mm256_setr_epi8(1, 2, 4, 8, 16, 32, 64, static_cast<char>(128), 0, 0, 0, 0, 0, 0, 0, 0,
                                             1, 2, 4, 8, 16, 32, 64, static_cast<char>(128), 0, 0, 0, 0, 0, 0, 0, 0);
    const __m256i low4 = _mm256_set1_epi8(0x0F);

    std::fill(bits.begin(), bits.end(), 0);
    const char* p = in.data();
    const std::size_t n = in.size();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
        const __m256i lo = _mm256_and_si256(v, low4);
        const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low4);
        const __m256i r = _mm256_shuffle_epi8(row_lut, lo);
        const __m256i b = _mm256_shuffle_epi8(bit_lut, hi);
        const __m256i hit = _mm256_cmpeq_epi8(_mm256_and_si256(r, b), b);
        const __m256i nonzero = _mm256_xor_si256(_mm256_cmpeq_epi8(b, _mm256_setzero_si256()), _mm256_set1_epi8(-1));
        const auto m = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_and_si256(hit, nonzero)));
        // i is a multiple of 32, so the 32 bits land in one half of a word.
        bits[i / 64] |= static_cast<std::uint64_t>(m) << (i % 64);
    }
    for (; i < n; ++i) {
        if (set.contains(static_cast<unsigned char>(p[i]))) bits[i / 64] |= std::uint64_t{1} << (i % 64);
    }
}

std::uint64_t bag_overlap(std::span<const std::uint32_t> ids_a, std::span<const std::uint32_t> counts_a,
                          std::span<const std::uint32_t> ids_b, std::span<const std::uint32_t> counts_b) noexcept {
    const std::size_t na = ids_a.size(), nb = ids_b.size();
    std::size_t i = 0, j = 0;
    __m256i acc = _mm256_setzero_si256();
    const __m256i rot1 = _mm256_setr_epi32(1, 2, 3, 4, 5, 6, 7, 0);
    // Block-wise all-pairs compare of 8x8 ids; ids are unique per bag so each
    // (a, b) match is seen exactly once as the blocks advance monotonically.
    while (i + 8 <= na && j + 8 <= nb) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ids_a.data() + i));
        const __m256i ca = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(counts_a.data() + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ids_b.data() + j));
        __m256i cb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(counts_b.data() + j));
        for (int r = 0; r < 8; ++r) {
            const __m256i eq = _mm256_cmpeq_epi32(va, vb);
            acc = _mm256_add_epi32(acc, _mm256_and_si256(eq, _mm256_min_epu32(ca, cb)));
            vb = _mm256_permutevar8x32_epi32(vb, rot1);
            cb = _mm256_permutevar8x32_epi32(cb, rot1);
        }
        const std::uint32_t a_last = ids_a[i + 7], b_last = ids_b[j + 7];
        if (a_last <= b_last) i += 8;
        if (b_last <= a_last) j += 8;
    }
    alignas(32) std::uint32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    std::uint64_t total = 0;
    for (auto v : lanes) total += v;
    return total + scalar::bag_overlap(ids_a.subspan(i), counts_a.subspan(i), ids_b.subspan(j), counts_b.subspan(j));
}

}  // namespace nbc::simd::avx2
