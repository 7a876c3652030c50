#include "nbclones/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace nbc::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(NBC_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend initial_backend() noexcept {
    if (const char* env = std::getenv("NBC_SIMD")) {
        const std::string v = env;
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() noexcept {
    static std::atomic<Backend> b{initial_backend()};
    return b;
}

}  // namespace

const char* backend_name(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend b) noexcept {
    return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
    if (!backend_available(b)) throw std::invalid_argument(std::string("SIMD backend unavailable: ") + backend_name(b));
    current().store(b, std::memory_order_relaxed);
}

#if defined(NBC_HAVE_AVX2_KERNELS)
#define NBC_DISPATCH(fn, ...) \
    (active_backend() == Backend::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define NBC_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

std::size_t compact_ascii_whitespace(std::string_view in, char* out) noexcept {
    return NBC_DISPATCH(compact_ascii_whitespace, in, out);
}

bool has_non_ascii(std::string_view in) noexcept { return NBC_DISPATCH(has_non_ascii, in); }

void classify(std::string_view in, const AsciiSet& set, std::span<std::uint64_t> bits) noexcept {
    NBC_DISPATCH(classify, in, set, bits);
}

std::uint64_t bag_overlap(std::span<const std::uint32_t> ids_a, std::span<const std::uint32_t> counts_a,
                          std::span<const std::uint32_t> ids_b, std::span<const std::uint32_t> counts_b) noexcept {
    return NBC_DISPATCH(bag_overlap, ids_a, counts_a, ids_b, counts_b);
}

#undef NBC_DISPATCH

}  // namespace nbc::simd
