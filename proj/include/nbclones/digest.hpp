#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nbc {

enum class DigestAlgorithm { Md5, Sha256Truncated };

const char* to_string(DigestAlgorithm a) noexcept;
std::optional<DigestAlgorithm> parse_digest_algorithm(std::string_view name) noexcept;

/// 128-bit content digest, ordered bytewise.
struct Digest128 {
    std::array<std::uint8_t, 16> bytes{};

    auto operator<=>(const Digest128&) const = default;
    std::string hex() const;
};

/// MD5 by default; the SHA-256 option keeps the first 16 bytes.
Digest128 digest128(std::string_view data, DigestAlgorithm algo = DigestAlgorithm::Md5);

struct Digest128Hash {
    std::size_t operator()(const Digest128& d) const noexcept {
        std::size_t h;
        static_assert(sizeof h <= sizeof d.bytes);
        __builtin_memcpy(&h, d.bytes.data(), sizeof h);
        return h;
    }
};

}  // namespace nbc
