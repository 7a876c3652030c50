#include "nbclones/digest.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace nbc {

const char* to_string(DigestAlgorithm a) noexcept {
    return a == DigestAlgorithm::Md5 ? "md5" : "sha256-128";
}

std::optional<DigestAlgorithm> parse_digest_algorithm(std::string_view name) noexcept {
    if (name == "md5") return DigestAlgorithm::Md5;
    if (name == "sha256-128") return DigestAlgorithm::Sha256Truncated;
    return std::nullopt;
}

std::string Digest128::hex() const {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s(32, '0');
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        s[2 * i] = kHex[bytes[i] >> 4];
        s[2 * i + 1] = kHex[bytes[i] & 0xF];
    }
    return s;
}

Digest128 digest128(std::string_view data, DigestAlgorithm algo) {
    // EVP_MD_CTX is reused per thread; creating one per snippet dominates at corpus scale.
    struct CtxDeleter {
        void operator()(EVP_MD_CTX* c) const noexcept { EVP_MD_CTX_free(c); }
    };
    thread_local std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx{EVP_MD_CTX_new()};
    const EVP_MD* md = algo == DigestAlgorithm::Md5 ? EVP_md5() : EVP_sha256();
    unsigned char out[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out, &len) != 1 || len < 16) {
        throw std::runtime_error("digest computation failed");
    }
    Digest128 d;
    std::copy(out, out + 16, d.bytes.begin());
    return d;
}

}  // namespace nbc
