#include "nbclones/tokenizer.hpp"

#include <algorithm>
#include <unordered_map>

#include "nbclones/error.hpp"
#include "nbclones/simd.hpp"
#include "nbclones/text.hpp"

namespace nbc {

void TokenizerConfig::validate() const {
    if (inline_comment.empty()) throw ValidationError("tokenizer: inline comment marker must be non-empty");
    if (block_open.empty() || block_close.empty()) {
        throw ValidationError("tokenizer: block comment markers must be non-empty");
    }
    for (char c : separators) {
        if (static_cast<unsigned char>(c) >= 0x80) throw ValidationError("tokenizer: separators must be ASCII");
    }
}

namespace {

void append_line_feeds(std::string& out, std::string_view span) {
    out.append(static_cast<std::size_t>(std::count(span.begin(), span.end(), '\n')), '\n');
}

}  // namespace

StrippedCode strip_comments(std::string_view src, const TokenizerConfig& cfg) {
    StrippedCode result;
    auto& out = result.text;
    out.reserve(src.size());
    std::size_t pos = 0;
    bool in_block = false;
    while (pos < src.size()) {
        if (in_block) {
            const auto close = src.find(cfg.block_close, pos);
            if (close == std::string_view::npos) {
                append_line_feeds(out, src.substr(pos));
                result.unterminated_block = true;
                break;
            }
            append_line_feeds(out, src.substr(pos, close - pos));
            pos = close + cfg.block_close.size();
            in_block = false;
            continue;
        }
        const auto inline_at = src.find(cfg.inline_comment, pos);
        const auto block_at = src.find(cfg.block_open, pos);
        if (inline_at == std::string_view::npos && block_at == std::string_view::npos) {
            out.append(src.substr(pos));
            break;
        }
        if (inline_at < block_at) {
            out.append(src.substr(pos, inline_at - pos));
            const auto nl = src.find('\n', inline_at);
            if (nl == std::string_view::npos) break;
            pos = nl;  // the line feed itself is kept
        } else {
            out.append(src.substr(pos, block_at - pos));
            pos = block_at + cfg.block_open.size();
            in_block = true;
        }
    }
    return result;
}

TokenBag TokenBag::from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    TokenBag bag;
    for (auto& e : entries) {
        if (e.second == 0) continue;
        bag.size_ += e.second;
        if (!bag.entries_.empty() && bag.entries_.back().first == e.first) {
            bag.entries_.back().second += e.second;
        } else {
            bag.entries_.push_back(std::move(e));
        }
    }
    return bag;
}

std::uint32_t TokenBag::count(std::string_view token) const noexcept {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), token,
                                     [](const Entry& e, std::string_view t) { return e.first < t; });
    return (it != entries_.end() && it->first == token) ? it->second : 0;
}

TokenBag tokenize(std::string_view code, const TokenizerConfig& cfg) {
    auto set = simd::AsciiSet::of(cfg.separators);
    for (unsigned char c : {0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x20}) set.member[c] = true;

    std::vector<std::uint64_t> bits((code.size() + 63) / 64);
    simd::classify(code, set, bits);
    if (simd::has_non_ascii(code)) {
        for (std::size_t i = 0; i < code.size();) {
            const auto w = text::whitespace_length(code, i);
            if (w == 0) {
                ++i;
                continue;
            }
            for (std::size_t k = i; k < i + w; ++k) bits[k / 64] |= std::uint64_t{1} << (k % 64);
            i += w;
        }
    }

    std::unordered_map<std::string_view, std::uint32_t> counts;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        if (end > start) ++counts[code.substr(start, end - start)];
    };
    for (std::size_t word = 0; word < bits.size(); ++word) {
        std::uint64_t m = bits[word];
        while (m) {
            const auto bit = static_cast<std::size_t>(__builtin_ctzll(m));
            const std::size_t i = word * 64 + bit;
            flush(i);
            start = i + 1;
            m &= m - 1;
        }
    }
    flush(code.size());

    std::vector<TokenBag::Entry> entries;
    entries.reserve(counts.size());
    for (const auto& [tok, c] : counts) entries.emplace_back(std::string(tok), c);
    return TokenBag::from_entries(std::move(entries));
}

}  // namespace nbc
