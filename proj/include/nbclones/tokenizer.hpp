#pragma once

// Comment stripping and token-bag construction for near-miss detection.
// Comment syntax is fixed per run: one inline marker plus one block
// open/close pair. There is no string-literal tracking, so a '#' inside a
// string starts a comment, and ''' spans are code.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nbc {

inline constexpr std::string_view kDefaultSeparators = ";.[]()~!-+&*/%<>^|?{}=#,\"\\:$'`@";

struct TokenizerConfig {
    std::string inline_comment = "#";
    std::string block_open = "\"\"\"";
    std::string block_close = "\"\"\"";
    /// Non-whitespace separators; whitespace (the full Unicode class) always separates.
    std::string separators{kDefaultSeparators};

    /// Throws ValidationError on empty markers or non-ASCII separators.
    void validate() const;
};

struct StrippedCode {
    std::string text;
    bool unterminated_block = false;
};

/// Removes inline comments to end of line and block comments inclusive of
/// their markers. Line feeds inside a block comment are kept so line
/// structure survives.
StrippedCode strip_comments(std::string_view source, const TokenizerConfig& cfg = {});

/// Multiset of tokens, entries sorted by token with positive counts.
class TokenBag {
public:
    using Entry = std::pair<std::string, std::uint32_t>;

    TokenBag() = default;
    /// Entries may be in any order and repeat tokens; zero counts are dropped.
    static TokenBag from_entries(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    std::size_t distinct() const noexcept { return entries_.size(); }
    /// Total number of tokens (sum of counts).
    std::uint64_t size() const noexcept { return size_; }
    std::uint32_t count(std::string_view token) const noexcept;

    bool operator==(const TokenBag&) const = default;

private:
    std::vector<Entry> entries_;
    std::uint64_t size_ = 0;
};

/// Splits comment-free code on whitespace and the configured separators.
TokenBag tokenize(std::string_view code, const TokenizerConfig& cfg = {});

}  // namespace nbc
