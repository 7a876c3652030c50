#include "nbclones/text.hpp"

namespace nbc::text {

std::size_t whitespace_length(std::string_view s, std::size_t pos) noexcept {
    const auto n = s.size();
    if (pos >= n) return 0;
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return (b0 == 0x20 || (b0 >= 0x09 && b0 <= 0x0D)) ? 1 : 0;
    if (pos + 1 >= n) return 0;
    const auto b1 = static_cast<unsigned char>(s[pos + 1]);
    if (b0 == 0xC2) return (b1 == 0x85 || b1 == 0xA0) ? 2 : 0;
    if (pos + 2 >= n) return 0;
    const auto b2 = static_cast<unsigned char>(s[pos + 2]);
    switch (b0) {
        case 0xE1:  // U+1680
            return (b1 == 0x9A && b2 == 0x80) ? 3 : 0;
        case 0xE2:
            if (b1 == 0x80) {
                // U+2000..U+200A, U+2028, U+2029, U+202F
                if ((b2 >= 0x80 && b2 <= 0x8A) || b2 == 0xA8 || b2 == 0xA9 || b2 == 0xAF) return 3;
                return 0;
            }
            return (b1 == 0x81 && b2 == 0x9F) ? 3 : 0;  // U+205F
        case 0xE3:  // U+3000
            return (b1 == 0x80 && b2 == 0x80) ? 3 : 0;
        default:
            return 0;
    }
}

bool is_blank(std::string_view s) noexcept {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto w = whitespace_length(s, i);
        if (w == 0) return false;
        i += w;
    }
    return true;
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < s.size()) {
        auto nl = s.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(s.substr(start));
            break;
        }
        auto end = nl;
        if (end > start && s[end - 1] == '\r') --end;
        lines.emplace_back(s.substr(start, end - start));
        start = nl + 1;
    }
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    std::size_t total = 0;
    for (const auto& l : lines) total += l.size() + 1;
    out.reserve(total);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out.push_back('\n');
        out += lines[i];
    }
    return out;
}

std::string_view trim(std::string_view s) noexcept {
    std::size_t b = 0;
    while (b < s.size()) {
        const auto w = whitespace_length(s, b);
        if (w == 0) break;
        b += w;
    }
    s.remove_prefix(b);
    // Trailing whitespace: scan forward to find the end of the last non-space char.
    std::size_t end = 0, i = 0;
    while (i < s.size()) {
        const auto w = whitespace_length(s, i);
        if (w) {
            i += w;
        } else {
            ++i;
            end = i;
        }
    }
    return s.substr(0, end);
}

}  // namespace nbc::text
