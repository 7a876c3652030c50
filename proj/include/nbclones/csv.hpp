#pragma once

#include <string>
#include <string_view>

namespace nbc {

/// RFC 4180 quoting, applied only when the field needs it.
inline std::string csv_field(std::string_view v) {
    if (v.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(v);
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace nbc
