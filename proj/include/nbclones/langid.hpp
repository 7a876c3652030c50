#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nbc {

/// Language declarations found in a notebook, in lookup priority order.
struct LanguageEvidence {
    std::optional<std::string> language_info_name;   // metadata.language_info.name
    std::optional<std::string> metadata_language;    // metadata.language
    std::optional<std::string> kernelspec_language;  // metadata.kernelspec.language
    std::vector<std::optional<std::string>> cell_languages;  // one per code cell

    bool operator==(const LanguageEvidence&) const = default;
};

enum class LanguageGroup { Julia, Python, R, Scala, Other, Undefined };

inline constexpr LanguageGroup kAllLanguageGroups[] = {LanguageGroup::Julia, LanguageGroup::Python, LanguageGroup::R,
                                                       LanguageGroup::Scala, LanguageGroup::Other,
                                                       LanguageGroup::Undefined};

const char* to_string(LanguageGroup g) noexcept;
/// Accepts the upper-case names produced by to_string; nullopt otherwise.
std::optional<LanguageGroup> parse_language_group(std::string_view name) noexcept;

/// Maps one declared value (already trimmed, non-empty) to its group.
LanguageGroup group_of_value(std::string_view value) noexcept;

/// First declared value in priority order. Cell-level values only count
/// when every code cell declares the same one; otherwise Undefined.
LanguageGroup classify_language(const LanguageEvidence& evidence);

struct LanguageConflict {
    bool conflicting = false;
    /// Distinct groups among the declared values, in enum order.
    std::vector<LanguageGroup> groups;
};

LanguageConflict detect_conflicts(const LanguageEvidence& evidence);

struct LanguageShare {
    LanguageGroup group;
    std::size_t count;
    double percent;
};

/// Rows in enum order, zero-count groups omitted.
std::vector<LanguageShare> language_distribution(std::span<const LanguageGroup> groups);

/// `language,count,percent` with percent to two decimals.
std::string language_distribution_csv(std::span<const LanguageShare> rows);

}  // namespace nbc
