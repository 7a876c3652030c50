#include "nbclones/langid.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "nbclones/text.hpp"

namespace nbc {

namespace {

std::optional<std::string_view> declared(const std::optional<std::string>& field) {
    if (!field) return std::nullopt;
    const auto v = text::trim(*field);
    if (v.empty()) return std::nullopt;
    return v;
}

struct CellVerdict {
    std::optional<std::string_view> value;  // first declared cell value
    bool unanimous = true;                  // every code cell declares exactly `value`
};

CellVerdict examine_cells(const LanguageEvidence& ev) {
    CellVerdict verdict;
    for (const auto& c : ev.cell_languages) {
        if (auto v = declared(c)) {
            verdict.value = *v;
            break;
        }
    }
    if (!verdict.value) return verdict;
    for (const auto& c : ev.cell_languages) {
        const auto v = declared(c);
        if (!v || *v != *verdict.value) {
            verdict.unanimous = false;
            break;
        }
    }
    return verdict;
}

}  // namespace

const char* to_string(LanguageGroup g) noexcept {
    switch (g) {
        case LanguageGroup::Julia: return "JULIA";
        case LanguageGroup::Python: return "PYTHON";
        case LanguageGroup::R: return "R";
        case LanguageGroup::Scala: return "SCALA";
        case LanguageGroup::Other: return "OTHER";
        case LanguageGroup::Undefined: return "UNDEFINED";
    }
    return "UNDEFINED";
}

std::optional<LanguageGroup> parse_language_group(std::string_view name) noexcept {
    for (auto g : kAllLanguageGroups) {
        if (name == to_string(g)) return g;
    }
    return std::nullopt;
}

LanguageGroup group_of_value(std::string_view v) noexcept {
    if (v == "Julia" || v == "julia") return LanguageGroup::Julia;
    if (v.starts_with("Python") || v.starts_with("python")) return LanguageGroup::Python;
    if (v == "R" || v == "r") return LanguageGroup::R;
    if (v.starts_with("Scala") || v.starts_with("scala")) return LanguageGroup::Scala;
    return LanguageGroup::Other;
}

LanguageGroup classify_language(const LanguageEvidence& ev) {
    for (const auto* field : {&ev.language_info_name, &ev.metadata_language, &ev.kernelspec_language}) {
        if (auto v = declared(*field)) return group_of_value(*v);
    }
    const auto cells = examine_cells(ev);
    if (!cells.value || !cells.unanimous) return LanguageGroup::Undefined;
    return group_of_value(*cells.value);
}

LanguageConflict detect_conflicts(const LanguageEvidence& ev) {
    std::array<bool, std::size(kAllLanguageGroups)> seen{};
    auto note = [&](std::optional<std::string_view> v) {
        if (v) seen[static_cast<std::size_t>(group_of_value(*v))] = true;
    };
    note(declared(ev.language_info_name));
    note(declared(ev.metadata_language));
    note(declared(ev.kernelspec_language));
    for (const auto& c : ev.cell_languages) note(declared(c));

    LanguageConflict out;
    for (auto g : kAllLanguageGroups) {
        if (seen[static_cast<std::size_t>(g)]) out.groups.push_back(g);
    }
    out.conflicting = out.groups.size() >= 2;
    // Falling through to disagreeing cells is flagged even when the values share a group.
    if (!declared(ev.language_info_name) && !declared(ev.metadata_language) && !declared(ev.kernelspec_language)) {
        const auto cells = examine_cells(ev);
        if (cells.value && !cells.unanimous) out.conflicting = true;
    }
    return out;
}

std::vector<LanguageShare> language_distribution(std::span<const LanguageGroup> groups) {
    std::array<std::size_t, std::size(kAllLanguageGroups)> counts{};
    for (auto g : groups) ++counts[static_cast<std::size_t>(g)];
    std::vector<LanguageShare> rows;
    if (groups.empty()) return rows;
    const double total = static_cast<double>(groups.size());
    for (auto g : kAllLanguageGroups) {
        const auto c = counts[static_cast<std::size_t>(g)];
        if (c == 0) continue;
        rows.push_back({g, c, 100.0 * static_cast<double>(c) / total});
    }
    return rows;
}

std::string language_distribution_csv(std::span<const LanguageShare> rows) {
    std::string out = "language,count,percent\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%.2f\n", to_string(r.group), r.count, r.percent);
        out += buf;
    }
    return out;
}

}  // namespace nbc
