#include "nbclones/cmw.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "nbclones/csv.hpp"
#include "nbclones/error.hpp"
#include "nbclones/parallel.hpp"
#include "nbclones/simd.hpp"
#include "nbclones/text.hpp"

namespace nbc {

namespace {

/// Appends `text` with whitespace removed to `out`.
void append_normalized(std::string_view text, std::string& out) {
    const auto base = out.size();
    out.resize(base + text.size());
    auto written = simd::compact_ascii_whitespace(text, out.data() + base);
    out.resize(base + written);
    std::string_view rest(out.data() + base, written);
    if (!simd::has_non_ascii(rest)) return;
    // Remaining whitespace is multi-byte; compact in place.
    std::size_t w = base;
    for (std::size_t i = base; i < out.size();) {
        const auto len = text::whitespace_length(out, i);
        if (len) {
            i += len;
        } else {
            out[w++] = out[i++];
        }
    }
    out.resize(w);
}

}  // namespace

std::string normalize_whitespace(std::string_view text) {
    std::string out;
    append_normalized(text, out);
    return out;
}

std::vector<SnippetDigest> digest_snippets(std::span<const NotebookRecord> notebooks, DigestAlgorithm algo,
                                           unsigned threads) {
    std::vector<std::size_t> offset(notebooks.size() + 1, 0);
    for (std::size_t i = 0; i < notebooks.size(); ++i) offset[i + 1] = offset[i] + notebooks[i].code_cells.size();
    std::vector<SnippetDigest> out(offset.back());
    parallel_for(notebooks.size(), threads, [&](std::size_t n) {
        std::string buf;
        const auto& cells = notebooks[n].code_cells;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            buf.clear();
            for (const auto& line : cells[c].source) append_normalized(line, buf);
            auto& d = out[offset[n] + c];
            d.ref = {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(c)};
            d.digest = cmw_digest(buf, algo);
            d.empty = buf.empty();
        }
    });
    return out;
}

std::size_t CloneGroups::snippets_in_clone_groups() const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups) {
        if (g.is_clone_group()) n += g.members.size();
    }
    return n;
}

std::size_t CloneGroups::considered_snippets() const noexcept {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.members.size();
    return n;
}

std::uint32_t group_median_loc(std::vector<std::uint32_t> locs) {
    if (locs.empty()) throw ValidationError("median of an empty clone group");
    const auto mid = locs.size() / 2;
    std::nth_element(locs.begin(), locs.begin() + static_cast<std::ptrdiff_t>(mid), locs.end());
    const std::uint64_t upper = locs[mid];
    if (locs.size() % 2 == 1) return static_cast<std::uint32_t>(upper);
    const std::uint64_t lower = *std::max_element(locs.begin(), locs.begin() + static_cast<std::ptrdiff_t>(mid));
    return static_cast<std::uint32_t>((lower + upper) / 2);
}

CloneGroups build_clone_groups(std::span<const NotebookRecord> notebooks, std::span<const SnippetDigest> digests,
                               bool include_empty) {
    CloneGroups out;
    out.includes_empty = include_empty;
    std::unordered_map<Digest128, std::size_t, Digest128Hash> index;
    for (const auto& d : digests) {
        if (d.empty) {
            ++out.empty_count;
            if (!include_empty) continue;
        }
        auto [it, inserted] = index.try_emplace(d.digest, out.groups.size());
        if (inserted) out.groups.push_back({d.digest, {}, 0});
        out.groups[it->second].members.push_back(d.ref);
    }
    for (auto& g : out.groups) {
        std::sort(g.members.begin(), g.members.end());
        std::vector<std::uint32_t> locs;
        locs.reserve(g.members.size());
        for (const auto& m : g.members) locs.push_back(notebooks[m.notebook].code_cells[m.cell].lines.loc_nonblank);
        g.median_loc = group_median_loc(std::move(locs));
    }
    std::sort(out.groups.begin(), out.groups.end(), [](const CloneGroup& a, const CloneGroup& b) {
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        return a.digest < b.digest;
    });
    return out;
}

GroupSizeTable group_size_table(std::span<const NotebookRecord> notebooks, const CloneGroups& groups) {
    GroupSizeTable table(notebooks.size());
    for (std::size_t i = 0; i < notebooks.size(); ++i) table[i].assign(notebooks[i].code_cells.size(), 0);
    for (const auto& g : groups.groups) {
        for (const auto& m : g.members) table[m.notebook][m.cell] = static_cast<std::uint32_t>(g.members.size());
    }
    return table;
}

double clone_frequency(std::span<const std::uint32_t> sizes) {
    std::size_t considered = 0, cloned = 0;
    for (auto s : sizes) {
        if (s == 0) continue;
        ++considered;
        if (s >= 2) ++cloned;
    }
    return considered == 0 ? 0.0 : static_cast<double>(cloned) / static_cast<double>(considered);
}

double corpus_clone_ratio(const CloneGroups& groups) {
    const auto total = groups.considered_snippets();
    if (total == 0) throw ValidationError("clone ratio of a corpus without non-empty snippets");
    return static_cast<double>(groups.snippets_in_clone_groups()) / static_cast<double>(total);
}

std::vector<NotebookCloneClass> notebook_clone_classes(std::span<const NotebookRecord> notebooks,
                                                       std::span<const SnippetDigest> digests) {
    // Key: the positional digest sequence. Equal keys <=> clone relation, so
    // the buckets are already the equivalence classes.
    std::map<std::vector<Digest128>, std::vector<std::uint32_t>> buckets;
    std::size_t k = 0;
    for (std::size_t n = 0; n < notebooks.size(); ++n) {
        std::vector<Digest128> key;
        key.reserve(notebooks[n].code_cells.size());
        for (std::size_t c = 0; c < notebooks[n].code_cells.size(); ++c, ++k) {
            if (k >= digests.size() || digests[k].ref != SnippetRef{static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(c)}) {
                throw ValidationError("notebook_clone_classes: digests do not cover every snippet in corpus order");
            }
            key.push_back(digests[k].digest);
        }
        buckets[std::move(key)].push_back(static_cast<std::uint32_t>(n));
    }
    std::vector<NotebookCloneClass> classes;
    classes.reserve(buckets.size());
    for (auto& [key, members] : buckets) classes.push_back({std::move(members)});
    std::sort(classes.begin(), classes.end(), [](const NotebookCloneClass& a, const NotebookCloneClass& b) {
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        return a.members.front() < b.members.front();
    });
    return classes;
}

std::string clone_groups_csv(const CloneGroups& groups) {
    std::string out = "digest,occurrences,median_loc\n";
    for (const auto& g : groups.groups) {
        out += g.digest.hex() + ',' + std::to_string(g.members.size()) + ',' + std::to_string(g.median_loc) + '\n';
    }
    return out;
}

std::string clone_members_csv(const CloneGroups& groups, std::span<const NotebookRecord> notebooks) {
    std::string out = "digest,notebook_id,cell_index\n";
    for (const auto& g : groups.groups) {
        const auto hex = g.digest.hex();
        for (const auto& m : g.members) {
            out += hex + ',' + csv_field(notebooks[m.notebook].notebook_id) + ',' + std::to_string(m.cell) + '\n';
        }
    }
    return out;
}

}  // namespace nbc
