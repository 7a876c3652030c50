#pragma once

// Copy-modulo-whitespace (CMW) clones: snippets that are identical once every
// whitespace character is deleted. Comments are part of the compared text.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbclones/corpus_ref.hpp"
#include "nbclones/digest.hpp"
#include "nbclones/ingest.hpp"

namespace nbc {

/// Deletes every Unicode White_Space character.
std::string normalize_whitespace(std::string_view text);

inline Digest128 cmw_digest(std::string_view normalized, DigestAlgorithm algo = DigestAlgorithm::Md5) {
    return digest128(normalized, algo);
}

/// Per-snippet digests in corpus order (notebook, then cell).
struct SnippetDigest {
    SnippetRef ref;
    Digest128 digest;
    bool empty = false;  // normalized text is ""
};

std::vector<SnippetDigest> digest_snippets(std::span<const NotebookRecord> notebooks,
                                           DigestAlgorithm algo = DigestAlgorithm::Md5, unsigned threads = 0);

struct CloneGroup {
    Digest128 digest;
    std::vector<SnippetRef> members;  // ascending
    std::uint32_t median_loc = 0;

    std::size_t occurrence_count() const noexcept { return members.size(); }
    bool is_clone_group() const noexcept { return members.size() >= 2; }
};

struct CloneGroups {
    /// Ordered by occurrence count descending, then digest ascending.
    std::vector<CloneGroup> groups;
    /// Empty snippets seen (whether or not they were grouped).
    std::size_t empty_count = 0;
    bool includes_empty = false;

    std::size_t snippets_in_clone_groups() const noexcept;
    std::size_t considered_snippets() const noexcept;
};

CloneGroups build_clone_groups(std::span<const NotebookRecord> notebooks, std::span<const SnippetDigest> digests,
                               bool include_empty = false);

/// Median of the values, rounding the mean of the two central values down.
std::uint32_t group_median_loc(std::vector<std::uint32_t> locs);

/// Size of the group each snippet belongs to, indexed [notebook][cell];
/// 0 for snippets outside every group (e.g. excluded empties).
using GroupSizeTable = std::vector<std::vector<std::uint32_t>>;

GroupSizeTable group_size_table(std::span<const NotebookRecord> notebooks, const CloneGroups& groups);

/// Fraction of the notebook's grouped snippets whose group has >= 2 members;
/// 0 when it has none. Row `sizes` comes from group_size_table.
double clone_frequency(std::span<const std::uint32_t> sizes);

/// (snippets in groups of size >= 2) / (snippets considered). Throws ValidationError when nothing was considered.
double corpus_clone_ratio(const CloneGroups& groups);

struct NotebookCloneClass {
    std::vector<std::uint32_t> members;  // notebook positions, ascending
};

/// Notebooks with equal code-cell counts whose i-th snippets share a digest
/// for every i. Classes (including singletons) ordered by size descending,
/// then by first member. Digests must cover every snippet, empties included.
std::vector<NotebookCloneClass> notebook_clone_classes(std::span<const NotebookRecord> notebooks,
                                                       std::span<const SnippetDigest> digests);

/// `digest,occurrences,median_loc`
std::string clone_groups_csv(const CloneGroups& groups);
/// `digest,notebook_id,cell_index`
std::string clone_members_csv(const CloneGroups& groups, std::span<const NotebookRecord> notebooks);

}  // namespace nbc
