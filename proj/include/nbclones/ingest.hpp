#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbclones/langid.hpp"
#include "nbclones/stats.hpp"
#include "nbclones/tokenizer.hpp"

namespace nbc {

struct ManifestEntry {
    std::string notebook_id;
    std::string repo_id;
    bool is_fork = false;
    std::filesystem::path file_path;
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;
    /// Directory that relative file paths are resolved against.
    std::filesystem::path base_dir;

    std::size_t fork_count() const noexcept;
};

/// Line format: notebook_id TAB repo_id TAB is_fork(0|1) TAB file_path.
/// Empty lines are skipped. Throws IoError / ValidationError.
CorpusManifest load_manifest(const std::filesystem::path& path);
CorpusManifest parse_manifest(std::istream& in, const std::string& source_name = "<manifest>");

enum class ParseStatus { Ok, NotJson, IllFormed, LfsPointer, CellsUnreadable, CodeUnreadable, MissingFile };

const char* to_string(ParseStatus s) noexcept;

/// Statuses whose notebooks take part in the analysis (possibly with no code).
constexpr bool is_analysable(ParseStatus s) noexcept {
    return s == ParseStatus::Ok || s == ParseStatus::CellsUnreadable || s == ParseStatus::CodeUnreadable;
}

struct LineCounts {
    std::uint32_t loc_total = 0;
    std::uint32_t loc_nonblank = 0;
    std::uint32_t sloc = 0;

    bool operator==(const LineCounts&) const = default;
};

/// Blank lines are empty or whitespace-only; sloc also drops lines left
/// blank after comment stripping.
LineCounts count_lines(const std::vector<std::string>& source, const TokenizerConfig& cfg = {});

struct Snippet {
    std::uint32_t cell_index = 0;  // position among the notebook's code cells
    std::vector<std::string> source;
    LineCounts lines;

    std::string text() const;
};

struct NotebookRecord {
    std::string notebook_id;
    std::string repo_id;
    std::uint64_t byte_size = 0;
    ParseStatus parse_status = ParseStatus::Ok;
    std::vector<Snippet> code_cells;
    LanguageEvidence language_evidence;
};

NotebookRecord parse_notebook(std::string_view bytes, const ManifestEntry& entry, const TokenizerConfig& cfg = {});

struct SizeStats {
    SummaryRow bytes;
    SummaryRow code_cells;
    SummaryRow loc_nonblank;
    SummaryRow loc_total;
};

/// Per-notebook totals summarized over the records. Throws ValidationError when empty.
SizeStats summarize_corpus(std::span<const NotebookRecord> records);

/// Fork-free, parsed corpus. `notebooks` holds analysable records sorted by
/// notebook_id; everything else lands in `rejected` (same order).
struct Corpus {
    std::vector<NotebookRecord> notebooks;
    std::vector<NotebookRecord> rejected;
    std::size_t forks_excluded = 0;
    /// Manifest entries whose file bytes equal an earlier entry's bytes.
    std::size_t byte_identical_files = 0;

    std::size_t snippet_count() const noexcept;
};

Corpus load_corpus(const CorpusManifest& manifest, unsigned threads = 0, const TokenizerConfig& cfg = {});

}  // namespace nbc
