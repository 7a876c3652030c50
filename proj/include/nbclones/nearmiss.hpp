#pragma once

// Near-miss clone pairs over token bags. Two bags pair when their multiset
// intersection covers at least ceil(theta * larger size) tokens; bags with
// fewer than two tokens never pair. The indexed detector uses prefix
// filtering over a global rare-first token order and is exact: it returns
// the same set as evaluating every pair.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nbclones/corpus_ref.hpp"
#include "nbclones/ingest.hpp"
#include "nbclones/tokenizer.hpp"

namespace nbc {

struct DetectorConfig {
    double theta = 0.8;
    std::uint64_t min_tokens = 0;
    std::uint64_t max_tokens = 500'000'000;

    void validate() const;
    bool eligible(std::uint64_t bag_size) const noexcept {
        return bag_size >= 2 && bag_size >= min_tokens && bag_size <= max_tokens;
    }
};

/// ceil(theta * larger_size), ignoring floating-point residue below 1e-9.
std::uint64_t required_overlap(double theta, std::uint64_t larger_size) noexcept;

/// Sum over shared tokens of the smaller count.
std::uint64_t multiset_overlap(const TokenBag& a, const TokenBag& b);

bool is_clone_pair(const TokenBag& a, const TokenBag& b, const DetectorConfig& cfg);

/// Unordered pair of bag positions, stored with left < right.
struct BagPair {
    std::uint32_t left = 0;
    std::uint32_t right = 0;

    auto operator<=>(const BagPair&) const = default;
};

class NearMissIndex {
public:
    /// Builds the token order, encodes eligible bags, and seals the prefix
    /// postings. `bags` is not retained.
    NearMissIndex(std::span<const TokenBag> bags, const DetectorConfig& cfg);

    std::size_t bag_count() const noexcept { return bag_count_; }
    std::size_t eligible_count() const noexcept { return order_.size(); }
    const DetectorConfig& config() const noexcept { return cfg_; }
    /// Stable identity of (bags, config); guards checkpoint reuse.
    const std::string& fingerprint() const noexcept { return fingerprint_; }

    /// Number of query partitions of the given size over the eligible bags.
    std::size_t partition_count(std::size_t partition_size) const noexcept;
    /// Pairs discovered by the queries of one partition, sorted.
    std::vector<BagPair> query_partition(std::size_t partition, std::size_t partition_size) const;

    /// All pairs, sorted ascending; queries run on `threads` workers.
    std::vector<BagPair> detect(unsigned threads = 0, std::size_t partition_size = 4096) const;

private:
    struct Encoded {
        std::vector<std::uint32_t> ids;     // ascending = rare first
        std::vector<std::uint32_t> counts;
        std::uint64_t size = 0;
        std::uint32_t prefix_distinct = 0;  // leading entries indexed
    };

    DetectorConfig cfg_;
    std::size_t bag_count_ = 0;
    std::vector<std::uint32_t> order_;  // processing position -> bag position (by size, then position)
    std::vector<Encoded> encoded_;      // by processing position
    std::vector<std::vector<std::uint32_t>> postings_;  // token id -> processing positions, ascending
    std::string fingerprint_;
};

std::vector<BagPair> detect_clone_pairs(std::span<const TokenBag> bags, const DetectorConfig& cfg, unsigned threads = 0);

struct CheckpointOptions {
    std::filesystem::path dir;
    std::size_t partition_size = 4096;
    /// Stop after running this many new partitions (simulates an interruption).
    std::optional<std::size_t> stop_after;
};

struct ResumableResult {
    std::vector<BagPair> pairs;  // deduplicated, sorted
    std::size_t partitions_total = 0;
    std::size_t partitions_resumed = 0;  // loaded from the checkpoint
    std::size_t partitions_run = 0;
    bool complete = false;
};

/// Runs the detector partition by partition, persisting each finished
/// partition (write-then-rename) and recording it in `dir/checkpoint`.
/// A rerun skips recorded partitions; the merged output never repeats a pair.
ResumableResult detect_clone_pairs_resumable(std::span<const TokenBag> bags, const DetectorConfig& cfg,
                                             const CheckpointOptions& opts, unsigned threads = 0);

struct ClonePair {
    SnippetRef left;
    SnippetRef right;

    auto operator<=>(const ClonePair&) const = default;
};

/// `notebook_id,cell_index,notebook_id,cell_index`, one row per pair in the given order.
std::string clone_pairs_csv(std::span<const ClonePair> pairs, std::span<const NotebookRecord> notebooks);

struct NearMissStatus {
    std::vector<std::vector<bool>> cloned;  // [notebook][cell]
    /// Cloned non-empty snippets / non-empty snippets (sloc >= 1); 0 when none.
    std::vector<double> frequency;
    std::vector<std::uint32_t> nonempty;  // per notebook
};

NearMissStatus nearmiss_clone_status(std::span<const ClonePair> pairs, std::span<const NotebookRecord> notebooks);

/// Cleaning of an external detector's `pid1,bid1,pid2,bid2` pair file.
struct SanitizedPairs {
    std::vector<std::string> lines;  // retained, in input order
    std::size_t input_lines = 0;
    std::size_t bytes_removed = 0;
    std::size_t lines_with_removed_bytes = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t malformed_dropped = 0;
    std::vector<std::size_t> malformed_line_numbers;  // 1-based, input numbering
};

SanitizedPairs sanitize_pair_file(std::string_view content);

struct ExternalPair {
    std::uint64_t pid1, bid1, pid2, bid2;
    auto operator<=>(const ExternalPair&) const = default;
};

/// Parses sanitized lines; each must be four comma-separated integers.
std::vector<ExternalPair> parse_external_pairs(std::span<const std::string> lines);

}  // namespace nbc
