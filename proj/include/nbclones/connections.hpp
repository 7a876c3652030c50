#pragma once

// Notebook connection multigraph: one edge per snippet-level clone pair
// between the notebooks holding the two snippets (self-loops and parallel
// edges allowed), summarized per notebook and split by repository.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nbclones/cmw.hpp"
#include "nbclones/ingest.hpp"
#include "nbclones/nearmiss.hpp"
#include "nbclones/stats.hpp"

namespace nbc {

enum class SelfLoopMode {
    Incident,  // a self-loop is one edge attached to the node
    Degree,    // a self-loop counts twice, as in graph degree
};

enum class NormalizeBy {
    AllSnippets,       // every code cell, empty ones included
    NonEmptySnippets,  // only snippets counted as non-empty by the analysis
};

const char* to_string(SelfLoopMode m) noexcept;
std::optional<SelfLoopMode> parse_self_loop_mode(std::string_view s) noexcept;

struct ConnectionOptions {
    SelfLoopMode self_loop = SelfLoopMode::Incident;
    NormalizeBy denominator = NormalizeBy::AllSnippets;
};

/// Weighted undirected multigraph between notebook positions, stored as
/// (min, max) -> edge multiplicity. Accumulators merge commutatively.
class EdgeCounter {
public:
    void add(std::uint32_t a, std::uint32_t b, std::uint64_t multiplicity = 1);
    void merge(const EdgeCounter& other);
    const std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>& edges() const noexcept { return edges_; }
    std::uint64_t self_loop_edges() const noexcept;
    std::uint64_t other_edges() const noexcept;

private:
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> edges_;
};

/// One edge per pair. Throws ValidationError for references outside `notebooks`.
EdgeCounter edges_from_pairs(std::span<const ClonePair> pairs, std::span<const NotebookRecord> notebooks);

/// Edges for all unordered member pairs of every group, k(k-1)/2 per group,
/// aggregated per notebook pair without enumerating members pairwise.
EdgeCounter edges_from_groups(const CloneGroups& groups, std::size_t notebook_count);

struct ConnectionProfile {
    std::string notebook_id;
    std::uint64_t total = 0;
    double normalized = 0.0;
    std::uint64_t c0 = 0;                        // intra-repository edges, self-loops included
    std::map<std::string, std::uint64_t> per_repo;  // external repositories with >= 1 edge
    double ic = 0.0;                             // mean of per_repo values, 0 if none
    std::uint64_t sc = 0;                        // sum of per_repo values
};

/// One profile per notebook, in corpus order. `nonempty_snippets` supplies
/// denominators for NormalizeBy::NonEmptySnippets and is ignored otherwise.
std::vector<ConnectionProfile> build_connection_profiles(const EdgeCounter& edges,
                                                         std::span<const NotebookRecord> notebooks,
                                                         const ConnectionOptions& opts = {},
                                                         std::span<const std::uint32_t> nonempty_snippets = {});

struct PairedConnectionTests {
    TestResult c0_vs_ic;
    TestResult c0_vs_sc;
};

PairedConnectionTests paired_connection_tests(std::span<const ConnectionProfile> profiles);

/// `notebook_id,total,normalized,c0,ic,sc`
std::string connection_profiles_csv(std::span<const ConnectionProfile> profiles);

}  // namespace nbc
