#pragma once

// End-to-end pipeline: ingest -> langid -> CMW -> near-miss (language
// filtered) -> connections -> statistics, rendered as a bundle of CSV files.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nbclones/cmw.hpp"
#include "nbclones/connections.hpp"
#include "nbclones/ingest.hpp"
#include "nbclones/langid.hpp"
#include "nbclones/nearmiss.hpp"
#include "nbclones/stats.hpp"

namespace nbc {

struct PipelineConfig {
    DetectorConfig detector;
    TokenizerConfig tokenizer;
    /// Group empty snippets in the CMW analyses (clone ratio, frequency, connections).
    bool include_empty = false;
    ConnectionOptions connections;
    /// Language scope of the near-miss analysis; nullopt analyses every notebook.
    std::optional<LanguageGroup> nearmiss_language = LanguageGroup::Python;
    DigestAlgorithm digest = DigestAlgorithm::Md5;
    std::size_t top_n = 20;
    std::uint32_t top_min_loc = 4;
    /// Worker threads (0 = hardware). Results do not depend on it.
    unsigned threads = 0;
    /// When set, near-miss detection checkpoints here and resumes from it.
    std::optional<std::filesystem::path> checkpoint_dir;
};

/// Last stage a run needs; later stages are skipped.
enum class Stage { Ingest, Langid, Cmw, Nearmiss, Connections, Stats };

struct TopClone {
    std::size_t rank = 0;
    Digest128 digest;
    std::size_t occurrences = 0;
    std::uint32_t median_loc = 0;
    SnippetRef representative;
    std::string source;
};

/// Groups of size >= 2 with median_loc >= min_loc, ordered by occurrences
/// descending then digest; at most n. Throws ValidationError when n == 0.
std::vector<TopClone> top_clones(const CloneGroups& groups, std::span<const NotebookRecord> notebooks, std::size_t n,
                                 std::uint32_t min_loc = 0);

std::string top_clones_csv(std::span<const TopClone> rows, std::span<const NotebookRecord> notebooks);

struct NearMissAnalysis {
    std::vector<std::uint32_t> notebooks;  // positions in scope, ascending
    std::vector<SnippetRef> snippets;      // non-empty snippets handed to the detector
    std::vector<ClonePair> pairs;          // sorted
    NearMissStatus status;
    std::vector<ConnectionProfile> profiles;  // for `notebooks`, same order
    std::size_t intra_notebook_pairs = 0;
};

struct PipelineResult {
    Stage through = Stage::Stats;
    Corpus corpus;
    std::vector<LanguageGroup> languages;      // per notebook
    std::vector<LanguageConflict> conflicts;   // per notebook
    std::vector<SnippetDigest> digests;
    CloneGroups groups;                        // per config.include_empty
    std::vector<NotebookCloneClass> notebook_classes;
    std::vector<double> cmw_frequency;         // per notebook
    std::vector<std::uint32_t> cmw_nonempty;   // per notebook
    std::vector<ConnectionProfile> cmw_profiles;
    NearMissAnalysis nearmiss;
    std::vector<TestResult> tests;
    std::optional<PairwiseTable> language_pairwise;
};

/// Throws ValidationError when no notebook survives fork exclusion and parsing.
PipelineResult analyse(const CorpusManifest& manifest, const PipelineConfig& config, Stage through = Stage::Stats);

/// Relative path -> file content. Every file is a pure function of the
/// corpus and configuration.
struct ReportBundle {
    std::map<std::string, std::string> files;
};

ReportBundle render_bundle(const PipelineResult& result, const PipelineConfig& config,
                           const std::string& manifest_path);

ReportBundle run_pipeline(const std::filesystem::path& manifest_path, const PipelineConfig& config,
                          Stage through = Stage::Stats);

/// Each file is written to a temporary name and renamed into place.
void write_bundle(const ReportBundle& bundle, const std::filesystem::path& out_dir);

/// JSON record of everything needed to repeat a run.
std::string run_manifest_json(const std::string& manifest_path, const PipelineConfig& config);
/// Inverse of run_manifest_json; returns the manifest path.
std::string parse_run_manifest(const std::string& json_text, PipelineConfig& config);

}  // namespace nbc
