// nbclones: clone analysis of a Jupyter notebook corpus.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "nbclones/error.hpp"
#include "nbclones/report.hpp"
#include "nbclones/simd.hpp"

namespace {

struct Options {
    std::string manifest;
    std::string out_dir = "nbclones-out";
    std::string config;
    double theta = 0.8;
    std::uint64_t min_tokens = 0;
    std::uint64_t max_tokens = 500'000'000;
    bool include_empty = false;
    std::string selfloop_mode = "incident";
    std::string normalize_by = "all";
    std::string nearmiss_language = "PYTHON";
    std::string digest = "md5";
    unsigned threads = 0;
    std::string checkpoint_dir;
    std::size_t top_n = 20;
    std::uint32_t min_loc = 4;
    std::string simd;
    // sanitize-pairs
    std::string input;
    std::string output;
};

int emit_error(const std::string& kind, const std::string& message, const std::string& file = {},
               std::size_t line = 0, int code = 1) {
    nlohmann::ordered_json rec;
    rec["error"] = kind;
    rec["message"] = message;
    if (!file.empty()) rec["file"] = file;
    if (line) rec["line"] = line;
    std::cerr << rec.dump() << '\n';
    return code;
}

nbc::PipelineConfig make_config(const Options& o, std::string& manifest) {
    nbc::PipelineConfig cfg;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw nbc::IoError("cannot open run manifest", o.config);
        std::stringstream ss;
        ss << in.rdbuf();
        const auto recorded = nbc::parse_run_manifest(ss.str(), cfg);
        if (manifest.empty()) manifest = recorded;
    } else {
        cfg.detector = {o.theta, o.min_tokens, o.max_tokens};
        cfg.include_empty = o.include_empty;
        const auto loop = nbc::parse_self_loop_mode(o.selfloop_mode);
        if (!loop) throw nbc::ValidationError("--selfloop-mode must be 'incident' or 'degree'");
        cfg.connections.self_loop = *loop;
        if (o.normalize_by != "all" && o.normalize_by != "nonempty") {
            throw nbc::ValidationError("--normalize-by must be 'all' or 'nonempty'");
        }
        cfg.connections.denominator =
            o.normalize_by == "all" ? nbc::NormalizeBy::AllSnippets : nbc::NormalizeBy::NonEmptySnippets;
        if (o.nearmiss_language == "ALL") {
            cfg.nearmiss_language.reset();
        } else if (auto g = nbc::parse_language_group(o.nearmiss_language)) {
            cfg.nearmiss_language = *g;
        } else {
            throw nbc::ValidationError("--nearmiss-language must be a language group name or ALL");
        }
        const auto d = nbc::parse_digest_algorithm(o.digest);
        if (!d) throw nbc::ValidationError("--digest must be 'md5' or 'sha256-128'");
        cfg.digest = *d;
        cfg.top_n = o.top_n;
        cfg.top_min_loc = o.min_loc;
    }
    cfg.threads = o.threads;
    if (!o.checkpoint_dir.empty()) cfg.checkpoint_dir = o.checkpoint_dir;
    return cfg;
}

int run_stage(const Options& o, nbc::Stage stage, const std::vector<std::string>& only = {}) {
    std::string manifest = o.manifest;
    const auto cfg = make_config(o, manifest);
    if (manifest.empty()) throw nbc::ValidationError("--manifest is required");
    auto bundle = nbc::run_pipeline(manifest, cfg, stage);
    if (!only.empty()) {
        nbc::ReportBundle filtered;
        for (const auto& name : only) filtered.files[name] = bundle.files.at(name);
        bundle = std::move(filtered);
    }
    nbc::write_bundle(bundle, o.out_dir);
    std::cout << "wrote " << bundle.files.size() << " files to " << o.out_dir << '\n';
    return 0;
}

int run_sanitize(const Options& o) {
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw nbc::IoError("cannot open pair file", o.input);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto res = nbc::sanitize_pair_file(ss.str());
    std::string body;
    for (const auto& l : res.lines) body += l + '\n';
    nbc::write_bundle({{{o.output.empty() ? std::string("sanitized_pairs.csv") : o.output, body}}},
                      o.output.empty() ? std::filesystem::path(o.out_dir) : std::filesystem::path("."));
    nlohmann::ordered_json rep;
    rep["input_lines"] = res.input_lines;
    rep["retained"] = res.lines.size();
    rep["bytes_removed"] = res.bytes_removed;
    rep["lines_with_removed_bytes"] = res.lines_with_removed_bytes;
    rep["duplicates_dropped"] = res.duplicates_dropped;
    rep["malformed_dropped"] = res.malformed_dropped;
    rep["malformed_lines"] = res.malformed_line_numbers;
    std::cout << rep.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clone analysis for Jupyter notebook corpora"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--manifest", o.manifest, "Corpus manifest (id<TAB>repo<TAB>fork<TAB>path)");
    app.add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
    app.add_option("--config", o.config, "Re-run with the configuration recorded in a run.json");
    app.add_option("--theta", o.theta, "Near-miss similarity threshold in (0,1]")->capture_default_str();
    app.add_option("--min-tokens", o.min_tokens, "Smallest token bag considered")->capture_default_str();
    app.add_option("--max-tokens", o.max_tokens, "Largest token bag considered")->capture_default_str();
    app.add_flag("--include-empty", o.include_empty, "Group empty snippets in the CMW analyses");
    app.add_option("--selfloop-mode", o.selfloop_mode, "incident | degree")->capture_default_str();
    app.add_option("--normalize-by", o.normalize_by, "all | nonempty snippets as connection denominator")
        ->capture_default_str();
    app.add_option("--nearmiss-language", o.nearmiss_language, "Language group for near-miss, or ALL")
        ->capture_default_str();
    app.add_option("--digest", o.digest, "md5 | sha256-128")->capture_default_str();
    app.add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--checkpoint-dir", o.checkpoint_dir, "Resumable near-miss detection state");
    app.add_option("--simd", o.simd, "Force kernel backend: scalar | avx2");

    auto* ingest = app.add_subcommand("ingest", "Parse notebooks; size statistics");
    auto* langid = app.add_subcommand("langid", "Language identification");
    auto* cmw = app.add_subcommand("cmw", "Copy-modulo-whitespace clones");
    auto* nearmiss = app.add_subcommand("nearmiss", "Near-miss clone pairs");
    auto* connections = app.add_subcommand("connections", "Connection profiles");
    auto* stats = app.add_subcommand("stats", "Statistical tests");
    auto* report = app.add_subcommand("report", "Full report bundle");
    auto* top = app.add_subcommand("top-clones", "Most frequent CMW clones");
    top->add_option("-n,--top", o.top_n, "Number of groups")->capture_default_str();
    top->add_option("--min-loc", o.min_loc, "Minimum median LOC for the filtered listing")->capture_default_str();
    auto* sanitize = app.add_subcommand("sanitize-pairs", "Clean an external pid,bid,pid,bid pair file");
    sanitize->add_option("--input", o.input, "Pair file")->required();
    sanitize->add_option("--output", o.output, "Cleaned file (default: <out-dir>/sanitized_pairs.csv)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (o.simd == "scalar") nbc::simd::force_backend(nbc::simd::Backend::Scalar);
        if (o.simd == "avx2") nbc::simd::force_backend(nbc::simd::Backend::Avx2);
        if (*ingest) return run_stage(o, nbc::Stage::Ingest);
        if (*langid) return run_stage(o, nbc::Stage::Langid,
                                      {"languages.csv", "notebook_languages.csv", "language_conflicts.csv"});
        if (*cmw) return run_stage(o, nbc::Stage::Cmw);
        if (*nearmiss) return run_stage(o, nbc::Stage::Nearmiss,
                                        {"nearmiss_pairs.csv", "nearmiss_notebooks.csv", "nearmiss_summary.csv",
                                         "nearmiss_line_counts.csv", "run.json"});
        if (*connections) return run_stage(o, nbc::Stage::Connections);
        if (*stats) return run_stage(o, nbc::Stage::Stats,
                                     {"tests.csv", "tests.txt", "language_frequency_tests.csv", "run.json"});
        if (*report) return run_stage(o, nbc::Stage::Stats);
        if (*top) {
            if (o.top_n == 0) throw nbc::ValidationError("--top must be positive");
            return run_stage(o, nbc::Stage::Cmw, {"top_clones.csv", "top_clones_min_loc.csv"});
        }
        if (*sanitize) return run_sanitize(o);
    } catch (const nbc::ValidationError& e) {
        return emit_error("validation", e.what(), e.file(), e.line(), 2);
    } catch (const nbc::IoError& e) {
        return emit_error("io", e.what(), e.path(), 0, 3);
    } catch (const std::exception& e) {
        return emit_error("internal", e.what());
    }
    return 1;
}
