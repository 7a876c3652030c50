#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "nbclones/report.hpp"

namespace nbc::testing {

inline std::filesystem::path golden_dir() { return std::filesystem::path(NBC_FIXTURE_DIR) / "golden"; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Expected bundle files, keyed by relative path.
inline std::map<std::string, std::string> golden_files() {
    std::map<std::string, std::string> out;
    const auto root = golden_dir() / "expected";
    for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out[std::filesystem::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
    return out;
}

inline PipelineResult analyse_golden(unsigned threads = 1, Stage through = Stage::Stats) {
    PipelineConfig cfg;
    cfg.threads = threads;
    return analyse(load_manifest(golden_dir() / "manifest.tsv"), cfg, through);
}

inline ReportBundle golden_bundle(unsigned threads) {
    PipelineConfig cfg;
    cfg.threads = threads;
    return render_bundle(analyse(load_manifest(golden_dir() / "manifest.tsv"), cfg), cfg, "manifest.tsv");
}

inline std::size_t position_of(const PipelineResult& r, const std::string& id) {
    for (std::size_t i = 0; i < r.corpus.notebooks.size(); ++i) {
        if (r.corpus.notebooks[i].notebook_id == id) return i;
    }
    throw std::runtime_error("no notebook " + id);
}

}  // namespace nbc::testing
