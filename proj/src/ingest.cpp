#include "nbclones/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "nbclones/digest.hpp"
#include "nbclones/error.hpp"
#include "nbclones/parallel.hpp"
#include "nbclones/text.hpp"

namespace nbc {

using nlohmann::json;

std::size_t CorpusManifest::fork_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.is_fork; }));
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest", path.string());
    auto m = parse_manifest(in, path.string());
    m.base_dir = path.parent_path();
    return m;
}

CorpusManifest parse_manifest(std::istream& in, const std::string& source_name) {
    CorpusManifest m;
    std::map<std::string, std::size_t> seen;  // notebook_id -> line
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() != 4) {
            throw ValidationError("manifest line has " + std::to_string(fields.size()) + " fields, expected 4",
                                  source_name, lineno);
        }
        if (fields[0].empty() || fields[1].empty() || fields[3].empty()) {
            throw ValidationError("manifest line has an empty field", source_name, lineno);
        }
        if (fields[2] != "0" && fields[2] != "1") {
            throw ValidationError("is_fork must be 0 or 1, got '" + fields[2] + "'", source_name, lineno);
        }
        if (auto [it, inserted] = seen.emplace(fields[0], lineno); !inserted) {
            throw ValidationError("duplicate notebook_id '" + fields[0] + "' (first seen on line " +
                                      std::to_string(it->second) + ")",
                                  source_name, lineno);
        }
        m.entries.push_back({fields[0], fields[1], fields[2] == "1", std::filesystem::path(fields[3])});
    }
    if (in.bad()) throw IoError("error reading manifest", source_name);
    return m;
}

const char* to_string(ParseStatus s) noexcept {
    switch (s) {
        case ParseStatus::Ok: return "OK";
        case ParseStatus::NotJson: return "NOT_JSON";
        case ParseStatus::IllFormed: return "ILL_FORMED";
        case ParseStatus::LfsPointer: return "LFS_POINTER";
        case ParseStatus::CellsUnreadable: return "CELLS_UNREADABLE";
        case ParseStatus::CodeUnreadable: return "CODE_UNREADABLE";
        case ParseStatus::MissingFile: return "MISSING_FILE";
    }
    return "UNKNOWN";
}

LineCounts count_lines(const std::vector<std::string>& source, const TokenizerConfig& cfg) {
    LineCounts c;
    c.loc_total = static_cast<std::uint32_t>(source.size());
    for (const auto& l : source) {
        if (!text::is_blank(l)) ++c.loc_nonblank;
    }
    if (c.loc_nonblank == 0) return c;
    const auto stripped = strip_comments(text::join_lines(source), cfg);
    for (const auto& l : text::split_lines(stripped.text)) {
        if (!text::is_blank(l)) ++c.sloc;
    }
    return c;
}

std::string Snippet::text() const { return text::join_lines(source); }

namespace {

constexpr std::string_view kLfsSignature = "version https://git-lfs.github.com/spec/";

std::optional<std::string> string_at(const json& obj, std::initializer_list<const char*> path) {
    const json* node = &obj;
    for (const char* key : path) {
        if (!node->is_object()) return std::nullopt;
        const auto it = node->find(key);
        if (it == node->end()) return std::nullopt;
        node = &*it;
    }
    if (!node->is_string()) return std::nullopt;
    return node->get<std::string>();
}

/// Cell source as a single string or a list of strings; nullopt otherwise.
std::optional<std::string> cell_source(const json& cell) {
    auto it = cell.find("source");
    if (it == cell.end()) it = cell.find("input");  // nbformat 3
    if (it == cell.end()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (!it->is_array()) return std::nullopt;
    std::string joined;
    for (const auto& part : *it) {
        if (!part.is_string()) return std::nullopt;
        joined += part.get_ref<const std::string&>();
    }
    return joined;
}

/// Collects cell objects from nbformat 4 `cells` or nbformat 3 `worksheets[].cells`.
/// Returns false when the container exists but cannot be read.
bool collect_cells(const json& nb, std::vector<const json*>& cells) {
    const auto append_array = [&](const json& arr) {
        if (!arr.is_array()) return false;
        for (const auto& c : arr) {
            if (!c.is_object()) return false;
            cells.push_back(&c);
        }
        return true;
    };
    if (const auto it = nb.find("cells"); it != nb.end()) return append_array(*it);
    const auto& ws = nb.at("worksheets");
    if (!ws.is_array()) return false;
    for (const auto& w : ws) {
        if (!w.is_object()) return false;
        const auto c = w.find("cells");
        if (c == w.end()) continue;
        if (!append_array(*c)) return false;
    }
    return true;
}

}  // namespace

NotebookRecord parse_notebook(std::string_view bytes, const ManifestEntry& entry, const TokenizerConfig& cfg) {
    NotebookRecord rec;
    rec.notebook_id = entry.notebook_id;
    rec.repo_id = entry.repo_id;
    rec.byte_size = bytes.size();

    if (bytes.starts_with(kLfsSignature)) {
        rec.parse_status = ParseStatus::LfsPointer;
        return rec;
    }
    const json nb = json::parse(bytes.begin(), bytes.end(), nullptr, /*allow_exceptions=*/false);
    if (nb.is_discarded()) {
        rec.parse_status = ParseStatus::NotJson;
        return rec;
    }
    if (!nb.is_object() || (!nb.contains("cells") && !nb.contains("worksheets"))) {
        rec.parse_status = ParseStatus::IllFormed;
        return rec;
    }

    auto& ev = rec.language_evidence;
    ev.language_info_name = string_at(nb, {"metadata", "language_info", "name"});
    ev.metadata_language = string_at(nb, {"metadata", "language"});
    ev.kernelspec_language = string_at(nb, {"metadata", "kernelspec", "language"});

    std::vector<const json*> cells;
    if (!collect_cells(nb, cells)) {
        rec.parse_status = ParseStatus::CellsUnreadable;
        return rec;
    }

    bool code_unreadable = false;
    std::vector<std::string> sources;
    for (const json* cell : cells) {
        const auto type = cell->find("cell_type");
        if (type == cell->end() || !type->is_string() || type->get_ref<const std::string&>() != "code") continue;
        auto src = cell_source(*cell);
        if (!src) code_unreadable = true;
        sources.push_back(src.value_or(std::string{}));
        ev.cell_languages.push_back(string_at(*cell, {"language"}));
    }

    rec.parse_status = code_unreadable ? ParseStatus::CodeUnreadable : ParseStatus::Ok;
    rec.code_cells.resize(sources.size());
    for (std::size_t i = 0; i < sources.size(); ++i) {
        auto& s = rec.code_cells[i];
        s.cell_index = static_cast<std::uint32_t>(i);
        if (!code_unreadable) {
            s.source = text::split_lines(sources[i]);
            s.lines = count_lines(s.source, cfg);
        }
    }
    return rec;
}

SizeStats summarize_corpus(std::span<const NotebookRecord> records) {
    if (records.empty()) throw ValidationError("cannot summarize an empty corpus");
    std::vector<double> bytes, cells, nonblank, total;
    for (const auto& r : records) {
        bytes.push_back(static_cast<double>(r.byte_size));
        cells.push_back(static_cast<double>(r.code_cells.size()));
        double nb = 0, tot = 0;
        for (const auto& s : r.code_cells) {
            nb += s.lines.loc_nonblank;
            tot += s.lines.loc_total;
        }
        nonblank.push_back(nb);
        total.push_back(tot);
    }
    return {percentiles(bytes), percentiles(cells), percentiles(nonblank), percentiles(total)};
}

std::size_t Corpus::snippet_count() const noexcept {
    std::size_t n = 0;
    for (const auto& r : notebooks) n += r.code_cells.size();
    return n;
}

Corpus load_corpus(const CorpusManifest& manifest, unsigned threads, const TokenizerConfig& cfg) {
    Corpus corpus;
    std::vector<const ManifestEntry*> live;
    for (const auto& e : manifest.entries) {
        if (e.is_fork) {
            ++corpus.forks_excluded;
        } else {
            live.push_back(&e);
        }
    }
    std::sort(live.begin(), live.end(),
              [](const ManifestEntry* a, const ManifestEntry* b) { return a->notebook_id < b->notebook_id; });

    std::vector<NotebookRecord> records(live.size());
    std::vector<std::optional<Digest128>> content(live.size());
    parallel_for(live.size(), threads, [&](std::size_t i) {
        const auto& e = *live[i];
        const auto path = e.file_path.is_absolute() ? e.file_path : manifest.base_dir / e.file_path;
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            records[i].notebook_id = e.notebook_id;
            records[i].repo_id = e.repo_id;
            records[i].parse_status = ParseStatus::MissingFile;
            return;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string bytes = std::move(buf).str();
        content[i] = digest128(bytes);
        records[i] = parse_notebook(bytes, e, cfg);
    });

    std::unordered_set<Digest128, Digest128Hash> seen;
    for (const auto& d : content) {
        if (d && !seen.insert(*d).second) ++corpus.byte_identical_files;
    }
    for (auto& r : records) {
        (is_analysable(r.parse_status) ? corpus.notebooks : corpus.rejected).push_back(std::move(r));
    }
    return corpus;
}

}  // namespace nbc
