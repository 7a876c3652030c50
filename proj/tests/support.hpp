#pragma once

// Test-only helpers: in-memory notebook construction, randomized corpora,
// and oracles that recompute results along independent paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nbclones/cmw.hpp"
#include "nbclones/connections.hpp"
#include "nbclones/ingest.hpp"
#include "nbclones/nearmiss.hpp"
#include "nbclones/text.hpp"

namespace nbc::testing {

inline NotebookRecord make_record(std::string id, std::string repo, const std::vector<std::string>& cells) {
    NotebookRecord r;
    r.notebook_id = std::move(id);
    r.repo_id = std::move(repo);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        Snippet s;
        s.cell_index = static_cast<std::uint32_t>(i);
        s.source = text::split_lines(cells[i]);
        s.lines = count_lines(s.source);
        r.code_cells.push_back(std::move(s));
        r.language_evidence.cell_languages.emplace_back();
    }
    r.byte_size = 0;
    return r;
}

/// Notebook JSON (nbformat 4) with the given code cells and kernel language.
inline std::string notebook_json(const std::vector<std::string>& cells, const std::string& language = "python") {
    std::string j = R"({"metadata":{"language_info":{"name":")" + language + R"("}},"nbformat":4,"cells":[)";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) j += ',';
        std::string esc;
        for (char c : cells[i]) {
            if (c == '"' || c == '\\') {
                esc += '\\';
                esc += c;
            } else if (c == '\n') {
                esc += "\\n";
            } else if (c == '\t') {
                esc += "\\t";
            } else {
                esc += c;
            }
        }
        j += R"({"cell_type":"code","metadata":{},"source":")" + esc + R"("})";
    }
    return j + "]}";
}

// ---------------------------------------------------------------- oracles

/// Whitespace removal by decoding code points and checking the White_Space list.
inline std::string oracle_normalize(const std::string& s) {
    static const std::set<std::uint32_t> ws = {0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x20, 0x85, 0xA0, 0x1680,
                                               0x2000, 0x2001, 0x2002, 0x2003, 0x2004, 0x2005, 0x2006, 0x2007,
                                               0x2008, 0x2009, 0x200A, 0x2028, 0x2029, 0x202F, 0x205F, 0x3000};
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        std::uint32_t cp = b;
        if (b >= 0xF0 && i + 3 < s.size()) {
            len = 4;
            cp = (b & 0x07u) << 18 | (s[i + 1] & 0x3Fu) << 12 | (s[i + 2] & 0x3Fu) << 6 | (s[i + 3] & 0x3Fu);
        } else if (b >= 0xE0 && i + 2 < s.size()) {
            len = 3;
            cp = (b & 0x0Fu) << 12 | (s[i + 1] & 0x3Fu) << 6 | (s[i + 2] & 0x3Fu);
        } else if (b >= 0xC0 && i + 1 < s.size()) {
            len = 2;
            cp = (b & 0x1Fu) << 6 | (s[i + 1] & 0x3Fu);
        }
        if (!ws.count(cp)) out.append(s, i, len);
        i += len;
    }
    return out;
}

/// Partition of non-empty snippets by exact normalized-text equality, as sets of members.
inline std::set<std::vector<SnippetRef>> oracle_string_groups(const std::vector<NotebookRecord>& nbs,
                                                              bool include_empty = false) {
    std::map<std::string, std::vector<SnippetRef>> by_text;
    for (std::uint32_t n = 0; n < nbs.size(); ++n) {
        for (std::uint32_t c = 0; c < nbs[n].code_cells.size(); ++c) {
            std::string norm;
            for (const auto& l : nbs[n].code_cells[c].source) norm += oracle_normalize(l);
            if (norm.empty() && !include_empty) continue;
            by_text[norm].push_back({n, c});
        }
    }
    std::set<std::vector<SnippetRef>> out;
    for (auto& [t, m] : by_text) out.insert(m);
    return out;
}

inline std::set<std::vector<SnippetRef>> group_sets(const CloneGroups& g) {
    std::set<std::vector<SnippetRef>> out;
    for (const auto& grp : g.groups) out.insert(grp.members);
    return out;
}

/// All-pairs evaluation with a map-based overlap and an inequality that
/// avoids the ceiling: overlap >= theta * larger.
inline std::vector<BagPair> brute_force_pairs(const std::vector<TokenBag>& bags, const DetectorConfig& cfg) {
    std::vector<BagPair> out;
    for (std::uint32_t i = 0; i < bags.size(); ++i) {
        const auto si = bags[i].size();
        if (si < 2 || si < cfg.min_tokens || si > cfg.max_tokens) continue;
        std::map<std::string, std::uint64_t> mi(bags[i].entries().begin(), bags[i].entries().end());
        for (std::uint32_t j = i + 1; j < bags.size(); ++j) {
            const auto sj = bags[j].size();
            if (sj < 2 || sj < cfg.min_tokens || sj > cfg.max_tokens) continue;
            std::uint64_t overlap = 0;
            for (const auto& [tok, c] : bags[j].entries()) {
                const auto it = mi.find(tok);
                if (it != mi.end()) overlap += std::min<std::uint64_t>(it->second, c);
            }
            if (static_cast<double>(overlap) >= cfg.theta * static_cast<double>(std::max(si, sj)) - 1e-9) {
                out.push_back({i, j});
            }
        }
    }
    return out;
}

/// Connection profiles from an explicit list of notebook-level edges.
struct OracleProfile {
    std::uint64_t total = 0, c0 = 0, sc = 0;
    std::map<std::string, std::uint64_t> per_repo;
};

inline std::vector<OracleProfile> oracle_profiles(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                                  const std::vector<NotebookRecord>& nbs, bool loop_counts_twice) {
    std::vector<OracleProfile> out(nbs.size());
    for (auto [a, b] : edges) {
        if (a == b) {
            out[a].total += loop_counts_twice ? 2 : 1;
            out[a].c0 += loop_counts_twice ? 2 : 1;
            continue;
        }
        for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
            ++out[x].total;
            if (nbs[x].repo_id == nbs[y].repo_id) {
                ++out[x].c0;
            } else {
                ++out[x].per_repo[nbs[y].repo_id];
                ++out[x].sc;
            }
        }
    }
    return out;
}

/// Every unordered member pair of every group, as notebook edges.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> enumerate_group_edges(const CloneGroups& g) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const auto& grp : g.groups) {
        for (std::size_t i = 0; i < grp.members.size(); ++i) {
            for (std::size_t j = i + 1; j < grp.members.size(); ++j) {
                out.emplace_back(grp.members[i].notebook, grp.members[j].notebook);
            }
        }
    }
    return out;
}

// ------------------------------------------------------ random corpora

/// Code built from word and operator pieces. Rendering varies whitespace
/// only where a separator or other whitespace keeps words apart, so CMW
/// variants of one snippet always have identical token bags.
class SnippetFactory {
public:
    explicit SnippetFactory(std::uint64_t seed, std::size_t vocab = 400) : rng_(seed) {
        for (std::size_t i = 0; i < vocab; ++i) words_.push_back("w" + std::to_string(i));
        // Zipf-like weights
        std::vector<double> w(vocab);
        for (std::size_t i = 0; i < vocab; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
        word_dist_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
    }

    using Line = std::vector<std::string>;  // pieces
    using Code = std::vector<Line>;

    Code random_code(std::size_t min_lines = 1, std::size_t max_lines = 6) {
        Code code;
        const auto n = std::uniform_int_distribution<std::size_t>(min_lines, max_lines)(rng_);
        for (std::size_t l = 0; l < n; ++l) {
            Line line;
            const auto k = std::uniform_int_distribution<std::size_t>(1, 8)(rng_);
            for (std::size_t p = 0; p < k; ++p) {
                if (p > 0 && chance(0.35)) line.push_back(op());
                line.push_back(word());
            }
            if (chance(0.15)) {  // trailing comment
                line.push_back("#");
                line.push_back(word());
                line.push_back(word());
            }
            code.push_back(std::move(line));
        }
        if (chance(0.1)) code.push_back({"#", word(), word()});  // comment-only line
        return code;
    }

    /// Small token edits: substitute, insert or drop words.
    Code mutate(Code code, std::size_t edits) {
        for (std::size_t e = 0; e < edits; ++e) {
            auto& line = code[std::uniform_int_distribution<std::size_t>(0, code.size() - 1)(rng_)];
            const auto pos = std::uniform_int_distribution<std::size_t>(0, line.size() - 1)(rng_);
            if (line[pos] == "#") continue;
            const int kind = std::uniform_int_distribution<int>(0, 2)(rng_);
            if (kind == 0 && is_word(line[pos])) {
                line[pos] = word();
            } else if (kind == 1) {
                line.insert(line.begin() + static_cast<std::ptrdiff_t>(pos), word());
            } else if (line.size() > 1 && is_word(line[pos])) {
                line.erase(line.begin() + static_cast<std::ptrdiff_t>(pos));
            }
        }
        return code;
    }

    std::string render(const Code& code) {
        std::string out;
        for (std::size_t l = 0; l < code.size(); ++l) {
            if (l) out += chance(0.1) ? "\n\n" : "\n";
            if (chance(0.3)) out += chance(0.5) ? "    " : "\t";
            const auto& line = code[l];
            for (std::size_t p = 0; p < line.size(); ++p) {
                if (p > 0) {
                    const bool both_words = is_word(line[p - 1]) && is_word(line[p]);
                    if (both_words) {
                        out += chance(0.2) ? "  " : " ";
                    } else if (chance(0.5)) {
                        out += " ";
                    }
                }
                out += line[p];
            }
            if (chance(0.1)) out += "  ";
        }
        if (chance(0.3)) out += "\n";
        return out;
    }

    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    static bool is_word(const std::string& s) { return !s.empty() && s[0] == 'w'; }
    std::string word() { return words_[word_dist_(rng_)]; }
    std::string op() {
        static const char* ops[] = {"=", "+", "-", "*", "/", ".", "(", ")", ",", "[", "]", ":", "%", "<", ">"};
        return ops[std::uniform_int_distribution<std::size_t>(0, std::size(ops) - 1)(rng_)];
    }

    std::mt19937_64 rng_;
    std::vector<std::string> words_;
    std::discrete_distribution<std::size_t> word_dist_;
};

/// A corpus of at most `max_snippets` snippets with planted CMW clones,
/// near-miss variants, empty and comment-only cells, spread over notebooks
/// and repositories. Notebook ids sort in corpus order.
inline std::vector<NotebookRecord> random_corpus(std::uint64_t seed, std::size_t max_snippets = 500) {
    SnippetFactory f(seed);
    std::vector<SnippetFactory::Code> originals;
    std::vector<std::string> snippets;
    while (snippets.size() < max_snippets) {
        const double roll = std::uniform_real_distribution<double>(0, 1)(f.rng());
        if (originals.empty() || roll < 0.4) {
            originals.push_back(f.random_code());
            snippets.push_back(f.render(originals.back()));
        } else {
            const auto& base = originals[std::uniform_int_distribution<std::size_t>(0, originals.size() - 1)(f.rng())];
            if (roll < 0.7) {
                snippets.push_back(f.render(base));  // CMW clone
            } else if (roll < 0.9) {
                snippets.push_back(f.render(f.mutate(base, std::uniform_int_distribution<std::size_t>(1, 3)(f.rng()))));
            } else if (roll < 0.95) {
                snippets.push_back(f.chance(0.5) ? "" : "  \n\t ");
            } else {
                snippets.push_back("# only a comment\n");
            }
        }
    }
    std::shuffle(snippets.begin(), snippets.end(), f.rng());
    std::vector<NotebookRecord> nbs;
    std::size_t i = 0, k = 0;
    while (i < snippets.size()) {
        const auto cells = std::min(snippets.size() - i, std::uniform_int_distribution<std::size_t>(1, 12)(f.rng()));
        char id[32];
        std::snprintf(id, sizeof id, "nb%05zu", k);
        const auto repo = "repo" + std::to_string(std::uniform_int_distribution<int>(0, 9)(f.rng()));
        nbs.push_back(make_record(id, repo, {snippets.begin() + static_cast<std::ptrdiff_t>(i),
                                             snippets.begin() + static_cast<std::ptrdiff_t>(i + cells)}));
        i += cells;
        ++k;
    }
    return nbs;
}

/// Token bags for every snippet, in corpus order.
inline std::vector<TokenBag> corpus_bags(const std::vector<NotebookRecord>& nbs, std::vector<SnippetRef>* refs = nullptr) {
    std::vector<TokenBag> bags;
    for (std::uint32_t n = 0; n < nbs.size(); ++n) {
        for (std::uint32_t c = 0; c < nbs[n].code_cells.size(); ++c) {
            bags.push_back(tokenize(strip_comments(nbs[n].code_cells[c].text()).text));
            if (refs) refs->push_back({n, c});
        }
    }
    return bags;
}

}  // namespace nbc::testing
