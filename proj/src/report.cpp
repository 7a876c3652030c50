#include "nbclones/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "nbclones/csv.hpp"
#include "nbclones/error.hpp"
#include "nbclones/parallel.hpp"

namespace nbc {

using nlohmann::ordered_json;

std::vector<TopClone> top_clones(const CloneGroups& groups, std::span<const NotebookRecord> notebooks, std::size_t n,
                                 std::uint32_t min_loc) {
    if (n == 0) throw ValidationError("top_clones: n must be positive");
    std::vector<TopClone> out;
    // groups are already ordered by (occurrences desc, digest asc)
    for (const auto& g : groups.groups) {
        if (out.size() == n) break;
        if (!g.is_clone_group() || g.median_loc < min_loc) continue;
        const auto rep = g.members.front();
        out.push_back({out.size() + 1, g.digest, g.members.size(), g.median_loc, rep,
                       notebooks[rep.notebook].code_cells[rep.cell].text()});
    }
    return out;
}

std::string top_clones_csv(std::span<const TopClone> rows, std::span<const NotebookRecord> notebooks) {
    std::string out = "rank,digest,occurrences,median_loc,notebook_id,cell_index,source\n";
    for (const auto& r : rows) {
        out += std::to_string(r.rank) + ',' + r.digest.hex() + ',' + std::to_string(r.occurrences) + ',' +
               std::to_string(r.median_loc) + ',' + csv_field(notebooks[r.representative.notebook].notebook_id) + ',' +
               std::to_string(r.representative.cell) + ',' + csv_field(r.source) + '\n';
    }
    return out;
}

namespace {

void run_nearmiss(PipelineResult& res, const PipelineConfig& cfg) {
    auto& nm = res.nearmiss;
    const auto& notebooks = res.corpus.notebooks;
    for (std::uint32_t n = 0; n < notebooks.size(); ++n) {
        if (!cfg.nearmiss_language || res.languages[n] == *cfg.nearmiss_language) nm.notebooks.push_back(n);
    }
    for (auto n : nm.notebooks) {
        for (std::uint32_t c = 0; c < notebooks[n].code_cells.size(); ++c) {
            if (notebooks[n].code_cells[c].lines.sloc > 0) nm.snippets.push_back({n, c});
        }
    }
    std::vector<TokenBag> bags(nm.snippets.size());
    parallel_for(bags.size(), cfg.threads, [&](std::size_t i) {
        const auto& s = notebooks[nm.snippets[i].notebook].code_cells[nm.snippets[i].cell];
        bags[i] = tokenize(strip_comments(s.text(), cfg.tokenizer).text, cfg.tokenizer);
    });
    std::vector<BagPair> bag_pairs;
    if (cfg.checkpoint_dir) {
        const auto r = detect_clone_pairs_resumable(bags, cfg.detector, {*cfg.checkpoint_dir, 4096, std::nullopt},
                                                    cfg.threads);
        bag_pairs = r.pairs;
    } else {
        bag_pairs = detect_clone_pairs(bags, cfg.detector, cfg.threads);
    }
    nm.pairs.reserve(bag_pairs.size());
    for (const auto& p : bag_pairs) {
        const auto a = nm.snippets[p.left], b = nm.snippets[p.right];
        nm.pairs.push_back({std::min(a, b), std::max(a, b)});
        if (a.notebook == b.notebook) ++nm.intra_notebook_pairs;
    }
    std::sort(nm.pairs.begin(), nm.pairs.end());
    nm.status = nearmiss_clone_status(nm.pairs, notebooks);
}

TestResult guarded(const char* label, auto&& fn) {
    try {
        auto r = fn();
        r.test = std::string(label);
        return r;
    } catch (const ValidationError& e) {
        TestResult r;
        r.test = label;
        r.notes = std::string("skipped: ") + e.what();
        return r;
    }
}

void run_stats(PipelineResult& res) {
    const auto& notebooks = res.corpus.notebooks;
    // CMW: size vs clone frequency over notebooks with at least one considered snippet.
    {
        std::vector<double> cells, freq;
        for (std::size_t n = 0; n < notebooks.size(); ++n) {
            if (res.cmw_nonempty[n] == 0) continue;
            cells.push_back(static_cast<double>(notebooks[n].code_cells.size()));
            freq.push_back(res.cmw_frequency[n]);
        }
        res.tests.push_back(guarded("cmw:spearman[code_cells~clone_frequency]", [&] { return spearman(cells, freq); }));
    }
    {
        std::vector<std::vector<double>> groups;
        std::vector<std::string> labels;
        for (auto g : kAllLanguageGroups) {
            if (g == LanguageGroup::Undefined) continue;
            std::vector<double> v;
            for (std::size_t n = 0; n < notebooks.size(); ++n) {
                if (res.languages[n] == g && res.cmw_nonempty[n] > 0) v.push_back(res.cmw_frequency[n]);
            }
            if (v.empty()) continue;
            groups.push_back(std::move(v));
            labels.emplace_back(to_string(g));
        }
        res.tests.push_back(guarded("cmw:kruskal_wallis[clone_frequency~language]", [&] { return kruskal_wallis(groups); }));
        if (groups.size() >= 2) res.language_pairwise = pairwise_wilcoxon(groups, labels);
    }
    {
        const auto t = paired_connection_tests(res.cmw_profiles);
        auto a = t.c0_vs_ic, b = t.c0_vs_sc;
        a.test = "cmw:wilcoxon_signed_rank[c0~ic]";
        b.test = "cmw:wilcoxon_signed_rank[c0~sc]";
        res.tests.push_back(a);
        res.tests.push_back(b);
    }
    const auto& nm = res.nearmiss;
    {
        std::vector<double> cells, freq;
        for (auto n : nm.notebooks) {
            if (nm.status.nonempty[n] == 0) continue;
            cells.push_back(static_cast<double>(notebooks[n].code_cells.size()));
            freq.push_back(nm.status.frequency[n]);
        }
        res.tests.push_back(guarded("nearmiss:spearman[code_cells~clone_frequency]", [&] { return spearman(cells, freq); }));
    }
    {
        const auto t = paired_connection_tests(nm.profiles);
        auto a = t.c0_vs_ic, b = t.c0_vs_sc;
        a.test = "nearmiss:wilcoxon_signed_rank[c0~ic]";
        b.test = "nearmiss:wilcoxon_signed_rank[c0~sc]";
        res.tests.push_back(a);
        res.tests.push_back(b);
    }
}

}  // namespace

PipelineResult analyse(const CorpusManifest& manifest, const PipelineConfig& cfg, Stage through) {
    cfg.detector.validate();
    cfg.tokenizer.validate();
    PipelineResult res;
    res.through = through;
    res.corpus = load_corpus(manifest, cfg.threads, cfg.tokenizer);
    const auto& notebooks = res.corpus.notebooks;
    if (notebooks.empty()) throw ValidationError("corpus is empty after fork exclusion and parsing");

    res.languages.reserve(notebooks.size());
    for (const auto& nb : notebooks) {
        res.languages.push_back(classify_language(nb.language_evidence));
        res.conflicts.push_back(detect_conflicts(nb.language_evidence));
    }
    if (through == Stage::Ingest || through == Stage::Langid) return res;

    res.digests = digest_snippets(notebooks, cfg.digest, cfg.threads);
    res.groups = build_clone_groups(notebooks, res.digests, cfg.include_empty);
    res.notebook_classes = notebook_clone_classes(notebooks, res.digests);
    const auto sizes = group_size_table(notebooks, res.groups);
    for (const auto& row : sizes) {
        res.cmw_frequency.push_back(clone_frequency(row));
        res.cmw_nonempty.push_back(static_cast<std::uint32_t>(std::count_if(row.begin(), row.end(), [](auto s) { return s > 0; })));
    }
    if (through == Stage::Cmw) return res;

    run_nearmiss(res, cfg);
    if (through == Stage::Nearmiss) return res;

    res.cmw_profiles = build_connection_profiles(edges_from_groups(res.groups, notebooks.size()), notebooks,
                                                 cfg.connections, res.cmw_nonempty);
    {
        auto& nm = res.nearmiss;
        const auto all = build_connection_profiles(edges_from_pairs(nm.pairs, notebooks), notebooks, cfg.connections,
                                                   nm.status.nonempty);
        for (auto n : nm.notebooks) nm.profiles.push_back(all[n]);
    }
    if (through == Stage::Connections) return res;

    run_stats(res);
    return res;
}

namespace {

constexpr const char* kSummaryHeader = "metric,min,p10,p25,median,mean,p75,p90,max\n";

std::string summary_line(const std::string& metric, const SummaryRow& r) {
    std::string s = csv_field(metric);
    for (double v : {r.min, r.p10, r.p25, r.median, r.mean, r.p75, r.p90, r.max}) s += ',' + format_number(v);
    return s + '\n';
}

std::string summary_or_empty(const std::string& metric, std::span<const double> values) {
    if (values.empty()) return csv_field(metric) + ",,,,,,,,\n";
    return summary_line(metric, percentiles(values));
}

std::string histogram_csv(std::span<const double> values, const BinSpec& spec) {
    std::string out = "bin,count\n";
    for (const auto& b : histogram(values, spec)) out += format_number(b.lower) + ',' + std::to_string(b.count) + '\n';
    return out;
}

template <typename T>
std::string kv(const std::string& key, const T& value) {
    if constexpr (std::is_same_v<T, double>) {
        return key + ',' + format_number(value) + '\n';
    } else if constexpr (std::is_convertible_v<T, std::string>) {
        return key + ',' + csv_field(std::string(value)) + '\n';
    } else {
        return key + ',' + std::to_string(value) + '\n';
    }
}

std::string profile_summary(std::span<const ConnectionProfile> profiles) {
    std::vector<double> total, norm, c0, ic, sc;
    for (const auto& p : profiles) {
        total.push_back(static_cast<double>(p.total));
        norm.push_back(p.normalized);
        c0.push_back(static_cast<double>(p.c0));
        ic.push_back(p.ic);
        sc.push_back(static_cast<double>(p.sc));
    }
    std::string out = kSummaryHeader;
    out += summary_or_empty("connections", total);
    out += summary_or_empty("normalized_connections", norm);
    out += summary_or_empty("c0", c0);
    out += summary_or_empty("ic", ic);
    out += summary_or_empty("sc", sc);
    return out;
}

void render_ingest(const PipelineResult& res, ReportBundle& b) {
    const auto& corpus = res.corpus;
    const auto& nbs = corpus.notebooks;
    std::string notebooks = "notebook_id,repo_id,status,bytes,code_cells,loc_total,loc_nonblank,sloc\n";
    for (const auto& nb : nbs) {
        LineCounts sum;
        for (const auto& s : nb.code_cells) {
            sum.loc_total += s.lines.loc_total;
            sum.loc_nonblank += s.lines.loc_nonblank;
            sum.sloc += s.lines.sloc;
        }
        notebooks += csv_field(nb.notebook_id) + ',' + csv_field(nb.repo_id) + ',' + to_string(nb.parse_status) + ',' +
                     std::to_string(nb.byte_size) + ',' + std::to_string(nb.code_cells.size()) + ',' +
                     std::to_string(sum.loc_total) + ',' + std::to_string(sum.loc_nonblank) + ',' +
                     std::to_string(sum.sloc) + '\n';
    }
    b.files["notebooks.csv"] = notebooks;

    std::string rejected = "notebook_id,repo_id,status,bytes\n";
    std::map<std::string, std::size_t> status_counts;
    for (const auto& nb : nbs) ++status_counts[to_string(nb.parse_status)];
    for (const auto& nb : corpus.rejected) {
        ++status_counts[to_string(nb.parse_status)];
        rejected += csv_field(nb.notebook_id) + ',' + csv_field(nb.repo_id) + ',' + to_string(nb.parse_status) + ',' +
                    std::to_string(nb.byte_size) + '\n';
    }
    b.files["rejected.csv"] = rejected;

    const auto st = summarize_corpus(nbs);
    std::string sizes = kSummaryHeader;
    sizes += summary_line("bytes", st.bytes);
    sizes += summary_line("code_cells", st.code_cells);
    sizes += summary_line("loc_nonblank", st.loc_nonblank);
    sizes += summary_line("loc_total", st.loc_total);
    b.files["size_stats.csv"] = sizes;

    std::string summary = "key,value\n";
    summary += kv("notebooks_analysed", nbs.size());
    summary += kv("forks_excluded", corpus.forks_excluded);
    summary += kv("byte_identical_files", corpus.byte_identical_files);
    for (const auto& [s, c] : status_counts) summary += kv("status_" + s, c);
    summary += kv("code_cells", corpus.snippet_count());
    b.files["ingest_summary.csv"] = summary;

    std::vector<double> cells, loc;
    for (const auto& nb : nbs) {
        cells.push_back(static_cast<double>(nb.code_cells.size()));
        double l = 0;
        for (const auto& s : nb.code_cells) l += s.lines.loc_nonblank;
        loc.push_back(l);
    }
    b.files["figures/hist_code_cells.csv"] = histogram_csv(cells, BinSpec::fixed(1.0));
    b.files["figures/hist_loc_nonblank.csv"] = histogram_csv(loc, BinSpec::fixed(10.0));
}

void render_langid(const PipelineResult& res, ReportBundle& b) {
    b.files["languages.csv"] = language_distribution_csv(language_distribution(res.languages));
    std::string per = "notebook_id,language,conflict,declared_groups\n";
    std::size_t conflicts = 0;
    for (std::size_t n = 0; n < res.languages.size(); ++n) {
        const auto& c = res.conflicts[n];
        std::string groups;
        for (auto g : c.groups) {
            if (!groups.empty()) groups += ';';
            groups += to_string(g);
        }
        if (c.conflicting) ++conflicts;
        per += csv_field(res.corpus.notebooks[n].notebook_id) + ',' + to_string(res.languages[n]) + ',' +
               (c.conflicting ? "1" : "0") + ',' + groups + '\n';
    }
    b.files["notebook_languages.csv"] = per;
    b.files["language_conflicts.csv"] = "key,value\n" + kv("notebooks_with_conflicts", conflicts);
}

void render_cmw(const PipelineResult& res, const PipelineConfig& cfg, ReportBundle& b) {
    const auto& nbs = res.corpus.notebooks;
    b.files["clone_groups.csv"] = clone_groups_csv(res.groups);
    b.files["clone_members.csv"] = clone_members_csv(res.groups, nbs);

    std::string classes = "class,size,notebook_id\n";
    std::size_t cloned_notebooks = 0, multi_classes = 0;
    std::vector<double> class_sizes;
    for (std::size_t k = 0; k < res.notebook_classes.size(); ++k) {
        const auto& cls = res.notebook_classes[k];
        class_sizes.push_back(static_cast<double>(cls.members.size()));
        if (cls.members.size() >= 2) {
            ++multi_classes;
            cloned_notebooks += cls.members.size();
        }
        for (auto m : cls.members) {
            classes += std::to_string(k) + ',' + std::to_string(cls.members.size()) + ',' + csv_field(nbs[m].notebook_id) + '\n';
        }
    }
    b.files["notebook_clone_classes.csv"] = classes;

    std::string freq = "notebook_id,language,code_cells,considered_snippets,clone_frequency\n";
    std::size_t with_clone = 0;
    for (std::size_t n = 0; n < nbs.size(); ++n) {
        if (res.cmw_frequency[n] > 0) ++with_clone;
        freq += csv_field(nbs[n].notebook_id) + ',' + to_string(res.languages[n]) + ',' +
                std::to_string(nbs[n].code_cells.size()) + ',' + std::to_string(res.cmw_nonempty[n]) + ',' +
                format_number(res.cmw_frequency[n]) + '\n';
    }
    b.files["cmw_notebooks.csv"] = freq;

    // Every snippet is exactly one of: empty (when excluded), unique, cloned.
    const auto considered = res.groups.considered_snippets();
    const auto cloned = res.groups.snippets_in_clone_groups();
    std::size_t clone_groups = 0;
    std::vector<double> group_loc, unique_loc, occurrences;
    for (const auto& g : res.groups.groups) {
        if (g.is_clone_group()) {
            ++clone_groups;
            group_loc.push_back(g.median_loc);
            occurrences.push_back(static_cast<double>(g.members.size()));
        } else {
            unique_loc.push_back(g.median_loc);
        }
    }
    std::string summary = "key,value\n";
    summary += kv("snippets", res.digests.size());
    summary += kv("empty_snippets", res.groups.empty_count);
    summary += kv("empty_snippets_grouped", std::string(cfg.include_empty ? "yes" : "no"));
    summary += kv("considered_snippets", considered);
    summary += kv("unique_snippets", considered - cloned);
    summary += kv("cloned_snippets", cloned);
    summary += kv("clone_groups", clone_groups);
    if (considered > 0) summary += kv("clone_ratio", corpus_clone_ratio(res.groups));
    summary += kv("notebooks_with_clone", with_clone);
    summary += kv("notebook_clone_classes", multi_classes);
    summary += kv("notebooks_with_notebook_clone", cloned_notebooks);
    b.files["cmw_summary.csv"] = summary;

    std::string lines = kSummaryHeader;
    lines += summary_or_empty("clone_group_median_loc", group_loc);
    lines += summary_or_empty("unique_snippet_loc", unique_loc);
    lines += summary_or_empty("clone_group_occurrences", occurrences);
    b.files["cmw_line_counts.csv"] = lines;

    std::string by_lang = kSummaryHeader;
    for (auto g : kAllLanguageGroups) {
        std::vector<double> v;
        for (std::size_t n = 0; n < nbs.size(); ++n) {
            if (res.languages[n] == g && res.cmw_nonempty[n] > 0) v.push_back(res.cmw_frequency[n]);
        }
        if (!v.empty()) by_lang += summary_line(std::string("clone_frequency:") + to_string(g), percentiles(v));
    }
    b.files["cmw_clone_frequency.csv"] = by_lang;

    const auto top = top_clones(res.groups, nbs, cfg.top_n, 0);
    const auto top_min = top_clones(res.groups, nbs, cfg.top_n, cfg.top_min_loc);
    b.files["top_clones.csv"] = top_clones_csv(top, nbs);
    b.files["top_clones_min_loc.csv"] = top_clones_csv(top_min, nbs);

    std::vector<double> considered_freq;
    for (std::size_t n = 0; n < nbs.size(); ++n) {
        if (res.cmw_nonempty[n] == 0) continue;
        considered_freq.push_back(res.cmw_frequency[n]);
    }
    b.files["figures/hist_clone_group_occurrences.csv"] = histogram_csv(occurrences, BinSpec::fixed(1.0));
    b.files["figures/hist_notebook_clone_class_sizes.csv"] = histogram_csv(class_sizes, BinSpec::fixed(1.0));
    b.files["figures/hist_cmw_clone_frequency.csv"] = histogram_csv(considered_freq, BinSpec::fixed(0.05));
    b.files["figures/hist_clone_group_median_loc.csv"] = histogram_csv(group_loc, BinSpec::fixed(1.0));
}

void render_nearmiss(const PipelineResult& res, ReportBundle& b) {
    const auto& nbs = res.corpus.notebooks;
    const auto& nm = res.nearmiss;
    b.files["nearmiss_pairs.csv"] = clone_pairs_csv(nm.pairs, nbs);

    std::string per = "notebook_id,code_cells,nonempty_snippets,clone_frequency\n";
    std::vector<double> freq;
    std::size_t with_clone = 0;
    for (auto n : nm.notebooks) {
        per += csv_field(nbs[n].notebook_id) + ',' + std::to_string(nbs[n].code_cells.size()) + ',' +
               std::to_string(nm.status.nonempty[n]) + ',' + format_number(nm.status.frequency[n]) + '\n';
        if (nm.status.nonempty[n] > 0) freq.push_back(nm.status.frequency[n]);
        if (nm.status.frequency[n] > 0) ++with_clone;
    }
    b.files["nearmiss_notebooks.csv"] = per;

    std::size_t cloned = 0, considered = 0, empty = 0;
    std::vector<double> cloned_sloc, unique_sloc;
    for (auto n : nm.notebooks) {
        for (std::size_t c = 0; c < nbs[n].code_cells.size(); ++c) {
            const auto sloc = nbs[n].code_cells[c].lines.sloc;
            if (sloc == 0) {
                ++empty;
                continue;
            }
            ++considered;
            if (nm.status.cloned[n][c]) {
                ++cloned;
                cloned_sloc.push_back(sloc);
            } else {
                unique_sloc.push_back(sloc);
            }
        }
    }
    std::string summary = "key,value\n";
    summary += kv("notebooks_in_scope", nm.notebooks.size());
    summary += kv("empty_snippets", empty);
    summary += kv("considered_snippets", considered);
    summary += kv("cloned_snippets", cloned);
    summary += kv("unique_snippets", considered - cloned);
    if (considered > 0) summary += kv("cloned_fraction", static_cast<double>(cloned) / static_cast<double>(considered));
    summary += kv("clone_pairs", nm.pairs.size());
    summary += kv("intra_notebook_pairs", nm.intra_notebook_pairs);
    summary += kv("inter_notebook_pairs", nm.pairs.size() - nm.intra_notebook_pairs);
    summary += kv("notebooks_with_clone", with_clone);
    b.files["nearmiss_summary.csv"] = summary;

    std::string lines = kSummaryHeader;
    lines += summary_or_empty("cloned_snippet_sloc", cloned_sloc);
    lines += summary_or_empty("unique_snippet_sloc", unique_sloc);
    lines += summary_or_empty("clone_frequency", freq);
    b.files["nearmiss_line_counts.csv"] = lines;
    b.files["figures/hist_nearmiss_clone_frequency.csv"] = histogram_csv(freq, BinSpec::fixed(0.05));
}

void render_connections(const PipelineResult& res, ReportBundle& b) {
    const auto& nbs = res.corpus.notebooks;
    b.files["cmw_profiles.csv"] = connection_profiles_csv(res.cmw_profiles);
    b.files["cmw_connections.csv"] = profile_summary(res.cmw_profiles);
    b.files["nearmiss_profiles.csv"] = connection_profiles_csv(res.nearmiss.profiles);
    b.files["nearmiss_connections.csv"] = profile_summary(res.nearmiss.profiles);

    auto hist_and_scatter = [&](const std::string& prefix, std::span<const ConnectionProfile> profiles) {
        std::vector<double> total;
        std::string scatter = "notebook_id,c0,ic,sc\n";
        for (const auto& p : profiles) {
            total.push_back(static_cast<double>(p.total));
            scatter += csv_field(p.notebook_id) + ',' + std::to_string(p.c0) + ',' + format_number(p.ic) + ',' +
                       std::to_string(p.sc) + '\n';
        }
        b.files["figures/hist_" + prefix + "_connections.csv"] = histogram_csv(total, BinSpec::fixed(1.0));
        b.files["figures/scatter_" + prefix + "_intra_inter.csv"] = scatter;
    };
    hist_and_scatter("cmw", res.cmw_profiles);
    hist_and_scatter("nearmiss", res.nearmiss.profiles);

    std::string cmw_scatter = "notebook_id,code_cells,clone_frequency\n";
    for (std::size_t n = 0; n < nbs.size(); ++n) {
        if (res.cmw_nonempty[n] == 0) continue;
        cmw_scatter += csv_field(nbs[n].notebook_id) + ',' + std::to_string(nbs[n].code_cells.size()) + ',' +
                       format_number(res.cmw_frequency[n]) + '\n';
    }
    b.files["figures/scatter_cmw_cells_vs_frequency.csv"] = cmw_scatter;
    std::string nm_scatter = "notebook_id,code_cells,clone_frequency\n";
    for (auto n : res.nearmiss.notebooks) {
        if (res.nearmiss.status.nonempty[n] == 0) continue;
        nm_scatter += csv_field(nbs[n].notebook_id) + ',' + std::to_string(nbs[n].code_cells.size()) + ',' +
                      format_number(res.nearmiss.status.frequency[n]) + '\n';
    }
    b.files["figures/scatter_nearmiss_cells_vs_frequency.csv"] = nm_scatter;
}

void render_stats(const PipelineResult& res, ReportBundle& b) {
    b.files["tests.csv"] = test_results_csv(res.tests);
    std::string table;
    if (res.language_pairwise) {
        const auto& t = *res.language_pairwise;
        table = "language";
        for (std::size_t j = 0; j + 1 < t.labels.size(); ++j) table += ',' + t.labels[j];
        table += '\n';
        for (std::size_t i = 1; i < t.labels.size(); ++i) {
            table += t.labels[i];
            for (std::size_t j = 0; j + 1 < t.labels.size(); ++j) {
                table += ',';
                if (j < i) table += format_number(t.adjusted[i][j]);
            }
            table += '\n';
        }
    } else {
        table = "language\n";
    }
    b.files["language_frequency_tests.csv"] = table;

    std::string text;
    for (const auto& r : res.tests) {
        text += r.test + ": " + r.statistic_name + " = " + format_number(r.statistic) + ", p " +
                (r.p_value ? (*r.p_value < 2.2e-16 ? format_p_value(*r.p_value) : "= " + format_p_value(*r.p_value))
                           : std::string("n/a")) +
                (r.notes.empty() ? "" : " (" + r.notes + ")") + '\n';
    }
    b.files["tests.txt"] = text;
}

}  // namespace

ReportBundle render_bundle(const PipelineResult& res, const PipelineConfig& cfg, const std::string& manifest_path) {
    ReportBundle b;
    b.files["run.json"] = run_manifest_json(manifest_path, cfg);
    render_ingest(res, b);
    if (res.through == Stage::Ingest) return b;
    render_langid(res, b);
    if (res.through == Stage::Langid) return b;
    render_cmw(res, cfg, b);
    if (res.through == Stage::Cmw) return b;
    render_nearmiss(res, b);
    if (res.through == Stage::Nearmiss) return b;
    render_connections(res, b);
    if (res.through == Stage::Connections) return b;
    render_stats(res, b);
    return b;
}

ReportBundle run_pipeline(const std::filesystem::path& manifest_path, const PipelineConfig& config, Stage through) {
    const auto manifest = load_manifest(manifest_path);
    return render_bundle(analyse(manifest, config, through), config, manifest_path.string());
}

void write_bundle(const ReportBundle& bundle, const std::filesystem::path& out_dir) {
    for (const auto& [name, content] : bundle.files) {
        const auto path = out_dir / name;
        std::filesystem::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".partial";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot write output file", tmp.string());
            out << content;
            out.flush();
            if (!out) throw IoError("write failed", tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }
}

std::string run_manifest_json(const std::string& manifest_path, const PipelineConfig& cfg) {
    ordered_json j;
    j["manifest"] = manifest_path;
    j["theta"] = cfg.detector.theta;
    j["min_tokens"] = cfg.detector.min_tokens;
    j["max_tokens"] = cfg.detector.max_tokens;
    j["include_empty"] = cfg.include_empty;
    j["selfloop_mode"] = to_string(cfg.connections.self_loop);
    j["normalize_by"] = cfg.connections.denominator == NormalizeBy::AllSnippets ? "all" : "nonempty";
    j["nearmiss_language"] = cfg.nearmiss_language ? to_string(*cfg.nearmiss_language) : "ALL";
    j["digest"] = to_string(cfg.digest);
    j["top_n"] = cfg.top_n;
    j["top_min_loc"] = cfg.top_min_loc;
    j["tokenizer"] = {{"inline_comment", cfg.tokenizer.inline_comment},
                      {"block_open", cfg.tokenizer.block_open},
                      {"block_close", cfg.tokenizer.block_close},
                      {"separators", cfg.tokenizer.separators}};
    return j.dump(2) + '\n';
}

std::string parse_run_manifest(const std::string& json_text, PipelineConfig& cfg) {
    const auto j = ordered_json::parse(json_text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ValidationError("run manifest is not a JSON object");
    try {
        cfg.detector.theta = j.at("theta").get<double>();
        cfg.detector.min_tokens = j.at("min_tokens").get<std::uint64_t>();
        cfg.detector.max_tokens = j.at("max_tokens").get<std::uint64_t>();
        cfg.include_empty = j.at("include_empty").get<bool>();
        const auto loop = parse_self_loop_mode(j.at("selfloop_mode").get<std::string>());
        if (!loop) throw ValidationError("run manifest: unknown selfloop_mode");
        cfg.connections.self_loop = *loop;
        cfg.connections.denominator =
            j.at("normalize_by").get<std::string>() == "all" ? NormalizeBy::AllSnippets : NormalizeBy::NonEmptySnippets;
        const auto lang = j.at("nearmiss_language").get<std::string>();
        if (lang == "ALL") {
            cfg.nearmiss_language.reset();
        } else if (auto g = parse_language_group(lang)) {
            cfg.nearmiss_language = *g;
        } else {
            throw ValidationError("run manifest: unknown nearmiss_language");
        }
        const auto digest = parse_digest_algorithm(j.at("digest").get<std::string>());
        if (!digest) throw ValidationError("run manifest: unknown digest");
        cfg.digest = *digest;
        cfg.top_n = j.at("top_n").get<std::size_t>();
        cfg.top_min_loc = j.at("top_min_loc").get<std::uint32_t>();
        const auto& tok = j.at("tokenizer");
        cfg.tokenizer.inline_comment = tok.at("inline_comment").get<std::string>();
        cfg.tokenizer.block_open = tok.at("block_open").get<std::string>();
        cfg.tokenizer.block_close = tok.at("block_close").get<std::string>();
        cfg.tokenizer.separators = tok.at("separators").get<std::string>();
        return j.at("manifest").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("run manifest: ") + e.what());
    }
}

}  // namespace nbc
