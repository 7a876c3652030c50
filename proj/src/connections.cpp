#include "nbclones/connections.hpp"

#include <algorithm>

#include "nbclones/csv.hpp"
#include "nbclones/error.hpp"

namespace nbc {

const char* to_string(SelfLoopMode m) noexcept { return m == SelfLoopMode::Incident ? "incident" : "degree"; }

std::optional<SelfLoopMode> parse_self_loop_mode(std::string_view s) noexcept {
    if (s == "incident") return SelfLoopMode::Incident;
    if (s == "degree") return SelfLoopMode::Degree;
    return std::nullopt;
}

void EdgeCounter::add(std::uint32_t a, std::uint32_t b, std::uint64_t multiplicity) {
    if (multiplicity == 0) return;
    edges_[{std::min(a, b), std::max(a, b)}] += multiplicity;
}

void EdgeCounter::merge(const EdgeCounter& other) {
    for (const auto& [k, w] : other.edges_) edges_[k] += w;
}

std::uint64_t EdgeCounter::self_loop_edges() const noexcept {
    std::uint64_t n = 0;
    for (const auto& [k, w] : edges_) {
        if (k.first == k.second) n += w;
    }
    return n;
}

std::uint64_t EdgeCounter::other_edges() const noexcept {
    std::uint64_t n = 0;
    for (const auto& [k, w] : edges_) {
        if (k.first != k.second) n += w;
    }
    return n;
}

EdgeCounter edges_from_pairs(std::span<const ClonePair> pairs, std::span<const NotebookRecord> notebooks) {
    EdgeCounter g;
    for (const auto& p : pairs) {
        for (const auto& r : {p.left, p.right}) {
            if (r.notebook >= notebooks.size() || r.cell >= notebooks[r.notebook].code_cells.size()) {
                throw ValidationError("clone pair references an unknown notebook or cell");
            }
        }
        g.add(p.left.notebook, p.right.notebook);
    }
    return g;
}

EdgeCounter edges_from_groups(const CloneGroups& groups, std::size_t notebook_count) {
    EdgeCounter g;
    std::vector<std::pair<std::uint32_t, std::uint64_t>> per_notebook;
    for (const auto& grp : groups.groups) {
        if (!grp.is_clone_group()) continue;
        per_notebook.clear();
        for (const auto& m : grp.members) {  // members are sorted by notebook
            if (m.notebook >= notebook_count) throw ValidationError("clone group references an unknown notebook");
            if (!per_notebook.empty() && per_notebook.back().first == m.notebook) {
                ++per_notebook.back().second;
            } else {
                per_notebook.emplace_back(m.notebook, 1);
            }
        }
        for (std::size_t i = 0; i < per_notebook.size(); ++i) {
            const auto [a, ma] = per_notebook[i];
            g.add(a, a, ma * (ma - 1) / 2);
            for (std::size_t j = i + 1; j < per_notebook.size(); ++j) g.add(a, per_notebook[j].first, ma * per_notebook[j].second);
        }
    }
    return g;
}

std::vector<ConnectionProfile> build_connection_profiles(const EdgeCounter& edges,
                                                         std::span<const NotebookRecord> notebooks,
                                                         const ConnectionOptions& opts,
                                                         std::span<const std::uint32_t> nonempty_snippets) {
    if (opts.denominator == NormalizeBy::NonEmptySnippets && nonempty_snippets.size() != notebooks.size()) {
        throw ValidationError("non-empty snippet counts required for every notebook");
    }
    std::vector<ConnectionProfile> profiles(notebooks.size());
    for (std::size_t i = 0; i < notebooks.size(); ++i) profiles[i].notebook_id = notebooks[i].notebook_id;
    const std::uint64_t loop_weight = opts.self_loop == SelfLoopMode::Incident ? 1 : 2;

    for (const auto& [key, w] : edges.edges()) {
        const auto [a, b] = key;
        if (b >= notebooks.size()) throw ValidationError("edge references an unknown notebook");
        if (a == b) {
            profiles[a].total += loop_weight * w;
            profiles[a].c0 += loop_weight * w;
            continue;
        }
        profiles[a].total += w;
        profiles[b].total += w;
        if (notebooks[a].repo_id == notebooks[b].repo_id) {
            profiles[a].c0 += w;
            profiles[b].c0 += w;
        } else {
            profiles[a].per_repo[notebooks[b].repo_id] += w;
            profiles[b].per_repo[notebooks[a].repo_id] += w;
        }
    }
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        auto& p = profiles[i];
        for (const auto& [repo, c] : p.per_repo) p.sc += c;
        p.ic = p.per_repo.empty() ? 0.0 : static_cast<double>(p.sc) / static_cast<double>(p.per_repo.size());
        const std::uint64_t denom = opts.denominator == NormalizeBy::AllSnippets ? notebooks[i].code_cells.size()
                                                                                 : nonempty_snippets[i];
        p.normalized = denom == 0 ? 0.0 : static_cast<double>(p.total) / static_cast<double>(denom);
    }
    return profiles;
}

PairedConnectionTests paired_connection_tests(std::span<const ConnectionProfile> profiles) {
    std::vector<double> c0, ic, sc;
    for (const auto& p : profiles) {
        c0.push_back(static_cast<double>(p.c0));
        ic.push_back(p.ic);
        sc.push_back(static_cast<double>(p.sc));
    }
    return {wilcoxon_signed_rank(c0, ic), wilcoxon_signed_rank(c0, sc)};
}

std::string connection_profiles_csv(std::span<const ConnectionProfile> profiles) {
    std::string out = "notebook_id,total,normalized,c0,ic,sc\n";
    for (const auto& p : profiles) {
        out += csv_field(p.notebook_id) + ',' + std::to_string(p.total) + ',' + format_number(p.normalized) + ',' +
               std::to_string(p.c0) + ',' + format_number(p.ic) + ',' + std::to_string(p.sc) + '\n';
    }
    return out;
}

}  // namespace nbc
