#include "nbclones/nearmiss.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "nbclones/csv.hpp"
#include "nbclones/digest.hpp"
#include "nbclones/error.hpp"
#include "nbclones/parallel.hpp"
#include "nbclones/simd.hpp"

namespace nbc {

void DetectorConfig::validate() const {
    if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("theta must be in (0, 1]");
    if (min_tokens > max_tokens) throw ValidationError("min_tokens must not exceed max_tokens");
}

std::uint64_t required_overlap(double theta, std::uint64_t larger_size) noexcept {
    const double x = theta * static_cast<double>(larger_size);
    return static_cast<std::uint64_t>(std::ceil(x - 1e-9));
}

std::uint64_t multiset_overlap(const TokenBag& a, const TokenBag& b) {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    std::uint64_t total = 0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].first < eb[j].first) {
            ++i;
        } else if (eb[j].first < ea[i].first) {
            ++j;
        } else {
            total += std::min(ea[i].second, eb[j].second);
            ++i;
            ++j;
        }
    }
    return total;
}

bool is_clone_pair(const TokenBag& a, const TokenBag& b, const DetectorConfig& cfg) {
    if (!cfg.eligible(a.size()) || !cfg.eligible(b.size())) return false;
    return multiset_overlap(a, b) >= required_overlap(cfg.theta, std::max(a.size(), b.size()));
}

NearMissIndex::NearMissIndex(std::span<const TokenBag> bags, const DetectorConfig& cfg)
    : cfg_(cfg), bag_count_(bags.size()) {
    cfg_.validate();
    if (bags.size() > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("too many bags");

    std::vector<std::uint32_t> eligible;
    for (std::uint32_t i = 0; i < bags.size(); ++i) {
        if (cfg_.eligible(bags[i].size())) eligible.push_back(i);
    }

    // Global order: ascending corpus frequency, ties by token text.
    std::unordered_map<std::string_view, std::uint64_t> freq;
    for (auto i : eligible) {
        for (const auto& [tok, c] : bags[i].entries()) freq[tok] += c;
    }
    std::vector<std::pair<std::string_view, std::uint64_t>> vocab(freq.begin(), freq.end());
    std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    std::unordered_map<std::string_view, std::uint32_t> rank;
    rank.reserve(vocab.size());
    for (std::uint32_t r = 0; r < vocab.size(); ++r) rank.emplace(vocab[r].first, r);

    order_ = eligible;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return bags[a].size() < bags[b].size(); });

    encoded_.resize(order_.size());
    postings_.resize(vocab.size());
    std::string fp_source;
    char num[64];
    std::snprintf(num, sizeof num, "theta=%.17g;min=%llu;max=%llu;n=%zu;", cfg_.theta,
                  static_cast<unsigned long long>(cfg_.min_tokens), static_cast<unsigned long long>(cfg_.max_tokens),
                  bags.size());
    fp_source += num;
    for (std::uint32_t pos = 0; pos < order_.size(); ++pos) {
        const auto& bag = bags[order_[pos]];
        auto& enc = encoded_[pos];
        std::vector<std::pair<std::uint32_t, std::uint32_t>> tmp;
        tmp.reserve(bag.distinct());
        for (const auto& [tok, c] : bag.entries()) tmp.emplace_back(rank.at(tok), c);
        std::sort(tmp.begin(), tmp.end());
        enc.ids.reserve(tmp.size());
        enc.counts.reserve(tmp.size());
        for (const auto& [id, c] : tmp) {
            enc.ids.push_back(id);
            enc.counts.push_back(c);
        }
        enc.size = bag.size();
        // Prefix over the expanded multiset: size - required + 1 tokens.
        const std::uint64_t prefix_tokens = enc.size - required_overlap(cfg_.theta, enc.size) + 1;
        std::uint64_t covered = 0;
        std::uint32_t k = 0;
        while (k < enc.ids.size() && covered < prefix_tokens) covered += enc.counts[k++];
        enc.prefix_distinct = k;
        for (std::uint32_t e = 0; e < k; ++e) postings_[enc.ids[e]].push_back(pos);

        fp_source += std::to_string(order_[pos]) + ':';
        for (const auto& [tok, c] : bag.entries()) {
            fp_source += std::to_string(tok.size()) + '|';
            fp_source += tok;
            fp_source += '*' + std::to_string(c) + ' ';
        }
        fp_source += ';';
    }
    fingerprint_ = digest128(fp_source, DigestAlgorithm::Sha256Truncated).hex();
}

std::size_t NearMissIndex::partition_count(std::size_t partition_size) const noexcept {
    if (partition_size == 0) return 0;
    return (order_.size() + partition_size - 1) / partition_size;
}

std::vector<BagPair> NearMissIndex::query_partition(std::size_t partition, std::size_t partition_size) const {
    std::vector<BagPair> out;
    const std::size_t begin = partition * partition_size;
    const std::size_t end = std::min(order_.size(), begin + partition_size);
    std::vector<std::uint32_t> stamp(order_.size(), 0);
    std::vector<std::uint32_t> candidates;
    for (std::size_t p = begin; p < end; ++p) {
        const auto& a = encoded_[p];
        const std::uint64_t need = required_overlap(cfg_.theta, a.size);
        const auto mark = static_cast<std::uint32_t>(p + 1);
        candidates.clear();
        for (std::uint32_t e = 0; e < a.prefix_distinct; ++e) {
            const auto& list = postings_[a.ids[e]];
            // Earlier positions are never larger; skip those too small to reach `need`.
            auto it = std::lower_bound(list.begin(), list.end(), need,
                                       [&](std::uint32_t q, std::uint64_t n) { return encoded_[q].size < n; });
            for (; it != list.end() && *it < p; ++it) {
                if (stamp[*it] == mark) continue;
                stamp[*it] = mark;
                candidates.push_back(*it);
            }
        }
        for (auto q : candidates) {
            const auto& b = encoded_[q];
            if (simd::bag_overlap(a.ids, a.counts, b.ids, b.counts) >= need) {
                const auto x = order_[p], y = order_[q];
                out.push_back({std::min(x, y), std::max(x, y)});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<BagPair> merge_sorted_unique(std::vector<std::vector<BagPair>>& parts) {
    std::vector<BagPair> all;
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    all.reserve(total);
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

}  // namespace

std::vector<BagPair> NearMissIndex::detect(unsigned threads, std::size_t partition_size) const {
    const auto parts_n = partition_count(partition_size);
    std::vector<std::vector<BagPair>> parts(parts_n);
    parallel_for(parts_n, threads, [&](std::size_t i) { parts[i] = query_partition(i, partition_size); });
    return merge_sorted_unique(parts);
}

std::vector<BagPair> detect_clone_pairs(std::span<const TokenBag> bags, const DetectorConfig& cfg, unsigned threads) {
    return NearMissIndex(bags, cfg).detect(threads);
}

namespace {

std::filesystem::path partition_file(const std::filesystem::path& dir, std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof name, "part-%06zu.csv", i);
    return dir / name;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write", tmp.string());
        out << content;
        out.flush();
        if (!out) throw IoError("write failed", tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<BagPair> read_partition(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpointed partition missing", path.string());
    std::vector<BagPair> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("corrupt partition file", path.string());
        out.push_back({static_cast<std::uint32_t>(std::stoul(line.substr(0, comma))),
                       static_cast<std::uint32_t>(std::stoul(line.substr(comma + 1)))});
    }
    return out;
}

}  // namespace

ResumableResult detect_clone_pairs_resumable(std::span<const TokenBag> bags, const DetectorConfig& cfg,
                                             const CheckpointOptions& opts, unsigned threads) {
    if (opts.partition_size == 0) throw ValidationError("partition_size must be positive");
    const NearMissIndex index(bags, cfg);
    std::filesystem::create_directories(opts.dir);
    const auto checkpoint = opts.dir / "checkpoint";
    const std::string header = "fingerprint " + index.fingerprint() + " partition_size " +
                               std::to_string(opts.partition_size);

    ResumableResult result;
    result.partitions_total = index.partition_count(opts.partition_size);
    std::set<std::size_t> done;
    if (std::filesystem::exists(checkpoint)) {
        std::ifstream in(checkpoint);
        std::string line;
        std::getline(in, line);
        if (line != header) {
            throw ValidationError("checkpoint belongs to a different input or configuration", checkpoint.string());
        }
        while (std::getline(in, line)) {
            if (line.rfind("done ", 0) == 0) done.insert(std::stoul(line.substr(5)));
        }
    } else {
        write_atomically(checkpoint, header + '\n');
    }

    std::vector<std::vector<BagPair>> parts(result.partitions_total);
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < result.partitions_total; ++i) {
        if (done.count(i)) {
            parts[i] = read_partition(partition_file(opts.dir, i));
            ++result.partitions_resumed;
        } else {
            todo.push_back(i);
        }
    }
    if (opts.stop_after && todo.size() > *opts.stop_after) todo.resize(*opts.stop_after);

    std::ofstream log(checkpoint, std::ios::app);
    if (!log) throw IoError("cannot append to checkpoint", checkpoint.string());
    std::mutex log_mu;
    parallel_for(todo.size(), threads, [&](std::size_t t) {
        const auto i = todo[t];
        parts[i] = index.query_partition(i, opts.partition_size);
        std::string body;
        for (const auto& p : parts[i]) body += std::to_string(p.left) + ',' + std::to_string(p.right) + '\n';
        write_atomically(partition_file(opts.dir, i), body);
        std::lock_guard lock(log_mu);
        log << "done " << i << '\n';
        log.flush();
    });
    result.partitions_run = todo.size();
    result.complete = result.partitions_resumed + result.partitions_run == result.partitions_total;
    result.pairs = merge_sorted_unique(parts);
    return result;
}

std::string clone_pairs_csv(std::span<const ClonePair> pairs, std::span<const NotebookRecord> notebooks) {
    std::string out = "notebook_id,cell_index,notebook_id,cell_index\n";
    for (const auto& p : pairs) {
        out += csv_field(notebooks[p.left.notebook].notebook_id) + ',' + std::to_string(p.left.cell) + ',' +
               csv_field(notebooks[p.right.notebook].notebook_id) + ',' + std::to_string(p.right.cell) + '\n';
    }
    return out;
}

NearMissStatus nearmiss_clone_status(std::span<const ClonePair> pairs, std::span<const NotebookRecord> notebooks) {
    NearMissStatus st;
    st.cloned.resize(notebooks.size());
    for (std::size_t n = 0; n < notebooks.size(); ++n) st.cloned[n].assign(notebooks[n].code_cells.size(), false);
    for (const auto& p : pairs) {
        for (const auto& r : {p.left, p.right}) {
            if (r.notebook >= notebooks.size() || r.cell >= notebooks[r.notebook].code_cells.size()) {
                throw ValidationError("clone pair references an unknown snippet");
            }
            st.cloned[r.notebook][r.cell] = true;
        }
    }
    st.frequency.assign(notebooks.size(), 0.0);
    st.nonempty.assign(notebooks.size(), 0);
    for (std::size_t n = 0; n < notebooks.size(); ++n) {
        std::uint32_t nonempty = 0, cloned = 0;
        for (std::size_t c = 0; c < notebooks[n].code_cells.size(); ++c) {
            if (notebooks[n].code_cells[c].lines.sloc == 0) continue;
            ++nonempty;
            if (st.cloned[n][c]) ++cloned;
        }
        st.nonempty[n] = nonempty;
        st.frequency[n] = nonempty == 0 ? 0.0 : static_cast<double>(cloned) / nonempty;
    }
    return st;
}

SanitizedPairs sanitize_pair_file(std::string_view content) {
    SanitizedPairs out;
    // 1. keep only digits, commas and line feeds
    std::vector<std::string> lines;
    std::string current;
    bool dirty = false;
    auto finish_line = [&] {
        lines.push_back(std::move(current));
        current.clear();
        if (dirty) ++out.lines_with_removed_bytes;
        dirty = false;
    };
    for (char ch : content) {
        if (ch == '\n') {
            finish_line();
        } else if ((ch >= '0' && ch <= '9') || ch == ',') {
            current.push_back(ch);
        } else {
            ++out.bytes_removed;
            dirty = true;
        }
    }
    if (!current.empty() || dirty) finish_line();
    out.input_lines = lines.size();

    // 2. exact duplicates, first occurrence wins
    std::unordered_set<std::string> seen;
    std::vector<std::pair<std::size_t, std::string>> unique;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (seen.insert(lines[i]).second) {
            unique.emplace_back(i + 1, std::move(lines[i]));
        } else {
            ++out.duplicates_dropped;
        }
    }

    // 3. exactly four non-empty numeric fields
    for (auto& [lineno, l] : unique) {
        std::size_t fields = 1;
        bool empty_field = l.empty() || l.front() == ',' || l.back() == ',';
        for (std::size_t k = 0; k < l.size(); ++k) {
            if (l[k] != ',') continue;
            ++fields;
            if (k + 1 < l.size() && l[k + 1] == ',') empty_field = true;
        }
        if (fields != 4 || empty_field) {
            ++out.malformed_dropped;
            out.malformed_line_numbers.push_back(lineno);
        } else {
            out.lines.push_back(std::move(l));
        }
    }
    return out;
}

std::vector<ExternalPair> parse_external_pairs(std::span<const std::string> lines) {
    std::vector<ExternalPair> out;
    out.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::uint64_t v[4];
        std::size_t k = 0, pos = 0;
        const auto& l = lines[i];
        while (k < 4) {
            const auto comma = l.find(',', pos);
            const auto field = l.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos) break;
            v[k++] = std::stoull(field);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (k != 4 || std::count(l.begin(), l.end(), ',') != 3) {
            throw ValidationError("pair line is not four comma-separated integers", "", i + 1);
        }
        out.push_back({v[0], v[1], v[2], v[3]});
    }
    return out;
}

}  // namespace nbc
