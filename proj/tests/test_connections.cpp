#include "doctest.h"

#include <algorithm>
#include <random>

#include "nbclones/connections.hpp"
#include "nbclones/error.hpp"
#include "support.hpp"

using namespace nbc;
using testing::make_record;

namespace {

void check_against_oracle(const std::vector<ConnectionProfile>& got, const std::vector<testing::OracleProfile>& want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        REQUIRE(got[i].total == want[i].total);
        REQUIRE(got[i].c0 == want[i].c0);
        REQUIRE(got[i].sc == want[i].sc);
        REQUIRE(got[i].per_repo == want[i].per_repo);
    }
}

}  // namespace

TEST_CASE("group of three across two notebooks") {
    const std::vector<NotebookRecord> nbs = {make_record("A", "r1", {"x", "x"}), make_record("B", "r2", {"x"})};
    const auto d = digest_snippets(nbs);
    const auto g = build_clone_groups(nbs, d);
    const auto edges = edges_from_groups(g, nbs.size());
    CHECK(edges.self_loop_edges() == 1);
    CHECK(edges.other_edges() == 2);

    const auto p = build_connection_profiles(edges, nbs);
    CHECK(p[0].total == 3);
    CHECK(p[1].total == 2);
    CHECK(p[0].c0 == 1);
    CHECK(p[0].sc == 2);
    CHECK(p[0].ic == 2.0);
    CHECK(p[0].normalized == 1.5);
    CHECK(p[1].c0 == 0);

    ConnectionOptions deg;
    deg.self_loop = SelfLoopMode::Degree;
    const auto pd = build_connection_profiles(edges, nbs, deg);
    CHECK(pd[0].total == 4);
    CHECK(pd[0].c0 == 2);
}

TEST_CASE("no pairs means no connections") {
    const std::vector<NotebookRecord> nbs = {make_record("A", "r1", {"x"}), make_record("B", "r2", {"y"})};
    const auto p = build_connection_profiles(EdgeCounter{}, nbs);
    for (const auto& x : p) {
        CHECK(x.total == 0);
        CHECK(x.ic == 0.0);
        CHECK(x.sc == 0);
        CHECK(x.normalized == 0.0);
    }
}

TEST_CASE("repository partition") {
    std::vector<NotebookRecord> nbs = {make_record("A", "r0", {"a"}), make_record("B", "r1", {"b"}),
                                       make_record("C", "r2", {"c"}), make_record("D", "r0", {"d"})};
    EdgeCounter e;
    e.add(0, 1, 2);
    e.add(0, 2, 4);
    e.add(0, 3, 1);
    const auto p = build_connection_profiles(e, nbs);
    CHECK(p[0].ic == 3.0);
    CHECK(p[0].sc == 6);
    CHECK(p[0].c0 == 1);
    CHECK(p[0].total == 7);
    CHECK(p[3].ic == 0.0);
    CHECK(p[3].sc == 0);
}

TEST_CASE("normalization denominators") {
    std::vector<NotebookRecord> nbs = {make_record("A", "r0", {"a", "", "a"})};
    EdgeCounter e;
    e.add(0, 0);
    CHECK(build_connection_profiles(e, nbs)[0].normalized == doctest::Approx(1.0 / 3.0));
    ConnectionOptions o;
    o.denominator = NormalizeBy::NonEmptySnippets;
    const std::vector<std::uint32_t> nonempty = {2};
    CHECK(build_connection_profiles(e, nbs, o, nonempty)[0].normalized == 0.5);
}

TEST_CASE("pair references are validated") {
    std::vector<NotebookRecord> nbs = {make_record("A", "r0", {"a"})};
    const std::vector<ClonePair> bad = {{{0, 0}, {1, 0}}};
    CHECK_THROWS_AS(edges_from_pairs(bad, nbs), ValidationError);
    const std::vector<ClonePair> bad_cell = {{{0, 0}, {0, 4}}};
    CHECK_THROWS_AS(edges_from_pairs(bad_cell, nbs), ValidationError);
}

TEST_CASE("paired connection tests") {
    std::vector<ConnectionProfile> ps(3);
    const double c0[] = {3, 5, 2};
    for (int i = 0; i < 3; ++i) {
        ps[i].c0 = static_cast<std::uint64_t>(c0[i]);
        ps[i].ic = 1.0;
        ps[i].sc = ps[i].c0;
    }
    const auto t = paired_connection_tests(ps);
    CHECK(t.c0_vs_ic.statistic == 6.0);
    CHECK(t.c0_vs_sc.degenerate());
}

TEST_CASE("aggregated group edges equal explicit pair enumeration") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto nbs = testing::random_corpus(seed, 300);
        const auto d = digest_snippets(nbs);
        const auto g = build_clone_groups(nbs, d);
        const auto edges = edges_from_groups(g, nbs.size());
        const auto explicit_edges = testing::enumerate_group_edges(g);

        // k(k-1)/2 edges per group
        std::uint64_t expected_edges = 0;
        for (const auto& grp : g.groups) expected_edges += grp.members.size() * (grp.members.size() - 1) / 2;
        REQUIRE(edges.self_loop_edges() + edges.other_edges() == expected_edges);

        for (auto mode : {SelfLoopMode::Incident, SelfLoopMode::Degree}) {
            ConnectionOptions o;
            o.self_loop = mode;
            const auto got = build_connection_profiles(edges, nbs, o);
            check_against_oracle(got, testing::oracle_profiles(explicit_edges, nbs, mode == SelfLoopMode::Degree));

            std::uint64_t sum = 0;
            for (const auto& p : got) {
                REQUIRE(p.c0 + p.sc == p.total);
                sum += p.total;
            }
            const auto loop_weight = mode == SelfLoopMode::Degree ? 2u : 1u;
            REQUIRE(sum == 2 * edges.other_edges() + loop_weight * edges.self_loop_edges());
        }

        // pair-level input gives the same graph, in any order
        std::vector<ClonePair> pairs;
        for (const auto& grp : g.groups) {
            for (std::size_t i = 0; i < grp.members.size(); ++i) {
                for (std::size_t j = i + 1; j < grp.members.size(); ++j) pairs.push_back({grp.members[i], grp.members[j]});
            }
        }
        std::mt19937_64 rng(seed);
        std::shuffle(pairs.begin(), pairs.end(), rng);
        REQUIRE(edges_from_pairs(pairs, nbs).edges() == edges.edges());
    }
}

TEST_CASE("edge counters merge commutatively") {
    EdgeCounter a, b;
    a.add(0, 1);
    a.add(2, 2);
    b.add(1, 0, 3);
    auto ab = a;
    ab.merge(b);
    auto ba = b;
    ba.merge(a);
    CHECK(ab.edges() == ba.edges());
    CHECK(ab.edges().at({0, 1}) == 4);
}

TEST_CASE("profiles csv") {
    std::vector<NotebookRecord> nbs = {make_record("A", "r0", {"a", "b"})};
    EdgeCounter e;
    e.add(0, 0, 3);
    CHECK(connection_profiles_csv(build_connection_profiles(e, nbs)) ==
          "notebook_id,total,normalized,c0,ic,sc\nA,3,1.5,3,0,0\n");
}
