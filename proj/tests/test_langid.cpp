#include "doctest.h"

#include <random>

#include "nbclones/langid.hpp"

using namespace nbc;

namespace {

LanguageEvidence ev(std::optional<std::string> f1, std::optional<std::string> f2 = {},
                    std::optional<std::string> f3 = {}, std::vector<std::optional<std::string>> cells = {}) {
    return {std::move(f1), std::move(f2), std::move(f3), std::move(cells)};
}

}  // namespace

TEST_CASE("value matching") {
    CHECK(group_of_value("python3") == LanguageGroup::Python);
    CHECK(group_of_value("Python 2") == LanguageGroup::Python);
    CHECK(group_of_value("PYTHON") == LanguageGroup::Other);
    CHECK(group_of_value("julia") == LanguageGroup::Julia);
    CHECK(group_of_value("Julia") == LanguageGroup::Julia);
    CHECK(group_of_value("julia-1.6") == LanguageGroup::Other);
    CHECK(group_of_value("R") == LanguageGroup::R);
    CHECK(group_of_value("r") == LanguageGroup::R);
    CHECK(group_of_value("ruby") == LanguageGroup::Other);
    CHECK(group_of_value("scala211") == LanguageGroup::Scala);
    CHECK(group_of_value("javascript") == LanguageGroup::Other);
}

TEST_CASE("classify_language") {
    CHECK(classify_language(ev("python3")) == LanguageGroup::Python);
    CHECK(classify_language(ev({})) == LanguageGroup::Undefined);
    CHECK(classify_language(ev({}, "julia")) == LanguageGroup::Julia);
    CHECK(classify_language(ev({}, {}, "R")) == LanguageGroup::R);
    CHECK(classify_language(ev("  python ")) == LanguageGroup::Python);
    CHECK(classify_language(ev("", "R")) == LanguageGroup::R);
    CHECK(classify_language(ev({}, {}, {}, {"python", "python"})) == LanguageGroup::Python);
    CHECK(classify_language(ev({}, {}, {}, {"python", "R"})) == LanguageGroup::Undefined);
    CHECK(classify_language(ev({}, {}, {}, {"python", std::nullopt})) == LanguageGroup::Undefined);
    CHECK(classify_language(ev({}, {}, {}, {})) == LanguageGroup::Undefined);
}

TEST_CASE("detect_conflicts") {
    CHECK_FALSE(detect_conflicts(ev("python", {}, "python")).conflicting);
    const auto c = detect_conflicts(ev("python", "R"));
    CHECK(c.conflicting);
    CHECK(c.groups == std::vector{LanguageGroup::Python, LanguageGroup::R});
    CHECK_FALSE(detect_conflicts(ev("python")).conflicting);
    CHECK(detect_conflicts(ev({}, {}, {}, {"python", "R"})).conflicting);
}

TEST_CASE("priority monotonicity and conflict symmetry on random evidence") {
    const std::vector<std::optional<std::string>> values = {std::nullopt, "python", "python3", "R",   "julia",
                                                            "scala",      "ruby",   "",        "Julia"};
    std::mt19937 rng(3);
    auto pick = [&] { return values[rng() % values.size()]; };
    for (int i = 0; i < 1000; ++i) {
        auto e = ev(pick(), pick(), pick(), {pick(), pick()});
        const auto g = classify_language(e);
        // adding to a lower-priority field never changes the result once a higher one decided
        if (e.language_info_name && !e.language_info_name->empty()) {
            auto e2 = e;
            e2.metadata_language = pick();
            e2.kernelspec_language = pick();
            e2.cell_languages = {pick()};
            REQUIRE(classify_language(e2) == g);
        }
        auto rev = ev(e.kernelspec_language, e.metadata_language, e.language_info_name, e.cell_languages);
        REQUIRE(detect_conflicts(rev).conflicting == detect_conflicts(e).conflicting);
        REQUIRE(detect_conflicts(rev).groups == detect_conflicts(e).groups);
    }
}

TEST_CASE("language_distribution") {
    const std::vector<LanguageGroup> g = {LanguageGroup::Python, LanguageGroup::Python, LanguageGroup::Python,
                                          LanguageGroup::Undefined};
    const auto rows = language_distribution(g);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].group == LanguageGroup::Python);
    CHECK(rows[0].count == 3);
    CHECK(rows[0].percent == doctest::Approx(75.0));
    CHECK(rows[1].group == LanguageGroup::Undefined);
    CHECK(rows[1].percent == doctest::Approx(25.0));
    CHECK(language_distribution({}).empty());
    CHECK(language_distribution_csv(rows) == "language,count,percent\nPYTHON,3,75.00\nUNDEFINED,1,25.00\n");
}

TEST_CASE("group names round-trip") {
    for (auto g : kAllLanguageGroups) CHECK(parse_language_group(to_string(g)) == g);
    CHECK_FALSE(parse_language_group("python").has_value());
}
