#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include "mimome/baselines.hpp"
#include "mimome/capacity.hpp"
#include "mimome/channel.hpp"
#include "mimome/ncsie.hpp"

using namespace mimome;

TEST_CASE("SubsetEnumerator walks all combinations lexicographically once") {
    SubsetEnumerator e(6, 3);
    std::vector<std::vector<int>> seen;
    for (; !e.done(); e.advance()) seen.push_back(e.current());
    CHECK(seen.size() == binomial(6, 3));
    CHECK(seen.front() == std::vector<int>{1, 2, 3});
    CHECK(seen.back() == std::vector<int>{4, 5, 6});
    CHECK(std::is_sorted(seen.begin(), seen.end()));
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    for (const auto& subset : seen) {
        CHECK(std::is_sorted(subset.begin(), subset.end()));
        CHECK(std::adjacent_find(subset.begin(), subset.end()) == subset.end());
    }
}

TEST_CASE("norm_based_select ranks column norms") {
    SUBCASE("pinned squared norms 1,5,3,2") {
        ChannelMatrix h(1, 4);
        h << 1.0, std::sqrt(5.0), std::sqrt(3.0), std::sqrt(2.0);
        CHECK(norm_based_select(h, 2) == std::vector<int>{2, 3});
    }
    SUBCASE("ties break toward lower indices") {
        const ChannelMatrix h = ChannelMatrix::Ones(2, 5);
        CHECK(norm_based_select(h, 2) == std::vector<int>{1, 2});
    }
    SUBCASE("random 4x32 matches an independent sort") {
        const ChannelMatrix h = generate_rayleigh(4, 32, Seed{111});
        std::vector<std::pair<double, int>> norms;
        for (int k = 0; k < 32; ++k) {
            double sq = 0.0;
            for (int r = 0; r < 4; ++r) sq += std::norm(h(r, k));
            norms.emplace_back(-sq, k + 1);
        }
        std::sort(norms.begin(), norms.end());
        std::vector<int> expected;
        for (int i = 0; i < 4; ++i) expected.push_back(norms[static_cast<std::size_t>(i)].second);
        std::sort(expected.begin(), expected.end());
        CHECK(norm_based_select(h, 4) == expected);
    }
    SUBCASE("depends only on column norms, not phases") {
        const ChannelMatrix h = generate_rayleigh(4, 16, Seed{112});
        ChannelMatrix rotated = h;
        std::mt19937_64 pick(113);
        for (int k = 0; k < 16; ++k) {
            const double angle = static_cast<double>(pick() % 6283) / 1000.0;
            rotated.col(k) *= std::polar(1.0, angle);
        }
        CHECK(norm_based_select(rotated, 5) == norm_based_select(h, 5));
    }
}

TEST_CASE("exhaustive_select degenerate cases") {
    const NormalizedSnr rho(2.0);
    SUBCASE("L = Nt has a single subset") {
        const ChannelMatrix h = generate_rayleigh(3, 4, Seed{114});
        const SelectionResult r = exhaustive_select(Scenario::ncsie, h, nullptr, 4, rho);
        CHECK(r.indices == std::vector<int>{1, 2, 3, 4});
    }
    SUBCASE("Nt=6, L=2 evaluates 15 subsets over a 20-node tree") {
        const ChannelMatrix h = generate_rayleigh(2, 6, Seed{115});
        const SelectionResult r = exhaustive_select(Scenario::ncsie, h, nullptr, 2, rho);
        CHECK(binomial(6, 2) == 15);
        CHECK(r.visited_nodes == 20);
    }
    SUBCASE("budget cap arithmetic") {
        const ChannelMatrix h = generate_rayleigh(2, 30, Seed{116});
        CHECK_NOTHROW(exhaustive_select(Scenario::ncsie, h, nullptr, 4, rho, std::nullopt,
                                        100000));
        CHECK_THROWS_AS(
            exhaustive_select(Scenario::ncsie, h, nullptr, 4, rho, std::nullopt, 10000),
            BudgetError);
    }
    SUBCASE("csie requires the eavesdropper inputs") {
        const ChannelMatrix h = generate_rayleigh(2, 6, Seed{117});
        CHECK_THROWS_AS(exhaustive_select(Scenario::csie, h, nullptr, 2, rho), ConfigError);
    }
}

TEST_CASE("exhaustive_select dominates every individually evaluated subset") {
    const ChannelMatrix h = generate_rayleigh(4, 12, Seed{118});
    const NormalizedSnr rho = db_to_linear(7.0);
    const SelectionResult best = exhaustive_select(Scenario::ncsie, h, nullptr, 3, rho);
    std::mt19937_64 pick(119);
    for (int rep = 0; rep < 200; ++rep) {
        std::set<int> subset;
        while (subset.size() < 3) subset.insert(1 + static_cast<int>(pick() % 12));
        const std::vector<int> indices(subset.begin(), subset.end());
        CHECK(best.objective_bits >=
              link_capacity(select_columns(h, indices), rho) - 1e-12);
    }
}

TEST_CASE("exhaustive objective is never below the norm-based subset") {
    std::mt19937_64 pick(120);
    for (int rep = 0; rep < 20; ++rep) {
        const int nt = 6 + static_cast<int>(pick() % 7);
        const int subset = 2 + static_cast<int>(pick() % 3);
        const ChannelMatrix h = generate_rayleigh(4, nt, Seed{pick()});
        const NormalizedSnr rho = db_to_linear(static_cast<double>(pick() % 15) - 5.0);
        const SelectionResult es = exhaustive_select(Scenario::ncsie, h, nullptr, subset, rho);
        const double norm_obj = link_capacity(select_columns(h, norm_based_select(h, subset)), rho);
        CHECK(es.objective_bits >= norm_obj - 1e-12);
    }
}
