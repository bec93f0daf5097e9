#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles/oracles.hpp"
#include "p3pc/theory.hpp"

using namespace p3pc;

namespace {

// Exact expectations over all 2^C(n,2) label-ordered DAGs, weighted by probability.
struct Exhaustive {
    double trails;
    double colliders;
};

Exhaustive exhaustive_expectations(std::size_t n, double p, std::size_t max_len) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
    Exhaustive e{0, 0};
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
        std::vector<Edge> edges;
        std::vector<int> indeg(n, 0);
        double w = 1.0;
        for (std::size_t k = 0; k < slots.size(); ++k) {
            if (mask & (1u << k)) {
                edges.push_back({NodeId{slots[k].first}, NodeId{slots[k].second}});
                ++indeg[slots[k].second];
                w *= p;
            } else {
                w *= 1 - p;
            }
        }
        const Dag d(n, edges);
        e.trails += w * static_cast<double>(oracle::recursive_trails(d, 0, n - 1, max_len, true).size());
        for (int k : indeg) e.colliders += w * (k >= 2);
    }
    return e;
}

}  // namespace

TEST(ExpectedTrails, Examples) {
    EXPECT_EQ(expected_trails_upto({10, 0.0}, 6), 0.0);
    EXPECT_EQ(expected_trails_upto({4, 0.0}, 3), 0.0);
    for (double p : {0.1, 0.5, 0.9}) EXPECT_DOUBLE_EQ(expected_trails_upto({3, p}, 2), p + p * p);
    EXPECT_THROW(expected_trails_upto({5, 0.3}, 0), ParameterError);
    EXPECT_THROW(expected_trails_upto({5, 0.3}, 5), ParameterError);
    EXPECT_THROW(expected_trails_upto({5, 1.3}, 2), ParameterError);
}

TEST(ExpectedTrails, MatchesExhaustiveEnumeration) {
    for (double p : {0.2, 0.5}) {
        for (std::size_t len : {1u, 2u, 3u, 4u}) {
            EXPECT_NEAR(expected_trails_upto({5, p}, len), exhaustive_expectations(5, p, len).trails, 1e-12);
        }
    }
}

TEST(ExpectedTrails, MatchesMonteCarlo) {
    const ErParams params{10, 0.2};
    const auto mc = mc_trail_count(params, 6, 10'000, 42, 2);
    EXPECT_TRUE(mc.agrees_with(expected_trails_upto(params, 6)))
        << mc.mean << " +- " << mc.std_error << " vs " << expected_trails_upto(params, 6);
}

TEST(TrailsBound, Examples) {
    for (std::size_t n : {10u, 100u, 1000u}) {
        const auto b = trails_bound({n, 1.0 / static_cast<double>(n)}, 6);
        EXPECT_NEAR(b.geometric, 7.0 / static_cast<double>(n), 1e-12);
    }
    EXPECT_NEAR(trails_bound({100, 0.01}, 6).geometric, 0.07, 1e-12);
    EXPECT_GE(trails_bound({10, 0.2}, 6).geometric, expected_trails_upto({10, 0.2}, 6));
    const auto dense = trails_bound({10, 0.3}, 3);
    ASSERT_TRUE(dense.power_form.has_value());
    EXPECT_NEAR(*dense.power_form, 4 * 1000 * std::pow(0.3, 4), 1e-9);
    EXPECT_FALSE(trails_bound({10, 0.05}, 3).power_form.has_value());
}

TEST(TrailsBound, NeverBelowExact) {
    for (std::size_t n : {8u, 10u, 12u, 40u})
        for (double p : {0.01, 0.1, 0.2, 0.3, 0.9})
            for (std::size_t len = 1; len < std::min<std::size_t>(n, 10); ++len)
                EXPECT_LE(expected_trails_upto({n, p}, len), trails_bound({n, p}, len).geometric);
}

TEST(ColliderProbability, Examples) {
    for (double p : {0.0, 0.3, 1.0}) {
        EXPECT_EQ(collider_probability(1, p), 0.0);
        EXPECT_EQ(collider_probability(2, p), 0.0);
    }
    EXPECT_EQ(collider_probability(3, 1.0), 1.0);
    EXPECT_NEAR(collider_probability(5, 0.3), 1 - std::pow(0.7, 4) - 4 * 0.3 * std::pow(0.7, 3), 1e-15);
    EXPECT_NEAR(collider_probability(5, 0.3), 0.3483, 5e-5);
}

TEST(ColliderProbability, BoundedAndMonotone) {
    for (std::size_t i = 1; i < 60; ++i) {
        for (double p = 0.0; p <= 1.0; p += 0.05) {
            const double v = collider_probability(i, p);
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
            EXPECT_LE(v, collider_probability(i + 1, p) + 1e-15);
            EXPECT_LE(v, collider_probability(i, std::min(1.0, p + 0.05)) + 1e-15);
        }
    }
}

TEST(ExpectedColliders, Examples) {
    EXPECT_EQ(expected_colliders({7, 0.0}), 0.0);
    EXPECT_DOUBLE_EQ(expected_colliders({5, 1.0}), 3.0);
    EXPECT_EQ(expected_colliders({2, 0.7}), 0.0);
    for (double p : {0.2, 0.5, 0.8}) EXPECT_NEAR(expected_colliders({5, p}), exhaustive_expectations(5, p, 1).colliders, 1e-12);
}

TEST(ExpectedColliders, ClosedFormAgrees) {
    for (std::size_t n : {3u, 5u, 12u, 100u})
        for (double p : {0.01, 0.2, 0.5, 1.0})
            EXPECT_NEAR(expected_colliders_closed_form({n, p}), expected_colliders({n, p}), 1e-9 * static_cast<double>(n));
}

TEST(ExpectedColliders, PrintedFormEvaluatedVerbatim) {
    // n = 5, p = 1/2: 5/32 - 1/32 + 2(1/32 - 1)/(1/2) + 5 - 1/4 + 1 = 2.
    EXPECT_DOUBLE_EQ(paper_closed_form({5, 0.5}), 2.0);
    EXPECT_DOUBLE_EQ(expected_colliders({5, 0.5}), 0.25 + 0.5 + 0.6875);
    EXPECT_THROW(paper_closed_form({5, 0.0}), ParameterError);
}

TEST(ExpectedColliders, LimitAtInverseN) {
    const double limit = 3.0 / std::exp(1.0) - 1.0;
    double prev_gap = 1.0;
    for (std::size_t n : {500u, 2000u, 10000u}) {
        const double per_node = expected_colliders({n, 1.0 / static_cast<double>(n)}) / static_cast<double>(n);
        const double gap = std::abs(per_node - limit);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    const double at2000 = expected_colliders({2000, 1.0 / 2000});
    EXPECT_NEAR(at2000, 0.104 * 2000, 0.02 * 0.104 * 2000);
}

TEST(ExpectedColliders, MatchesMonteCarlo) {
    const ErParams params{10, 0.3};
    const auto mc = mc_collider_count(params, 10'000, 7, 2);
    EXPECT_TRUE(mc.agrees_with(expected_colliders(params)));
}

TEST(MonteCarlo, IndependentOfJobs) {
    const auto a = mc_collider_count({12, 0.2}, 500, 3, 1);
    const auto b = mc_collider_count({12, 0.2}, 500, 3, 4);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_THROW(monte_carlo(1, 1, [](std::size_t) { return 0.0; }), ParameterError);
}

TEST(Statement1, ChainVerified) {
    const auto r = check_statement1(chain_dag(12));
    EXPECT_EQ(r.verdict, Verdict::verified);
    EXPECT_EQ(r.pairs_checked, 66u);
    EXPECT_GT(r.paths_checked, 0u);
}

TEST(Statement1, CompleteDagSampledPairsVerified) {
    Statement1Options opt;
    opt.sampled_pairs = 5;
    opt.seed = 2;
    const auto r = check_statement1(complete_dag(10), opt);
    EXPECT_EQ(r.verdict, Verdict::verified);
    EXPECT_EQ(r.pairs_checked, 5u);
}

TEST(Statement1, RandomDenseDagsVerified) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto r = check_statement1(generate_er(12, 0.4, seed));
        EXPECT_EQ(r.verdict, Verdict::verified) << "seed " << seed;
    }
}

TEST(Statement1, CapReportsInconclusive) {
    Statement1Options opt;
    opt.max_paths_per_pair = 1;
    const auto r = check_statement1(complete_dag(10), opt);
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
}

TEST(Statement1, FindsOpenTrailForSmallSets) {
    // Empty conditioning sets leave collider-free long trails open.
    Statement1Options opt;
    opt.set_deficit = 12;
    const auto r = check_statement1(chain_dag(12), opt);
    ASSERT_EQ(r.verdict, Verdict::counterexample);
    ASSERT_TRUE(r.open_trail && r.open_set);
    EXPECT_GE(r.open_trail->length(), 7u);
    EXPECT_TRUE(r.open_set->empty());
}

TEST(Statement1, RejectsSizes) {
    EXPECT_THROW(check_statement1(chain_dag(8)), ParameterError);
    EXPECT_THROW(check_statement1(chain_dag(65)), ParameterError);
}
