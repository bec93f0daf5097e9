#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles/oracles.hpp"
#include "p3pc/dsep.hpp"
#include "p3pc/parallel.hpp"

using namespace p3pc;

namespace {

Edge E(std::size_t t, std::size_t h) { return {NodeId{t}, NodeId{h}}; }

NodeSet to_set(const std::vector<std::size_t>& v) {
    NodeSet s;
    for (auto i : v) s.emplace_back(i);
    return s;
}

}  // namespace

TEST(DSeparation, ChainBlockedByMediator) {
    const Dag d(3, {E(0, 1), E(1, 2)});
    EXPECT_TRUE(d_separated(d, {NodeId{0}, NodeId{2}, make_node_set({1})}));
    EXPECT_FALSE(d_separated(d, {NodeId{0}, NodeId{2}, {}}));
}

TEST(DSeparation, ColliderDescendantActivates) {
    const Dag d(4, {E(0, 2), E(1, 2), E(2, 3)});
    EXPECT_TRUE(d_separated(d, {NodeId{0}, NodeId{1}, {}}));
    EXPECT_FALSE(d_separated(d, {NodeId{0}, NodeId{1}, make_node_set({3})}));
    EXPECT_FALSE(d_separated(d, {NodeId{0}, NodeId{1}, make_node_set({2})}));
}

TEST(DSeparation, MalformedQueriesThrow) {
    const Dag d = chain_dag(3);
    EXPECT_THROW(d_separated(d, {NodeId{0}, NodeId{0}, {}}), ParameterError);
    EXPECT_THROW(d_separated(d, {NodeId{0}, NodeId{2}, make_node_set({0})}), ParameterError);
    EXPECT_THROW(d_separated(d, {NodeId{0}, NodeId{7}, {}}), ParameterError);
    EXPECT_THROW(d_separated(d, {NodeId{0}, NodeId{1}, make_node_set({9})}), ParameterError);
}

// Every pair, every subset of the rest, against two independent oracles.
TEST(DSeparation, EquivalentToPathAndMoralOracles) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t n = 2 + seed % 5;
        const Dag d = oracle::random_dag(n, 0.3 + 0.1 * static_cast<double>(seed % 5), seed);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                if (a == b) continue;
                for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
                    if (mask & ((1u << a) | (1u << b))) continue;
                    std::vector<std::size_t> s;
                    for (std::size_t v = 0; v < n; ++v)
                        if (mask & (1u << v)) s.push_back(v);
                    const bool got = d_separated(d, {NodeId{a}, NodeId{b}, to_set(s)});
                    ASSERT_EQ(got, oracle::brute_force_dsep(d, a, b, s)) << "seed " << seed;
                    ASSERT_EQ(got, oracle::moral_dsep(d, a, b, s)) << "seed " << seed;
                }
            }
        }
    }
}

TEST(DSeparation, Symmetric) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 2 + rng() % 29;
        const Dag d = oracle::random_dag(n, 0.15, rng());
        const std::size_t a = rng() % n;
        std::size_t b = rng() % n;
        if (a == b) b = (b + 1) % n;
        NodeSet s;
        for (std::size_t v = 0; v < n; ++v)
            if (v != a && v != b && rng() % 3 == 0) s.emplace_back(v);
        EXPECT_EQ(d_separated(d, {NodeId{a}, NodeId{b}, s}), d_separated(d, {NodeId{b}, NodeId{a}, s}));
    }
}

TEST(DSeparation, DisconnectedPairsAlwaysSeparated) {
    // Two components {0,1,2} and {3,4,5}.
    const Dag d(6, {E(0, 1), E(2, 1), E(3, 4), E(4, 5), E(3, 5)});
    for (std::uint32_t mask = 0; mask < 64; ++mask) {
        if (mask & 0b1001) continue;
        NodeSet s;
        for (std::size_t v = 0; v < 6; ++v)
            if (mask & (1u << v)) s.emplace_back(v);
        EXPECT_TRUE(d_separated(d, {NodeId{0}, NodeId{3}, s}));
    }
}

TEST(CountingOracle, CountsEveryQuery) {
    const Dag d = chain_dag(4);
    CountingOracle o(d);
    EXPECT_EQ(o.queries_issued(), 0u);
    o.query(NodeId{0}, NodeId{3});
    EXPECT_EQ(o.queries_issued(), 1u);
    o.query(NodeId{1}, NodeId{3}, make_node_set({2}));
    o.query(NodeId{0}, NodeId{2});
    EXPECT_EQ(o.queries_issued(), 3u);
}

TEST(CountingOracle, DuplicatesCountedTwice) {
    const Dag d = chain_dag(4);
    CountingOracle plain(d);
    plain.query(NodeId{0}, NodeId{3});
    plain.query(NodeId{0}, NodeId{3});
    EXPECT_EQ(plain.queries_issued(), 2u);

    CountingOracle cached(d, {.log_queries = false, .memoize = true});
    EXPECT_FALSE(cached.query(NodeId{0}, NodeId{3}));
    EXPECT_FALSE(cached.query(NodeId{3}, NodeId{0}));
    EXPECT_TRUE(cached.query(NodeId{0}, NodeId{3}, make_node_set({1})));
    EXPECT_EQ(cached.queries_issued(), 3u);
}

TEST(CountingOracle, InvalidQueryNotCounted) {
    const Dag d = chain_dag(3);
    CountingOracle o(d);
    EXPECT_THROW(o.query(NodeId{1}, NodeId{1}), ParameterError);
    EXPECT_EQ(o.queries_issued(), 0u);
}

TEST(CountingOracle, LogKeepsIssueOrder) {
    const Dag d = chain_dag(3);
    CountingOracle o(d, {.log_queries = true, .memoize = false});
    o.query(NodeId{2}, NodeId{0});
    o.query(NodeId{0}, NodeId{2}, make_node_set({1}));
    const auto log = o.log();
    ASSERT_EQ(log.size(), 2u);
    EXPECT_EQ(log[0], (CiQuery{NodeId{2}, NodeId{0}, {}}));
    EXPECT_EQ(log[1].s, make_node_set({1}));
}

TEST(CountingOracle, ExactUnderConcurrency) {
    const Dag d = generate_er(20, 0.2, 3);
    CountingOracle o(d);
    parallel_for(5000, 4, [&](std::size_t i) { o.query(NodeId{i % 10}, NodeId{10 + i % 10}); });
    EXPECT_EQ(o.queries_issued(), 5000u);
}
