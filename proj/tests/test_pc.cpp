#include <gtest/gtest.h>

#include <array>
#include <random>
#include <set>
#include <vector>

#include "oracles/oracles.hpp"
#include "p3pc/combinatorics.hpp"
#include "p3pc/pc.hpp"

using namespace p3pc;

namespace {

using EdgeSet = std::set<std::pair<std::size_t, std::size_t>>;

EdgeSet edge_set(const Skeleton& s) {
    EdgeSet out;
    for (auto [a, b] : s.edges()) out.emplace(a.index(), b.index());
    return out;
}

EdgeSet complete_pairs(std::size_t n) {
    EdgeSet out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.emplace(i, j);
    return out;
}

auto dsep_test(const Dag& d) {
    return [&d](std::size_t a, std::size_t b, const std::vector<std::size_t>& s) {
        return oracle::moral_dsep(d, a, b, s);
    };
}

// Tests spent when nothing is ever independent: every ordered pair tries every
// subset of the other n - 2 nodes at every level.
std::uint64_t no_removal_count(std::size_t n) {
    std::uint64_t total = 0;
    for (std::size_t l = 0; l + 2 <= n; ++l) total += 2 * choose(n, 2) * choose(n - 2, l);
    return total;
}

}  // namespace

TEST(Skeleton, CompleteSkeletonSizes) {
    EXPECT_EQ(complete_skeleton(1).edge_count(), 0u);
    EXPECT_EQ(complete_skeleton(4).edge_count(), 6u);
    EXPECT_EQ(complete_skeleton(50).edge_count(), 1225u);
    EXPECT_THROW(complete_skeleton(0), ParameterError);
}

TEST(Skeleton, SepsetBookkeeping) {
    Skeleton s = Skeleton::complete(4);
    s.remove_edge(NodeId{2}, NodeId{0}, make_node_set({1}));
    s.remove_edge(NodeId{1}, NodeId{3});
    EXPECT_FALSE(s.adjacent(NodeId{0}, NodeId{2}));
    ASSERT_NE(s.sepset(NodeId{0}, NodeId{2}), nullptr);
    EXPECT_EQ(*s.sepset(NodeId{0}, NodeId{2}), make_node_set({1}));
    EXPECT_EQ(s.sepset(NodeId{1}, NodeId{3}), nullptr);
    s.add_edge(NodeId{0}, NodeId{2});
    EXPECT_EQ(s.sepset(NodeId{0}, NodeId{2}), nullptr);
    EXPECT_THROW(s.add_edge(NodeId{1}, NodeId{1}), ParameterError);
}

TEST(PcSkeleton, EmptyGraphRemovesEverythingAtLevelZero) {
    const Dag d(5);
    CountingOracle o(d);
    const auto r = pc_skeleton(o, complete_skeleton(5));
    EXPECT_EQ(r.tests_performed, 10u);
    EXPECT_EQ(r.skeleton.edge_count(), 0u);
    EXPECT_EQ(r.max_level_reached, 0);
    for (const auto& [pair, s] : r.skeleton.sepsets()) EXPECT_TRUE(s.empty());
    EXPECT_EQ(r.skeleton.sepsets().size(), 10u);
}

TEST(PcSkeleton, ChainTrace) {
    const Dag d = chain_dag(3);
    for (auto variant : {PcVariant::stable, PcVariant::original}) {
        CountingOracle o(d, {.log_queries = true, .memoize = false});
        const auto r = pc_skeleton(o, complete_skeleton(3), variant);
        EXPECT_EQ(edge_set(r.skeleton), (EdgeSet{{0, 1}, {1, 2}}));
        ASSERT_NE(r.skeleton.sepset(NodeId{0}, NodeId{2}), nullptr);
        EXPECT_EQ(*r.skeleton.sepset(NodeId{0}, NodeId{2}), make_node_set({1}));

        const auto log = o.log();
        // Level 0: all six ordered pairs, none independent.
        for (std::size_t i = 0; i < 6; ++i) EXPECT_TRUE(log.at(i).s.empty());
        EXPECT_EQ(log.at(6), (CiQuery{NodeId{0}, NodeId{1}, make_node_set({2})}));
        EXPECT_EQ(log.at(7), (CiQuery{NodeId{0}, NodeId{2}, make_node_set({1})}));

        const auto [edges, tests] =
            oracle::reference_pc(3, complete_pairs(3), variant == PcVariant::stable, dsep_test(d));
        EXPECT_EQ(r.tests_performed, tests);
        EXPECT_EQ(r.tests_performed, variant == PcVariant::stable ? 11u : 10u);
    }
}

TEST(PcSkeleton, CompleteDagClosedForm) {
    for (std::size_t n : {4u, 5u}) {
        const Dag d = complete_dag(n);
        for (auto variant : {PcVariant::stable, PcVariant::original}) {
            CountingOracle o(d);
            const auto r = pc_skeleton(o, complete_skeleton(n), variant);
            EXPECT_EQ(r.tests_performed, no_removal_count(n));
            EXPECT_EQ(r.skeleton.edge_count(), choose(n, 2));
            EXPECT_EQ(r.max_level_reached, static_cast<int>(n - 2));
        }
    }
    EXPECT_EQ(no_removal_count(4), 48u);
    EXPECT_EQ(no_removal_count(5), 160u);
}

TEST(PcSkeleton, SizeMismatchThrows) {
    const Dag d = chain_dag(4);
    CountingOracle o(d);
    EXPECT_THROW(pc_skeleton(o, complete_skeleton(3)), ParameterError);
}

TEST(PcSkeleton, TestsEqualOracleDelta) {
    const Dag d = generate_er(12, 0.25, 4);
    CountingOracle o(d);
    o.query(NodeId{0}, NodeId{1});
    const auto r = pc_skeleton(o, complete_skeleton(12));
    EXPECT_EQ(r.tests_performed + 1, o.queries_issued());
}

TEST(PcSkeleton, MatchesReferenceAndTrueSkeleton) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
        const std::size_t n = 4 + rng() % 9;
        const double p = std::array{1.0 / n, 2.0 / n, 0.3}[rng() % 3];
        const Dag d = oracle::random_dag(n, p, rng());
        for (auto variant : {PcVariant::stable, PcVariant::original}) {
            CountingOracle o(d);
            const auto r = pc_skeleton(o, complete_skeleton(n), variant);
            EXPECT_TRUE(r.skeleton.same_adjacency(Skeleton::of(d)));
            const auto [edges, tests] =
                oracle::reference_pc(n, complete_pairs(n), variant == PcVariant::stable, dsep_test(d));
            EXPECT_EQ(edge_set(r.skeleton), edges);
            EXPECT_EQ(r.tests_performed, tests);
        }
    }
}

TEST(PcSkeleton, SepsetsSeparate) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Dag d = generate_er(15, 0.25, seed);
        CountingOracle o(d);
        const auto r = pc_skeleton(o, complete_skeleton(15));
        for (const auto& [pair, s] : r.skeleton.sepsets()) {
            std::vector<std::size_t> idx;
            for (NodeId v : s) idx.push_back(v.index());
            EXPECT_TRUE(oracle::moral_dsep(d, pair.first, pair.second, idx));
        }
        EXPECT_EQ(r.skeleton.sepsets().size(), choose(15, 2) - r.skeleton.edge_count());
    }
}

TEST(PcSkeleton, Deterministic) {
    const Dag d = generate_er(20, 0.2, 8);
    CountingOracle o1(d), o2(d);
    const auto a = pc_skeleton(o1, complete_skeleton(20));
    const auto b = pc_skeleton(o2, complete_skeleton(20));
    EXPECT_EQ(a.tests_performed, b.tests_performed);
    EXPECT_EQ(a.skeleton.sepsets(), b.skeleton.sepsets());
}

// Starting from a sparser (still correct) skeleton rarely costs more tests.
TEST(PcSkeleton, FewerStartingEdgesRarelyCostMore) {
    std::mt19937_64 rng(23);
    int no_worse = 0;
    constexpr int instances = 200;
    for (int i = 0; i < instances; ++i) {
        const std::size_t n = 6 + rng() % 15;
        const Dag d = generate_er(n, 2.0 / n, rng());
        Skeleton sparse = complete_skeleton(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (!d.adjacent(NodeId{a}, NodeId{b}) && rng() % 2) sparse.remove_edge(NodeId{a}, NodeId{b});
        CountingOracle full_o(d), sparse_o(d);
        const auto full = pc_skeleton(full_o, complete_skeleton(n));
        const auto part = pc_skeleton(sparse_o, sparse);
        if (part.tests_performed <= full.tests_performed) ++no_worse;
        EXPECT_TRUE(part.skeleton.same_adjacency(Skeleton::of(d)));
    }
    EXPECT_GE(no_worse, instances * 95 / 100);
}
