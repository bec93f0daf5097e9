#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "p3pc/dag.hpp"
#include "p3pc/dsep.hpp"
#include "p3pc/error.hpp"
#include "p3pc/parallel.hpp"
#include "p3pc/pc.hpp"
#include "p3pc/rng.hpp"

namespace p3pc {

struct PreprocConfig {
    /// Random large conditioning sets tried per pair.
    std::size_t c1 = 3;
    /// Size deficit: each set has n - c2 members.
    std::size_t c2 = 4;
    std::uint64_t seed = 0;
};

inline void validate(const PreprocConfig& cfg, std::size_t n) {
    if (cfg.c1 < 1) throw ParameterError("preprocess: c1 must be >= 1");
    if (cfg.c2 < 2 || cfg.c2 > n) {
        throw ParameterError("preprocess: c2 must satisfy 2 <= c2 <= n (c2 = " + std::to_string(cfg.c2) +
                             ", n = " + std::to_string(n) + ")");
    }
}

/// Outcome for one unordered pair.
struct PairDecision {
    NodeId a;
    NodeId b;
    /// Set that separated the pair (empty for the marginal test); nullopt if none did.
    std::optional<NodeSet> separating_set;
    std::uint32_t tests = 0;
};

struct PreprocResult {
    std::size_t n = 0;
    /// Row-major n x n; 0 = found separable, 1 otherwise. Diagonal stays 1.
    std::vector<std::uint8_t> p;
    std::uint64_t tests_performed = 0;
    /// One entry per unordered pair, in lexicographic (a, b) order.
    std::vector<PairDecision> trace;

    std::uint8_t at(NodeId a, NodeId b) const { return p.at(a.index() * n + b.index()); }
};

/// Draws a uniform size-k subset of `pool` by a partial Fisher-Yates shuffle
/// of a fresh copy: for j < k swap slot j with slot j + below(m - j).
/// Consumes exactly k bounded draws. Returned set is sorted.
inline NodeSet draw_subset(Rng& rng, const std::vector<NodeId>& pool, std::size_t k) {
    std::vector<NodeId> work = pool;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t r = j + static_cast<std::size_t>(rng.below(work.size() - j));
        std::swap(work[j], work[r]);
    }
    NodeSet s(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(s.begin(), s.end());
    return s;
}

/// Decision for a single pair. The random stream is seeded from
/// (cfg.seed, a, b) alone, and sets are drawn lazily, one per test.
inline PairDecision preprocess_pair(CountingOracle& oracle, const PreprocConfig& cfg, NodeId a, NodeId b) {
    const std::size_t n = oracle.dag().size();
    PairDecision d{a, b, std::nullopt, 0};

    ++d.tests;
    if (oracle.query(a, b)) {
        d.separating_set = NodeSet{};
        return d;
    }

    std::vector<NodeId> pool;
    pool.reserve(n - 2);
    for (std::size_t v = 0; v < n; ++v)
        if (v != a.index() && v != b.index()) pool.emplace_back(v);

    Rng rng(derive_seed(cfg.seed, {a.index(), b.index()}));
    const std::size_t k = n - cfg.c2;
    for (std::size_t i = 0; i < cfg.c1; ++i) {
        NodeSet s = draw_subset(rng, pool, k);
        ++d.tests;
        if (oracle.query(a, b, s)) {
            d.separating_set = std::move(s);
            return d;
        }
    }
    return d;
}

/// Large-conditioning-set screen run before PC.
///
/// For each unordered pair {a, b} (a < b, lexicographic): test a _||_ b
/// marginally; if dependent, test up to c1 random sets of size n - c2 drawn
/// from V \ {a, b}, stopping at the first independence. Separable pairs get
/// p = 0. Per-pair RNG streams make the result independent of `jobs`.
inline PreprocResult preprocess(CountingOracle& oracle, const PreprocConfig& cfg, unsigned jobs = 1) {
    const std::size_t n = oracle.dag().size();
    validate(cfg, n);
    const std::uint64_t before = oracle.queries_issued();

    PreprocResult result;
    result.n = n;
    result.p.assign(n * n, 1);
    result.trace.reserve(n * (n - 1) / 2);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) result.trace.push_back({NodeId{a}, NodeId{b}, std::nullopt, 0});

    parallel_for(result.trace.size(), jobs, [&](std::size_t i) {
        const auto& slot = result.trace[i];
        result.trace[i] = preprocess_pair(oracle, cfg, slot.a, slot.b);
    });

    for (const auto& d : result.trace) {
        if (!d.separating_set) continue;
        result.p[d.a.index() * n + d.b.index()] = 0;
        result.p[d.b.index() * n + d.a.index()] = 0;
    }
    result.tests_performed = oracle.queries_issued() - before;
    return result;
}

/// Skeleton with a-b present iff p[a][b] = 1; removed pairs carry their
/// separating set from the trace.
inline Skeleton seed_skeleton(const PreprocResult& pre) {
    Skeleton s = Skeleton::complete(pre.n);
    for (const auto& d : pre.trace) {
        if (d.separating_set) s.remove_edge(d.a, d.b, *d.separating_set);
    }
    return s;
}

struct P3pcReport {
    PreprocResult preproc;
    PcReport pc;
    std::uint64_t preproc_tests = 0;
    std::uint64_t pc_tests = 0;
    std::uint64_t total_tests = 0;
};

/// Pre-processing followed by PC started from the screened skeleton.
inline P3pcReport run_p3pc(CountingOracle& oracle, const PreprocConfig& cfg, PcVariant variant = PcVariant::stable,
                           unsigned jobs = 1) {
    const std::uint64_t before = oracle.queries_issued();
    P3pcReport r;
    r.preproc = preprocess(oracle, cfg, jobs);
    r.pc = pc_skeleton(oracle, seed_skeleton(r.preproc), variant);
    r.preproc_tests = r.preproc.tests_performed;
    r.pc_tests = r.pc.tests_performed;
    r.total_tests = oracle.queries_issued() - before;
    return r;
}

}  // namespace p3pc
