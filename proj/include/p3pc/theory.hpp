#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "p3pc/combinatorics.hpp"
#include "p3pc/dag.hpp"
#include "p3pc/error.hpp"
#include "p3pc/parallel.hpp"
#include "p3pc/rng.hpp"
#include "p3pc/trail.hpp"

namespace p3pc {

struct ErParams {
    std::size_t n = 1;
    double p = 0.0;
};

inline void validate(const ErParams& params) {
    if (params.n < 1) throw ParameterError("ErParams: n must be >= 1");
    if (!(params.p >= 0.0 && params.p <= 1.0)) throw ParameterError("ErParams: p must lie in [0, 1]");
}

// ---------------------------------------------------------------------------
// Short trails

/// Exact expected number of node-distinct trails of length <= max_len between
/// a fixed pair of an ER DAG: sum over k = 0 .. max_len - 1 intermediates of
/// k! C(n-2, k) p^(k+1).
inline double expected_trails_upto(const ErParams& params, std::size_t max_len) {
    validate(params);
    if (max_len < 1 || max_len + 1 > params.n) {
        throw ParameterError("expected_trails_upto: need 1 <= max_len <= n - 1");
    }
    double total = 0.0;
    double term = params.p;  // k = 0
    for (std::size_t k = 0; k < max_len; ++k) {
        total += term;
        // k! C(n-2, k) is the falling factorial (n-2)(n-3)...(n-1-k).
        term *= static_cast<double>(params.n - 2 - k) * params.p;
    }
    return total;
}

struct TrailsBound {
    /// p * sum_{j=0}^{max_len} (pn)^j
    double geometric = 0.0;
    /// (max_len + 1) n^max_len p^(max_len + 1); only meaningful when p >= 1/n.
    std::optional<double> power_form;
};

inline TrailsBound trails_bound(const ErParams& params, std::size_t max_len) {
    validate(params);
    const double pn = params.p * static_cast<double>(params.n);
    TrailsBound b;
    double power = 1.0;
    for (std::size_t j = 0; j <= max_len; ++j) {
        b.geometric += power;
        power *= pn;
    }
    b.geometric *= params.p;
    if (pn >= 1.0) {
        b.power_form = static_cast<double>(max_len + 1) * std::pow(static_cast<double>(params.n), static_cast<double>(max_len)) *
                       std::pow(params.p, static_cast<double>(max_len + 1));
    }
    return b;
}

// ---------------------------------------------------------------------------
// Colliders

/// P(Bin(i - 1, p) >= 2): probability that v_i has at least two parents.
inline double collider_probability(std::size_t i, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("collider_probability: p must lie in [0, 1]");
    if (i < 3) return 0.0;
    if (p == 1.0) return 1.0;
    const double m = static_cast<double>(i - 1);
    const double log_q = std::log1p(-p);
    const double none = std::exp(m * log_q);
    const double one = m * p * std::exp((m - 1.0) * log_q);
    const double v = 1.0 - none - one;
    return v < 0.0 ? 0.0 : v;
}

/// sum_{i=3}^{n} P(Bin(i-1, p) >= 2)
inline double expected_colliders(const ErParams& params) {
    validate(params);
    double total = 0.0;
    for (std::size_t i = 3; i <= params.n; ++i) total += collider_probability(i, params.p);
    return total;
}

/// Closed form of expected_colliders with q = 1 - p, p > 0:
///   (n - 2) + p - (q^2 - q^n)/p - (1 - n q^(n-1) + (n-1) q^n)/p
inline double expected_colliders_closed_form(const ErParams& params) {
    validate(params);
    if (params.n < 3) return 0.0;
    if (params.p == 0.0) return 0.0;
    const double n = static_cast<double>(params.n);
    const double p = params.p;
    const double q = 1.0 - p;
    const double qn = std::pow(q, n);
    const double qn1 = std::pow(q, n - 1.0);
    return (n - 2.0) + p - (q * q - qn) / p - (1.0 - n * qn1 + (n - 1.0) * qn) / p;
}

/// The simplification as printed alongside the collider statement, evaluated
/// verbatim: n q^n - q^n + 2(q^n - 1)/p + n - p^2 + 1. Requires p > 0.
inline double paper_closed_form(const ErParams& params) {
    validate(params);
    if (params.p == 0.0) throw ParameterError("paper_closed_form: undefined at p = 0");
    const double n = static_cast<double>(params.n);
    const double p = params.p;
    const double qn = std::pow(1.0 - p, n);
    return n * qn - qn + 2.0 * (qn - 1.0) / p + n - p * p + 1.0;
}

// ---------------------------------------------------------------------------
// Monte-Carlo

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t replicates = 0;

    /// |mean - expected| <= k standard errors. A zero standard error demands
    /// an exact match up to rounding.
    bool agrees_with(double expected, double k = 3.0) const {
        const double slack = k * std_error + 1e-12 * std::max(1.0, std::abs(expected));
        return std::abs(mean - expected) <= slack;
    }
};

/// Mean and standard error of sample(r) for r in [0, reps). Samples are
/// stored per replicate and reduced in index order so the result does not
/// depend on `jobs`.
template <class Sample>
McEstimate monte_carlo(std::size_t reps, unsigned jobs, Sample&& sample) {
    if (reps < 2) throw ParameterError("monte_carlo: need at least 2 replicates");
    std::vector<double> values(reps);
    parallel_for(reps, jobs, [&](std::size_t r) { values[r] = sample(r); });
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(reps);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(reps - 1);
    return {mean, std::sqrt(var / static_cast<double>(reps)), reps};
}

/// Node-distinct trails of length <= max_len between v_1 and v_n over fresh
/// ER draws; replicate r uses seed derive_seed(seed, {r}).
inline McEstimate mc_trail_count(const ErParams& params, std::size_t max_len, std::size_t reps, std::uint64_t seed,
                                 unsigned jobs = 1) {
    validate(params);
    if (params.n < 2) throw ParameterError("mc_trail_count: need n >= 2");
    return monte_carlo(reps, jobs, [&](std::size_t r) {
        const Dag dag = generate_er(params.n, params.p, derive_seed(seed, {r}));
        return static_cast<double>(
            count_trails(dag, NodeId{0}, NodeId{params.n - 1}, max_len, TrailKind::node_distinct));
    });
}

/// |collider_nodes| over fresh ER draws.
inline McEstimate mc_collider_count(const ErParams& params, std::size_t reps, std::uint64_t seed, unsigned jobs = 1) {
    validate(params);
    return monte_carlo(reps, jobs, [&](std::size_t r) {
        const Dag dag = generate_er(params.n, params.p, derive_seed(seed, {r}));
        return static_cast<double>(collider_nodes(dag).size());
    });
}

// ---------------------------------------------------------------------------
// Long trails versus large conditioning sets

struct Statement1Options {
    /// Conditioning sets have n - set_deficit members.
    std::size_t set_deficit = 4;
    /// Shortest trail length examined.
    std::size_t min_length = 7;
    /// Paths inspected per pair before the pair is declared inconclusive.
    std::size_t max_paths_per_pair = 2'000'000;
    /// Number of pairs to sample; 0 checks every pair.
    std::size_t sampled_pairs = 0;
    std::uint64_t seed = 0;
};

enum class Verdict { verified, counterexample, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::verified: return "verified";
        case Verdict::counterexample: return "counterexample";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Statement1Result {
    Verdict verdict = Verdict::verified;
    std::size_t pairs_checked = 0;
    std::size_t paths_checked = 0;
    std::uint64_t path_set_checks = 0;
    /// Set when verdict == counterexample.
    std::optional<Trail> open_trail;
    std::optional<NodeSet> open_set;
};

/// Checks that every conditioning set of size n - set_deficit (drawn from
/// V \ {a, b}) blocks every node-distinct trail of length >= min_length,
/// using the full blocking rule: a non-collider in S blocks, and a collider
/// blocks unless it or one of its descendants is in S.
///
/// Every set is enumerated by choosing which set_deficit - 2 nodes of
/// V \ {a, b} to leave out. Node masks are 64-bit, so n <= 64.
inline Statement1Result check_statement1(const Dag& dag, const Statement1Options& opt = {}) {
    const std::size_t n = dag.size();
    if (n < 9) throw ParameterError("check_statement1: need n >= 9");
    if (n > 64) throw ParameterError("check_statement1: n > 64 not supported");
    if (opt.set_deficit < 2 || opt.set_deficit > n) throw ParameterError("check_statement1: bad set_deficit");

    using Mask = std::uint64_t;
    auto bit = [](NodeId v) { return Mask{1} << v.index(); };
    const Mask all = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;

    // activation[v]: v together with its descendants.
    std::vector<Mask> activation(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        const auto desc = dag.descendants(NodeId{v});
        Mask m = Mask{1} << v;
        for (std::size_t u = 0; u < n; ++u)
            if (desc[u]) m |= Mask{1} << u;
        activation[v] = m;
    }

    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(NodeId{a}, NodeId{b});
    if (opt.sampled_pairs > 0 && opt.sampled_pairs < pairs.size()) {
        Rng rng(opt.seed);
        for (std::size_t i = 0; i < opt.sampled_pairs; ++i) {
            std::swap(pairs[i], pairs[i + rng.below(pairs.size() - i)]);
        }
        pairs.resize(opt.sampled_pairs);
    }

    Statement1Result result;
    const std::size_t left_out = opt.set_deficit - 2;
    for (auto [a, b] : pairs) {
        std::vector<NodeId> pool;
        for (std::size_t v = 0; v < n; ++v)
            if (v != a.index() && v != b.index()) pool.emplace_back(v);
        // Every admissible S, as a mask.
        std::vector<Mask> sets;
        for_each_combination(std::span<const NodeId>(pool), left_out, [&](const std::vector<NodeId>& out) {
            Mask s = all & ~bit(a) & ~bit(b);
            for (NodeId v : out) s &= ~bit(v);
            sets.push_back(s);
            return true;
        });

        std::size_t paths = 0;
        bool capped = false;
        visit_trails(dag, a, b, n - 1, TrailKind::node_distinct, [&](const Trail& t) {
            if (t.length() < opt.min_length) return true;
            if (++paths > opt.max_paths_per_pair) {
                capped = true;
                return false;
            }
            Mask non_colliders = 0;
            std::vector<Mask> colliders;
            for (std::size_t i = 1; i + 1 < t.nodes.size(); ++i) {
                if (t.is_collider_at(i)) {
                    colliders.push_back(activation[t.nodes[i].index()]);
                } else {
                    non_colliders |= bit(t.nodes[i]);
                }
            }
            for (Mask s : sets) {
                ++result.path_set_checks;
                if (non_colliders & s) continue;
                bool open = true;
                for (Mask c : colliders) {
                    if (!(c & s)) {
                        open = false;
                        break;
                    }
                }
                if (open) {
                    result.verdict = Verdict::counterexample;
                    result.open_trail = t;
                    NodeSet members;
                    for (std::size_t v = 0; v < n; ++v)
                        if (s & (Mask{1} << v)) members.emplace_back(v);
                    result.open_set = std::move(members);
                    return false;
                }
            }
            return true;
        });
        result.paths_checked += std::min(paths, opt.max_paths_per_pair);
        ++result.pairs_checked;
        if (result.verdict == Verdict::counterexample) return result;
        if (capped) result.verdict = Verdict::inconclusive;
    }
    return result;
}

}  // namespace p3pc
