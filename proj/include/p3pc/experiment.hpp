#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "p3pc/dag.hpp"
#include "p3pc/dsep.hpp"
#include "p3pc/parallel.hpp"
#include "p3pc/pc.hpp"
#include "p3pc/preproc.hpp"
#include "p3pc/rng.hpp"
#include "p3pc/theory.hpp"

namespace p3pc {

/// One algorithm run on one DAG.
struct RunReport {
    std::string dag;
    std::string algorithm;  // "pc", "p3pc" or "p3pc_summary"
    std::optional<std::uint64_t> seed;
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    std::uint64_t preproc_tests = 0;
    std::uint64_t pc_tests = 0;
    std::uint64_t total_tests = 0;
    std::size_t skeleton_edges = 0;
    /// total_tests over the PC-alone total on the same DAG.
    double ratio = 1.0;
    double wall_seconds = 0.0;
    /// Recovered skeleton equals the DAG's skeleton. Not part of CSV output.
    bool skeleton_exact = true;
};

inline const char* to_string(PcVariant v) { return v == PcVariant::stable ? "stable" : "original"; }

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace detail

inline RunReport run_pc_alone(const Dag& dag, const std::string& id, PcVariant variant) {
    const auto t0 = std::chrono::steady_clock::now();
    CountingOracle oracle(dag);
    const PcReport pc = pc_skeleton(oracle, complete_skeleton(dag.size()), variant);
    RunReport r;
    r.dag = id;
    r.algorithm = "pc";
    r.pc_tests = pc.tests_performed;
    r.total_tests = pc.tests_performed;
    r.skeleton_edges = pc.skeleton.edge_count();
    r.skeleton_exact = pc.skeleton.same_adjacency(Skeleton::of(dag));
    r.wall_seconds = detail::seconds_since(t0);
    return r;
}

inline RunReport run_p3pc_report(const Dag& dag, const std::string& id, const PreprocConfig& cfg, PcVariant variant,
                                 std::uint64_t pc_alone_total) {
    const auto t0 = std::chrono::steady_clock::now();
    CountingOracle oracle(dag);
    const P3pcReport p = run_p3pc(oracle, cfg, variant);
    RunReport r;
    r.dag = id;
    r.algorithm = "p3pc";
    r.seed = cfg.seed;
    r.c1 = cfg.c1;
    r.c2 = cfg.c2;
    r.preproc_tests = p.preproc_tests;
    r.pc_tests = p.pc_tests;
    r.total_tests = p.total_tests;
    r.skeleton_edges = p.pc.skeleton.edge_count();
    r.skeleton_exact = p.pc.skeleton.same_adjacency(Skeleton::of(dag));
    r.ratio = pc_alone_total == 0 ? 1.0 : static_cast<double>(p.total_tests) / static_cast<double>(pc_alone_total);
    r.wall_seconds = detail::seconds_since(t0);
    return r;
}

// ---------------------------------------------------------------------------
// compare

struct CompareConfig {
    std::size_t c1 = 3;
    std::size_t c2 = 4;
    std::vector<std::uint64_t> seeds;
    PcVariant variant = PcVariant::stable;
    unsigned jobs = 1;
};

struct CompareResult {
    RunReport pc;
    std::vector<RunReport> p3pc;
    /// Column sums over the p3pc rows; ratio = sum(total) / (runs * pc total).
    RunReport summary;
    /// Every run's skeleton equals the DAG's skeleton.
    bool skeletons_exact = true;
};

/// PC alone once, then P3PC once per seed.
inline CompareResult compare(const Dag& dag, const std::string& id, const CompareConfig& cfg) {
    if (cfg.seeds.empty()) throw ParameterError("compare: at least one seed required");
    validate(PreprocConfig{cfg.c1, cfg.c2, 0}, dag.size());

    CompareResult out;
    out.pc = run_pc_alone(dag, id, cfg.variant);
    out.pc.c1 = cfg.c1;
    out.pc.c2 = cfg.c2;
    out.p3pc.resize(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), cfg.jobs, [&](std::size_t i) {
        out.p3pc[i] = run_p3pc_report(dag, id, PreprocConfig{cfg.c1, cfg.c2, cfg.seeds[i]}, cfg.variant,
                                      out.pc.total_tests);
    });
    out.skeletons_exact = out.pc.skeleton_exact;
    for (const auto& r : out.p3pc) out.skeletons_exact = out.skeletons_exact && r.skeleton_exact;

    RunReport& s = out.summary;
    s.dag = id;
    s.algorithm = "p3pc_summary";
    s.c1 = cfg.c1;
    s.c2 = cfg.c2;
    s.skeleton_edges = out.pc.skeleton_edges;
    for (const auto& r : out.p3pc) {
        s.preproc_tests += r.preproc_tests;
        s.pc_tests += r.pc_tests;
        s.total_tests += r.total_tests;
        s.wall_seconds += r.wall_seconds;
    }
    const double denom = static_cast<double>(out.p3pc.size()) * static_cast<double>(out.pc.total_tests);
    s.ratio = denom == 0.0 ? 1.0 : static_cast<double>(s.total_tests) / denom;
    return out;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepSpec {
    std::vector<std::size_t> n_values{10, 15, 20, 25};
    /// Target edges per node; p = 2m / (n - 1), capped at 1. Ignored when
    /// p_values is non-empty.
    std::vector<double> edge_multipliers{0.5, 1.0, 1.5, 2.0};
    std::vector<double> p_values;
    std::size_t replicates = 100;
    std::uint64_t base_seed = 0;
};

struct SweepPoint {
    std::size_t n = 0;
    std::size_t bucket = 0;  // index into the multiplier or p list
    std::size_t replicate = 0;
    std::uint64_t seed = 0;  // DAG seed = derive(seed, {0}); pre-processing seed = derive(seed, {1})
    double p = 0.0;
    RunReport pc;
    RunReport p3pc;
    bool skeletons_exact = true;
};

struct BucketSummary {
    std::string label;
    std::size_t points = 0;
    double mean_ratio = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::size_t below_diagonal = 0;
    double fraction_below = 0.0;
    std::vector<BucketSummary> buckets;
};

inline void validate(const SweepSpec& spec) {
    if (spec.replicates < 1) throw ParameterError("sweep: replicates must be >= 1");
    if (spec.n_values.empty()) throw ParameterError("sweep: no n values");
    if (spec.p_values.empty() && spec.edge_multipliers.empty()) throw ParameterError("sweep: no p or edge multipliers");
    for (auto n : spec.n_values)
        if (n < 2) throw ParameterError("sweep: n must be >= 2");
    for (double p : spec.p_values)
        if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("sweep: p must lie in [0, 1]");
    for (double m : spec.edge_multipliers)
        if (!(m >= 0.0)) throw ParameterError("sweep: edge multipliers must be >= 0");
}

inline std::string bucket_label(const SweepSpec& spec, std::size_t bucket) {
    char buf[64];
    if (spec.p_values.empty()) {
        std::snprintf(buf, sizeof buf, "m%g", spec.edge_multipliers[bucket]);
    } else {
        std::snprintf(buf, sizeof buf, "p%g", spec.p_values[bucket]);
    }
    return buf;
}

/// Each replicate generates an ER DAG and runs both algorithms on it. Points
/// are ordered (n, bucket, replicate) whatever `jobs` is.
inline SweepResult sweep(const SweepSpec& spec, std::size_t c1, std::size_t c2, PcVariant variant, unsigned jobs = 1) {
    validate(spec);
    const std::size_t buckets = spec.p_values.empty() ? spec.edge_multipliers.size() : spec.p_values.size();
    for (auto n : spec.n_values) validate(PreprocConfig{c1, c2, 0}, n);

    SweepResult out;
    for (std::size_t ni = 0; ni < spec.n_values.size(); ++ni) {
        for (std::size_t bi = 0; bi < buckets; ++bi) {
            for (std::size_t r = 0; r < spec.replicates; ++r) {
                SweepPoint pt;
                pt.n = spec.n_values[ni];
                pt.bucket = bi;
                pt.replicate = r;
                pt.seed = derive_seed(spec.base_seed, {pt.n, bi, r});
                pt.p = spec.p_values.empty()
                           ? std::min(1.0, 2.0 * spec.edge_multipliers[bi] / static_cast<double>(pt.n - 1))
                           : spec.p_values[bi];
                out.points.push_back(pt);
            }
        }
    }

    parallel_for(out.points.size(), jobs, [&](std::size_t i) {
        SweepPoint& pt = out.points[i];
        char id[96];
        std::snprintf(id, sizeof id, "er-n%zu-%s-r%03zu", pt.n, bucket_label(spec, pt.bucket).c_str(), pt.replicate);
        const Dag dag = generate_er(pt.n, pt.p, derive_seed(pt.seed, {0}));
        pt.pc = run_pc_alone(dag, id, variant);
        pt.pc.seed = pt.seed;
        pt.pc.c1 = c1;
        pt.pc.c2 = c2;
        pt.p3pc = run_p3pc_report(dag, id, PreprocConfig{c1, c2, derive_seed(pt.seed, {1})}, variant,
                                  pt.pc.total_tests);
        pt.p3pc.seed = pt.seed;
        pt.skeletons_exact = pt.pc.skeleton_exact && pt.p3pc.skeleton_exact;
    });

    std::vector<double> ratio_sum(buckets, 0.0);
    std::vector<std::size_t> count(buckets, 0);
    for (const auto& pt : out.points) {
        if (pt.p3pc.total_tests < pt.pc.total_tests) ++out.below_diagonal;
        ratio_sum[pt.bucket] += pt.p3pc.ratio;
        ++count[pt.bucket];
    }
    out.fraction_below = static_cast<double>(out.below_diagonal) / static_cast<double>(out.points.size());
    for (std::size_t b = 0; b < buckets; ++b) {
        out.buckets.push_back({bucket_label(spec, b), count[b], ratio_sum[b] / static_cast<double>(count[b])});
    }
    return out;
}

// ---------------------------------------------------------------------------
// output

inline constexpr const char* csv_header = "dag,algorithm,seed,c1,c2,preproc_tests,pc_tests,total_tests,skeleton_edges,ratio";

inline std::string csv_row(const RunReport& r) {
    std::string s = r.dag + ',' + r.algorithm + ',';
    if (r.seed) s += std::to_string(*r.seed);
    s += ',' + std::to_string(r.c1) + ',' + std::to_string(r.c2) + ',' + std::to_string(r.preproc_tests) + ',' +
         std::to_string(r.pc_tests) + ',' + std::to_string(r.total_tests) + ',' + std::to_string(r.skeleton_edges) +
         ',' + detail::fixed(r.ratio);
    return s;
}

inline nlohmann::ordered_json to_json(const RunReport& r, bool timing) {
    nlohmann::ordered_json j;
    j["dag"] = r.dag;
    j["algorithm"] = r.algorithm;
    j["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nlohmann::ordered_json(nullptr);
    j["c1"] = r.c1;
    j["c2"] = r.c2;
    j["preproc_tests"] = r.preproc_tests;
    j["pc_tests"] = r.pc_tests;
    j["total_tests"] = r.total_tests;
    j["skeleton_edges"] = r.skeleton_edges;
    j["ratio"] = r.ratio;
    if (timing) j["wall_seconds"] = r.wall_seconds;
    return j;
}

inline std::string render_csv(const CompareResult& c) {
    std::string out = std::string(csv_header) + '\n';
    out += csv_row(c.pc) + '\n';
    for (const auto& r : c.p3pc) out += csv_row(r) + '\n';
    out += csv_row(c.summary) + '\n';
    return out;
}

inline std::string render_json(const CompareResult& c, bool timing = false) {
    nlohmann::ordered_json j;
    j["pc"] = to_json(c.pc, timing);
    j["p3pc"] = nlohmann::ordered_json::array();
    for (const auto& r : c.p3pc) j["p3pc"].push_back(to_json(r, timing));
    j["summary"] = to_json(c.summary, timing);
    j["skeletons_exact"] = c.skeletons_exact;
    return j.dump(2) + '\n';
}

inline std::string render_csv(const SweepResult& s) {
    std::string out = std::string(csv_header) + '\n';
    for (const auto& pt : s.points) {
        out += csv_row(pt.pc) + '\n';
        out += csv_row(pt.p3pc) + '\n';
    }
    return out;
}

inline std::string render_summary(const SweepResult& s) {
    std::string out = "points " + std::to_string(s.points.size()) + ", below diagonal " +
                      std::to_string(s.below_diagonal) + " (" + detail::fixed(s.fraction_below, 4) + ")\n";
    for (const auto& b : s.buckets) {
        out += "  " + b.label + ": points " + std::to_string(b.points) + ", mean ratio " + detail::fixed(b.mean_ratio, 4) + '\n';
    }
    return out;
}

inline std::string render_json(const SweepResult& s, bool timing = false) {
    nlohmann::ordered_json j;
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& pt : s.points) {
        nlohmann::ordered_json p;
        p["n"] = pt.n;
        p["p"] = pt.p;
        p["replicate"] = pt.replicate;
        p["pc"] = to_json(pt.pc, timing);
        p["p3pc"] = to_json(pt.p3pc, timing);
        p["skeletons_exact"] = pt.skeletons_exact;
        j["points"].push_back(std::move(p));
    }
    j["below_diagonal"] = s.below_diagonal;
    j["fraction_below"] = s.fraction_below;
    j["buckets"] = nlohmann::ordered_json::array();
    for (const auto& b : s.buckets) j["buckets"].push_back({{"label", b.label}, {"points", b.points}, {"mean_ratio", b.mean_ratio}});
    return j.dump(2) + '\n';
}

// ---------------------------------------------------------------------------
// theory report

struct TheoryGrid {
    std::vector<std::size_t> n_values{8, 10, 12};
    std::vector<double> p_values{0.1, 0.2, 0.3};
    std::vector<std::size_t> max_lens{3, 6};
    std::size_t mc_reps = 10'000;
    std::vector<std::size_t> asymptotic_n{500, 2000, 10000};
    std::size_t stmt1_dags = 100;
    std::size_t stmt1_n = 12;
    double stmt1_p = 0.4;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct TrailRow {
    std::size_t n;
    double p;
    std::size_t max_len;
    double exact;
    /// Summation through k = max_len (one length longer), as printed in the bound's derivation.
    double exact_one_longer;
    TrailsBound bound;
    McEstimate mc;
};

struct ColliderRow {
    std::size_t n;
    double p;
    double binomial_sum;
    double closed_form;
    std::optional<double> paper_form;
    McEstimate mc;
};

struct AsymptoticRow {
    std::size_t n;
    double expected_colliders;
    double per_node;
};

struct TheoryReport {
    std::vector<TrailRow> trails;
    std::vector<ColliderRow> colliders;
    std::vector<AsymptoticRow> asymptotic;
    std::size_t stmt1_dags = 0;
    std::size_t stmt1_verified = 0;
    std::size_t stmt1_counterexamples = 0;
    std::size_t stmt1_inconclusive = 0;
    std::uint64_t stmt1_path_set_checks = 0;
};

inline TheoryReport run_theory(const TheoryGrid& g) {
    TheoryReport rep;
    std::uint64_t cell = 0;
    for (auto n : g.n_values) {
        for (double p : g.p_values) {
            const ErParams params{n, p};
            for (auto len : g.max_lens) {
                if (len + 1 > n) continue;
                TrailRow row{n, p, len, expected_trails_upto(params, len),
                             len + 2 <= n ? expected_trails_upto(params, len + 1) : std::nan(""),
                             trails_bound(params, len), {}};
                row.mc = mc_trail_count(params, len, g.mc_reps, derive_seed(g.seed, {1, cell++}), g.jobs);
                rep.trails.push_back(row);
            }
            ColliderRow c{n, p, expected_colliders(params), expected_colliders_closed_form(params), std::nullopt, {}};
            if (p > 0.0) c.paper_form = paper_closed_form(params);
            c.mc = mc_collider_count(params, g.mc_reps, derive_seed(g.seed, {2, cell++}), g.jobs);
            rep.colliders.push_back(c);
        }
    }
    for (auto n : g.asymptotic_n) {
        const double e = expected_colliders({n, 1.0 / static_cast<double>(n)});
        rep.asymptotic.push_back({n, e, e / static_cast<double>(n)});
    }

    rep.stmt1_dags = g.stmt1_dags;
    std::vector<Statement1Result> results(g.stmt1_dags);
    parallel_for(g.stmt1_dags, g.jobs, [&](std::size_t i) {
        results[i] = check_statement1(generate_er(g.stmt1_n, g.stmt1_p, derive_seed(g.seed, {3, i})));
    });
    for (const auto& r : results) {
        rep.stmt1_path_set_checks += r.path_set_checks;
        switch (r.verdict) {
            case Verdict::verified: ++rep.stmt1_verified; break;
            case Verdict::counterexample: ++rep.stmt1_counterexamples; break;
            case Verdict::inconclusive: ++rep.stmt1_inconclusive; break;
        }
    }
    return rep;
}

inline std::string render_text(const TheoryReport& r) {
    using detail::fixed;
    std::string out;
    out += "# Expected trails between a fixed pair (node-distinct, length <= L)\n";
    out += "n,p,L,exact,exact_L_plus_1,geometric_bound,power_bound,mc_mean,mc_se,mc_agrees,exact_le_bound\n";
    for (const auto& t : r.trails) {
        out += std::to_string(t.n) + ',' + fixed(t.p, 4) + ',' + std::to_string(t.max_len) + ',' + fixed(t.exact) + ',' +
               (std::isnan(t.exact_one_longer) ? std::string("") : fixed(t.exact_one_longer)) + ',' + fixed(t.bound.geometric) + ',' +
               (t.bound.power_form ? fixed(*t.bound.power_form) : std::string("")) + ',' + fixed(t.mc.mean) + ',' +
               fixed(t.mc.std_error) + ',' + (t.mc.agrees_with(t.exact) ? "yes" : "no") + ',' +
               (t.exact <= t.bound.geometric ? "yes" : "no") + '\n';
    }
    out += "\n# Expected colliders (nodes with >= 2 parents)\n";
    out += "n,p,binomial_sum,closed_form,printed_form,printed_minus_sum,mc_mean,mc_se,mc_agrees\n";
    for (const auto& c : r.colliders) {
        out += std::to_string(c.n) + ',' + fixed(c.p, 4) + ',' + fixed(c.binomial_sum) + ',' + fixed(c.closed_form) + ',' +
               (c.paper_form ? fixed(*c.paper_form) : std::string("")) + ',' +
               (c.paper_form ? fixed(*c.paper_form - c.binomial_sum) : std::string("")) + ',' + fixed(c.mc.mean) + ',' +
               fixed(c.mc.std_error) + ',' + (c.mc.agrees_with(c.binomial_sum) ? "yes" : "no") + '\n';
    }
    out += "\n# Expected colliders at p = 1/n (limit 3/e - 1 = " + fixed(3.0 / std::exp(1.0) - 1.0) + ")\n";
    out += "n,expected_colliders,per_node\n";
    for (const auto& a : r.asymptotic) {
        out += std::to_string(a.n) + ',' + fixed(a.expected_colliders) + ',' + fixed(a.per_node) + '\n';
    }
    out += "\n# Large conditioning sets versus trails of length >= 7\n";
    out += "dags " + std::to_string(r.stmt1_dags) + ", verified " + std::to_string(r.stmt1_verified) + ", counterexamples " +
           std::to_string(r.stmt1_counterexamples) + ", inconclusive " + std::to_string(r.stmt1_inconclusive) +
           ", path-set checks " + std::to_string(r.stmt1_path_set_checks) + '\n';
    out += std::string("verdict: ") +
           (r.stmt1_counterexamples ? "counterexample" : r.stmt1_inconclusive ? "inconclusive" : "verified") + '\n';
    return out;
}

inline std::string render_json(const TheoryReport& r) {
    nlohmann::ordered_json j;
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr); };
    j["trails"] = nlohmann::ordered_json::array();
    for (const auto& t : r.trails) {
        j["trails"].push_back({{"n", t.n},
                               {"p", t.p},
                               {"max_len", t.max_len},
                               {"exact", t.exact},
                               {"exact_one_longer", std::isnan(t.exact_one_longer) ? nlohmann::ordered_json(nullptr)
                                                                                   : nlohmann::ordered_json(t.exact_one_longer)},
                               {"geometric_bound", t.bound.geometric},
                               {"power_bound", opt(t.bound.power_form)},
                               {"mc_mean", t.mc.mean},
                               {"mc_std_error", t.mc.std_error},
                               {"mc_replicates", t.mc.replicates}});
    }
    j["colliders"] = nlohmann::ordered_json::array();
    for (const auto& c : r.colliders) {
        j["colliders"].push_back({{"n", c.n},
                                  {"p", c.p},
                                  {"binomial_sum", c.binomial_sum},
                                  {"closed_form", c.closed_form},
                                  {"printed_form", opt(c.paper_form)},
                                  {"mc_mean", c.mc.mean},
                                  {"mc_std_error", c.mc.std_error}});
    }
    j["asymptotic"] = nlohmann::ordered_json::array();
    for (const auto& a : r.asymptotic) {
        j["asymptotic"].push_back({{"n", a.n}, {"expected_colliders", a.expected_colliders}, {"per_node", a.per_node}});
    }
    j["long_trails"] = {{"dags", r.stmt1_dags},
                        {"verified", r.stmt1_verified},
                        {"counterexamples", r.stmt1_counterexamples},
                        {"inconclusive", r.stmt1_inconclusive},
                        {"path_set_checks", r.stmt1_path_set_checks}};
    return j.dump(2) + '\n';
}

}  // namespace p3pc
