// Command-line harness: compare PC with P3PC on bundled or generated DAGs,
// sweep random DAGs, evaluate the ER theory, and answer one-off queries.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "p3pc/dsep.hpp"
#include "p3pc/experiment.hpp"
#include "p3pc/ingest.hpp"

#ifndef P3PC_DATA_DIR
#define P3PC_DATA_DIR "data"
#endif

namespace {

using namespace p3pc;

struct Globals {
    std::uint64_t seed = 0;
    std::size_t c1 = 3;
    std::size_t c2 = 4;
    std::string format = "csv";
    unsigned jobs = 1;
    std::string out;
    std::string pc_variant = "stable";
    std::string data_dir = P3PC_DATA_DIR;
    bool timing = false;
};

PcVariant parse_variant(const std::string& s) { return s == "original" ? PcVariant::original : PcVariant::stable; }

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + g.out + "'");
    f << text;
}

// A path to an edge-list file, or the id of a bundled network.
Dag load_dag(const Globals& g, const std::string& source, std::string& id) {
    if (std::filesystem::exists(source)) {
        id = std::filesystem::path(source).stem().string();
        return load_dag_file(source);
    }
    if (auto net = find_bundled(source)) {
        id = std::string(net->id);
        const auto path = bundled_path(g.data_dir, *net);
        if (!std::filesystem::exists(path)) {
            throw std::runtime_error("bundled network '" + id + "' has no data file at " + path.string());
        }
        return load_dag_file(path);
    }
    throw std::runtime_error("no such DAG file or bundled network: '" + source + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PC vs. pre-processing plus PC, measured in conditional-independence tests"};
    app.fallthrough();
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "Base random seed");
    app.add_option("--c1", g.c1, "Random conditioning sets per pair")->check(CLI::PositiveNumber);
    app.add_option("--c2", g.c2, "Set size deficit (sets have n - c2 nodes)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "Write output here instead of stdout");
    app.add_option("--pc-variant", g.pc_variant, "Adjacency search: stable (level snapshot) or original")
        ->check(CLI::IsMember({"stable", "original"}));
    app.add_option("--data-dir", g.data_dir, "Directory holding the bundled networks");
    app.add_flag("--timing", g.timing, "Include wall time in JSON output");

    // compare
    auto* cmp = app.add_subcommand("compare", "PC alone once, P3PC once per seed");
    std::string dag_source;
    std::size_t er_n = 0;
    double er_p = 0.0;
    std::size_t runs = 20;
    cmp->add_option("--dag", dag_source, "Edge-list file or bundled network id");
    cmp->add_option("--er-n", er_n, "Generate an ER DAG with this many nodes instead");
    cmp->add_option("--er-p", er_p, "Edge probability for --er-n");
    cmp->add_option("--runs", runs, "Number of P3PC seeds (seed, seed+1, ...)")->check(CLI::PositiveNumber);

    // sweep
    auto* swp = app.add_subcommand("sweep", "Random ER DAGs, both algorithms on each");
    SweepSpec spec;
    swp->add_option("--n", spec.n_values, "Node counts")->delimiter(',');
    swp->add_option("--edge-mult", spec.edge_multipliers, "Target edges per node")->delimiter(',');
    swp->add_option("--p", spec.p_values, "Edge probabilities (overrides --edge-mult)")->delimiter(',');
    swp->add_option("--reps", spec.replicates, "Replicates per (n, density) cell")->check(CLI::PositiveNumber);

    // theory
    auto* thy = app.add_subcommand("theory", "Exact expectations, bounds and Monte-Carlo checks for ER DAGs");
    TheoryGrid grid;
    thy->add_option("--n", grid.n_values, "Node counts")->delimiter(',');
    thy->add_option("--p", grid.p_values, "Edge probabilities")->delimiter(',');
    thy->add_option("--max-len", grid.max_lens, "Trail length limits")->delimiter(',');
    thy->add_option("--mc-reps", grid.mc_reps, "Monte-Carlo replicates")->check(CLI::Range(2, 100'000'000));
    thy->add_option("--asym-n", grid.asymptotic_n, "n values for the p = 1/n collider limit")->delimiter(',');
    thy->add_option("--long-trail-dags", grid.stmt1_dags, "DAGs checked for long-trail blocking");
    thy->add_option("--long-trail-n", grid.stmt1_n, "Nodes in those DAGs")->check(CLI::Range(9, 64));
    thy->add_option("--long-trail-p", grid.stmt1_p, "Edge probability in those DAGs")->check(CLI::Range(0.0, 1.0));

    // gen
    auto* gen = app.add_subcommand("gen", "Emit an ER DAG in edge-list format");
    std::size_t gen_n = 10;
    double gen_p = 0.2;
    gen->add_option("--n", gen_n, "Nodes")->required()->check(CLI::PositiveNumber);
    gen->add_option("--p", gen_p, "Edge probability")->required()->check(CLI::Range(0.0, 1.0));

    // dsep
    auto* ds = app.add_subcommand("dsep", "Is a d-separated from b given a set?");
    std::string ds_dag, ds_a, ds_b;
    std::vector<std::string> ds_given;
    ds->add_option("--dag", ds_dag, "Edge-list file or bundled network id")->required();
    ds->add_option("--a", ds_a, "First node name")->required();
    ds->add_option("--b", ds_b, "Second node name")->required();
    ds->add_option("--given", ds_given, "Conditioning node names")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        const PcVariant variant = parse_variant(g.pc_variant);
        const bool json = g.format == "json";

        if (*cmp) {
            std::string id;
            Dag dag;
            if (!dag_source.empty()) {
                dag = load_dag(g, dag_source, id);
            } else if (er_n > 0) {
                dag = generate_er(er_n, er_p, g.seed);
                id = "er-n" + std::to_string(er_n);
            } else {
                throw std::runtime_error("compare: give --dag or --er-n");
            }
            CompareConfig cfg{g.c1, g.c2, {}, variant, g.jobs};
            for (std::size_t i = 0; i < runs; ++i) cfg.seeds.push_back(g.seed + i);
            const auto result = compare(dag, id, cfg);
            emit(g, json ? render_json(result, g.timing) : render_csv(result));
            if (!result.skeletons_exact) {
                std::cerr << "error: a recovered skeleton differs from the DAG's skeleton\n";
                return 1;
            }
        } else if (*swp) {
            spec.base_seed = g.seed;
            const auto result = sweep(spec, g.c1, g.c2, variant, g.jobs);
            emit(g, json ? render_json(result, g.timing) : render_csv(result));
            std::cerr << render_summary(result);
        } else if (*thy) {
            grid.seed = g.seed;
            grid.jobs = g.jobs;
            const auto report = run_theory(grid);
            emit(g, json ? render_json(report) : render_text(report));
        } else if (*gen) {
            emit(g, serialize(generate_er(gen_n, gen_p, g.seed)));
        } else if (*ds) {
            std::string id;
            const Dag dag = load_dag(g, ds_dag, id);
            auto resolve = [&](const std::string& name) {
                auto v = dag.find(name);
                if (!v) throw std::runtime_error("unknown node '" + name + "' in " + id);
                return *v;
            };
            CiQuery q{resolve(ds_a), resolve(ds_b), {}};
            for (const auto& name : ds_given) q.s.push_back(resolve(name));
            std::sort(q.s.begin(), q.s.end());
            const bool sep = d_separated(dag, q);
            if (json) {
                emit(g, nlohmann::ordered_json{{"a", ds_a}, {"b", ds_b}, {"given", ds_given}, {"d_separated", sep}}.dump() + "\n");
            } else {
                emit(g, sep ? "d-separated\n" : "d-connected\n");
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
