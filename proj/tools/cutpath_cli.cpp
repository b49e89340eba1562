// cutpath command-line front end. Talks to the core exclusively through the
// C API in cutpath/cutpath.h. Exit codes: 0 success, 1 validation error,
// 2 runtime error.

#include <cinttypes>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cutpath/cutpath.h"

namespace {

int status_to_exit(cutpath_status st) {
    if (st == CUTPATH_OK) return 0;
    std::fprintf(stderr, "error: %s\n", cutpath_last_error());
    return st == CUTPATH_ERR_INVALID ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-walk path statistics and electrical-network toolkit"};
    app.require_subcommand(1);

    // --- generate ---
    auto* gen = app.add_subcommand("generate", "generate a graph family into ugraph v1");
    std::string family, gen_out;
    cutpath_gen_params gp{};
    gp.alpha = 2.0;
    gp.d = 3;
    gp.j_max = 80;
    gp.radius = 30;
    gp.dim = 3;
    gp.x1_max = 40;
    gp.n = 1024;
    gp.seed = 1;
    gen->add_option("family", family, "layered | horn | disk | expander")->required();
    gen->add_option("--out", gen_out, "output graph file (sidecar: <out>.meta)")->required();
    gen->add_option("--alpha", gp.alpha, "layer growth exponent (layered, horn)");
    double d_opt = 3, n_opt = 1024;
    gen->add_option("--d", d_opt, "expander degree");
    gen->add_option("--jmax", gp.j_max, "last layer (layered)");
    gen->add_option("--r", gp.radius, "disk radius");
    gen->add_option("--dim", gp.dim, "lattice dimension (horn)");
    gen->add_option("--x1max", gp.x1_max, "axis truncation (horn)");
    gen->add_option("--n", n_opt, "vertex count (expander)");
    gen->add_option("--seed", gp.seed, "random seed");

    // --- walk ---
    auto* walk = app.add_subcommand("walk", "run seeded walk replicas on a graph file");
    std::string walk_graph, walk_stop = "budget", walk_out = "walk";
    cutpath_walk_params wp{};
    wp.budget = 1000000;
    wp.seed = 1;
    wp.replicas = 1;
    wp.lookahead_frac = 0.1;
    walk->add_option("--graph", walk_graph, "ugraph v1 file")->required();
    walk->add_option("--start", wp.start, "start vertex")->required();
    walk->add_option("--stop", walk_stop, "vertex:ID[,ID...] | layer:K | budget");
    walk->add_option("--budget", wp.budget, "step budget (always enforced)");
    walk->add_option("--seed", wp.seed, "master seed");
    walk->add_option("--replicas", wp.replicas, "number of replicas");
    walk->add_option("--lookahead", wp.lookahead_frac, "cut-time censor window fraction");
    walk->add_flag("--trace-bin", wp.write_trace_bin,
                   "also write <prefix>_r<k>.trace (u32 little-endian ids)");
    walk->add_option("--out", walk_out, "output prefix");

    // --- resist ---
    auto* resist = app.add_subcommand("resist", "effective conductance between two vertices");
    std::string resist_graph;
    std::uint32_t r_source = 0, r_sink = 0;
    resist->add_option("--graph", resist_graph, "ugraph v1 file")->required();
    resist->add_option("--source", r_source, "source vertex")->required();
    resist->add_option("--sink", r_sink, "sink vertex")->required();

    // --- bounds ---
    auto* bounds = app.add_subcommand("bounds", "exact excursion oracle vs closed-form bounds");
    std::vector<std::int64_t> b_a{8, 16, 32};
    cutpath_bounds_params bp{};
    bp.t_max = 2000;
    bp.m_mult = 10;
    bp.laziness = 0.0;
    std::string bounds_out = "bounds.csv";
    bounds->add_option("--a", b_a, "excursion heights");
    bounds->add_option("--t", bp.t_max, "hitting-time sweep limit");
    bounds->add_option("--m", bp.m_mult, "visit sweep limit as a multiple of a");
    bounds->add_option("--laziness", bp.laziness, "staying probability");
    bounds->add_option("--out", bounds_out, "output CSV");

    // --- experiment ---
    auto* exp = app.add_subcommand("experiment", "packaged experiments");
    auto* run = exp->add_subcommand("run", "run one experiment");
    std::string exp_id, exp_config, exp_out = ".";
    std::uint64_t exp_seed = 0;
    bool has_seed = false;
    run->add_option("id", exp_id, "E1 | E2 | E3 | E4 | E5 | E6")->required();
    run->add_option("--config", exp_config, "key=value config file overriding the preset");
    run->add_option("--out", exp_out, "output directory");
    auto* seed_opt = run->add_option("--seed", exp_seed, "seed override");
    exp->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    has_seed = seed_opt->count() > 0;

    if (gen->parsed()) {
        gp.d = static_cast<uint32_t>(d_opt);
        gp.n = static_cast<uint32_t>(n_opt);
        return status_to_exit(cutpath_generate_to_files(family.c_str(), &gp, gen_out.c_str(),
                                                        (gen_out + ".meta").c_str()));
    }
    if (walk->parsed()) {
        cutpath_network* net = nullptr;
        cutpath_status st = cutpath_network_load(walk_graph.c_str(), &net);
        if (st != CUTPATH_OK) return status_to_exit(st);
        wp.stop = walk_stop.c_str();
        st = cutpath_walk_to_files(net, &wp, walk_out.c_str());
        cutpath_network_free(net);
        if (st == CUTPATH_OK)
            std::printf("wrote %s_summary.csv\n", walk_out.c_str());
        return status_to_exit(st);
    }
    if (resist->parsed()) {
        cutpath_network* net = nullptr;
        cutpath_status st = cutpath_network_load(resist_graph.c_str(), &net);
        if (st != CUTPATH_OK) return status_to_exit(st);
        cutpath_voltage* sol = nullptr;
        st = cutpath_solve_voltage(net, r_source, r_sink, &sol);
        if (st == CUTPATH_OK) {
            const double ceff = cutpath_voltage_ceff(sol);
            std::printf("C_eff = %.12g\nR_eff = %.12g\ns     = %.12g\n", ceff, 1.0 / ceff,
                        cutpath_voltage_s(sol));
            cutpath_voltage_free(sol);
        }
        cutpath_network_free(net);
        return status_to_exit(st);
    }
    if (bounds->parsed()) {
        bp.a_values = b_a.data();
        bp.n_a = b_a.size();
        cutpath_status st = cutpath_bounds_to_file(&bp, bounds_out.c_str());
        if (st == CUTPATH_OK) std::printf("wrote %s\n", bounds_out.c_str());
        return status_to_exit(st);
    }
    if (run->parsed()) {
        int satisfied = 0;
        cutpath_status st = cutpath_experiment_run(
            exp_id.c_str(), exp_config.empty() ? nullptr : exp_config.c_str(), exp_out.c_str(),
            has_seed ? &exp_seed : nullptr, &satisfied);
        if (st == CUTPATH_OK)
            std::printf("%s done; bound checks %s\n", exp_id.c_str(),
                        satisfied ? "satisfied" : "VIOLATED");
        return status_to_exit(st);
    }
    return 1;
}
