#include "cutpath/cutpath.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "analysis.hpp"
#include "csv.hpp"
#include "experiments.hpp"
#include "generators.hpp"
#include "network.hpp"
#include "rng.hpp"
#include "solve.hpp"
#include "walk.hpp"

using namespace cutpath;

struct cutpath_network {
    Network net;
    std::string family;
    std::string meta;  // extra sidecar lines (key=value)
};

struct cutpath_voltage {
    VoltageSolution sol;
};

namespace {

thread_local std::string g_last_error;

cutpath_status fail(cutpath_status code, const std::string& what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
cutpath_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument& e) {
        return fail(CUTPATH_ERR_INVALID, e.what());
    } catch (const std::ios_base::failure& e) {
        return fail(CUTPATH_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(CUTPATH_ERR_NUMERIC, e.what());
    } catch (...) {
        return fail(CUTPATH_ERR_INTERNAL, "unknown error");
    }
}

cutpath_status make_generated(const char* family, const cutpath_gen_params* p,
                              cutpath_network** out) {
    if (!family || !p || !out) return fail(CUTPATH_ERR_INVALID, "null argument");
    auto handle = std::make_unique<cutpath_network>();
    handle->family = family;
    std::ostringstream meta;
    const std::string fam(family);
    if (fam == "layered") {
        LayeredGraphSpec spec{p->alpha, p->d, p->j_max, p->seed};
        LayeredGraph g = build_layered_graph(spec);
        meta << "alpha=" << shortest_decimal(p->alpha) << "\nd=" << p->d << "\nj0=" << g.j0
             << "\njmax=" << p->j_max << "\nseed=" << p->seed << "\nroot=0\n";
        handle->net = std::move(g.net);
    } else if (fam == "horn") {
        HornSpec spec;
        spec.dim = p->dim;
        spec.alpha = p->alpha;
        spec.x1_max = p->x1_max;
        HornGraph g = build_horn(spec);
        meta << "alpha=" << shortest_decimal(p->alpha) << "\ndim=" << p->dim
             << "\nx1max=" << p->x1_max << "\nf_floor=" << shortest_decimal(spec.f_floor)
             << "\nroot=0\n";
        handle->net = std::move(g.net);
    } else if (fam == "disk") {
        GridDisk g = build_grid_disk(p->radius);
        meta << "r=" << p->radius << "\nroot=" << g.origin << "\nsink=" << g.sink << "\n";
        handle->net = std::move(g.net);
    } else if (fam == "expander") {
        ExpanderResult g = gen_regular_expander(p->n, p->d, p->seed);
        meta << "n=" << p->n << "\nd=" << p->d << "\nseed=" << p->seed
             << "\nlambda2=" << shortest_decimal(g.lambda2) << "\n";
        handle->net = std::move(g.net);
    } else {
        return fail(CUTPATH_ERR_INVALID, "unknown family: " + fam);
    }
    handle->meta = meta.str();
    *out = handle.release();
    return CUTPATH_OK;
}

}  // namespace

extern "C" {

const char* cutpath_last_error(void) { return g_last_error.c_str(); }

const char* cutpath_version(void) { return "cutpath 1.0.0"; }

cutpath_status cutpath_network_build(uint32_t n, const uint32_t* u, const uint32_t* v,
                                     const double* c, size_t m, cutpath_network** out) {
    return guarded([&]() -> cutpath_status {
        if (!out || (m > 0 && (!u || !v || !c))) return fail(CUTPATH_ERR_INVALID, "null argument");
        std::vector<Edge> edges(m);
        for (size_t i = 0; i < m; ++i) edges[i] = Edge{u[i], v[i], c[i]};
        auto handle = std::make_unique<cutpath_network>();
        handle->net = Network::build(n, std::move(edges));
        *out = handle.release();
        return CUTPATH_OK;
    });
}

cutpath_status cutpath_network_load(const char* path, cutpath_network** out) {
    return guarded([&]() -> cutpath_status {
        if (!path || !out) return fail(CUTPATH_ERR_INVALID, "null argument");
        auto handle = std::make_unique<cutpath_network>();
        handle->net = load_ugraph(path);
        *out = handle.release();
        return CUTPATH_OK;
    });
}

cutpath_status cutpath_network_save(const cutpath_network* net, const char* path) {
    return guarded([&]() -> cutpath_status {
        if (!net || !path) return fail(CUTPATH_ERR_INVALID, "null argument");
        save_ugraph(net->net, path);
        return CUTPATH_OK;
    });
}

uint32_t cutpath_network_vertex_count(const cutpath_network* net) {
    return net ? static_cast<uint32_t>(net->net.vertex_count()) : 0;
}

uint64_t cutpath_network_edge_count(const cutpath_network* net) {
    return net ? static_cast<uint64_t>(net->net.edges().size()) : 0;
}

int32_t cutpath_network_layer(const cutpath_network* net, uint32_t v) {
    if (!net || !net->net.has_layers() || v >= net->net.vertex_count()) return INT32_MIN;
    return net->net.layer(v);
}

void cutpath_network_free(cutpath_network* net) { delete net; }

cutpath_status cutpath_generate(const char* family, const cutpath_gen_params* p,
                                cutpath_network** out) {
    return guarded([&]() { return make_generated(family, p, out); });
}

cutpath_status cutpath_generate_to_files(const char* family, const cutpath_gen_params* p,
                                         const char* graph_path, const char* meta_path) {
    return guarded([&]() -> cutpath_status {
        if (!graph_path) return fail(CUTPATH_ERR_INVALID, "null graph path");
        cutpath_network* handle = nullptr;
        cutpath_status st = make_generated(family, p, &handle);
        if (st != CUTPATH_OK) return st;
        std::unique_ptr<cutpath_network> owner(handle);
        save_ugraph(owner->net, graph_path);
        if (meta_path) {
            std::ofstream meta(meta_path);
            if (!meta) return fail(CUTPATH_ERR_IO, std::string("cannot write: ") + meta_path);
            meta << "family=" << owner->family << "\n"
                 << owner->meta << "n=" << owner->net.vertex_count()
                 << "\nm=" << owner->net.edges().size() << "\n";
        }
        return CUTPATH_OK;
    });
}

cutpath_status cutpath_solve_voltage(const cutpath_network* net, uint32_t source, uint32_t sink,
                                     cutpath_voltage** out) {
    return guarded([&]() -> cutpath_status {
        if (!net || !out) return fail(CUTPATH_ERR_INVALID, "null argument");
        auto handle = std::make_unique<cutpath_voltage>();
        handle->sol = solve_voltage(net->net, source, sink);
        *out = handle.release();
        return CUTPATH_OK;
    });
}

double cutpath_voltage_value(const cutpath_voltage* sol, uint32_t x) {
    if (!sol || x >= sol->sol.v.size()) return -1.0;
    return sol->sol.v[x];
}

double cutpath_voltage_ceff(const cutpath_voltage* sol) { return sol ? sol->sol.ceff : -1.0; }

double cutpath_voltage_s(const cutpath_voltage* sol) { return sol ? sol->sol.s : -1.0; }

void cutpath_voltage_free(cutpath_voltage* sol) { delete sol; }

cutpath_status cutpath_effective_conductance(const cutpath_network* net, const uint32_t* a,
                                             size_t na, const uint32_t* b, size_t nb,
                                             double* out) {
    return guarded([&]() -> cutpath_status {
        if (!net || !a || !b || !out) return fail(CUTPATH_ERR_INVALID, "null argument");
        std::vector<Vertex> va(a, a + na), vb(b, b + nb);
        *out = effective_conductance(net->net, va, vb);
        return CUTPATH_OK;
    });
}

cutpath_status cutpath_walk_to_files(const cutpath_network* net, const cutpath_walk_params* p,
                                     const char* out_prefix) {
    return guarded([&]() -> cutpath_status {
        if (!net || !p || !out_prefix || !p->stop)
            return fail(CUTPATH_ERR_INVALID, "null argument");
        StopCondition stop;
        stop.budget = p->budget;
        const std::string spec(p->stop);
        if (spec.rfind("vertex:", 0) == 0) {
            std::stringstream ss(spec.substr(7));
            std::string tok;
            while (std::getline(ss, tok, ',')) stop.target_vertices.push_back(std::stoul(tok));
            if (stop.target_vertices.empty())
                return fail(CUTPATH_ERR_INVALID, "empty vertex stop list");
        } else if (spec.rfind("layer:", 0) == 0) {
            stop.target_layer = std::stoi(spec.substr(6));
        } else if (spec != "budget") {
            return fail(CUTPATH_ERR_INVALID, "bad stop spec: " + spec);
        }

        const uint32_t replicas = p->replicas ? p->replicas : 1;
        CsvWriter csv(std::string(out_prefix) + "_summary.csv");
        csv.comment("cutpath walk start=" + std::to_string(p->start) + " stop=" + spec +
                    " budget=" + std::to_string(p->budget) + " seed=" + std::to_string(p->seed) +
                    " replicas=" + std::to_string(replicas) +
                    " lookahead_frac=" + format_g12(p->lookahead_frac));
        csv.header({"replica", "steps", "stop_reason", "n_cut_times", "n_cutpoints"});
        for (uint32_t rep = 0; rep < replicas; ++rep) {
            WalkTrace tr = simulate_walk(net->net, p->start, stop, derive_seed(p->seed, 20, rep));
            std::size_t n_ct = 0, n_cp = 0;
            if (tr.steps >= 2) {
                auto w = static_cast<std::uint64_t>(p->lookahead_frac * static_cast<double>(tr.steps));
                n_ct = cut_times(tr.seq, std::min(w, tr.steps - 1)).size();
                if (tr.start != tr.end) n_cp = path_cutpoints(net->net, tr).size();
            }
            const char* reason = tr.stop_reason == StopReason::hit_vertex  ? "hit_vertex"
                                 : tr.stop_reason == StopReason::hit_layer ? "hit_layer"
                                                                           : "budget";
            csv.row({CsvWriter::cell(rep), CsvWriter::cell(tr.steps), reason,
                     CsvWriter::cell(n_ct), CsvWriter::cell(n_cp)});
            if (p->write_trace_bin) {
                std::ofstream bin(std::string(out_prefix) + "_r" + std::to_string(rep) + ".trace",
                                  std::ios::binary);
                if (!bin) return fail(CUTPATH_ERR_IO, "cannot write trace binary");
                for (Vertex v : tr.seq) {
                    unsigned char le[4] = {static_cast<unsigned char>(v & 0xff),
                                           static_cast<unsigned char>((v >> 8) & 0xff),
                                           static_cast<unsigned char>((v >> 16) & 0xff),
                                           static_cast<unsigned char>((v >> 24) & 0xff)};
                    bin.write(reinterpret_cast<const char*>(le), 4);
                }
            }
        }
        return CUTPATH_OK;
    });
}

cutpath_status cutpath_bounds_to_file(const cutpath_bounds_params* p, const char* out_csv) {
    return guarded([&]() -> cutpath_status {
        if (!p || !out_csv || !p->a_values || p->n_a == 0)
            return fail(CUTPATH_ERR_INVALID, "null argument");
        CsvWriter csv(out_csv);
        csv.comment("cutpath bounds sweep t_max=" + std::to_string(p->t_max) +
                    " m_mult=" + std::to_string(p->m_mult) +
                    " laziness=" + format_g12(p->laziness));
        csv.comment("rows with t_or_m as a hitting time precede rows with it as a visit count");
        csv.header({"a", "t_or_m", "exact", "bound", "satisfied"});
        std::vector<SrwOracle> oracles;
        for (size_t i = 0; i < p->n_a; ++i)
            oracles.push_back(exact_srw_oracle(p->a_values[i], p->t_max, p->m_mult * p->a_values[i],
                                               p->laziness));
        std::uint64_t violations = 0;
        for (const SrwOracle& oracle : oracles) {
            for (long t = 0; t <= p->t_max; ++t) {
                const double exact = oracle.p_tau_lt[static_cast<std::size_t>(t)];
                const double bound = srw_chernoff_bound(oracle.a, t);
                if (exact > bound) ++violations;
                csv.row({CsvWriter::cell(oracle.a), CsvWriter::cell(t), CsvWriter::cell(exact),
                         CsvWriter::cell(bound), CsvWriter::cell(exact <= bound)});
            }
        }
        for (const SrwOracle& oracle : oracles) {
            if (oracle.a % 2 != 0) continue;
            for (long m = 0; m <= p->m_mult * oracle.a; ++m) {
                const double exact = oracle.p_visits_gt[static_cast<std::size_t>(m)];
                const double bound = srw_visits_bound(oracle.a, m);
                if (exact > bound) ++violations;
                csv.row({CsvWriter::cell(oracle.a), CsvWriter::cell(m), CsvWriter::cell(exact),
                         CsvWriter::cell(bound), CsvWriter::cell(exact <= bound)});
            }
        }
        if (violations > 0)
            return fail(CUTPATH_ERR_NUMERIC, std::to_string(violations) + " bound violations");
        return CUTPATH_OK;
    });
}

cutpath_status cutpath_experiment_run(const char* id, const char* config_path, const char* out_dir,
                                      const uint64_t* seed, int* satisfied) {
    return guarded([&]() -> cutpath_status {
        if (!id) return fail(CUTPATH_ERR_INVALID, "null experiment id");
        ExperimentConfig cfg = config_path ? load_config(config_path) : default_config(id);
        if (config_path && cfg.id != id)
            return fail(CUTPATH_ERR_INVALID, "config id does not match requested experiment");
        if (out_dir) cfg.out_dir = out_dir;
        if (seed) cfg.seed = *seed;
        ExperimentReport rep = run_experiment(cfg);
        if (satisfied) *satisfied = rep.all_satisfied ? 1 : 0;
        return CUTPATH_OK;
    });
}

}  // extern "C"
