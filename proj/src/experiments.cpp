#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "csv.hpp"
#include "generators.hpp"
#include "rng.hpp"
#include "solve.hpp"
#include "walk.hpp"

namespace cutpath {

namespace {

// Seed-derivation streams per experiment (generators use streams 1..3).
enum : std::uint64_t {
    kStreamE1 = 11,
    kStreamE2 = 12,
    kStreamE3 = 13,
    kStreamE4 = 14,
    kStreamE5Growth = 150,  // + horizon index
    kStreamE5Recovery = 16,
    kStreamAccept = 90,
};

std::vector<long> parse_long_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stol(item));
    }
    return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoull(item));
    }
    return out;
}

std::string join_longs(const std::vector<long>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    return out;
}

std::string join_u64s(const std::vector<std::uint64_t>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    return out;
}

struct MeanVar {
    double mean = 0.0;
    double sd = 0.0;      // sample standard deviation
    double sigma = 0.0;   // standard error of the mean
    std::size_t n = 0;
};

MeanVar mean_var(const std::vector<double>& xs) {
    MeanVar mv;
    mv.n = xs.size();
    if (xs.empty()) return mv;
    double sum = 0.0;
    for (double x : xs) sum += x;
    mv.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - mv.mean) * (x - mv.mean);
        mv.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        mv.sigma = mv.sd / std::sqrt(static_cast<double>(xs.size()));
    }
    return mv;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

CsvWriter open_csv(const ExperimentConfig& cfg, ExperimentReport& rep, const std::string& name) {
    std::string path = out_path(cfg, name);
    rep.files.push_back(path);
    CsvWriter csv(path);
    csv.comment("cutpath experiment " + cfg.id);
    for (const std::string& line : config_echo(cfg)) csv.comment(line);
    return csv;
}

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::hit_vertex: return "hit_vertex";
        case StopReason::hit_layer: return "hit_layer";
        default: return "budget";
    }
}

void write_summary(const ExperimentConfig& cfg, ExperimentReport& rep,
                   const std::vector<std::string>& notes) {
    std::string path = out_path(cfg, cfg.id + "_summary.txt");
    rep.files.push_back(path);
    std::ofstream out(path);
    out << "cutpath experiment " << cfg.id << "\n\n[config]\n";
    for (const std::string& line : config_echo(cfg)) out << line << '\n';
    out << "\n[checks]\n";
    for (const BoundReport& b : rep.bounds) {
        out << b.name << ": value=" << format_g12(b.value);
        if (b.half_width > 0.0) out << " +- " << format_g12(b.half_width);
        out << " bound=" << format_g12(b.bound) << ' ' << (b.satisfied ? "ok" : "VIOLATED") << '\n';
    }
    if (!notes.empty()) {
        out << "\n[notes]\n";
        for (const std::string& n : notes) out << n << '\n';
    }
}

void push_bound(ExperimentReport& rep, BoundReport b) {
    rep.all_satisfied = rep.all_satisfied && b.satisfied;
    rep.bounds.push_back(std::move(b));
}

// --- E1: cutpoint census -----------------------------------------------------

ExperimentReport run_e1(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.id = cfg.id;
    LayeredGraph g = build_layered_graph({cfg.alpha, cfg.d, cfg.j_max, cfg.seed});
    const Network& net = g.net;
    const int max_k = static_cast<int>(std::floor(std::log2(static_cast<double>(cfg.j_max))));

    struct Row {
        std::uint64_t steps = 0;
        StopReason reason = StopReason::budget;
        std::size_t n_cut_times = 0;
        std::size_t n_cutpoints = 0;
        std::size_t n_censored = 0;
        std::vector<std::uint64_t> block;  // censored cutpoints per k
    };
    std::vector<Row> rows(static_cast<std::size_t>(cfg.replicas));

    parallel_replicas(cfg.replicas, cfg.threads, [&](int rep_i) {
        StopCondition stop;
        stop.target_layer = static_cast<std::int32_t>(cfg.j_max);
        stop.budget = cfg.budget;
        WalkTrace tr = simulate_walk(net, 0, stop, derive_seed(cfg.seed, kStreamE1, rep_i));
        Row& row = rows[static_cast<std::size_t>(rep_i)];
        row.steps = tr.steps;
        row.reason = tr.stop_reason;
        row.block.assign(static_cast<std::size_t>(max_k) + 1, 0);
        if (tr.steps < 2) return;
        const auto w = static_cast<std::uint64_t>(cfg.lookahead_frac * static_cast<double>(tr.steps));
        row.n_cut_times = cut_times(tr.seq, std::min(w, tr.steps - 1)).size();
        if (tr.start == tr.end) return;
        std::vector<Vertex> cps = path_cutpoints(net, tr);
        row.n_cutpoints = cps.size();
        std::vector<std::uint64_t> last(net.vertex_count(), 0);
        for (std::size_t t = 0; t < tr.seq.size(); ++t) last[tr.seq[t]] = t;
        for (Vertex v : cps) {
            if (last[v] + w > tr.steps) continue;  // too close to the horizon
            ++row.n_censored;
            const long layer = net.layer(v);
            if (layer >= 2) {
                const int k = static_cast<int>(std::floor(std::log2(static_cast<double>(layer - 1))));
                if (k <= max_k) ++row.block[static_cast<std::size_t>(k)];
            }
        }
    });

    CsvWriter reps = open_csv(cfg, rep, "e1_replicas.csv");
    reps.header({"replica", "steps", "stop_reason", "n_cut_times", "n_cutpoints", "n_cutpoints_censored"});
    for (int i = 0; i < cfg.replicas; ++i) {
        const Row& r = rows[static_cast<std::size_t>(i)];
        reps.row({CsvWriter::cell(i), CsvWriter::cell(r.steps), stop_reason_name(r.reason),
                  CsvWriter::cell(r.n_cut_times), CsvWriter::cell(r.n_cutpoints),
                  CsvWriter::cell(r.n_censored)});
    }

    CsvWriter blocks = open_csv(cfg, rep, "e1_blocks.csv");
    blocks.header({"replica", "k", "new_cutpoints"});
    for (int i = 0; i < cfg.replicas; ++i)
        for (int k = 0; k <= max_k; ++k)
            blocks.row({CsvWriter::cell(i), CsvWriter::cell(k),
                        CsvWriter::cell(rows[static_cast<std::size_t>(i)].block[static_cast<std::size_t>(k)])});

    CsvWriter means = open_csv(cfg, rep, "e1_blocks_mean.csv");
    means.header({"k", "mean_new_cutpoints", "half_width_3sigma"});
    std::vector<double> ks, block_means;
    for (int k = 0; k <= max_k; ++k) {
        std::vector<double> xs;
        xs.reserve(static_cast<std::size_t>(cfg.replicas));
        for (const Row& r : rows) xs.push_back(static_cast<double>(r.block[static_cast<std::size_t>(k)]));
        MeanVar mv = mean_var(xs);
        means.row({CsvWriter::cell(k), CsvWriter::cell(mv.mean), CsvWriter::cell(3.0 * mv.sigma)});
        ks.push_back(k);
        block_means.push_back(mv.mean);
    }
    rep.series["block_k"] = ks;
    rep.series["block_mean"] = block_means;

    write_summary(cfg, rep,
                  {"cutpoints censored to last visit <= T - W, W = lookahead_frac * T",
                   "topmost block is truncated at j_max"});
    return rep;
}

// --- E2: linking census ------------------------------------------------------

ExperimentReport run_e2(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.id = cfg.id;
    const long line_len = cfg.line_length > 0 ? cfg.line_length : 2100;
    LineNetwork line = layered_line_network(cfg.alpha, cfg.d, static_cast<std::size_t>(line_len));
    Network net = line.to_network(false);  // jump chain: laziness does not affect linking
    LinkingCensus census(cfg.census_j_lo, cfg.census_j_hi, cfg.beta, cfg.m);

    std::vector<std::vector<std::uint32_t>> links(static_cast<std::size_t>(cfg.replicas));
    parallel_replicas(cfg.replicas, cfg.threads, [&](int rep_i) {
        StopCondition stop;
        stop.target_vertices = {static_cast<Vertex>(line_len)};
        stop.budget = cfg.budget;
        WalkTrace tr = simulate_walk(net, 0, stop, derive_seed(cfg.seed, kStreamE2, rep_i),
                                     cfg.budget + 1);
        links[static_cast<std::size_t>(rep_i)] = census.links_of_trace(layer_sequence(net, tr));
    });
    for (const auto& row : links) census.add_links(row);
    LinkStats st = census.finish();

    CsvWriter pj = open_csv(cfg, rep, "e2_pj.csv");
    pj.header({"j", "p_not_linked", "half_width_3sigma"});
    for (long j = st.j_lo; j <= st.j_hi; ++j) {
        const double p = st.p_j[static_cast<std::size_t>(j - st.j_lo)];
        const double sig = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(st.replicas));
        pj.row({CsvWriter::cell(j), CsvWriter::cell(p), CsvWriter::cell(3.0 * sig)});
    }

    CsvWriter ak = open_csv(cfg, rep, "e2_ak.csv");
    ak.header({"replica", "k", "a_k"});
    for (std::size_t i = 0; i < st.a_k.size(); ++i)
        for (std::size_t ki = 0; ki < st.k_values.size(); ++ki)
            ak.row({CsvWriter::cell(i), CsvWriter::cell(st.k_values[ki]),
                    CsvWriter::cell(static_cast<std::uint64_t>(st.a_k[i][ki]))});

    CsvWriter pk = open_csv(cfg, rep, "e2_pk.csv");
    pk.header({"k", "p_ak_positive", "half_width_3sigma"});
    std::vector<double> ks, ps;
    for (std::size_t ki = 0; ki < st.k_values.size(); ++ki) {
        const double p = st.p_ak_positive[ki];
        const double sig = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(st.replicas));
        pk.row({CsvWriter::cell(st.k_values[ki]), CsvWriter::cell(p), CsvWriter::cell(3.0 * sig)});
        ks.push_back(st.k_values[ki]);
        ps.push_back(p);
    }
    rep.series["k"] = ks;
    rep.series["p_ak_positive"] = ps;

    write_summary(cfg, rep,
                  {"walk simulated as the jump chain (self-loops dropped); hit orders and "
                   "linking are laziness-invariant",
                   "p_j decays over the mid range and turns upward as j approaches the "
                   "truncation: absorption at L censors late alternations"});
    return rep;
}

// --- E3: resistance profiles -------------------------------------------------

std::vector<bool> visited_flags(const Network& net, const WalkTrace& tr) {
    std::vector<bool> vis(net.vertex_count(), false);
    vis[tr.start] = true;
    for (std::uint32_t id = 0; id < net.pair_count(); ++id) {
        if (tr.pair_crossings[id] == 0) continue;
        auto [u, v] = net.pair(id);
        vis[u] = vis[v] = true;
    }
    return vis;
}

ExperimentReport run_e3(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.id = cfg.id;
    LayeredGraph g = build_layered_graph({cfg.alpha, cfg.d, cfg.j_max, cfg.seed});
    const Network& net = g.net;

    std::vector<long> depths = cfg.depths;
    if (depths.empty())
        for (long n = 5; n <= cfg.j_max; n += 5) depths.push_back(n);
    std::vector<long> path_depths = cfg.path_depths;
    if (path_depths.empty()) path_depths = {5, 10, 20, 40, 80};

    std::vector<std::vector<Vertex>> boundaries;
    for (long n : depths) boundaries.push_back(g.layer_vertices[static_cast<std::size_t>(n)]);
    std::vector<double> host_r = resistance_profile(net, 0, boundaries);

    std::vector<std::vector<double>> path_r(static_cast<std::size_t>(cfg.replicas));
    parallel_replicas(cfg.replicas, cfg.threads, [&](int rep_i) {
        StopCondition stop;
        stop.target_layer = static_cast<std::int32_t>(cfg.j_max);
        stop.budget = cfg.budget;
        WalkTrace tr = simulate_walk(net, 0, stop, derive_seed(cfg.seed, kStreamE3, rep_i));
        PathSubgraph sub = path_subgraph(net, tr);
        std::vector<bool> vis = visited_flags(net, tr);
        std::vector<double>& out = path_r[static_cast<std::size_t>(rep_i)];
        for (long n : path_depths) {
            std::vector<Vertex> boundary;
            for (Vertex v : g.layer_vertices[static_cast<std::size_t>(n)])
                if (vis[v]) boundary.push_back(v);
            if (boundary.empty()) {
                out.push_back(-1.0);  // depth not reached
                continue;
            }
            out.push_back(1.0 / effective_conductance(sub.path, {0}, boundary));
        }
    });

    CsvWriter host = open_csv(cfg, rep, "e3_host.csv");
    host.header({"depth", "r_exact"});
    for (std::size_t i = 0; i < depths.size(); ++i)
        host.row({CsvWriter::cell(depths[i]), CsvWriter::cell(host_r[i])});

    CsvWriter pathcsv = open_csv(cfg, rep, "e3_path.csv");
    pathcsv.header({"replica", "depth", "r_path"});
    for (int i = 0; i < cfg.replicas; ++i)
        for (std::size_t di = 0; di < path_depths.size(); ++di)
            pathcsv.row({CsvWriter::cell(i), CsvWriter::cell(path_depths[di]),
                         CsvWriter::cell(path_r[static_cast<std::size_t>(i)][di])});

    CsvWriter mean = open_csv(cfg, rep, "e3_path_mean.csv");
    mean.header({"depth", "mean_r_path", "half_width_3sigma", "n"});
    std::vector<double> path_means;
    for (std::size_t di = 0; di < path_depths.size(); ++di) {
        std::vector<double> xs;
        for (int i = 0; i < cfg.replicas; ++i) {
            double v = path_r[static_cast<std::size_t>(i)][di];
            if (v >= 0.0) xs.push_back(v);
        }
        MeanVar mv = mean_var(xs);
        mean.row({CsvWriter::cell(path_depths[di]), CsvWriter::cell(mv.mean),
                  CsvWriter::cell(3.0 * mv.sigma), CsvWriter::cell(mv.n)});
        path_means.push_back(mv.mean);
    }
    rep.series["depth"] = std::vector<double>(depths.begin(), depths.end());
    rep.series["host_r"] = host_r;
    rep.series["path_depth"] = std::vector<double>(path_depths.begin(), path_depths.end());
    rep.series["path_mean"] = path_means;

    write_summary(cfg, rep, {"host profile is exact; PATH profile averaged over replicas"});
    return rep;
}

// --- E4: trace-network bounds ------------------------------------------------

ExperimentReport run_e4(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.id = cfg.id;
    GridDisk disk = build_grid_disk(cfg.r);
    const Network& net = disk.net;
    LayerSliceReport slice = layer_slice_report(net, disk.origin, disk.sink);
    ConductanceBound cb = conductance_bound(static_cast<double>(slice.d), slice.s);

    TraceNetwork gbar = trace_network_exact(net, disk.origin, disk.sink);
    const double ceff_gbar = effective_conductance(gbar.net, {disk.origin}, {disk.sink});

    std::vector<double> ceff_path(static_cast<std::size_t>(cfg.replicas));
    std::vector<double> ceff_gn(static_cast<std::size_t>(cfg.replicas));
    std::vector<std::uint64_t> steps(static_cast<std::size_t>(cfg.replicas));
    parallel_replicas(cfg.replicas, cfg.threads, [&](int rep_i) {
        StopCondition stop;
        stop.target_vertices = {disk.sink};
        stop.budget = cfg.budget;
        WalkTrace tr = simulate_walk(net, disk.origin, stop, derive_seed(cfg.seed, kStreamE4, rep_i));
        PathSubgraph sub = path_subgraph(net, tr);
        ceff_path[static_cast<std::size_t>(rep_i)] =
            effective_conductance(sub.path, {disk.origin}, {disk.sink});
        ceff_gn[static_cast<std::size_t>(rep_i)] =
            effective_conductance(sub.gn, {disk.origin}, {disk.sink});
        steps[static_cast<std::size_t>(rep_i)] = tr.steps;
    });

    CsvWriter layer = open_csv(cfg, rep, "e4_layer.csv");
    layer.header({"i", "ceff_slice", "separation_ok", "bound", "satisfied"});
    double worst_slice = 0.0;
    for (const LayerSliceRow& row : slice.rows) {
        layer.row({CsvWriter::cell(row.i), CsvWriter::cell(row.ceff),
                   CsvWriter::cell(row.separation_ok), CsvWriter::cell(4.0),
                   CsvWriter::cell(row.ceff <= 4.0)});
        worst_slice = std::max(worst_slice, row.ceff);
    }

    CsvWriter walks = open_csv(cfg, rep, "e4_walks.csv");
    walks.header({"replica", "steps", "ceff_path", "ceff_gn"});
    for (int i = 0; i < cfg.replicas; ++i)
        walks.row({CsvWriter::cell(i), CsvWriter::cell(steps[static_cast<std::size_t>(i)]),
                   CsvWriter::cell(ceff_path[static_cast<std::size_t>(i)]),
                   CsvWriter::cell(ceff_gn[static_cast<std::size_t>(i)])});

    MeanVar mv_path = mean_var(ceff_path);
    MeanVar mv_gn = mean_var(ceff_gn);
    push_bound(rep, make_bound_report("layer_slice_max", worst_slice, 0.0, 4.0));
    push_bound(rep, make_bound_report("theorem_conductance", mv_gn.mean, 3.0 * mv_gn.sigma, cb.bound));
    push_bound(rep, make_bound_report("path_le_gn", mv_path.mean, 0.0, mv_gn.mean));
    push_bound(rep, make_bound_report("jensen_gn_le_gbar", mv_gn.mean, 3.0 * mv_gn.sigma, ceff_gbar));

    CsvWriter summary = open_csv(cfg, rep, "e4_summary.csv");
    summary.header({"name", "value", "half_width_3sigma", "bound", "satisfied"});
    for (const BoundReport& b : rep.bounds)
        summary.row({b.name, CsvWriter::cell(b.value), CsvWriter::cell(b.half_width),
                     CsvWriter::cell(b.bound), CsvWriter::cell(b.satisfied)});

    rep.series["ceff_gn_mean"] = {mv_gn.mean};
    rep.series["ceff_path_mean"] = {mv_path.mean};
    write_summary(cfg, rep,
                  {"s = " + format_g12(slice.s), "d = " + std::to_string(slice.d),
                   "q = " + format_g12(cb.q) + (cb.vacuous ? " (bound vacuous: q < 12)" : ""),
                   "ceff(host) = " + format_g12(slice.ceff),
                   "ceff(expected-crossings network) = " + format_g12(ceff_gbar)});
    return rep;
}

// --- E5: minima growth and recovery ------------------------------------------

ExperimentReport run_e5(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.id = cfg.id;
    const long line_len = cfg.line_length > 0 ? cfg.line_length : 1000;
    LineNetwork line = layered_line_network(cfg.alpha, cfg.d, static_cast<std::size_t>(line_len));
    Network net = line.to_network(false);

    CsvWriter growth = open_csv(cfg, rep, "e5_growth.csv");
    growth.header({"horizon", "run", "lb_sum", "n_minima", "n_certified"});
    std::vector<double> horizon_means;
    std::vector<double> certified_means;
    CsvWriter growth_mean = open_csv(cfg, rep, "e5_growth_mean.csv");
    growth_mean.header({"horizon", "mean_lb_sum", "half_width_3sigma", "mean_certified"});
    for (std::size_t hi = 0; hi < cfg.horizons.size(); ++hi) {
        const std::uint64_t horizon = cfg.horizons[hi];
        std::vector<double> sums(static_cast<std::size_t>(cfg.replicas));
        std::vector<double> certified(static_cast<std::size_t>(cfg.replicas));
        std::vector<std::size_t> nminima(static_cast<std::size_t>(cfg.replicas));
        parallel_replicas(cfg.replicas, cfg.threads, [&](int run) {
            StopCondition stop;
            stop.target_vertices = {static_cast<Vertex>(line_len)};
            stop.budget = horizon;
            WalkTrace tr = simulate_walk(net, 0, stop,
                                         derive_seed(cfg.seed, kStreamE5Growth + hi, run),
                                         horizon + 1);
            MinimaRecord mr = minima_analysis(tr.seq, line);
            sums[static_cast<std::size_t>(run)] = mr.lb_sum;
            certified[static_cast<std::size_t>(run)] = static_cast<double>(mr.certified_count);
            nminima[static_cast<std::size_t>(run)] = mr.minima.size() - 1;
        });
        for (int run = 0; run < cfg.replicas; ++run)
            growth.row({CsvWriter::cell(horizon), CsvWriter::cell(run),
                        CsvWriter::cell(sums[static_cast<std::size_t>(run)]),
                        CsvWriter::cell(nminima[static_cast<std::size_t>(run)]),
                        CsvWriter::cell(static_cast<std::uint64_t>(certified[static_cast<std::size_t>(run)]))});
        MeanVar mv = mean_var(sums);
        MeanVar mc = mean_var(certified);
        growth_mean.row({CsvWriter::cell(horizon), CsvWriter::cell(mv.mean),
                         CsvWriter::cell(3.0 * mv.sigma), CsvWriter::cell(mc.mean)});
        horizon_means.push_back(mv.mean);
        certified_means.push_back(mc.mean);
    }
    rep.series["horizon"] = std::vector<double>(cfg.horizons.begin(), cfg.horizons.end());
    rep.series["mean_lb_sum"] = horizon_means;
    rep.series["mean_certified"] = certified_means;

    // Recovery deciles: the chance of climbing back above the previous
    // minimum is at most M_n / M_{n-1}, binned by that ratio.
    std::vector<std::uint64_t> bin_n(10, 0), bin_rec(10, 0);
    {
        std::vector<std::vector<std::pair<int, bool>>> events(static_cast<std::size_t>(cfg.recovery_traces));
        parallel_replicas(static_cast<int>(cfg.recovery_traces), cfg.threads, [&](int ti) {
            StopCondition stop;
            stop.target_vertices = {static_cast<Vertex>(line_len)};
            stop.budget = cfg.recovery_horizon;
            WalkTrace tr = simulate_walk(net, 0, stop,
                                         derive_seed(cfg.seed, kStreamE5Recovery, ti),
                                         cfg.recovery_horizon + 1);
            MinimaRecord mr = minima_analysis(tr.seq, line);
            auto& ev = events[static_cast<std::size_t>(ti)];
            for (std::size_t n = 1; n < mr.minima.size(); ++n) {
                const double ratio = mr.minima[n] / mr.minima[n - 1];
                int bin = std::min(static_cast<int>(ratio * 10.0), 9);
                ev.emplace_back(bin, mr.recovery[n] != UINT64_MAX);
            }
        });
        for (const auto& ev : events)
            for (auto [bin, recovered] : ev) {
                ++bin_n[static_cast<std::size_t>(bin)];
                if (recovered) ++bin_rec[static_cast<std::size_t>(bin)];
            }
    }
    CsvWriter rec = open_csv(cfg, rep, "e5_recovery.csv");
    rec.header({"bin_lo", "bin_hi", "n", "freq", "bound", "half_width_3sigma", "satisfied"});
    for (int b = 0; b < 10; ++b) {
        const double lo = b / 10.0, hi = (b + 1) / 10.0;
        const std::uint64_t n = bin_n[static_cast<std::size_t>(b)];
        const double freq = n ? static_cast<double>(bin_rec[static_cast<std::size_t>(b)]) / static_cast<double>(n) : 0.0;
        const double sig = n ? std::sqrt(std::max(freq * (1.0 - freq), 0.0) / static_cast<double>(n)) : 0.0;
        BoundReport br = make_bound_report("recovery_bin_" + format_g12(lo), freq, 3.0 * sig, hi);
        rec.row({CsvWriter::cell(lo), CsvWriter::cell(hi), CsvWriter::cell(n), CsvWriter::cell(freq),
                 CsvWriter::cell(hi), CsvWriter::cell(3.0 * sig), CsvWriter::cell(br.satisfied)});
        if (n > 0) push_bound(rep, std::move(br));
    }

    // Truncation sensitivity of the return probabilities feeding f.
    std::vector<std::string> notes{"chain simulated without self-loops (jump chain)"};
    {
        LineNetwork twice = layered_line_network(cfg.alpha, cfg.d, static_cast<std::size_t>(2 * line_len));
        for (long j : {line_len / 10, line_len / 4, line_len / 2}) {
            const double at_l = return_prob(line, static_cast<std::size_t>(j));
            const double at_2l = return_prob(twice, static_cast<std::size_t>(j));
            notes.push_back("return_prob(j=" + std::to_string(j) + "): L=" + format_g12(at_l) +
                            "  2L=" + format_g12(at_2l));
        }
    }
    write_summary(cfg, rep, notes);
    return rep;
}

// --- E6: oracle vs bounds ------------------------------------------------------

ExperimentReport run_e6(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.id = cfg.id;
    CsvWriter cher = open_csv(cfg, rep, "e6_chernoff.csv");
    cher.header({"a", "t", "exact", "bound", "satisfied"});
    CsvWriter vis = open_csv(cfg, rep, "e6_visits.csv");
    vis.header({"a", "m", "exact", "bound", "satisfied"});

    std::uint64_t cher_viol = 0, vis_viol = 0;
    for (long a : cfg.a_values) {
        SrwOracle oracle = exact_srw_oracle(a, cfg.t_max, cfg.m_mult * a, cfg.laziness);
        for (long t = 0; t <= cfg.t_max; ++t) {
            const double exact = oracle.p_tau_lt[static_cast<std::size_t>(t)];
            const double bound = srw_chernoff_bound(a, t);
            const bool ok = exact <= bound;
            if (!ok) ++cher_viol;
            cher.row({CsvWriter::cell(a), CsvWriter::cell(t), CsvWriter::cell(exact),
                      CsvWriter::cell(bound), CsvWriter::cell(ok)});
        }
        if (a % 2 == 0) {
            for (long m = 0; m <= cfg.m_mult * a; ++m) {
                const double exact = oracle.p_visits_gt[static_cast<std::size_t>(m)];
                const double bound = srw_visits_bound(a, m);
                const bool ok = exact <= bound;
                if (!ok) ++vis_viol;
                vis.row({CsvWriter::cell(a), CsvWriter::cell(m), CsvWriter::cell(exact),
                         CsvWriter::cell(bound), CsvWriter::cell(ok)});
            }
        }
    }
    push_bound(rep, make_bound_report("chernoff_violations", static_cast<double>(cher_viol), 0.0, 0.0));
    push_bound(rep, make_bound_report("visits_violations", static_cast<double>(vis_viol), 0.0, 0.0));
    write_summary(cfg, rep, cfg.laziness > 0.0
                                ? std::vector<std::string>{"laziness > 0: see fitted C in the oracle"}
                                : std::vector<std::string>{});
    return rep;
}

}  // namespace

ExperimentConfig default_config(const std::string& id) {
    ExperimentConfig cfg;
    cfg.id = id;
    cfg.seed = 20260809;
    if (id == "E1") {
        cfg.family = "layered";
        cfg.replicas = 100;
        cfg.budget = 2000000;
    } else if (id == "E2") {
        cfg.family = "line";
        cfg.replicas = 100;
        cfg.line_length = 2100;
        cfg.budget = 50000000;
        cfg.census_j_lo = 9;
        cfg.census_j_hi = 1024;
    } else if (id == "E3") {
        cfg.family = "layered";
        cfg.replicas = 20;
        cfg.budget = 2000000;
    } else if (id == "E4") {
        cfg.family = "disk";
        cfg.replicas = 500;
        cfg.r = 30;
        cfg.budget = 1000000;
    } else if (id == "E5") {
        cfg.family = "line";
        cfg.replicas = 100;
        cfg.line_length = 1000;
        cfg.budget = 0;  // horizons drive the budgets
    } else if (id == "E6") {
        cfg.family = "line";
        cfg.replicas = 1;
    } else {
        throw std::invalid_argument("unknown experiment id: " + id);
    }
    return cfg;
}

namespace {

void apply_key(ExperimentConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, int line_no) {
    auto bad = [&]() {
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" +
                                    key + "' in section [" + section + "]");
    };
    if (section == "experiment") {
        if (key == "id") cfg.id = value;
        else if (key == "replicas") cfg.replicas = std::stoi(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "threads") cfg.threads = std::stoi(value);
        else if (key == "out_dir") cfg.out_dir = value;
        else bad();
    } else if (section == "graph") {
        if (key == "family") cfg.family = value;
        else if (key == "alpha") cfg.alpha = std::stod(value);
        else if (key == "d") cfg.d = static_cast<unsigned>(std::stoul(value));
        else if (key == "jmax") cfg.j_max = std::stol(value);
        else if (key == "r") cfg.r = std::stol(value);
        else if (key == "line_length") cfg.line_length = std::stol(value);
        else bad();
    } else if (section == "walk") {
        if (key == "beta") cfg.beta = std::stod(value);
        else if (key == "m") cfg.m = std::stoi(value);
        else if (key == "budget") cfg.budget = std::stoull(value);
        else if (key == "lookahead_frac") cfg.lookahead_frac = std::stod(value);
        else if (key == "laziness") cfg.laziness = std::stod(value);
        else bad();
    } else if (section == "sweep") {
        if (key == "a") cfg.a_values = parse_long_list(value);
        else if (key == "t_max") cfg.t_max = std::stol(value);
        else if (key == "m_mult") cfg.m_mult = std::stol(value);
        else if (key == "horizons") cfg.horizons = parse_u64_list(value);
        else if (key == "recovery_traces") cfg.recovery_traces = std::stol(value);
        else if (key == "recovery_horizon") cfg.recovery_horizon = std::stoull(value);
        else if (key == "depths") cfg.depths = parse_long_list(value);
        else if (key == "path_depths") cfg.path_depths = parse_long_list(value);
        else if (key == "census_j_lo") cfg.census_j_lo = std::stol(value);
        else if (key == "census_j_hi") cfg.census_j_hi = std::stol(value);
        else bad();
    } else {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": unknown section [" + section + "]");
    }
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    // First pass to find the experiment id so defaults are experiment-specific.
    std::string id;
    {
        std::string line;
        while (std::getline(in, line)) {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(0, eq);
            key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
            if (key == "id") {
                id = line.substr(eq + 1);
                id.erase(std::remove_if(id.begin(), id.end(), ::isspace), id.end());
            }
        }
    }
    if (id.empty()) throw std::invalid_argument("config has no experiment id");
    ExperimentConfig cfg = default_config(id);

    in.clear();
    in.seekg(0);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        auto vfirst = value.find_first_not_of(" \t");
        value = (vfirst == std::string::npos) ? "" : value.substr(vfirst);
        auto vlast = value.find_last_not_of(" \t");
        if (vlast != std::string::npos) value = value.substr(0, vlast + 1);
        if (section.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": key outside a section");
        apply_key(cfg, section, key, value, line_no);
    }
    return cfg;
}

std::vector<std::string> config_echo(const ExperimentConfig& cfg) {
    std::vector<std::string> out;
    out.push_back("experiment.id=" + cfg.id);
    out.push_back("experiment.replicas=" + std::to_string(cfg.replicas));
    out.push_back("experiment.seed=" + std::to_string(cfg.seed));
    out.push_back("graph.family=" + cfg.family);
    out.push_back("graph.alpha=" + format_g12(cfg.alpha));
    out.push_back("graph.d=" + std::to_string(cfg.d));
    out.push_back("graph.jmax=" + std::to_string(cfg.j_max));
    out.push_back("graph.r=" + std::to_string(cfg.r));
    out.push_back("graph.line_length=" + std::to_string(cfg.line_length));
    out.push_back("walk.beta=" + format_g12(cfg.beta));
    out.push_back("walk.m=" + std::to_string(cfg.m));
    out.push_back("walk.budget=" + std::to_string(cfg.budget));
    out.push_back("walk.lookahead_frac=" + format_g12(cfg.lookahead_frac));
    out.push_back("walk.laziness=" + format_g12(cfg.laziness));
    out.push_back("sweep.a=" + join_longs(cfg.a_values));
    out.push_back("sweep.t_max=" + std::to_string(cfg.t_max));
    out.push_back("sweep.m_mult=" + std::to_string(cfg.m_mult));
    out.push_back("sweep.horizons=" + join_u64s(cfg.horizons));
    out.push_back("sweep.recovery_traces=" + std::to_string(cfg.recovery_traces));
    out.push_back("sweep.recovery_horizon=" + std::to_string(cfg.recovery_horizon));
    out.push_back("sweep.depths=" + join_longs(cfg.depths));
    out.push_back("sweep.path_depths=" + join_longs(cfg.path_depths));
    out.push_back("sweep.census_j_lo=" + std::to_string(cfg.census_j_lo));
    out.push_back("sweep.census_j_hi=" + std::to_string(cfg.census_j_hi));
    return out;
}

LayerSliceReport layer_slice_report(const Network& net, Vertex source, Vertex sink) {
    LayerSliceReport out;
    VoltageSolution sol = solve_voltage(net, source, sink);
    out.s = sol.s;
    out.ceff = sol.ceff;
    out.d = net.max_degree_excluding(sink);
    const int d = static_cast<int>(out.d);
    LevelSets ls = level_sets(sol, d);
    out.s_band = static_cast<int>(level_index_of(sol.s, d));

    TraceNetwork gbar = trace_network_exact(net, source, sink);
    for (int i = 0; i + 2 < static_cast<int>(ls.classes.size()); ++i) {
        const auto& gi = ls.classes[static_cast<std::size_t>(i)];
        const auto& gmid = ls.classes[static_cast<std::size_t>(i + 1)];
        const auto& glo = ls.classes[static_cast<std::size_t>(i + 2)];
        if (gi.empty() || gmid.empty() || glo.empty()) continue;
        LayerSliceRow row;
        row.i = i;
        row.ceff = effective_conductance(gbar.net, gi, glo);
        row.separation_ok = (i + 2 <= out.s_band);
        out.rows.push_back(row);
    }
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CUTPATH_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 16u));
}

void parallel_replicas(int count, int threads, const std::function<void(int)>& fn) {
    const int workers = std::min(resolve_threads(threads), std::max(count, 1));
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto body = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.id == "E1") return run_e1(cfg);
    if (cfg.id == "E2") return run_e2(cfg);
    if (cfg.id == "E3") return run_e3(cfg);
    if (cfg.id == "E4") return run_e4(cfg);
    if (cfg.id == "E5") return run_e5(cfg);
    if (cfg.id == "E6") return run_e6(cfg);
    throw std::invalid_argument("unknown experiment id: " + cfg.id);
}

}  // namespace cutpath
