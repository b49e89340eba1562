// Acceptance suite: one test case per shipped criterion, each printing a
// single PASS/FAIL line. Run all of them with ./acceptance, or one with
// --test-case="*criterion N:*".

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "analysis.hpp"
#include "experiments.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "solve.hpp"
#include "walk.hpp"

using namespace cutpath;

namespace {

struct Criterion {
    const char* id;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    bool ok = true;

    explicit Criterion(const char* name) : id(name) {}
    void note(bool pass) { ok = ok && pass; }
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    ~Criterion() {
        std::printf("ACCEPTANCE %s: %s (%.1fs)\n", id, ok ? "PASS" : "FAIL", seconds());
        std::fflush(stdout);
    }
};

#define ACC_CHECK(crit, expr)  \
    do {                       \
        const bool acc_ok_ = static_cast<bool>(expr); \
        (crit).note(acc_ok_);  \
        CHECK(acc_ok_);        \
    } while (0)

std::filesystem::path fresh_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr std::uint64_t kSeed = 20260809;
constexpr std::uint64_t kStreamAcceptBase = 90;

}  // namespace

TEST_CASE("criterion 1: exact-network suite") {
    Criterion crit("C1");

    Network p3 = Network::build(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    ACC_CHECK(crit, std::abs(solve_voltage(p3, 0, 2).ceff - 0.5) <= 1e-9);
    Network tri = Network::build(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    VoltageSolution tsol = solve_voltage(tri, 0, 1);
    ACC_CHECK(crit, std::abs(tsol.ceff - 1.5) <= 1e-9);
    ACC_CHECK(crit, std::abs(tsol.v[2] - 0.5) <= 1e-9);
    Network par = Network::build(2, {{0, 1, 1.0}, {0, 1, 1.0}});
    ACC_CHECK(crit, std::abs(solve_voltage(par, 0, 1).ceff - 2.0) <= 1e-9);

    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        oracles::SpComposite sp = oracles::random_sp(seed, 6);
        Network net = Network::build(sp.n, sp.edges);
        const double got = solve_voltage(net, 0, 1).ceff;
        if (std::abs(got - sp.ceff) > 1e-9 * std::max(1.0, sp.ceff)) {
            ACC_CHECK(crit, false);
            break;
        }
    }

    // Subdivision preserves the source-sink conductance and old potentials.
    GridDisk disk = build_grid_disk(6);
    VoltageSolution sol = solve_voltage(disk.net, disk.origin, disk.sink);
    SubdividedNetwork sub = subdivide_between_levels(disk.net, sol, 0, 4);
    VoltageSolution re = solve_voltage(sub.net, disk.origin, disk.sink);
    ACC_CHECK(crit, !sub.z.empty());
    ACC_CHECK(crit, std::abs(re.ceff - sol.ceff) <= 1e-9);
    double max_dv = 0.0;
    for (Vertex x = 0; x < disk.net.vertex_count(); ++x)
        max_dv = std::max(max_dv, std::abs(re.v[x] - sol.v[x]));
    for (Vertex z : sub.z) max_dv = std::max(max_dv, std::abs(re.v[z] - sub.theta1));
    for (Vertex z : sub.z_prime) max_dv = std::max(max_dv, std::abs(re.v[z] - sub.theta2));
    ACC_CHECK(crit, max_dv <= 1e-9);

    ACC_CHECK(crit, crit.seconds() < 1.0);
}

TEST_CASE("criterion 2: trace-network identity") {
    Criterion crit("C2");

    Network p3 = Network::build(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    TraceNetwork tp = trace_network_exact(p3, 0, 2);
    for (std::uint32_t id = 0; id < tp.net.pair_count(); ++id) {
        auto [u, v] = tp.net.pair(id);
        const double expect = (u == 0 || v == 0) ? 3.0 : 1.0;
        ACC_CHECK(crit, std::abs(tp.net.pair_conductance(id) - expect) <= 1e-9);
    }

    // Monte Carlo crossing means on the r = 10 disk vs the exact network.
    GridDisk disk = build_grid_disk(10);
    TraceNetwork tn = trace_network_exact(disk.net, disk.origin, disk.sink);
    const std::size_t np = disk.net.pair_count();
    const int total_reps = 200000;
    const int chunks = 40;
    const int per_chunk = total_reps / chunks;
    std::vector<std::vector<double>> sums(chunks, std::vector<double>(np, 0.0));
    std::vector<std::vector<double>> sqs(chunks, std::vector<double>(np, 0.0));
    parallel_replicas(chunks, 0, [&](int chunk) {
        StopCondition stop;
        stop.target_vertices = {disk.sink};
        stop.budget = 1000000;
        for (int i = 0; i < per_chunk; ++i) {
            WalkTrace tr = simulate_walk(disk.net, disk.origin, stop,
                                         derive_seed(kSeed, kStreamAcceptBase + 2,
                                                     static_cast<std::uint64_t>(chunk) * per_chunk + i),
                                         2);
            for (std::size_t e = 0; e < np; ++e) {
                const auto x = static_cast<double>(tr.pair_crossings[e]);
                sums[static_cast<std::size_t>(chunk)][e] += x;
                sqs[static_cast<std::size_t>(chunk)][e] += x * x;
            }
        }
    });
    std::vector<double> sum(np, 0.0), sq(np, 0.0);
    for (int chunkI = 0; chunkI < chunks; ++chunkI)
        for (std::size_t e = 0; e < np; ++e) {
            sum[e] += sums[static_cast<std::size_t>(chunkI)][e];
            sq[e] += sqs[static_cast<std::size_t>(chunkI)][e];
        }
    int bad_edges = 0;
    for (std::size_t e = 0; e < np; ++e) {
        const double n = total_reps;
        const double mean = sum[e] / n;
        const double var = (sq[e] - sum[e] * sum[e] / n) / (n - 1);
        const double sigma = std::sqrt(std::max(var, 0.0) / n);
        if (std::abs(mean - tn.net.pair_conductance(e)) > 3.0 * sigma) ++bad_edges;
    }
    ACC_CHECK(crit, bad_edges == 0);
    ACC_CHECK(crit, crit.seconds() < 120.0);
}

TEST_CASE("criterion 3: layer slices of the crossing network stay under 4") {
    Criterion crit("C3");

    GridDisk disk = build_grid_disk(20);
    LayerSliceReport dr = layer_slice_report(disk.net, disk.origin, disk.sink);
    ACC_CHECK(crit, dr.d == 4);
    ACC_CHECK(crit, !dr.rows.empty());
    for (const LayerSliceRow& row : dr.rows) ACC_CHECK(crit, row.ceff <= 4.0);

    // Layered instance with the last layer contracted into a sink.
    LayeredGraph g = build_layered_graph({2.0, 3, 40, kSeed});
    std::vector<std::vector<Vertex>> classes;
    classes.push_back({0});
    std::vector<bool> used(g.net.vertex_count(), false);
    used[0] = true;
    std::vector<Vertex> last_layer = g.layer_vertices.back();
    for (Vertex v : last_layer) used[v] = true;
    for (Vertex v = 0; v < g.net.vertex_count(); ++v)
        if (!used[v]) classes.push_back({v});
    classes.push_back(last_layer);
    Network term = contract(g.net, classes);
    const auto sink = static_cast<Vertex>(term.vertex_count() - 1);
    LayerSliceReport lr = layer_slice_report(term, 0, sink);
    ACC_CHECK(crit, !lr.rows.empty());
    for (const LayerSliceRow& row : lr.rows) ACC_CHECK(crit, row.ceff <= 4.0);
}

TEST_CASE("criterion 4: conductance bound on the r=30 disk") {
    Criterion crit("C4");
    auto dir = fresh_dir("cutpath_acc_e4");
    ExperimentConfig cfg = default_config("E4");
    cfg.seed = kSeed;
    cfg.out_dir = dir.string();
    ExperimentReport rep = run_experiment(cfg);
    ACC_CHECK(crit, cfg.replicas >= 500);
    for (const BoundReport& b : rep.bounds) ACC_CHECK(crit, b.satisfied);
    ACC_CHECK(crit, crit.seconds() < 600.0);
}

TEST_CASE("criterion 5: excursion bound sweep") {
    Criterion crit("C5");
    for (long a : {8L, 16L, 32L}) {
        SrwOracle o = exact_srw_oracle(a, 2000, 10 * a, 0.0);
        for (long t = 0; t <= 2000; ++t)
            if (o.p_tau_lt[static_cast<std::size_t>(t)] > srw_chernoff_bound(a, t)) {
                ACC_CHECK(crit, false);
                break;
            }
        for (long m = 0; m <= 10 * a; ++m)
            if (o.p_visits_gt[static_cast<std::size_t>(m)] > srw_visits_bound(a, m)) {
                ACC_CHECK(crit, false);
                break;
            }
    }
    ACC_CHECK(crit, crit.seconds() < 60.0);
}

TEST_CASE("criterion 6: line-network laws") {
    Criterion crit("C6");
    LineNetwork line = layered_line_network(2.0, 3, 80);
    Network net = line.to_network(true);

    const std::vector<Vertex> states{5, 10, 20, 40, 60};
    const int reps = 100000;
    for (std::size_t si = 0; si < states.size(); ++si) {
        const Vertex j = states[si];
        const double p = return_prob(line, j);
        std::vector<std::uint32_t> hits(32, 0);
        parallel_replicas(32, 0, [&](int chunk) {
            StopCondition stop;
            stop.target_vertices = {0, 80};
            stop.budget = 100000000;
            std::uint32_t local = 0;
            const int per = reps / 32;
            for (int i = 0; i < per; ++i) {
                WalkTrace tr = simulate_walk(net, j, stop,
                                             derive_seed(kSeed, kStreamAcceptBase + 6 + si,
                                                         static_cast<std::uint64_t>(chunk) * per + i),
                                             2);
                if (tr.end == 0) ++local;
            }
            hits[static_cast<std::size_t>(chunk)] = local;
        });
        std::uint64_t hit0 = 0;
        for (std::uint32_t h : hits) hit0 += h;
        const double n = static_cast<double>((reps / 32) * 32);
        const double freq = static_cast<double>(hit0) / n;
        const double sigma = std::sqrt(p * (1.0 - p) / n);
        ACC_CHECK(crit, std::abs(freq - p) <= 3.0 * sigma);
    }

    // Martingale increments of eta over interior steps.
    const long j0 = layer_schedule(2.0, 0).j0;
    std::vector<std::array<double, 3>> acc(64, {0.0, 0.0, 0.0});  // sum, sumsq, n
    parallel_replicas(64, 0, [&](int chunk) {
        StopCondition stop;
        stop.budget = 20000;
        WalkTrace tr = simulate_walk(net, 0, stop,
                                     derive_seed(kSeed, kStreamAcceptBase + 20, chunk),
                                     stop.budget + 1);
        double s = 0.0, s2 = 0.0, n = 0.0;
        for (std::size_t t = 0; t + 1 < tr.seq.size(); ++t) {
            const Vertex x = tr.seq[t];
            if (x < static_cast<Vertex>(j0) || x >= 80) continue;
            const double diff = line.eta[tr.seq[t + 1]] - line.eta[x];
            s += diff;
            s2 += diff * diff;
            n += 1.0;
        }
        acc[static_cast<std::size_t>(chunk)] = {s, s2, n};
    });
    double s = 0.0, s2 = 0.0, n = 0.0;
    for (const auto& a : acc) {
        s += a[0];
        s2 += a[1];
        n += a[2];
    }
    const double mean = s / n;
    const double var = (s2 - s * s / n) / (n - 1.0);
    const double sigma = std::sqrt(var / n);
    ACC_CHECK(crit, std::abs(mean) <= 3.0 * sigma);
}

TEST_CASE("criterion 7: minima growth and recovery deciles") {
    Criterion crit("C7");
    auto dir = fresh_dir("cutpath_acc_e5");
    ExperimentConfig cfg = default_config("E5");
    cfg.seed = kSeed;
    cfg.out_dir = dir.string();
    ExperimentReport rep = run_experiment(cfg);
    const auto& means = rep.series.at("mean_lb_sum");
    REQUIRE(means.size() == 3);
    ACC_CHECK(crit, means[0] < means[1]);
    ACC_CHECK(crit, means[1] < means[2]);
    for (const BoundReport& b : rep.bounds) ACC_CHECK(crit, b.satisfied);
}

TEST_CASE("criterion 8: cutpoint and linking censuses decay in the block index") {
    Criterion crit("C8");
    auto dir = fresh_dir("cutpath_acc_e1");
    ExperimentConfig cfg = default_config("E1");
    cfg.seed = kSeed;
    cfg.out_dir = dir.string();
    ExperimentReport rep = run_experiment(cfg);
    const auto& ks = rep.series.at("block_k");
    const auto& means = rep.series.at("block_mean");
    for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
        if (ks[i] < 5.0) continue;
        ACC_CHECK(crit, means[i + 1] <= means[i] + 1e-12);
    }

    // Linking census over the dyadic blocks k = 3..6, kept well below the
    // line truncation so absorption censoring stays mild across the range.
    auto dir2 = fresh_dir("cutpath_acc_e2");
    ExperimentConfig cfg2 = default_config("E2");
    cfg2.seed = kSeed;
    cfg2.census_j_hi = 128;
    cfg2.out_dir = dir2.string();
    ExperimentReport rep2 = run_experiment(cfg2);
    const auto& ps = rep2.series.at("p_ak_positive");
    REQUIRE(ps.size() >= 4);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i)
        ACC_CHECK(crit, ps[i + 1] <= ps[i] + 1e-12);
}

TEST_CASE("criterion 9: recurrence/transience contrast of the profiles") {
    Criterion crit("C9");
    auto dir = fresh_dir("cutpath_acc_e3");
    ExperimentConfig cfg = default_config("E3");
    cfg.seed = kSeed;
    cfg.out_dir = dir.string();
    ExperimentReport rep = run_experiment(cfg);

    const auto& host = rep.series.at("host_r");
    REQUIRE(host.size() >= 3);
    const double first_inc = host[1] - host[0];
    const double last_inc = host[host.size() - 1] - host[host.size() - 2];
    ACC_CHECK(crit, last_inc < first_inc / 10.0);

    const auto& depths = rep.series.at("path_depth");
    const auto& path = rep.series.at("path_mean");
    for (std::size_t i = 0; i + 1 < depths.size(); ++i) {
        if (depths[i + 1] != 2.0 * depths[i]) continue;
        ACC_CHECK(crit, path[i + 1] - path[i] >= 0.5);
    }
}

TEST_CASE("criterion 10: reruns are byte-identical") {
    Criterion crit("C10");
    auto dir_a = fresh_dir("cutpath_acc_det_a");
    auto dir_b = fresh_dir("cutpath_acc_det_b");

    ExperimentConfig e6 = default_config("E6");
    e6.seed = kSeed;
    e6.out_dir = dir_a.string();
    run_experiment(e6);
    e6.out_dir = dir_b.string();
    run_experiment(e6);

    ExperimentConfig e2 = default_config("E2");
    e2.line_length = 150;
    e2.census_j_hi = 64;
    e2.replicas = 10;
    e2.budget = 400000;
    e2.seed = kSeed;
    e2.threads = 1;
    e2.out_dir = dir_a.string();
    run_experiment(e2);
    e2.threads = 8;
    e2.out_dir = dir_b.string();
    run_experiment(e2);

    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
        const auto name = entry.path().filename();
        ACC_CHECK(crit, std::filesystem::exists(dir_b / name));
        ACC_CHECK(crit, read_file(entry.path()) == read_file(dir_b / name));
        ++files;
    }
    ACC_CHECK(crit, files >= 5);
}
