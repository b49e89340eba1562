#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "network.hpp"

namespace cutpath {

// Flat key=value config with [section] headers; unknown keys are errors.
// Every field has a desk-scale default per experiment (see default_config).
struct ExperimentConfig {
    // [experiment]
    std::string id = "E6";
    int replicas = 100;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: CUTPATH_THREADS env, else hardware default

    // [graph]
    std::string family = "layered";  // layered | disk | line
    double alpha = 2.0;
    unsigned d = 3;
    long j_max = 80;
    long r = 30;
    long line_length = 0;

    // [walk]
    double beta = 0.7;
    int m = 3;
    std::uint64_t budget = 0;
    double lookahead_frac = 0.1;
    double laziness = 0.0;

    // [sweep]
    std::vector<long> a_values{8, 16, 32};
    long t_max = 2000;
    long m_mult = 10;
    std::vector<std::uint64_t> horizons{1000, 10000, 100000};
    long recovery_traces = 10000;
    std::uint64_t recovery_horizon = 2000;
    std::vector<long> depths;
    std::vector<long> path_depths;
    long census_j_lo = 9;
    long census_j_hi = 1024;

    std::string out_dir = ".";
};

ExperimentConfig default_config(const std::string& id);
ExperimentConfig load_config(const std::string& path);

// Flattened config echo (sorted key=value lines) embedded in every output.
std::vector<std::string> config_echo(const ExperimentConfig& cfg);

struct ExperimentReport {
    std::string id;
    std::vector<BoundReport> bounds;
    std::map<std::string, std::vector<double>> series;  // named result columns
    std::vector<std::string> files;
    bool all_satisfied = true;
};

// Runs one of E1..E6 and writes its CSV files plus a human-readable summary
// into cfg.out_dir. Outputs are byte-identical across reruns of the same
// config and do not depend on the worker count.
//
//   E1  cutpoint census on the layered graph (per dyadic layer block)
//   E2  linking census on the layered line network (p_j, A_k, P(A_k > 0))
//   E3  resistance profiles: exact host vs PATH replicas
//   E4  trace-network bounds on the disk (layer slices, conductance bound,
//       PATH <= G^N, concavity direction)
//   E5  martingale minima: lower-bound sum growth and recovery deciles
//   E6  excursion oracle vs closed-form bounds sweep
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Layer-slice conductances of the expected-crossings network: one row per
// band index i with bands i, i+1, i+2 nonempty. separation_ok marks slices
// whose upper threshold still lies above every sink attachment (i + 2 <=
// band(s)), which is the regime where the slice carries all source-to-sink
// current.
struct LayerSliceRow {
    int i = 0;
    double ceff = 0.0;
    bool separation_ok = false;
};
struct LayerSliceReport {
    double s = 0.0;
    std::size_t d = 0;   // max degree excluding the sink
    double ceff = 0.0;   // source<->sink conductance of the host
    int s_band = 0;
    std::vector<LayerSliceRow> rows;
};
LayerSliceReport layer_slice_report(const Network& net, Vertex source, Vertex sink);

// Worker count resolution: explicit > CUTPATH_THREADS env > hardware.
int resolve_threads(int requested);

// Runs fn(replica) for replica in [0, count) on the resolved worker count;
// callers aggregate through preallocated per-replica slots.
void parallel_replicas(int count, int threads, const std::function<void(int)>& fn);

}  // namespace cutpath
