#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "network.hpp"

namespace cutpath {

enum class StopReason { hit_vertex, hit_layer, budget };

// A walk always carries a step budget as a backstop; the vertex and layer
// targets are optional. The layer target fires on reaching any layer >= it.
struct StopCondition {
    std::vector<Vertex> target_vertices;
    std::optional<std::int32_t> target_layer;
    std::uint64_t budget = 0;
};

// Recorded walk. The vertex sequence is kept up to seq_cap steps; the
// crossing counts, endpoints, and layer visit times are always complete.
// Crossing counts are per merged vertex pair of the host (parallel edges
// pooled), plus per-vertex self-loop traversals.
struct WalkTrace {
    std::vector<Vertex> seq;
    bool seq_complete = true;
    std::uint64_t steps = 0;  // T; seq.size() == T+1 when complete
    StopReason stop_reason = StopReason::budget;
    Vertex start = 0;
    Vertex end = 0;
    std::vector<std::uint64_t> pair_crossings;  // indexed by host pair id
    std::vector<std::uint64_t> loop_crossings;  // per vertex
    // Layer visit times (host layers required), -1 when unvisited.
    std::vector<std::int64_t> first_visit;
    std::vector<std::int64_t> last_visit;
};

// Conductance-proportional network walk (self-loops included), deterministic
// given the seed. Throws if the start is out of range, the budget is zero,
// or a layer target is requested on an unlabeled network.
WalkTrace simulate_walk(const Network& net, Vertex start, const StopCondition& stop,
                        std::uint64_t seed, std::uint64_t seq_cap = 10000000);

// Layer sequence of a trace (requires host layers and a complete sequence).
std::vector<std::int32_t> layer_sequence(const Network& net, const WalkTrace& trace);

// PATH (unit conductance on every crossed pair) and G^N (conductance =
// crossing count), both on the host vertex id space.
struct PathSubgraph {
    Network path;
    Network gn;
};
PathSubgraph path_subgraph(const Network& net, const WalkTrace& trace);

// Alternating first-hit times of j_- and j_+ around j, the linking count
// (number of completed alternations ending at j_+), and the pass segments:
// maximal [s, t] with X_s = j_-, X_t = j_+ and neither value in between.
struct PassRecord {
    long j = 0;
    long j_minus = 0;
    long j_plus = 0;
    double beta = 0.0;
    int m = 0;
    std::vector<std::uint64_t> s_times;
    std::vector<std::uint64_t> t_times;
    std::uint64_t linking = 0;  // number of finite t_i
    bool linked = false;        // linking >= m
    std::vector<std::pair<std::uint64_t, std::uint64_t>> passes;
};
PassRecord detect_passes(std::span<const std::int32_t> layers, long j, double beta, int m);

long pass_lower(long j, double beta);  // floor(j - j^beta)
long pass_upper(long j, double beta);  // ceil(j + j^beta)

// Linking census over replicas of layer sequences sharing one line network.
struct LinkStats {
    long j_lo = 0, j_hi = 0;
    int m = 0;
    double beta = 0.0;
    std::uint64_t replicas = 0;
    std::vector<double> p_j;                         // P(not linked), index j - j_lo
    std::vector<int> k_values;                       // dyadic blocks (2^k, 2^{k+1}] covered
    std::vector<std::vector<std::uint32_t>> a_k;     // a_k[rep][ki]
    std::vector<double> p_ak_positive;               // per ki
};

class LinkingCensus {
public:
    // Census over j in [j_lo, j_hi]; requires pass_lower(j_lo) >= 0.
    LinkingCensus(long j_lo, long j_hi, double beta, int m);

    // Per-j completed alternation counts of one trace, capped at m.
    // Const and reentrant, so replicas can run it in parallel; feed the
    // results back through add_links in replica order.
    std::vector<std::uint32_t> links_of_trace(std::span<const std::int32_t> layers) const;
    void add_links(const std::vector<std::uint32_t>& links);
    void add_trace(std::span<const std::int32_t> layers) { add_links(links_of_trace(layers)); }

    LinkStats finish() const;

private:
    long j_lo_, j_hi_;
    double beta_;
    int m_;
    std::vector<long> lower_, upper_;
    std::vector<std::vector<std::uint32_t>> by_state_;  // state -> census js listening
    std::vector<std::uint64_t> not_linked_;             // per j
    std::vector<std::vector<std::uint32_t>> a_k_;
    std::uint64_t replicas_ = 0;
};

// Times t in [0, T - W) whose past {X_0..X_t} is disjoint from the recorded
// future {X_{t+1}..X_T}; linear scan via last-visit timestamps. Requires
// W < T. The window W censors the tail where the unexplored future could
// still destroy disjointness.
std::vector<std::uint64_t> cut_times(std::span<const Vertex> seq, std::uint64_t lookahead_w);

// Vertices of PATH other than the endpoints whose removal separates X_0 from
// X_T, via biconnected components and the block-cut tree. Requires
// X_0 != X_T.
std::vector<Vertex> path_cutpoints(const Network& net, const WalkTrace& trace);

// Separating vertices between a and b in an arbitrary network (helper used
// by path_cutpoints; exposed for tests).
std::vector<Vertex> separating_vertices(const Network& net, Vertex a, Vertex b);

struct CutRecord {
    std::uint64_t horizon = 0;
    std::uint64_t lookahead = 0;
    std::vector<std::uint64_t> times;
    std::vector<Vertex> cutpoints;
};
CutRecord cut_record(const Network& net, const WalkTrace& trace, std::uint64_t lookahead_w);

// Nonnegative chain excursion from 0 conditioned to hit a before returning
// to 0, sampled exactly through the h-transform with h(x) = x: the first step
// is forced to 1 and p(x -> x+1) = (x+1)/(2x). With laziness q the walk stays
// put with probability q at each interior step.
std::vector<Vertex> sample_conditioned_excursion(long a, std::uint64_t seed, double laziness = 0.0);

// Conditioned passes on a layered graph, sampled by rejection: start at a
// uniform vertex of layer j_-, accept runs reaching layer j_+ before
// returning to layer j_-. Reports the fraction of accepted passes that avoid
// the marked set entirely and the fraction that visit the designated vertex.
struct PassHitStats {
    std::uint64_t accepted = 0;
    std::uint64_t attempts = 0;
    double miss_freq = 0.0;
    double designated_hit_freq = 0.0;
};
PassHitStats pass_hit_statistics(const Network& layered, long j, double beta,
                                 const std::vector<Vertex>& marked, Vertex designated,
                                 std::uint64_t passes_wanted, std::uint64_t seed,
                                 std::uint64_t step_cap = 1000000);

}  // namespace cutpath
