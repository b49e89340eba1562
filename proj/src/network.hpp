#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cutpath {

using Vertex = std::uint32_t;

struct Edge {
    Vertex u;
    Vertex v;
    double c;  // conductance, strictly positive
};

// Weighted undirected multigraph with positive conductances. Parallel edges
// and self-loops are allowed; vertex ids are dense in [0, n). Immutable after
// construction, so concurrent readers are safe.
//
// Alongside the raw edge list the constructor builds a merged simple view
// (parallel edges summed, self-loops split out) used by solvers and by the
// walk sampler. A self-loop of conductance w contributes w once to the
// vertex strength C_x, matching the transition rule p(stay) = w / C_x.
class Network {
public:
    Network() = default;

    // Validates and builds. Throws std::invalid_argument on n == 0,
    // out-of-range endpoints, or nonpositive/nonfinite conductance.
    static Network build(std::size_t n, std::vector<Edge> edges);

    std::size_t vertex_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Optional per-vertex layer labels.
    bool has_layers() const { return !layer_.empty(); }
    std::int32_t layer(Vertex x) const { return layer_[x]; }
    const std::vector<std::int32_t>& layers() const { return layer_; }
    void set_layers(std::vector<std::int32_t> layers);
    std::int32_t max_layer() const;

    // Merged view: distinct unordered adjacent pairs (u < v), loops excluded.
    std::size_t pair_count() const { return pairs_.size(); }
    std::pair<Vertex, Vertex> pair(std::uint32_t id) const { return pairs_[id]; }
    double pair_conductance(std::uint32_t id) const { return pair_c_[id]; }

    // Neighbors of x in the merged view.
    struct Arc {
        Vertex to;
        double c;           // summed conductance of the parallel bundle
        std::uint32_t pair; // id into pair arrays
    };
    std::span<const Arc> arcs(Vertex x) const {
        return {arcs_.data() + arc_off_[x], arc_off_[x + 1] - arc_off_[x]};
    }

    double loop_conductance(Vertex x) const { return loop_c_[x]; }
    double strength(Vertex x) const { return strength_[x]; }  // C_x, loops counted once

    // Multigraph degree: incident edge endpoints, loops counted twice.
    std::size_t degree(Vertex x) const { return degree_[x]; }
    std::size_t max_degree_excluding(Vertex skip) const;

    // Vertices reachable from x in the merged view (loops irrelevant).
    std::vector<bool> component_of(Vertex x) const;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::int32_t> layer_;

    std::vector<std::pair<Vertex, Vertex>> pairs_;
    std::vector<double> pair_c_;
    std::vector<std::size_t> arc_off_;
    std::vector<Arc> arcs_;
    std::vector<double> loop_c_;
    std::vector<double> strength_;
    std::vector<std::size_t> degree_;

    void build_merged_view();
};

// Quotient by a partition of the vertex set. Class i of the partition becomes
// vertex i of the result. Edges internal to a class (including pre-existing
// self-loops) are dropped; all other edges are retained with their
// multiplicity, endpoints remapped. Throws if the partition does not cover
// every vertex exactly once.
Network contract(const Network& net, const std::vector<std::vector<Vertex>>& classes);

// ugraph v1 text format:
//   ugraph v1 <n> <m>
//   <u> <v> <c>          (m lines; c as shortest round-trip decimal)
//   #layer <u> <k>       (one line per labeled vertex, when labels exist)
void save_ugraph(const Network& net, const std::string& path);
Network load_ugraph(const std::string& path);

std::string shortest_decimal(double x);

}  // namespace cutpath
