#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "line_network.hpp"
#include "network.hpp"

namespace cutpath {

// --- random regular expanders -----------------------------------------------

struct ExpanderResult {
    Network net;
    double lambda2 = 0.0;  // second-largest adjacency eigenvalue
    int tries = 0;
};

// Simple d-regular graph on n vertices sampled by the configuration model,
// rejecting loops and parallel edges, and regenerating (up to 200 attempts)
// until lambda2 <= 2 sqrt(d-1) + 0.1. Requires n*d even and n > d.
ExpanderResult gen_regular_expander(std::size_t n, unsigned d, std::uint64_t seed);

// --- layer size schedule -----------------------------------------------------

// Layer j carries a copy of a size-2^k graph when 2^k/k^alpha <= j <
// 2^{k+1}/(k+1)^alpha. These intervals tile [j0, inf) contiguously once every
// interval from k0 on contains an integer; j0 = ceil(2^{k0}/k0^alpha) for the
// least such k0, and layers below j0 copy layer j0. Sizes then never more
// than double between adjacent layers.
struct LayerSchedule {
    int k = 0;    // size exponent for the queried layer
    long j0 = 0;  // first scheduled layer
};
LayerSchedule layer_schedule(double alpha, long j);

// --- layered expander graph --------------------------------------------------

struct LayeredGraphSpec {
    double alpha = 2.0;
    unsigned d = 3;       // expander degree, >= 3
    long j_max = 80;      // last layer index
    std::uint64_t seed = 1;
};

struct LayeredGraph {
    Network net;                                   // layer labels attached
    std::vector<std::vector<Vertex>> layer_vertices;
    std::vector<long> layer_size;                  // 2^{k(j)}
    std::vector<long> doubling_boundaries;         // j with size(j+1) == 2 size(j)
    long j0 = 0;
};

// Layers j = 0..j_max; one expander sample per distinct size, reused for
// every layer of that size and for the cross-layer wiring of same-size
// neighbors (x in G_j joined to y in G_{j+1} whenever x ~ y in the expander;
// no vertical identity edges). At a doubling boundary the layers are joined
// by a uniformly random stub matching with 2d stubs per lower vertex and d
// per upper vertex (parallel rungs permitted). Every degree is <= 4d.
LayeredGraph build_layered_graph(const LayeredGraphSpec& spec);

// --- horn subgraph of Z^d ----------------------------------------------------

struct HornSpec {
    unsigned dim = 3;     // lattice dimension, >= 3
    double alpha = 2.0;   // > 1
    long x1_max = 40;     // truncation along the axis, >= 2
    double f_floor = 1.5; // radius floor so the first layers are nonempty
};

struct HornGraph {
    Network net;                           // layer label = x1
    std::vector<std::vector<int>> coords;  // lattice coordinates per vertex
};

// Vertices are lattice points with 0 <= x1 <= x1_max and
// x2^2 + ... + xd^2 <= f(x1)^2, where f(x) = max(f_floor,
// (x ln^alpha x)^{1/(d-1)}) for x >= 2 and f(0) = f(1) = f_floor;
// edges are the nearest-neighbor pairs with both endpoints inside.
HornGraph build_horn(const HornSpec& spec);

// Radius of the horn at axis position x1.
double horn_radius(const HornSpec& spec, long x1);

// --- Z^2 disk with contracted exterior ---------------------------------------

struct GridDisk {
    Network net;
    Vertex origin = 0;  // the root X0
    Vertex sink = 0;    // contracted exterior Y0
    long radius = 0;
    std::vector<std::pair<int, int>> coord;  // interior vertices only
};

// Lattice points with Euclidean norm <= r, unit edges; every edge leaving
// the disk is redirected to a single sink vertex (parallel sink edges kept),
// so every interior degree is exactly 4. Layer label = floor(|x|); the sink
// gets layer r+1. Requires r >= 2.
GridDisk build_grid_disk(long r);

// --- induced line networks ---------------------------------------------------

// w(j,j+1) = number of edges between layers j and j+1; w(j,j) = twice the
// number of edges inside layer j; truncated at L <= j_max.
LineNetwork line_network_of(const LayeredGraph& g, std::size_t L);

// Same chain computed directly from the layer schedule (no graph instance):
// a d-regular layer of size m contributes w(j,j) = m d, same-size adjacent
// layers w(j,j+1) = m d, and a doubling boundary w(j,j+1) = 2 d m.
LineNetwork layered_line_network(double alpha, unsigned d, std::size_t L);

}  // namespace cutpath
