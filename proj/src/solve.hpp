#pragma once

#include <vector>

#include "network.hpp"

namespace cutpath {

// Harmonic potential with v(source) = 1, v(sink) = 0.
struct VoltageSolution {
    Vertex source = 0;
    Vertex sink = 0;
    std::vector<double> v;   // clamped to [0,1]; 0 on vertices unreachable from the terminals
    double ceff = 0.0;       // total current out of the source
    double s = 0.0;          // max potential among neighbors of the sink
};

// Solves the Dirichlet problem on the interior vertices with a symmetric
// positive-definite reduced Laplacian. Direct sparse factorization up to
// 1e5 interior vertices, diagonally preconditioned CG above; relative
// residual must reach 1e-10 or the solve throws.
// Throws std::invalid_argument if source == sink or they are disconnected.
VoltageSolution solve_voltage(const Network& net, Vertex source, Vertex sink);

// Effective conductance between disjoint nonempty vertex sets, computed by
// contracting each set to a terminal and solving. Effective resistance is
// the reciprocal.
double effective_conductance(const Network& net, const std::vector<Vertex>& a,
                             const std::vector<Vertex>& b);

// The unique i with d^{-i-1} < v <= d^{-i}, for v in (0, 1].
std::int32_t level_index_of(double v, int d);

// Potential bands G_i = { x : d^{-i-1} < v(x) <= d^{-i} }. The sink (and any
// vertex with v == 0) is reported in a terminal class with index -1 and
// belongs to no band.
struct LevelSets {
    int d = 2;
    std::vector<std::int32_t> index;          // per vertex; -1 = terminal class
    std::vector<std::vector<Vertex>> classes; // classes[i] = G_i
};
LevelSets level_sets(const VoltageSolution& sol, int d);

// Result of splitting the crossing edges around band i at the two potential
// thresholds d^{-i-1} (new vertices Z) and d^{-i-2} (new vertices Z').
struct SubdividedNetwork {
    Network net;                 // original vertices first, then Z, then Z'
    std::vector<Vertex> z;       // target potential theta1
    std::vector<Vertex> z_prime; // target potential theta2
    double theta1 = 0.0;
    double theta2 = 0.0;
    std::vector<double> expected_v;  // old voltages extended by the targets
};

// Splits every G_i - G_{i+1} edge (x, y) into (x, z), (z, y) with
//   c_xz = (v(x) - v(y)) / (v(x) - theta) * c_xy
//   c_zy = (v(x) - v(y)) / (theta - v(y)) * c_xy
// so that 1/c_xz + 1/c_zy = 1/c_xy and the re-solved potential puts v(z) at
// the threshold; same again between G_{i+1} and G_{i+2}. Edges already at a
// threshold potential on one endpoint, and edges with v(x) == v(y), are left
// unsplit (the would-be z coincides with an endpoint / carries no current).
// Requires bands i, i+1, i+2 to be nonempty.
SubdividedNetwork subdivide_between_levels(const Network& net, const VoltageSolution& sol,
                                           int i, int d);

// Network whose edge conductances are the exact expected crossing counts of
// the walk from source absorbed at sink:
//   E N(x,y) = (v(x) + v(y)) c_xy / C_eff        (per merged pair)
//   E N(x,x) = v(x) c_xx / C_eff                 (self-loops)
// and g(x) = v(x) C_x / C_eff is the expected number of visits to x.
// Edges with zero expected crossings (both endpoints at potential 0) are
// dropped.
struct TraceNetwork {
    Network net;
    std::vector<double> visits;  // g(x)
    double ceff = 0.0;           // C_eff of the underlying solve
};
TraceNetwork trace_network_exact(const Network& net, Vertex source, Vertex sink);

}  // namespace cutpath
