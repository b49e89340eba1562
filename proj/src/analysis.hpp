#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "line_network.hpp"
#include "network.hpp"

namespace cutpath {

// Probability that the chain absorbed at L, started from j, hits 0 before L:
// (eta_j - eta_L) / (eta_0 - eta_L) = eta_j / eta_0 under eta_L = 0.
double return_prob(const LineNetwork& line, std::size_t j);

// Probability that from j_+ the walk never revisits j_- before absorption:
// 1 - eta_{j+}/eta_{j-} = (sum_{i=j-}^{j+ - 1} r_i) / eta_{j-}.
double escape_prob(const LineNetwork& line, long j, double beta);

// Closed-form tail bounds for the excursion conditioned to hit a before
// returning to 0: 2 a t e^{-a^2/(4t)} for the hitting time, 2 e^{-2m/a} for
// the number of midpoint visits (a must be even for the latter).
double srw_chernoff_bound(long a, long t);
double srw_visits_bound(long a, long m);

// Exact conditional laws from the absorbing chain on {0..a} (absorbing at 0
// and a, first step forced to 1, conditioned on absorption at a, which has
// probability 1/a regardless of laziness).
struct SrwOracle {
    long a = 0;
    double laziness = 0.0;
    double p_escape = 0.0;            // computed P(absorb at a), exactly 1/a
    std::vector<double> p_tau_lt;     // index t: P(tau_a < t | cond)
    std::vector<double> p_visits_gt;  // index m: P(|B| > m | cond), B = visits to a/2 before tau_a
    // Largest C with 2 e^{-2Cm/a} >= P(|B| > m | cond) for every m in range;
    // equals >= 1 for the non-lazy walk and shrinks with laziness. Empty
    // visits data (odd a or m_max == 0) leaves it at 0.
    double fitted_visits_c = 0.0;
};
SrwOracle exact_srw_oracle(long a, long t_max, long m_max, double laziness = 0.0);

// Martingale-minima record of a trace on a line network started at state 0,
// with f(x) = return_prob(line, x) strictly decreasing in x.
// minima[0] = f(0) = 1 at time 0; minima[n] is the n-th strict minimum.
// recovery[n] = first time after times[n] with f back above minima[n-1]
// (UINT64_MAX when none within the horizon). An index is certified as a
// cut-time only when additionally no later step revisits the minimum state
// (recovery alone does not rule that out), and the horizon was not reached
// at the minimum itself.
struct MinimaRecord {
    std::vector<double> minima;
    std::vector<std::uint64_t> times;
    std::vector<std::uint64_t> recovery;
    std::vector<bool> certified;
    double lb_sum = 0.0;  // sum over n >= 1 of (1 - M_n / M_{n-1})
    std::size_t certified_count = 0;
};
MinimaRecord minima_analysis(std::span<const Vertex> seq, const LineNetwork& line);

// 12 ln(d) / ln(1/s) with the vacuity flag q = ln(1/s)/ln(d) < 12 (the bound
// exceeds 1 there, while the path conductance never does).
struct ConductanceBound {
    double bound = 0.0;
    double q = 0.0;
    bool vacuous = false;
};
ConductanceBound conductance_bound(double d, double s);

// Effective resistances root <-> boundary_n for a nested family of boundary
// sets; nondecreasing when each boundary separates the root from the next.
std::vector<double> resistance_profile(const Network& net, Vertex root,
                                       const std::vector<std::vector<Vertex>>& boundaries);

// Named bound check, exact or empirical (half_width = 3 sigma when empirical).
struct BoundReport {
    std::string name;
    double value = 0.0;
    double half_width = 0.0;
    double bound = 0.0;
    bool satisfied = false;
};
BoundReport make_bound_report(std::string name, double value, double half_width, double bound);

}  // namespace cutpath
