#include "analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "solve.hpp"
#include "walk.hpp"

namespace cutpath {

double return_prob(const LineNetwork& line, std::size_t j) {
    if (j > line.length()) throw std::invalid_argument("state beyond the truncation");
    return line.eta[j] / line.eta[0];
}

double escape_prob(const LineNetwork& line, long j, double beta) {
    const long jm = pass_lower(j, beta), jp = pass_upper(j, beta);
    if (jm < 0) throw std::invalid_argument("pass window extends below 0");
    if (static_cast<std::size_t>(jp) > line.length())
        throw std::invalid_argument("pass window beyond the truncation");
    return 1.0 - line.eta[static_cast<std::size_t>(jp)] / line.eta[static_cast<std::size_t>(jm)];
}

double srw_chernoff_bound(long a, long t) {
    if (a < 1 || t < 0) throw std::invalid_argument("bad bound arguments");
    if (t == 0) return 0.0;
    const double ad = static_cast<double>(a), td = static_cast<double>(t);
    return 2.0 * ad * td * std::exp(-ad * ad / (4.0 * td));
}

double srw_visits_bound(long a, long m) {
    if (a < 2 || a % 2 != 0) throw std::invalid_argument("visits bound needs even a >= 2");
    if (m < 0) throw std::invalid_argument("bad bound arguments");
    return 2.0 * std::exp(-2.0 * static_cast<double>(m) / static_cast<double>(a));
}

namespace {

// P(hit hi before lo | start) for the lazy +-1 walk on [lo, hi], by a dense
// absorbing-chain solve.
double hit_prob_before(long lo, long hi, long start, double laziness) {
    if (start <= lo) return 0.0;
    if (start >= hi) return 1.0;
    const long ni = hi - lo - 1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    const double half = (1.0 - laziness) / 2.0;
    for (long x = lo + 1; x < hi; ++x) {
        const long r = x - lo - 1;
        m(r, r) = 1.0 - laziness;
        if (x - 1 > lo) m(r, r - 1) = -half;
        if (x + 1 < hi) m(r, r + 1) = -half;
        if (x + 1 == hi) rhs(r) = half;
    }
    Eigen::VectorXd h = m.partialPivLu().solve(rhs);
    return h(start - lo - 1);
}

}  // namespace

SrwOracle exact_srw_oracle(long a, long t_max, long m_max, double laziness) {
    if (a < 2 || a > 64) throw std::invalid_argument("oracle supports 2 <= a <= 64");
    if (t_max < 0 || t_max > 10000) throw std::invalid_argument("oracle supports t_max <= 10000");
    if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
    if (laziness < 0.0 || laziness >= 1.0) throw std::invalid_argument("laziness must be in [0,1)");

    SrwOracle oracle;
    oracle.a = a;
    oracle.laziness = laziness;
    oracle.p_escape = hit_prob_before(0, a, 1, laziness);

    // Forced first step 0 -> 1, then the absorbing chain on {0..a}.
    // P(tau_a < t | absorb at a) = P(X_{t-1} = a) / p_escape.
    oracle.p_tau_lt.assign(static_cast<std::size_t>(t_max) + 1, 0.0);
    std::vector<double> p(static_cast<std::size_t>(a) + 1, 0.0), q(p.size(), 0.0);
    p[1] = 1.0;  // time 1
    const double half = (1.0 - laziness) / 2.0;
    for (long t = 2; t <= t_max; ++t) {
        std::fill(q.begin(), q.end(), 0.0);
        q[0] = p[0];
        q[static_cast<std::size_t>(a)] = p[static_cast<std::size_t>(a)];
        for (long x = 1; x < a; ++x) {
            const double mass = p[static_cast<std::size_t>(x)];
            if (mass == 0.0) continue;
            q[static_cast<std::size_t>(x)] += laziness * mass;
            q[static_cast<std::size_t>(x - 1)] += half * mass;
            q[static_cast<std::size_t>(x + 1)] += half * mass;
        }
        p.swap(q);
        // p now holds the law at time t; tau_a < t+1 iff X_t = a.
        if (t + 1 <= t_max)
            oracle.p_tau_lt[static_cast<std::size_t>(t + 1)] = p[static_cast<std::size_t>(a)] / oracle.p_escape;
    }

    // Visit counts at b = a/2 through the embedded chain: per time point at b
    // the walk escapes upward (ending at a) or downward (ending at 0) with
    // the solved one-step exit probabilities, else produces another point.
    if (a % 2 == 0 && m_max > 0) {
        const long b = a / 2;
        const double reach_b = hit_prob_before(0, b, 1, laziness);
        const double up = half * hit_prob_before(b, a, b + 1, laziness);
        const double dn = half * (1.0 - hit_prob_before(0, b, b - 1, laziness));
        const double stay = 1.0 - up - dn;
        const double to_a = reach_b * up / (up + dn);  // = p_escape
        oracle.p_visits_gt.assign(static_cast<std::size_t>(m_max) + 1, 0.0);
        double tail = to_a / oracle.p_escape;  // P(|B| > 0 | cond) = 1
        for (long m = 0; m <= m_max; ++m) {
            oracle.p_visits_gt[static_cast<std::size_t>(m)] = tail;
            tail *= stay;
        }
        double fitted = HUGE_VAL;
        for (long m = 1; m <= m_max; ++m) {
            const double pm = oracle.p_visits_gt[static_cast<std::size_t>(m)];
            if (pm <= 0.0) continue;
            fitted = std::min(fitted, static_cast<double>(a) / (2.0 * static_cast<double>(m)) *
                                          std::log(2.0 / pm));
        }
        oracle.fitted_visits_c = fitted;
    }
    return oracle;
}

MinimaRecord minima_analysis(std::span<const Vertex> seq, const LineNetwork& line) {
    if (seq.empty()) throw std::invalid_argument("empty trace");
    if (seq[0] != 0) throw std::invalid_argument("minima analysis expects a trace started at 0");
    for (Vertex x : seq)
        if (x > line.length()) throw std::invalid_argument("trace leaves the line network");

    // f is strictly decreasing in the state, so strict minima of f are first
    // visits to new maximum states, which grow one at a time.
    MinimaRecord rec;
    const std::uint64_t horizon = seq.size() - 1;
    rec.minima.push_back(1.0);
    rec.times.push_back(0);
    rec.recovery.push_back(UINT64_MAX);
    rec.certified.push_back(false);

    Vertex max_state = 0;
    for (std::size_t t = 1; t < seq.size(); ++t) {
        const Vertex x = seq[t];
        if (x > max_state) {
            max_state = x;
            rec.minima.push_back(return_prob(line, x));
            rec.times.push_back(t);
            rec.recovery.push_back(UINT64_MAX);
            rec.certified.push_back(false);
        } else if (x + 1 <= max_state) {
            // Visiting x closes the recovery of record n = x + 1 if still open.
            const std::size_t n = x + 1;
            if (n < rec.recovery.size() && rec.recovery[n] == UINT64_MAX && rec.times[n] < t)
                rec.recovery[n] = t;
        }
    }

    std::vector<std::uint64_t> last(static_cast<std::size_t>(max_state) + 1, 0);
    for (std::size_t t = 0; t < seq.size(); ++t) last[seq[t]] = t;
    for (std::size_t n = 1; n < rec.minima.size(); ++n) {
        rec.lb_sum += 1.0 - rec.minima[n] / rec.minima[n - 1];
        const bool no_recovery = rec.recovery[n] == UINT64_MAX;
        const bool no_revisit = last[n] == rec.times[n];
        if (no_recovery && no_revisit && rec.times[n] < horizon) {
            rec.certified[n] = true;
            ++rec.certified_count;
        }
    }
    return rec;
}

ConductanceBound conductance_bound(double d, double s) {
    if (!(d >= 2.0)) throw std::invalid_argument("degree must be >= 2");
    if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("s must lie in (0,1)");
    ConductanceBound out;
    out.q = std::log(1.0 / s) / std::log(d);
    out.bound = 12.0 * std::log(d) / std::log(1.0 / s);
    out.vacuous = out.q < 12.0;
    return out;
}

std::vector<double> resistance_profile(const Network& net, Vertex root,
                                       const std::vector<std::vector<Vertex>>& boundaries) {
    std::vector<double> out;
    out.reserve(boundaries.size());
    for (const auto& boundary : boundaries) {
        if (boundary.empty()) throw std::invalid_argument("empty boundary set");
        out.push_back(1.0 / effective_conductance(net, {root}, boundary));
    }
    return out;
}

BoundReport make_bound_report(std::string name, double value, double half_width, double bound) {
    BoundReport rep;
    rep.name = std::move(name);
    rep.value = value;
    rep.half_width = half_width;
    rep.bound = bound;
    rep.satisfied = value <= bound + half_width;
    return rep;
}

}  // namespace cutpath
