#include "solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cutpath {

namespace {

constexpr double kResidualTol = 1e-10;
// Direct factorization fill-in explodes on expander-like graphs well below
// the size where lattices are still fine, so the cutover is conservative and
// the iterative path keeps a direct fallback.
constexpr std::size_t kDirectLimit = 20000;

using SpMat = Eigen::SparseMatrix<double>;

}  // namespace

VoltageSolution solve_voltage(const Network& net, Vertex source, Vertex sink) {
    const std::size_t n = net.vertex_count();
    if (source >= n || sink >= n) throw std::invalid_argument("terminal out of range");
    if (source == sink) throw std::invalid_argument("source and sink must differ");

    std::vector<bool> comp = net.component_of(source);
    if (!comp[sink]) throw std::invalid_argument("source and sink are disconnected");

    // Interior = component minus the two terminals.
    std::vector<std::int64_t> idx(n, -1);
    std::vector<Vertex> interior;
    for (std::size_t x = 0; x < n; ++x) {
        if (!comp[x] || x == source || x == sink) continue;
        idx[x] = static_cast<std::int64_t>(interior.size());
        interior.push_back(static_cast<Vertex>(x));
    }

    VoltageSolution sol;
    sol.source = source;
    sol.sink = sink;
    sol.v.assign(n, 0.0);
    sol.v[source] = 1.0;

    const std::size_t ni = interior.size();
    if (ni > 0) {
        std::vector<Eigen::Triplet<double>> trips;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ni));
        for (std::size_t r = 0; r < ni; ++r) {
            Vertex x = interior[r];
            double diag = 0.0;
            for (const Network::Arc& a : net.arcs(x)) {
                diag += a.c;  // self-loops cancel from the harmonic condition
                if (a.to == source) {
                    b[static_cast<Eigen::Index>(r)] += a.c;
                } else if (a.to != sink) {
                    trips.emplace_back(static_cast<int>(r), static_cast<int>(idx[a.to]), -a.c);
                }
            }
            trips.emplace_back(static_cast<int>(r), static_cast<int>(r), diag);
        }
        SpMat lap(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(ni));
        lap.setFromTriplets(trips.begin(), trips.end());

        Eigen::VectorXd x;
        const double bnorm = b.norm();
        auto residual_ok = [&]() {
            return bnorm == 0.0 || (lap * x - b).norm() / bnorm <= kResidualTol;
        };
        bool solved = false;
        if (ni > kDirectLimit) {
            Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                                     Eigen::IncompleteCholesky<double>>
                cg;
            cg.setTolerance(1e-13);
            cg.setMaxIterations(4000);
            cg.compute(lap);
            if (cg.info() == Eigen::Success) {
                x = cg.solve(b);
                solved = residual_ok();
            }
        }
        if (!solved) {
            Eigen::SimplicialLDLT<SpMat> solver(lap);
            if (solver.info() != Eigen::Success)
                throw std::runtime_error("voltage solve: factorization failed");
            x = solver.solve(b);
            if (!residual_ok())
                throw std::runtime_error("voltage solve did not converge to tolerance");
        }
        for (std::size_t r = 0; r < ni; ++r)
            sol.v[interior[r]] = std::clamp(x[static_cast<Eigen::Index>(r)], 0.0, 1.0);
    }

    double ceff = 0.0;
    for (const Network::Arc& a : net.arcs(source)) ceff += a.c * (1.0 - sol.v[a.to]);
    sol.ceff = ceff;

    double s = 0.0;
    for (const Network::Arc& a : net.arcs(sink)) s = std::max(s, sol.v[a.to]);
    sol.s = s;
    return sol;
}

double effective_conductance(const Network& net, const std::vector<Vertex>& a,
                             const std::vector<Vertex>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("terminal sets must be nonempty");
    const std::size_t n = net.vertex_count();
    std::vector<bool> in_a(n, false), in_b(n, false);
    for (Vertex x : a) {
        if (x >= n) throw std::invalid_argument("terminal vertex out of range");
        in_a[x] = true;
    }
    for (Vertex x : b) {
        if (x >= n) throw std::invalid_argument("terminal vertex out of range");
        if (in_a[x]) throw std::invalid_argument("terminal sets overlap");
        in_b[x] = true;
    }
    std::vector<std::vector<Vertex>> classes(2);
    classes[0] = a;
    classes[1] = b;
    for (std::size_t x = 0; x < n; ++x)
        if (!in_a[x] && !in_b[x]) classes.push_back({static_cast<Vertex>(x)});
    Network q = contract(net, classes);
    return solve_voltage(q, 0, 1).ceff;
}

std::int32_t level_index_of(double v, int d) {
    if (!(v > 0.0) || v > 1.0) throw std::invalid_argument("potential must lie in (0, 1]");
    if (d < 2) throw std::invalid_argument("level-set base must be >= 2");
    double t = -std::log(v) / std::log(static_cast<double>(d));
    auto i = static_cast<std::int32_t>(std::floor(t));
    // Fix up boundary rounding.
    while (i > 0 && v > std::pow(d, -static_cast<double>(i))) --i;
    while (v <= std::pow(d, -static_cast<double>(i) - 1.0)) ++i;
    if (i < 0) i = 0;
    return i;
}

LevelSets level_sets(const VoltageSolution& sol, int d) {
    if (d < 2) throw std::invalid_argument("level-set base must be >= 2");
    LevelSets ls;
    ls.d = d;
    const std::size_t n = sol.v.size();
    ls.index.assign(n, -1);
    std::int32_t maxi = -1;
    for (std::size_t x = 0; x < n; ++x) {
        if (x == sol.sink || sol.v[x] <= 0.0) continue;  // terminal class
        ls.index[x] = level_index_of(sol.v[x], d);
        maxi = std::max(maxi, ls.index[x]);
    }
    ls.classes.assign(static_cast<std::size_t>(maxi + 1), {});
    for (std::size_t x = 0; x < n; ++x)
        if (ls.index[x] >= 0) ls.classes[static_cast<std::size_t>(ls.index[x])].push_back(static_cast<Vertex>(x));
    return ls;
}

SubdividedNetwork subdivide_between_levels(const Network& net, const VoltageSolution& sol,
                                           int i, int d) {
    LevelSets ls = level_sets(sol, d);
    auto band_nonempty = [&](int k) {
        return k >= 0 && k < static_cast<int>(ls.classes.size()) && !ls.classes[static_cast<std::size_t>(k)].empty();
    };
    if (!band_nonempty(i) || !band_nonempty(i + 1) || !band_nonempty(i + 2))
        throw std::invalid_argument("subdivision requires three nonempty bands");

    SubdividedNetwork out;
    out.theta1 = std::pow(d, -static_cast<double>(i) - 1.0);
    out.theta2 = std::pow(d, -static_cast<double>(i) - 2.0);
    out.expected_v = sol.v;

    const std::size_t n = net.vertex_count();
    std::vector<Edge> edges;
    edges.reserve(net.edges().size());
    std::size_t next = n;

    auto split = [&](const Edge& e, int lo_band, double theta, std::vector<Vertex>& bucket) -> bool {
        std::int32_t bu = ls.index[e.u], bv = ls.index[e.v];
        if (!((bu == lo_band && bv == lo_band + 1) || (bv == lo_band && bu == lo_band + 1)))
            return false;
        Vertex x = (bu == lo_band) ? e.u : e.v;  // higher-potential endpoint
        Vertex y = (bu == lo_band) ? e.v : e.u;
        double vx = sol.v[x], vy = sol.v[y];
        if (vx == vy || vx <= theta || vy >= theta) return false;  // degenerate: no split
        double cxz = (vx - vy) / (vx - theta) * e.c;
        double czy = (vx - vy) / (theta - vy) * e.c;
        auto z = static_cast<Vertex>(next++);
        bucket.push_back(z);
        out.expected_v.push_back(theta);
        edges.push_back(Edge{x, z, cxz});
        edges.push_back(Edge{z, y, czy});
        return true;
    };

    for (const Edge& e : net.edges()) {
        if (e.u != e.v && split(e, i, out.theta1, out.z)) continue;
        if (e.u != e.v && split(e, i + 1, out.theta2, out.z_prime)) continue;
        edges.push_back(e);
    }
    out.net = Network::build(next, std::move(edges));
    return out;
}

TraceNetwork trace_network_exact(const Network& net, Vertex source, Vertex sink) {
    VoltageSolution sol = solve_voltage(net, source, sink);
    TraceNetwork tn;
    tn.ceff = sol.ceff;
    tn.visits.assign(net.vertex_count(), 0.0);
    for (std::size_t x = 0; x < net.vertex_count(); ++x)
        tn.visits[x] = sol.v[x] * net.strength(static_cast<Vertex>(x)) / sol.ceff;

    std::vector<Edge> edges;
    edges.reserve(net.pair_count());
    for (std::uint32_t id = 0; id < net.pair_count(); ++id) {
        auto [u, v] = net.pair(id);
        double en = (sol.v[u] + sol.v[v]) * net.pair_conductance(id) / sol.ceff;
        if (en > 0.0) edges.push_back(Edge{u, v, en});
    }
    for (std::size_t x = 0; x < net.vertex_count(); ++x) {
        double lc = net.loop_conductance(static_cast<Vertex>(x));
        if (lc > 0.0 && sol.v[x] > 0.0)
            edges.push_back(Edge{static_cast<Vertex>(x), static_cast<Vertex>(x), sol.v[x] * lc / sol.ceff});
    }
    tn.net = Network::build(net.vertex_count(), std::move(edges));
    if (net.has_layers()) tn.net.set_layers(net.layers());
    return tn;
}

}  // namespace cutpath
