#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "analysis.hpp"
#include "generators.hpp"
#include "line_network.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "walk.hpp"

using namespace cutpath;

namespace {

LineNetwork unit_chain(std::size_t len) {
    return LineNetwork::from_weights({}, std::vector<double>(len, 1.0));
}

}  // namespace

TEST_CASE("return probabilities from eta partial sums") {
    LineNetwork chain = unit_chain(4);
    CHECK(return_prob(chain, 1) == doctest::Approx(0.75));
    CHECK(return_prob(chain, 0) == doctest::Approx(1.0));
    CHECK(return_prob(chain, 4) == doctest::Approx(0.0));
    CHECK_THROWS_AS(return_prob(chain, 5), std::invalid_argument);

    // Geometric rungs w(i,i+1) = 4^i, L = 6: recompute by direct summation.
    std::vector<double> rungs(6);
    for (int i = 0; i < 6; ++i) rungs[static_cast<std::size_t>(i)] = std::pow(4.0, i);
    LineNetwork geo = LineNetwork::from_weights({}, rungs);
    double num = 0.0, den = 0.0;
    for (int i = 2; i < 6; ++i) num += std::pow(4.0, -i);
    for (int i = 0; i < 6; ++i) den += std::pow(4.0, -i);
    CHECK(return_prob(geo, 2) == doctest::Approx(num / den).epsilon(1e-14));
    CHECK(return_prob(geo, 2) == doctest::Approx(255.0 / 4095.0).epsilon(1e-12));
}

TEST_CASE("escape probability equals the eta ratio gap") {
    LineNetwork chain = unit_chain(10);
    // beta = 0 gives the window (j-1, j+1).
    CHECK(escape_prob(chain, 3, 0.0) == doctest::Approx(1.0 - 6.0 / 8.0).epsilon(1e-12));
    CHECK(escape_prob(chain, 3, 0.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(escape_prob(chain, 9, 0.7), std::invalid_argument);  // window past L

    // Telescoping alternative: sum of r over the window.
    LineNetwork line = layered_line_network(2.0, 3, 100);
    const long j = 40;
    const double beta = 0.7;
    const long lo = pass_lower(j, beta), hi = pass_upper(j, beta);
    double rsum = 0.0;
    for (long i = lo; i < hi; ++i) rsum += line.r[static_cast<std::size_t>(i)];
    CHECK(escape_prob(line, j, beta) ==
          doctest::Approx(rsum / line.eta[static_cast<std::size_t>(lo)]).epsilon(1e-12));
}

TEST_CASE("escape probability matches simulated never-return frequency") {
    LineNetwork line = layered_line_network(2.0, 3, 100);
    Network net = line.to_network(false);
    const long j = 40;
    const double beta = 0.7;
    const long lo = pass_lower(j, beta), hi = pass_upper(j, beta);
    const double p = escape_prob(line, j, beta);
    StopCondition stop;
    stop.target_vertices = {static_cast<Vertex>(lo), 100};
    stop.budget = 10000000;
    int escaped = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        WalkTrace tr = simulate_walk(net, static_cast<Vertex>(hi), stop, derive_seed(3, 7, i), 2);
        REQUIRE(tr.stop_reason == StopReason::hit_vertex);
        if (tr.end == 100) ++escaped;
    }
    const double freq = static_cast<double>(escaped) / n;
    const double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(freq - p) <= 3 * sigma);
}

TEST_CASE("closed-form tail bounds") {
    CHECK(srw_chernoff_bound(20, 10) == doctest::Approx(400.0 * std::exp(-10.0)).epsilon(1e-12));
    CHECK(srw_chernoff_bound(20, 10) == doctest::Approx(0.0181609).epsilon(1e-4));
    CHECK(srw_chernoff_bound(10, 10) == doctest::Approx(16.417).epsilon(1e-3));  // vacuous
    CHECK(srw_chernoff_bound(8, 0) == 0.0);
    CHECK(srw_visits_bound(4, 0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(srw_visits_bound(5, 3), std::invalid_argument);
}

TEST_CASE("exact oracle: escape probability and parity zeros") {
    SrwOracle o8 = exact_srw_oracle(8, 100, 20, 0.0);
    CHECK(o8.p_escape == doctest::Approx(1.0 / 8.0).epsilon(1e-12));

    SrwOracle o20 = exact_srw_oracle(20, 2000, 10, 0.0);
    CHECK(o20.p_escape == doctest::Approx(1.0 / 20.0).epsilon(1e-12));
    CHECK(o20.p_tau_lt[10] == 0.0);  // distance 20 needs at least 20 steps
    CHECK(o20.p_tau_lt[20] == 0.0);
    CHECK(o20.p_tau_lt[21] > 0.0);
    for (long t = 1; t <= 2000; ++t) CHECK(o20.p_tau_lt[t] >= o20.p_tau_lt[t - 1]);
    CHECK(o20.p_tau_lt[2000] <= 1.0 + 1e-12);
}

TEST_CASE("exact oracle visit law matches the geometric closed form") {
    for (long a : {4L, 8L, 16L}) {
        SrwOracle o = exact_srw_oracle(a, 10, 10 * a, 0.0);
        const double kappa = 1.0 - 2.0 / static_cast<double>(a);
        for (long m = 0; m <= 10 * a; ++m)
            CHECK(o.p_visits_gt[static_cast<std::size_t>(m)] ==
                  doctest::Approx(std::pow(kappa, m)).epsilon(1e-10));
        CHECK(o.fitted_visits_c >= 1.0);
    }
}

TEST_CASE("oracle never exceeds the bounds across the sweep") {
    for (long a : {8L, 16L, 32L}) {
        SrwOracle o = exact_srw_oracle(a, 2000, 10 * a, 0.0);
        for (long t = 0; t <= 2000; ++t)
            CHECK(o.p_tau_lt[static_cast<std::size_t>(t)] <= srw_chernoff_bound(a, t));
        for (long m = 0; m <= 10 * a; ++m)
            CHECK(o.p_visits_gt[static_cast<std::size_t>(m)] <= srw_visits_bound(a, m));
    }
}

TEST_CASE("laziness slows hitting and inflates visit counts") {
    SrwOracle lazy = exact_srw_oracle(16, 2000, 160, 0.3);
    CHECK(lazy.p_escape == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    for (long t = 0; t <= 2000; ++t)
        CHECK(lazy.p_tau_lt[static_cast<std::size_t>(t)] <= srw_chernoff_bound(16, t));
    // Fitted decay constant shrinks with laziness but stays near 1 - laziness.
    CHECK(lazy.fitted_visits_c < 1.0);
    CHECK(lazy.fitted_visits_c > 0.5);
    SrwOracle brisk = exact_srw_oracle(16, 10, 160, 0.0);
    CHECK(brisk.fitted_visits_c >= 1.0);
}

TEST_CASE("minima analysis on a hand trace with geometric weights") {
    std::vector<double> rungs(8);
    for (int i = 0; i < 8; ++i) rungs[static_cast<std::size_t>(i)] = std::pow(4.0, i);
    LineNetwork geo = LineNetwork::from_weights({}, rungs);
    std::vector<Vertex> seq{0, 1, 0, 1, 2};
    MinimaRecord rec = minima_analysis(seq, geo);
    REQUIRE(rec.minima.size() == 3);  // f(0), f(1), f(2)
    CHECK(rec.times == std::vector<std::uint64_t>{0, 1, 4});
    CHECK(rec.minima[1] == doctest::Approx(return_prob(geo, 1)));
    CHECK(rec.recovery[1] == 2);          // the return to 0 recovers above M_0
    CHECK(rec.recovery[2] == UINT64_MAX); // horizon ends at the new minimum
    CHECK_FALSE(rec.certified[2]);        // at-horizon minima stay uncertified
    const double expect =
        (1.0 - return_prob(geo, 1)) + (1.0 - return_prob(geo, 2) / return_prob(geo, 1));
    CHECK(rec.lb_sum == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(minima_analysis(std::vector<Vertex>{}, geo), std::invalid_argument);
    CHECK_THROWS_AS(minima_analysis(std::vector<Vertex>{1, 2}, geo), std::invalid_argument);
}

TEST_CASE("monotone trace certifies every minimum before the horizon") {
    LineNetwork line = layered_line_network(2.0, 3, 30);
    std::vector<Vertex> seq(31);
    for (Vertex i = 0; i <= 30; ++i) seq[i] = i;
    MinimaRecord rec = minima_analysis(seq, line);
    REQUIRE(rec.minima.size() == 31);
    double expect = 0.0;
    for (std::size_t n = 1; n <= 30; ++n) {
        expect += 1.0 - line.eta[n] / line.eta[n - 1];
        CHECK(rec.recovery[n] == UINT64_MAX);
        if (n < 30) CHECK(rec.certified[n]);
    }
    CHECK_FALSE(rec.certified[30]);  // the final step has no future to certify
    CHECK(rec.lb_sum == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("certified minima pass the cut-time test") {
    LineNetwork line = layered_line_network(2.0, 3, 400);
    Network net = line.to_network(false);
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        StopCondition stop;
        stop.budget = 30000;
        stop.target_vertices = {400};
        WalkTrace tr = simulate_walk(net, 0, stop, derive_seed(23, 9, seed), stop.budget + 1);
        MinimaRecord rec = minima_analysis(tr.seq, line);
        std::vector<std::uint64_t> cuts = cut_times(tr.seq, 0);
        std::set<std::uint64_t> cut_set(cuts.begin(), cuts.end());
        for (std::size_t n = 1; n < rec.minima.size(); ++n) {
            if (!rec.certified[n]) continue;
            CHECK(cut_set.count(rec.times[n]) == 1);
        }
    }
}

TEST_CASE("recurrent chain stagnates and certifies only near the horizon") {
    LineNetwork chain = unit_chain(30);
    Network net = chain.to_network(false);
    StopCondition stop;
    stop.budget = 50000;
    WalkTrace tr = simulate_walk(net, 0, stop, 99, stop.budget + 1);
    MinimaRecord rec = minima_analysis(tr.seq, chain);
    for (std::size_t n = 1; n < rec.minima.size(); ++n) {
        if (rec.certified[n])
            CHECK(static_cast<double>(rec.times[n]) >= 0.5 * static_cast<double>(tr.steps));
    }
}

TEST_CASE("transitions into a fresh block of a reducible chain are cut times") {
    // Two-block chain: wander in {0,1}, one-way jump to {2,3}, wander there.
    std::mt19937_64 rng(4242);
    std::vector<Vertex> seq{0};
    bool jumped = false;
    std::uint64_t jump_time = 0;
    for (int t = 1; t <= 400; ++t) {
        Vertex prev = seq.back();
        if (!jumped && t > 150) {
            seq.push_back(2);
            jumped = true;
            jump_time = static_cast<std::uint64_t>(t);
        } else if (!jumped) {
            seq.push_back(prev == 0 ? 1 : (rng() % 2 ? 0u : 1u));
        } else {
            seq.push_back(prev == 2 ? 3 : (rng() % 2 ? 2u : 3u));
        }
    }
    std::vector<std::uint64_t> cuts = cut_times(seq, 0);
    CHECK(std::find(cuts.begin(), cuts.end(), jump_time - 1) != cuts.end());
}

TEST_CASE("conductance bound formula and vacuity flag") {
    ConductanceBound cb = conductance_bound(4.0, std::exp(-24.0));
    CHECK(cb.q == doctest::Approx(24.0 / std::log(4.0)).epsilon(1e-12));
    CHECK(cb.q == doctest::Approx(17.3123).epsilon(1e-4));
    CHECK(cb.bound == doctest::Approx(12.0 * std::log(4.0) / 24.0).epsilon(1e-12));
    CHECK(cb.bound == doctest::Approx(0.693147).epsilon(1e-5));
    CHECK_FALSE(cb.vacuous);

    ConductanceBound weak = conductance_bound(2.0, 0.5);
    CHECK(weak.q == doctest::Approx(1.0));
    CHECK(weak.bound == doctest::Approx(12.0));
    CHECK(weak.vacuous);

    CHECK(conductance_bound(4.0, 1e-9).bound < conductance_bound(4.0, 1e-6).bound);
    CHECK_THROWS_AS(conductance_bound(4.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(conductance_bound(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("resistance profiles: divergent chain, convergent doubling line") {
    // Unit chain: R(0 <-> n) = n.
    Network chain = unit_chain(10).to_network(false);
    std::vector<std::vector<Vertex>> cuts;
    for (Vertex n = 1; n <= 10; ++n) cuts.push_back({n});
    std::vector<double> prof = resistance_profile(chain, 0, cuts);
    for (std::size_t i = 0; i < prof.size(); ++i)
        CHECK(prof[i] == doctest::Approx(static_cast<double>(i + 1)).epsilon(1e-9));

    // Doubling rungs: R(0 <-> n) = sum 2^-i < 2.
    std::vector<double> rungs(20);
    for (int i = 0; i < 20; ++i) rungs[static_cast<std::size_t>(i)] = std::pow(2.0, i);
    Network dbl = LineNetwork::from_weights({}, rungs).to_network(false);
    std::vector<std::vector<Vertex>> cuts2{{5}, {10}, {20}};
    std::vector<double> prof2 = resistance_profile(dbl, 0, cuts2);
    CHECK(prof2[0] == doctest::Approx(2.0 * (1.0 - std::pow(2.0, -5))).epsilon(1e-9));
    CHECK(prof2[2] == doctest::Approx(2.0 * (1.0 - std::pow(2.0, -20))).epsilon(1e-9));
    CHECK(prof2[2] < 2.0);
    CHECK(prof2[0] <= prof2[1]);
    CHECK(prof2[1] <= prof2[2]);
    CHECK_THROWS_AS(resistance_profile(chain, 0, {{}}), std::invalid_argument);
}

TEST_CASE("layered and horn hosts have shrinking resistance increments") {
    LayeredGraph g = build_layered_graph({2.0, 3, 30, 8});
    std::vector<std::vector<Vertex>> bounds;
    for (long n : {5L, 10L, 15L, 20L, 25L, 30L})
        bounds.push_back(g.layer_vertices[static_cast<std::size_t>(n)]);
    std::vector<double> prof = resistance_profile(g.net, 0, bounds);
    for (std::size_t i = 1; i < prof.size(); ++i) CHECK(prof[i] >= prof[i - 1] - 1e-12);
    CHECK(prof[5] - prof[4] < prof[1] - prof[0]);

    HornSpec hs;
    hs.dim = 3;
    hs.alpha = 2.0;
    hs.x1_max = 40;
    HornGraph horn = build_horn(hs);
    std::vector<std::vector<Vertex>> hbounds;
    for (long n : {10L, 20L, 30L, 40L}) {
        std::vector<Vertex> b;
        for (Vertex v = 0; v < horn.net.vertex_count(); ++v)
            if (horn.net.layer(v) == n) b.push_back(v);
        hbounds.push_back(b);
    }
    std::vector<double> hprof = resistance_profile(horn.net, 0, hbounds);
    CHECK(hprof[3] - hprof[2] < hprof[1] - hprof[0]);
}

TEST_CASE("recovery frequencies respect the ratio bound per decile") {
    LineNetwork line = layered_line_network(2.0, 3, 300);
    Network net = line.to_network(false);
    std::vector<std::uint64_t> bin_n(10, 0), bin_rec(10, 0);
    for (int ti = 0; ti < 2000; ++ti) {
        StopCondition stop;
        stop.budget = 1500;
        stop.target_vertices = {300};
        WalkTrace tr = simulate_walk(net, 0, stop, derive_seed(31, 8, ti), stop.budget + 1);
        MinimaRecord rec = minima_analysis(tr.seq, line);
        for (std::size_t n = 1; n < rec.minima.size(); ++n) {
            const double ratio = rec.minima[n] / rec.minima[n - 1];
            const int bin = std::min(static_cast<int>(ratio * 10.0), 9);
            ++bin_n[static_cast<std::size_t>(bin)];
            if (rec.recovery[n] != UINT64_MAX) ++bin_rec[static_cast<std::size_t>(bin)];
        }
    }
    for (int b = 0; b < 10; ++b) {
        if (bin_n[static_cast<std::size_t>(b)] == 0) continue;
        const double n = static_cast<double>(bin_n[static_cast<std::size_t>(b)]);
        const double freq = static_cast<double>(bin_rec[static_cast<std::size_t>(b)]) / n;
        const double sigma = std::sqrt(std::max(freq * (1.0 - freq), 1e-12) / n);
        CHECK(freq <= (b + 1) / 10.0 + 3 * sigma);
    }
}
