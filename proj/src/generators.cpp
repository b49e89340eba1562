#include "generators.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "rng.hpp"

namespace cutpath {

namespace {

constexpr int kExpanderRetries = 200;
constexpr std::size_t kDenseEigenLimit = 1500;

// Streams for seed derivation within a generator spec.
enum : std::uint64_t { kStreamExpander = 1, kStreamBoundary = 2, kStreamSpectral = 3 };

double second_eigenvalue_dense(const Network& net) {
    const auto n = static_cast<Eigen::Index>(net.vertex_count());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : net.edges()) {
        a(e.u, e.v) += 1.0;
        a(e.v, e.u) += 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[n - 2];
}

// Power iteration on A + dI with the uniform top eigenvector deflated;
// the shift keeps the spectrum nonnegative so the iteration converges to
// the second-largest eigenvalue of A rather than the most negative one.
double second_eigenvalue_power(const Network& net, unsigned d, Rng& rng) {
    const std::size_t n = net.vertex_count();
    std::vector<double> x(n), y(n);
    for (double& xi : x) xi = rng.next_double() - 0.5;
    auto deflate = [&](std::vector<double>& v) {
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
        for (double& vi : v) vi -= mean;
    };
    auto normalize = [&](std::vector<double>& v) {
        double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (norm == 0.0) norm = 1.0;
        for (double& vi : v) vi /= norm;
    };
    deflate(x);
    normalize(x);
    double prev = 0.0;
    for (int it = 0; it < 3000; ++it) {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            double acc = static_cast<double>(d) * x[u];
            for (const Network::Arc& a : net.arcs(static_cast<Vertex>(u))) acc += a.c * x[a.to];
            y[u] = acc;
        }
        deflate(y);
        double rayleigh = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
        normalize(y);
        x.swap(y);
        // The gate needs a few digits only; near-degenerate top clusters make
        // full convergence slow and pointless here.
        if (it > 50 && std::abs(rayleigh - prev) < 1e-6) return rayleigh - static_cast<double>(d);
        prev = rayleigh;
    }
    return prev - static_cast<double>(d);
}

}  // namespace

ExpanderResult gen_regular_expander(std::size_t n, unsigned d, std::uint64_t seed) {
    if (d < 3) throw std::invalid_argument("expander degree must be >= 3");
    if (n <= d) throw std::invalid_argument("need more vertices than the degree");
    if ((n * d) % 2 != 0) throw std::invalid_argument("n*d must be even");

    // Random regular graphs concentrate just around the Ramanujan value
    // 2 sqrt(d-1), so the acceptance gate sits slightly above it.
    const double lambda_max = 2.0 * std::sqrt(static_cast<double>(d) - 1.0) + 0.1;
    Rng rng(derive_seed(seed, kStreamExpander, 0));

    std::vector<Vertex> stubs(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (unsigned k = 0; k < d; ++k) stubs[i * d + k] = static_cast<Vertex>(i);

    for (int attempt = 1; attempt <= kExpanderRetries; ++attempt) {
        // Fisher-Yates over the stub list, then pair consecutive stubs.
        for (std::size_t i = stubs.size() - 1; i > 0; --i)
            std::swap(stubs[i], stubs[rng.next_below(i + 1)]);

        std::vector<Edge> edges;
        edges.reserve(n * d / 2);
        std::set<std::pair<Vertex, Vertex>> seen;
        bool simple = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            Vertex u = stubs[i], v = stubs[i + 1];
            if (u == v) {
                simple = false;
                break;
            }
            auto key = std::make_pair(std::min(u, v), std::max(u, v));
            if (!seen.insert(key).second) {
                simple = false;
                break;
            }
            edges.push_back(Edge{key.first, key.second, 1.0});
        }
        if (!simple) continue;

        Network net = Network::build(n, std::move(edges));
        double lambda2 = (n <= kDenseEigenLimit) ? second_eigenvalue_dense(net)
                                                 : second_eigenvalue_power(net, d, rng);
        if (lambda2 <= lambda_max) return ExpanderResult{std::move(net), lambda2, attempt};
    }
    throw std::runtime_error("expander generation exhausted its retry budget");
}

namespace {

double interval_start(double alpha, int k) {
    return std::exp2(static_cast<double>(k)) / std::pow(static_cast<double>(k), alpha);
}

int schedule_k0(double alpha) {
    constexpr int kCap = 64;
    for (int k = 2; k < kCap; ++k) {
        bool ok = true;
        for (int kk = k; kk < kCap; ++kk) {
            double lo = interval_start(alpha, kk);
            double hi = interval_start(alpha, kk + 1);
            if (!(std::ceil(lo) < hi)) {
                ok = false;
                break;
            }
        }
        if (ok) return k;
    }
    throw std::runtime_error("no valid layer schedule start found");
}

}  // namespace

LayerSchedule layer_schedule(double alpha, long j) {
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
    if (j < 0) throw std::invalid_argument("layer index must be nonnegative");
    const int k0 = schedule_k0(alpha);
    const long j0 = static_cast<long>(std::ceil(interval_start(alpha, k0)));
    const double jq = static_cast<double>(std::max(j, j0));
    int k = k0;
    while (interval_start(alpha, k + 1) <= jq) ++k;
    return LayerSchedule{k, j0};
}

LayeredGraph build_layered_graph(const LayeredGraphSpec& spec) {
    if (!(spec.alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
    if (spec.d < 3) throw std::invalid_argument("expander degree must be >= 3");
    const long j0 = layer_schedule(spec.alpha, 0).j0;
    if (spec.j_max < j0) throw std::invalid_argument("j_max below the schedule start");

    const long nl = spec.j_max + 1;
    std::vector<int> kexp(nl);
    std::vector<long> size(nl);
    for (long j = 0; j < nl; ++j) {
        kexp[j] = layer_schedule(spec.alpha, j).k;
        size[j] = 1L << kexp[j];
    }

    // One expander sample per distinct size.
    std::map<int, Network> expanders;
    for (long j = 0; j < nl; ++j) {
        if (!expanders.count(kexp[j])) {
            ExpanderResult res = gen_regular_expander(static_cast<std::size_t>(size[j]), spec.d,
                                                      derive_seed(spec.seed, kStreamExpander, kexp[j]));
            expanders.emplace(kexp[j], std::move(res.net));
        }
    }

    std::vector<std::size_t> offset(nl + 1, 0);
    for (long j = 0; j < nl; ++j) offset[j + 1] = offset[j] + static_cast<std::size_t>(size[j]);
    const std::size_t n = offset[nl];

    std::vector<Edge> edges;
    LayeredGraph out;
    for (long j = 0; j < nl; ++j) {
        const Network& exp = expanders.at(kexp[j]);
        const auto base = static_cast<Vertex>(offset[j]);
        for (const Edge& e : exp.edges())
            edges.push_back(Edge{base + e.u, base + e.v, 1.0});

        if (j + 1 >= nl) continue;
        const auto up = static_cast<Vertex>(offset[j + 1]);
        if (size[j + 1] == size[j]) {
            // Cross wiring copies the expander adjacency between the layers.
            for (const Edge& e : exp.edges()) {
                edges.push_back(Edge{base + e.u, up + e.v, 1.0});
                edges.push_back(Edge{base + e.v, up + e.u, 1.0});
            }
        } else if (size[j + 1] == 2 * size[j]) {
            out.doubling_boundaries.push_back(j);
            std::vector<Vertex> lower(static_cast<std::size_t>(2 * spec.d * size[j]));
            std::vector<Vertex> upper(static_cast<std::size_t>(spec.d * size[j + 1]));
            for (long x = 0; x < size[j]; ++x)
                for (unsigned s = 0; s < 2 * spec.d; ++s)
                    lower[static_cast<std::size_t>(x) * 2 * spec.d + s] = static_cast<Vertex>(x);
            for (long y = 0; y < size[j + 1]; ++y)
                for (unsigned s = 0; s < spec.d; ++s)
                    upper[static_cast<std::size_t>(y) * spec.d + s] = static_cast<Vertex>(y);
            Rng rng(derive_seed(spec.seed, kStreamBoundary, static_cast<std::uint64_t>(j)));
            for (std::size_t i = upper.size() - 1; i > 0; --i)
                std::swap(upper[i], upper[rng.next_below(i + 1)]);
            for (std::size_t i = 0; i < lower.size(); ++i)
                edges.push_back(Edge{base + lower[i], up + upper[i], 1.0});
        } else {
            throw std::runtime_error("layer schedule produced a non-doubling size jump");
        }
    }

    out.net = Network::build(n, std::move(edges));
    std::vector<std::int32_t> layers(n);
    out.layer_vertices.resize(nl);
    for (long j = 0; j < nl; ++j) {
        out.layer_vertices[j].reserve(static_cast<std::size_t>(size[j]));
        for (std::size_t x = offset[j]; x < offset[j + 1]; ++x) {
            layers[x] = static_cast<std::int32_t>(j);
            out.layer_vertices[j].push_back(static_cast<Vertex>(x));
        }
    }
    out.net.set_layers(std::move(layers));
    out.layer_size.assign(size.begin(), size.end());
    out.j0 = j0;
    return out;
}

double horn_radius(const HornSpec& spec, long x1) {
    if (x1 <= 1) return spec.f_floor;
    const double x = static_cast<double>(x1);
    const double body = std::pow(x * std::pow(std::log(x), spec.alpha),
                                 1.0 / static_cast<double>(spec.dim - 1));
    return std::max(spec.f_floor, body);
}

HornGraph build_horn(const HornSpec& spec) {
    if (spec.dim < 3) throw std::invalid_argument("horn dimension must be >= 3");
    if (!(spec.alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
    if (spec.x1_max < 2) throw std::invalid_argument("x1_max must be >= 2");

    const unsigned cross = spec.dim - 1;
    HornGraph out;
    std::vector<std::map<std::vector<int>, Vertex>> by_layer(static_cast<std::size_t>(spec.x1_max + 1));

    // Lexicographic enumeration of cross-sections keeps vertex ids deterministic.
    for (long x1 = 0; x1 <= spec.x1_max; ++x1) {
        const double f = horn_radius(spec, x1);
        const double f2 = f * f;
        const int lim = static_cast<int>(std::floor(f));
        std::vector<int> cur(cross);
        std::fill(cur.begin(), cur.end(), -lim);
        while (true) {
            double norm2 = 0.0;
            for (int c : cur) norm2 += static_cast<double>(c) * c;
            if (norm2 <= f2) {
                auto id = static_cast<Vertex>(out.coords.size());
                std::vector<int> full(spec.dim);
                full[0] = static_cast<int>(x1);
                std::copy(cur.begin(), cur.end(), full.begin() + 1);
                out.coords.push_back(std::move(full));
                by_layer[static_cast<std::size_t>(x1)].emplace(cur, id);
            }
            std::size_t pos = cross;
            while (pos-- > 0) {
                if (++cur[pos] <= lim) break;
                cur[pos] = -lim;
                if (pos == 0) {
                    pos = SIZE_MAX;
                    break;
                }
            }
            if (pos == SIZE_MAX) break;
        }
    }

    std::vector<Edge> edges;
    for (Vertex v = 0; v < out.coords.size(); ++v) {
        const std::vector<int>& c = out.coords[v];
        const auto x1 = static_cast<std::size_t>(c[0]);
        // Axis neighbor.
        if (c[0] < spec.x1_max) {
            std::vector<int> key(c.begin() + 1, c.end());
            auto it = by_layer[x1 + 1].find(key);
            if (it != by_layer[x1 + 1].end()) edges.push_back(Edge{v, it->second, 1.0});
        }
        // Cross-section neighbors in the + direction.
        for (unsigned i = 1; i < spec.dim; ++i) {
            std::vector<int> key(c.begin() + 1, c.end());
            key[i - 1] += 1;
            auto it = by_layer[x1].find(key);
            if (it != by_layer[x1].end()) edges.push_back(Edge{v, it->second, 1.0});
        }
    }

    out.net = Network::build(out.coords.size(), std::move(edges));
    std::vector<std::int32_t> layers(out.coords.size());
    for (Vertex v = 0; v < out.coords.size(); ++v) layers[v] = out.coords[v][0];
    out.net.set_layers(std::move(layers));
    return out;
}

GridDisk build_grid_disk(long r) {
    if (r < 2) throw std::invalid_argument("disk radius must be >= 2");
    GridDisk out;
    out.radius = r;
    std::map<std::pair<int, int>, Vertex> id;
    for (int x = static_cast<int>(-r); x <= r; ++x) {
        for (int y = static_cast<int>(-r); y <= r; ++y) {
            if (static_cast<long>(x) * x + static_cast<long>(y) * y <= r * r) {
                id.emplace(std::make_pair(x, y), static_cast<Vertex>(out.coord.size()));
                out.coord.emplace_back(x, y);
            }
        }
    }
    const auto sink = static_cast<Vertex>(out.coord.size());
    out.sink = sink;
    out.origin = id.at({0, 0});

    std::vector<Edge> edges;
    const int dx[4] = {1, 0, -1, 0};
    const int dy[4] = {0, 1, 0, -1};
    for (Vertex v = 0; v < out.coord.size(); ++v) {
        auto [x, y] = out.coord[v];
        for (int dir = 0; dir < 4; ++dir) {
            int nx = x + dx[dir], ny = y + dy[dir];
            auto it = id.find({nx, ny});
            if (it == id.end()) {
                edges.push_back(Edge{v, sink, 1.0});  // boundary-crossing edge
            } else if (dir < 2) {
                edges.push_back(Edge{v, it->second, 1.0});
            }
        }
    }
    out.net = Network::build(out.coord.size() + 1, std::move(edges));
    std::vector<std::int32_t> layers(out.coord.size() + 1);
    for (Vertex v = 0; v < out.coord.size(); ++v) {
        auto [x, y] = out.coord[v];
        layers[v] = static_cast<std::int32_t>(
            std::floor(std::sqrt(static_cast<double>(x) * x + static_cast<double>(y) * y)));
    }
    layers[sink] = static_cast<std::int32_t>(r + 1);
    out.net.set_layers(std::move(layers));
    return out;
}

LineNetwork line_network_of(const LayeredGraph& g, std::size_t L) {
    const std::size_t nl = g.layer_vertices.size();
    if (L + 1 > nl) throw std::invalid_argument("truncation exceeds the last layer");
    if (L < 1) throw std::invalid_argument("line network needs at least one rung");
    std::vector<double> within(L + 1, 0.0), cross(L, 0.0);
    for (const Edge& e : g.net.edges()) {
        std::int32_t a = g.net.layer(e.u), b = g.net.layer(e.v);
        if (a > b) std::swap(a, b);
        if (static_cast<std::size_t>(a) > L) continue;
        if (a == b) {
            if (static_cast<std::size_t>(a) <= L) within[a] += 1.0;
        } else if (b == a + 1 && static_cast<std::size_t>(b) <= L) {
            cross[a] += 1.0;
        }
    }
    std::vector<double> loops(L + 1);
    for (std::size_t j = 0; j <= L; ++j) loops[j] = 2.0 * within[j];
    return LineNetwork::from_weights(std::move(loops), std::move(cross));
}

LineNetwork layered_line_network(double alpha, unsigned d, std::size_t L) {
    if (L < 1) throw std::invalid_argument("line network needs at least one rung");
    std::vector<double> sizes(L + 1);
    for (std::size_t j = 0; j <= L; ++j)
        sizes[j] = std::exp2(layer_schedule(alpha, static_cast<long>(j)).k);
    std::vector<double> loops(L + 1), rungs(L);
    for (std::size_t j = 0; j <= L; ++j) loops[j] = static_cast<double>(d) * sizes[j];
    for (std::size_t j = 0; j < L; ++j) {
        rungs[j] = (sizes[j + 1] == sizes[j]) ? static_cast<double>(d) * sizes[j]
                                              : 2.0 * static_cast<double>(d) * sizes[j];
    }
    return LineNetwork::from_weights(std::move(loops), std::move(rungs));
}

}  // namespace cutpath
