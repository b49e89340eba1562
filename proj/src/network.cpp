#include "network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cutpath {

Network Network::build(std::size_t n, std::vector<Edge> edges) {
    if (n == 0) throw std::invalid_argument("network must have at least one vertex");
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (!(e.c > 0.0) || !std::isfinite(e.c))
            throw std::invalid_argument("edge conductance must be positive and finite");
    }
    Network net;
    net.n_ = n;
    net.edges_ = std::move(edges);
    net.build_merged_view();
    return net;
}

void Network::build_merged_view() {
    loop_c_.assign(n_, 0.0);
    degree_.assign(n_, 0);

    std::vector<std::pair<Vertex, Vertex>> keys;
    keys.reserve(edges_.size());
    for (const Edge& e : edges_) {
        if (e.u == e.v) {
            loop_c_[e.u] += e.c;
            degree_[e.u] += 2;
        } else {
            keys.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
            degree_[e.u] += 1;
            degree_[e.v] += 1;
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    pairs_ = std::move(keys);
    pair_c_.assign(pairs_.size(), 0.0);
    for (const Edge& e : edges_) {
        if (e.u == e.v) continue;
        auto key = std::make_pair(std::min(e.u, e.v), std::max(e.u, e.v));
        auto it = std::lower_bound(pairs_.begin(), pairs_.end(), key);
        pair_c_[static_cast<std::size_t>(it - pairs_.begin())] += e.c;
    }

    arc_off_.assign(n_ + 1, 0);
    for (const auto& [u, v] : pairs_) {
        ++arc_off_[u + 1];
        ++arc_off_[v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) arc_off_[i + 1] += arc_off_[i];
    arcs_.resize(arc_off_[n_]);
    std::vector<std::size_t> fill(arc_off_.begin(), arc_off_.end() - 1);
    for (std::uint32_t id = 0; id < pairs_.size(); ++id) {
        auto [u, v] = pairs_[id];
        arcs_[fill[u]++] = Arc{v, pair_c_[id], id};
        arcs_[fill[v]++] = Arc{u, pair_c_[id], id};
    }

    strength_.assign(n_, 0.0);
    for (std::size_t x = 0; x < n_; ++x) {
        double s = loop_c_[x];
        for (const Arc& a : arcs(static_cast<Vertex>(x))) s += a.c;
        strength_[x] = s;
    }
}

void Network::set_layers(std::vector<std::int32_t> layers) {
    if (layers.size() != n_) throw std::invalid_argument("layer vector size mismatch");
    layer_ = std::move(layers);
}

std::int32_t Network::max_layer() const {
    std::int32_t m = 0;
    for (std::int32_t k : layer_) m = std::max(m, k);
    return m;
}

std::size_t Network::max_degree_excluding(Vertex skip) const {
    std::size_t d = 0;
    for (std::size_t x = 0; x < n_; ++x) {
        if (x == skip) continue;
        std::size_t dx = degree_[x];
        // Edges into the skipped vertex still count for x itself.
        d = std::max(d, dx);
    }
    return d;
}

std::vector<bool> Network::component_of(Vertex x) const {
    std::vector<bool> seen(n_, false);
    std::vector<Vertex> stack{x};
    seen[x] = true;
    while (!stack.empty()) {
        Vertex y = stack.back();
        stack.pop_back();
        for (const Arc& a : arcs(y)) {
            if (!seen[a.to]) {
                seen[a.to] = true;
                stack.push_back(a.to);
            }
        }
    }
    return seen;
}

Network contract(const Network& net, const std::vector<std::vector<Vertex>>& classes) {
    const std::size_t n = net.vertex_count();
    std::vector<std::uint32_t> cls(n, UINT32_MAX);
    for (std::uint32_t i = 0; i < classes.size(); ++i) {
        for (Vertex x : classes[i]) {
            if (x >= n) throw std::invalid_argument("partition vertex out of range");
            if (cls[x] != UINT32_MAX) throw std::invalid_argument("partition classes overlap");
            cls[x] = i;
        }
    }
    for (std::size_t x = 0; x < n; ++x)
        if (cls[x] == UINT32_MAX) throw std::invalid_argument("partition does not cover all vertices");

    std::vector<Edge> out;
    out.reserve(net.edges().size());
    for (const Edge& e : net.edges()) {
        std::uint32_t a = cls[e.u], b = cls[e.v];
        if (a == b) continue;
        out.push_back(Edge{a, b, e.c});
    }
    return Network::build(classes.size(), std::move(out));
}

std::string shortest_decimal(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void save_ugraph(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "ugraph v1 " << net.vertex_count() << ' ' << net.edges().size() << '\n';
    for (const Edge& e : net.edges())
        out << e.u << ' ' << e.v << ' ' << shortest_decimal(e.c) << '\n';
    if (net.has_layers()) {
        for (std::size_t x = 0; x < net.vertex_count(); ++x)
            out << "#layer " << x << ' ' << net.layer(static_cast<Vertex>(x)) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Network load_ugraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string magic, version;
    std::size_t n = 0, m = 0;
    if (!(in >> magic >> version >> n >> m) || magic != "ugraph" || version != "v1")
        throw std::runtime_error("not a ugraph v1 file: " + path);
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        Edge e{};
        std::string cs;
        if (!(in >> e.u >> e.v >> cs)) throw std::runtime_error("truncated edge list: " + path);
        e.c = std::strtod(cs.c_str(), nullptr);
        edges.push_back(e);
    }
    Network net = Network::build(n, std::move(edges));
    std::vector<std::int32_t> layers;
    std::string tok;
    while (in >> tok) {
        if (tok != "#layer") throw std::runtime_error("unexpected token in label block: " + tok);
        Vertex x;
        std::int32_t k;
        if (!(in >> x >> k) || x >= n) throw std::runtime_error("bad #layer line");
        if (layers.empty()) layers.assign(n, 0);
        layers[x] = k;
    }
    if (!layers.empty()) net.set_layers(std::move(layers));
    return net;
}

}  // namespace cutpath
