#include "line_network.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cutpath {

LineNetwork LineNetwork::from_weights(std::vector<double> loops, std::vector<double> rungs) {
    if (rungs.empty()) throw std::invalid_argument("line network needs at least one rung");
    const std::size_t len = rungs.size();
    if (loops.empty()) loops.assign(len + 1, 0.0);
    if (loops.size() != len + 1) throw std::invalid_argument("loop vector must have length L+1");
    for (double w : rungs)
        if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("rung weights must be positive");
    for (double w : loops)
        if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("loop weights must be nonnegative");

    LineNetwork line;
    line.loop = std::move(loops);
    line.rung = std::move(rungs);
    line.r.resize(len);
    for (std::size_t i = 0; i < len; ++i) line.r[i] = 1.0 / line.rung[i];
    line.eta.assign(len + 1, 0.0);
    for (std::size_t i = len; i-- > 0;) line.eta[i] = line.eta[i + 1] + line.r[i];
    return line;
}

Network LineNetwork::to_network(bool with_loops) const {
    const std::size_t len = length();
    std::vector<Edge> edges;
    edges.reserve(2 * len + 1);
    for (std::size_t j = 0; j < len; ++j) {
        if (with_loops && loop[j] > 0.0)
            edges.push_back(Edge{static_cast<Vertex>(j), static_cast<Vertex>(j), loop[j]});
        edges.push_back(Edge{static_cast<Vertex>(j), static_cast<Vertex>(j + 1), rung[j]});
    }
    if (with_loops && loop[len] > 0.0)
        edges.push_back(Edge{static_cast<Vertex>(len), static_cast<Vertex>(len), loop[len]});
    Network net = Network::build(len + 1, std::move(edges));
    std::vector<std::int32_t> layers(len + 1);
    std::iota(layers.begin(), layers.end(), 0);
    net.set_layers(std::move(layers));
    return net;
}

}  // namespace cutpath
