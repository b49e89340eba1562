#include "walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace cutpath {

WalkTrace simulate_walk(const Network& net, Vertex start, const StopCondition& stop,
                        std::uint64_t seed, std::uint64_t seq_cap) {
    const std::size_t n = net.vertex_count();
    if (start >= n) throw std::invalid_argument("walk start out of range");
    if (stop.budget == 0) throw std::invalid_argument("walk budget is required");
    if (stop.target_layer && !net.has_layers())
        throw std::invalid_argument("layer stop on an unlabeled network");
    std::vector<bool> is_target(n, false);
    for (Vertex v : stop.target_vertices) {
        if (v >= n) throw std::invalid_argument("stop vertex out of range");
        is_target[v] = true;
    }

    WalkTrace tr;
    tr.start = start;
    tr.pair_crossings.assign(net.pair_count(), 0);
    tr.loop_crossings.assign(n, 0);
    if (net.has_layers()) {
        const auto nl = static_cast<std::size_t>(net.max_layer()) + 1;
        tr.first_visit.assign(nl, -1);
        tr.last_visit.assign(nl, -1);
    }
    tr.seq.reserve(std::min<std::uint64_t>(stop.budget + 1, 1 << 20));

    Rng rng(seed);
    Vertex x = start;
    std::uint64_t t = 0;
    auto record = [&](Vertex v) {
        if (t <= seq_cap) {
            tr.seq.push_back(v);
        } else {
            tr.seq_complete = false;
        }
        if (net.has_layers()) {
            std::int32_t k = net.layer(v);
            if (k >= 0) {
                auto ku = static_cast<std::size_t>(k);
                if (tr.first_visit[ku] < 0) tr.first_visit[ku] = static_cast<std::int64_t>(t);
                tr.last_visit[ku] = static_cast<std::int64_t>(t);
            }
        }
    };
    record(x);

    auto stopped = [&](Vertex v) {
        if (is_target[v]) {
            tr.stop_reason = StopReason::hit_vertex;
            return true;
        }
        if (stop.target_layer && net.layer(v) >= *stop.target_layer) {
            tr.stop_reason = StopReason::hit_layer;
            return true;
        }
        return false;
    };

    bool done = stopped(x);
    while (!done && t < stop.budget) {
        const double total = net.strength(x);
        if (total <= 0.0) throw std::runtime_error("walk reached an isolated vertex");
        double u = rng.next_double() * total;
        Vertex next = x;
        bool loop = true;
        if (u >= net.loop_conductance(x)) {
            u -= net.loop_conductance(x);
            for (const Network::Arc& a : net.arcs(x)) {
                if (u < a.c) {
                    next = a.to;
                    loop = false;
                    tr.pair_crossings[a.pair] += 1;
                    break;
                }
                u -= a.c;
            }
            if (loop) {
                // Rounding fell off the end of the cumulative scan.
                const auto arcs = net.arcs(x);
                next = arcs[arcs.size() - 1].to;
                loop = false;
                tr.pair_crossings[arcs[arcs.size() - 1].pair] += 1;
            }
        } else {
            tr.loop_crossings[x] += 1;
        }
        x = next;
        ++t;
        record(x);
        done = stopped(x);
    }
    if (!done) tr.stop_reason = StopReason::budget;
    tr.steps = t;
    tr.end = x;
    return tr;
}

std::vector<std::int32_t> layer_sequence(const Network& net, const WalkTrace& trace) {
    if (!net.has_layers()) throw std::invalid_argument("network has no layer labels");
    if (!trace.seq_complete) throw std::invalid_argument("trace sequence was truncated");
    std::vector<std::int32_t> out(trace.seq.size());
    for (std::size_t i = 0; i < trace.seq.size(); ++i) out[i] = net.layer(trace.seq[i]);
    return out;
}

PathSubgraph path_subgraph(const Network& net, const WalkTrace& trace) {
    std::vector<Edge> path_edges, gn_edges;
    for (std::uint32_t id = 0; id < net.pair_count(); ++id) {
        std::uint64_t c = trace.pair_crossings[id];
        if (c == 0) continue;
        auto [u, v] = net.pair(id);
        path_edges.push_back(Edge{u, v, 1.0});
        gn_edges.push_back(Edge{u, v, static_cast<double>(c)});
    }
    for (Vertex v = 0; v < net.vertex_count(); ++v) {
        std::uint64_t c = trace.loop_crossings[v];
        if (c == 0) continue;
        path_edges.push_back(Edge{v, v, 1.0});
        gn_edges.push_back(Edge{v, v, static_cast<double>(c)});
    }
    PathSubgraph out;
    out.path = Network::build(net.vertex_count(), std::move(path_edges));
    out.gn = Network::build(net.vertex_count(), std::move(gn_edges));
    if (net.has_layers()) {
        out.path.set_layers(net.layers());
        out.gn.set_layers(net.layers());
    }
    return out;
}

long pass_lower(long j, double beta) {
    return static_cast<long>(std::floor(static_cast<double>(j) - std::pow(j, beta)));
}

long pass_upper(long j, double beta) {
    return static_cast<long>(std::ceil(static_cast<double>(j) + std::pow(j, beta)));
}

PassRecord detect_passes(std::span<const std::int32_t> layers, long j, double beta, int m) {
    if (j < 1) throw std::invalid_argument("pass center must be >= 1");
    PassRecord rec;
    rec.j = j;
    rec.beta = beta;
    rec.m = m;
    rec.j_minus = pass_lower(j, beta);
    rec.j_plus = pass_upper(j, beta);
    if (rec.j_minus < 0) throw std::invalid_argument("pass window extends below 0");

    bool waiting_plus = true;  // alternation state: next boundary of interest is j_+
    bool pass_open = false;
    std::uint64_t pass_start = 0;
    for (std::size_t t = 0; t < layers.size(); ++t) {
        const long x = layers[t];
        if (x == rec.j_minus) {
            if (rec.s_times.empty() || !waiting_plus) {
                if (!waiting_plus) waiting_plus = true;
                rec.s_times.push_back(t);
            }
            pass_start = t;
            pass_open = true;
        } else if (x == rec.j_plus) {
            if (waiting_plus) {
                rec.t_times.push_back(t);
                waiting_plus = false;
            }
            if (pass_open) {
                rec.passes.emplace_back(pass_start, t);
                pass_open = false;
            }
        }
    }
    rec.linking = rec.t_times.size();
    rec.linked = rec.linking >= static_cast<std::uint64_t>(m);
    return rec;
}

LinkingCensus::LinkingCensus(long j_lo, long j_hi, double beta, int m)
    : j_lo_(j_lo), j_hi_(j_hi), beta_(beta), m_(m) {
    if (j_lo < 1 || j_hi < j_lo) throw std::invalid_argument("bad census range");
    const auto count = static_cast<std::size_t>(j_hi - j_lo + 1);
    lower_.resize(count);
    upper_.resize(count);
    long max_state = 0;
    for (long j = j_lo; j <= j_hi; ++j) {
        auto i = static_cast<std::size_t>(j - j_lo);
        lower_[i] = pass_lower(j, beta);
        upper_[i] = pass_upper(j, beta);
        if (lower_[i] < 0) throw std::invalid_argument("pass window extends below 0");
        max_state = std::max(max_state, upper_[i]);
    }
    by_state_.resize(static_cast<std::size_t>(max_state) + 1);
    for (std::size_t i = 0; i < count; ++i) {
        by_state_[static_cast<std::size_t>(lower_[i])].push_back(static_cast<std::uint32_t>(i));
        by_state_[static_cast<std::size_t>(upper_[i])].push_back(static_cast<std::uint32_t>(i));
    }
    not_linked_.assign(count, 0);
}

std::vector<std::uint32_t> LinkingCensus::links_of_trace(std::span<const std::int32_t> layers) const {
    const auto count = static_cast<std::size_t>(j_hi_ - j_lo_ + 1);
    std::vector<std::uint32_t> links(count, 0);
    std::vector<bool> waiting_plus(count, true);
    const auto cap = static_cast<std::uint32_t>(m_);
    for (std::int32_t x : layers) {
        if (x < 0 || static_cast<std::size_t>(x) >= by_state_.size()) continue;
        for (std::uint32_t i : by_state_[static_cast<std::size_t>(x)]) {
            if (waiting_plus[i]) {
                if (x == upper_[i]) {
                    if (links[i] < cap) ++links[i];
                    waiting_plus[i] = false;
                }
            } else if (x == lower_[i]) {
                waiting_plus[i] = true;
            }
        }
    }
    return links;
}

void LinkingCensus::add_links(const std::vector<std::uint32_t>& links) {
    const auto count = static_cast<std::size_t>(j_hi_ - j_lo_ + 1);
    if (links.size() != count) throw std::invalid_argument("links vector size mismatch");
    for (std::size_t i = 0; i < count; ++i)
        if (links[i] < static_cast<std::uint32_t>(m_)) ++not_linked_[i];

    // Per-replica dyadic block counts over fully covered blocks.
    std::vector<std::uint32_t> row;
    for (int k = 0;; ++k) {
        const long lo = 1L << k, hi = 2L << k;
        if (hi > j_hi_) break;
        if (lo + 1 < j_lo_) continue;
        std::uint32_t a = 0;
        for (long j = lo + 1; j <= hi; ++j)
            if (links[static_cast<std::size_t>(j - j_lo_)] < static_cast<std::uint32_t>(m_)) ++a;
        row.push_back(a);
    }
    a_k_.push_back(std::move(row));
    ++replicas_;
}

LinkStats LinkingCensus::finish() const {
    LinkStats st;
    st.j_lo = j_lo_;
    st.j_hi = j_hi_;
    st.m = m_;
    st.beta = beta_;
    st.replicas = replicas_;
    const auto count = static_cast<std::size_t>(j_hi_ - j_lo_ + 1);
    st.p_j.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        st.p_j[i] = replicas_ ? static_cast<double>(not_linked_[i]) / static_cast<double>(replicas_) : 0.0;
    for (int k = 0;; ++k) {
        const long lo = 1L << k, hi = 2L << k;
        if (hi > j_hi_) break;
        if (lo + 1 < j_lo_) continue;
        st.k_values.push_back(k);
    }
    st.a_k = a_k_;
    st.p_ak_positive.assign(st.k_values.size(), 0.0);
    for (const auto& row : a_k_)
        for (std::size_t ki = 0; ki < row.size(); ++ki)
            if (row[ki] > 0) st.p_ak_positive[ki] += 1.0;
    if (replicas_ > 0)
        for (double& p : st.p_ak_positive) p /= static_cast<double>(replicas_);
    return st;
}

std::vector<std::uint64_t> cut_times(std::span<const Vertex> seq, std::uint64_t lookahead_w) {
    if (seq.size() < 2) throw std::invalid_argument("trace too short for cut times");
    const std::uint64_t horizon = seq.size() - 1;  // T
    if (lookahead_w >= horizon) throw std::invalid_argument("lookahead window must be < T");
    Vertex max_v = 0;
    for (Vertex v : seq) max_v = std::max(max_v, v);
    std::vector<std::uint64_t> last(static_cast<std::size_t>(max_v) + 1, 0);
    for (std::size_t t = 0; t < seq.size(); ++t) last[seq[t]] = t;
    std::vector<std::uint64_t> out;
    std::uint64_t pref = 0;
    for (std::uint64_t t = 0; t + lookahead_w < horizon; ++t) {
        pref = std::max(pref, last[seq[static_cast<std::size_t>(t)]]);
        if (pref == t) out.push_back(t);
    }
    return out;
}

namespace {

// Biconnected components (blocks) of the merged view, iterative DFS.
struct Blocks {
    std::vector<std::vector<Vertex>> members;   // vertices per block
    std::vector<std::vector<std::uint32_t>> of; // blocks containing each vertex
};

Blocks biconnected_blocks(const Network& net) {
    const std::size_t n = net.vertex_count();
    Blocks out;
    out.of.resize(n);
    std::vector<std::uint32_t> disc(n, 0), low(n, 0);
    std::uint32_t timer = 1;

    struct Frame {
        Vertex u;
        Vertex parent;
        std::size_t next;
        bool has_parent;
    };
    std::vector<Frame> stack;
    std::vector<std::pair<Vertex, Vertex>> estack;

    auto pop_block = [&](Vertex u, Vertex v) {
        std::vector<Vertex> verts;
        auto mark = [&](Vertex x) {
            if (std::find(verts.begin(), verts.end(), x) == verts.end()) verts.push_back(x);
        };
        while (!estack.empty()) {
            auto [a, b] = estack.back();
            estack.pop_back();
            mark(a);
            mark(b);
            if (a == u && b == v) break;
        }
        auto id = static_cast<std::uint32_t>(out.members.size());
        for (Vertex x : verts) out.of[x].push_back(id);
        out.members.push_back(std::move(verts));
    };

    for (Vertex root = 0; root < n; ++root) {
        if (disc[root] != 0 || net.arcs(root).empty()) continue;
        stack.push_back(Frame{root, 0, 0, false});
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto arcs = net.arcs(f.u);
            if (f.next < arcs.size()) {
                const Network::Arc& a = arcs[f.next++];
                Vertex v = a.to;
                if (f.has_parent && v == f.parent) continue;
                if (disc[v] == 0) {
                    estack.emplace_back(f.u, v);
                    disc[v] = low[v] = timer++;
                    stack.push_back(Frame{v, f.u, 0, true});
                } else if (disc[v] < disc[f.u]) {
                    estack.emplace_back(f.u, v);
                    low[f.u] = std::min(low[f.u], disc[v]);
                }
            } else {
                Frame done = f;
                stack.pop_back();
                if (!stack.empty()) {
                    Frame& p = stack.back();
                    low[p.u] = std::min(low[p.u], low[done.u]);
                    if (low[done.u] >= disc[p.u]) pop_block(p.u, done.u);
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<Vertex> separating_vertices(const Network& net, Vertex a, Vertex b) {
    const std::size_t n = net.vertex_count();
    if (a >= n || b >= n) throw std::invalid_argument("vertex out of range");
    if (a == b) throw std::invalid_argument("endpoints coincide; separation undefined");
    std::vector<bool> comp = net.component_of(a);
    if (!comp[b]) throw std::invalid_argument("endpoints are not connected");

    Blocks blocks = biconnected_blocks(net);
    const std::size_t nb = blocks.members.size();

    // Block-cut tree: block nodes [0, nb), vertex nodes nb + v for
    // articulation vertices (membership in >= 2 blocks).
    std::vector<bool> art(n, false);
    for (std::size_t v = 0; v < n; ++v) art[v] = blocks.of[v].size() >= 2;

    std::vector<std::vector<std::uint32_t>> tree(nb + n);
    for (std::size_t v = 0; v < n; ++v) {
        if (!art[v]) continue;
        for (std::uint32_t blk : blocks.of[v]) {
            tree[blk].push_back(static_cast<std::uint32_t>(nb + v));
            tree[nb + v].push_back(blk);
        }
    }

    auto node_of = [&](Vertex v) -> std::uint32_t {
        if (art[v]) return static_cast<std::uint32_t>(nb + v);
        if (blocks.of[v].empty()) throw std::invalid_argument("endpoint has no incident edges");
        return blocks.of[v][0];
    };
    const std::uint32_t from = node_of(a), to = node_of(b);

    std::vector<std::int64_t> parent(tree.size(), -2);
    std::vector<std::uint32_t> queue{from};
    parent[from] = -1;
    for (std::size_t head = 0; head < queue.size() && parent[to] == -2; ++head) {
        std::uint32_t u = queue[head];
        for (std::uint32_t w : tree[u]) {
            if (parent[w] == -2) {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    if (parent[to] == -2) throw std::runtime_error("block-cut tree search failed");

    std::vector<Vertex> out;
    for (std::int64_t node = to; node >= 0; node = parent[static_cast<std::size_t>(node)]) {
        if (static_cast<std::size_t>(node) >= nb) {
            auto v = static_cast<Vertex>(static_cast<std::size_t>(node) - nb);
            if (v != a && v != b) out.push_back(v);
        }
        if (static_cast<std::uint32_t>(node) == from) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vertex> path_cutpoints(const Network& net, const WalkTrace& trace) {
    if (trace.start == trace.end)
        throw std::invalid_argument("walk start equals end; separation undefined");
    PathSubgraph sub = path_subgraph(net, trace);
    return separating_vertices(sub.path, trace.start, trace.end);
}

CutRecord cut_record(const Network& net, const WalkTrace& trace, std::uint64_t lookahead_w) {
    if (!trace.seq_complete) throw std::invalid_argument("trace sequence was truncated");
    CutRecord rec;
    rec.horizon = trace.steps;
    rec.lookahead = lookahead_w;
    rec.times = cut_times(trace.seq, lookahead_w);
    if (trace.start != trace.end) rec.cutpoints = path_cutpoints(net, trace);
    return rec;
}

std::vector<Vertex> sample_conditioned_excursion(long a, std::uint64_t seed, double laziness) {
    if (a < 2) throw std::invalid_argument("excursion target must be >= 2");
    if (laziness < 0.0 || laziness >= 1.0) throw std::invalid_argument("laziness must be in [0,1)");
    Rng rng(seed);
    std::vector<Vertex> seq{0, 1};
    long x = 1;
    while (x != a) {
        if (laziness > 0.0 && rng.next_double() < laziness) {
            seq.push_back(static_cast<Vertex>(x));
            continue;
        }
        const double p_up = static_cast<double>(x + 1) / static_cast<double>(2 * x);
        x += (rng.next_double() < p_up) ? 1 : -1;
        seq.push_back(static_cast<Vertex>(x));
    }
    return seq;
}

PassHitStats pass_hit_statistics(const Network& layered, long j, double beta,
                                 const std::vector<Vertex>& marked, Vertex designated,
                                 std::uint64_t passes_wanted, std::uint64_t seed,
                                 std::uint64_t step_cap) {
    if (!layered.has_layers()) throw std::invalid_argument("network has no layer labels");
    if (passes_wanted == 0) throw std::invalid_argument("need at least one pass");
    const long jm = pass_lower(j, beta), jp = pass_upper(j, beta);
    if (jm < 0) throw std::invalid_argument("pass window extends below 0");
    if (jp > layered.max_layer()) throw std::invalid_argument("pass window exceeds the last layer");
    const std::size_t n = layered.vertex_count();
    std::vector<bool> is_marked(n, false);
    for (Vertex v : marked) {
        if (v >= n) throw std::invalid_argument("marked vertex out of range");
        std::int32_t k = layered.layer(v);
        if (k < jm || k > jp) throw std::invalid_argument("marked vertex outside the pass window");
        is_marked[v] = true;
    }
    std::vector<Vertex> starts;
    for (Vertex v = 0; v < n; ++v)
        if (layered.layer(v) == jm) starts.push_back(v);
    if (starts.empty()) throw std::invalid_argument("start layer is empty");

    Rng rng(seed);
    PassHitStats st;
    std::uint64_t missed = 0, hit_designated = 0;
    const std::uint64_t max_attempts = std::max<std::uint64_t>(passes_wanted * 4000, 100000);
    while (st.accepted < passes_wanted) {
        if (++st.attempts > max_attempts)
            throw std::runtime_error("pass rejection sampling exceeded its attempt budget");
        Vertex x = starts[rng.next_below(starts.size())];
        bool touched_marked = is_marked[x];
        bool touched_designated = (x == designated);
        bool accepted = false;
        for (std::uint64_t t = 0; t < step_cap; ++t) {
            double u = rng.next_double() * layered.strength(x);
            Vertex next = x;
            if (u >= layered.loop_conductance(x)) {
                u -= layered.loop_conductance(x);
                for (const Network::Arc& a : layered.arcs(x)) {
                    if (u < a.c) {
                        next = a.to;
                        break;
                    }
                    u -= a.c;
                }
            }
            if (next == x) continue;  // lazy step: no boundary event
            x = next;
            if (is_marked[x]) touched_marked = true;
            if (x == designated) touched_designated = true;
            const std::int32_t k = layered.layer(x);
            if (k == jm) break;  // returned before escaping: reject
            if (k == jp) {
                accepted = true;
                break;
            }
        }
        if (!accepted) continue;
        ++st.accepted;
        if (!touched_marked) ++missed;
        if (touched_designated) ++hit_designated;
    }
    st.miss_freq = static_cast<double>(missed) / static_cast<double>(st.accepted);
    st.designated_hit_freq = static_cast<double>(hit_designated) / static_cast<double>(st.accepted);
    return st;
}

}  // namespace cutpath
