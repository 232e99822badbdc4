#include "mplex/firmcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mplex {

std::int32_t top_lambda(std::span<const double> psi, std::span<const double> weights,
                        double lambda, double eps) {
    if (!(lambda > 0.0)) throw std::invalid_argument("top_lambda: lambda must be > 0");
    if (psi.size() != weights.size())
        throw std::invalid_argument("top_lambda: psi/weights size mismatch");

    thread_local std::vector<std::pair<double, double>> pairs;  // (psi, w)
    pairs.clear();
    for (std::size_t l = 0; l < psi.size(); ++l)
        if (weights[l] > 0.0) pairs.emplace_back(psi[l], weights[l]);
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    const double slack = eps * std::max(1.0, lambda);
    double cum = 0.0;
    for (const auto& [ps, w] : pairs) {
        cum += w;
        if (cum >= lambda - slack) {
            if (ps == kInf) return kCoreSaturated;
            if (ps == -kInf) return kNoCore;
            double k = std::floor(ps + 1e-9);
            if (k < 0.0) return kNoCore;
            if (k >= static_cast<double>(kCoreSaturated)) return kCoreSaturated;
            return static_cast<std::int32_t>(k);
        }
    }
    return kNoCore;
}

std::vector<std::int32_t> CoreIndex::distinct_cores() const {
    std::vector<std::int32_t> ks(core_of.begin(), core_of.end());
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

void PeelState::init(const MultiplexGraph& graph, double lambda_, double p_,
                     double eps_) {
    g = &graph;
    lambda = lambda_;
    p = p_;
    eps = eps_;
    const int n = graph.num_nodes();
    const int L = graph.num_layers();

    alive.assign(n, 1);
    alive_count = n;
    layer_active.assign(L, 0);
    for (LayerId l = 0; l < L; ++l) layer_active[l] = graph.layers[l].weight > 0.0;

    deg.assign(L, {});
    psi.assign(L, {});
    for (LayerId l = 0; l < L; ++l) {
        deg[l].resize(n);
        psi[l].assign(n, 0.0);
        if (!layer_active[l]) continue;
        for (NodeId v = 0; v < n; ++v) deg[l][v] = graph.degree(v, l);
        if (p == 1.0) {
            for (NodeId v = 0; v < n; ++v) psi[l][v] = 2.0 * deg[l][v];
        } else if (!is_finite_p(p)) {
            for (NodeId v = 0; v < n; ++v) psi[l][v] = deg[l][v];
        } else {
            for (NodeId v = 0; v < n; ++v) refresh_psi(l, v);
        }
    }
    score.resize(n);
    for (NodeId v = 0; v < n; ++v) score[v] = recompute_score(v);
    stamp_.assign(n, 0);
    stamp_version_ = 0;
}

void PeelState::refresh_psi(LayerId l, NodeId v) {
    psi[l][v] = detail::delta_kernel(g->layers[l], deg[l], v, p,
                                     [this](NodeId u) { return alive[u] != 0; });
}

std::int32_t PeelState::recompute_score(NodeId v) const {
    thread_local std::vector<double> row, w;
    row.clear();
    w.clear();
    for (LayerId l = 0; l < g->num_layers(); ++l) {
        if (!layer_active[l]) continue;
        row.push_back(psi[l][v]);
        w.push_back(g->layers[l].weight);
    }
    return top_lambda(row, w, lambda, eps);
}

std::vector<NodeId> PeelState::remove_node(NodeId v) {
    alive[v] = 0;
    --alive_count;

    // Collect nodes whose psi changed in any layer.
    ++stamp_version_;
    std::vector<NodeId>& dirty = scratch_;
    dirty.clear();
    auto mark = [&](NodeId u) {
        if (stamp_[u] != stamp_version_) {
            stamp_[u] = stamp_version_;
            dirty.push_back(u);
        }
    };

    const bool one_hop = (p == 1.0) || !is_finite_p(p);
    for (LayerId l = 0; l < g->num_layers(); ++l) {
        if (!layer_active[l]) continue;
        auto nbrs = g->layers[l].neighbors_of(v);
        if (one_hop) {
            for (NodeId u : nbrs) {
                if (!alive[u]) continue;
                deg[l][u] -= 1;
                psi[l][u] = (p == 1.0) ? 2.0 * deg[l][u] : deg[l][u];
                mark(u);
            }
            continue;
        }
        // General p: a degree change at u also shifts the delta of u's
        // neighbors, so refresh two hops out from scratch.
        thread_local std::vector<NodeId> touched;
        touched.clear();
        for (NodeId u : nbrs)
            if (alive[u]) {
                deg[l][u] -= 1;
                touched.push_back(u);
            }
        ++stamp_version_;  // local stamp pass for this layer's refresh set
        thread_local std::vector<NodeId> refresh;
        refresh.clear();
        auto mark_refresh = [&](NodeId u) {
            if (stamp_[u] != stamp_version_) {
                stamp_[u] = stamp_version_;
                refresh.push_back(u);
            }
        };
        for (NodeId u : touched) {
            mark_refresh(u);
            for (NodeId w2 : g->layers[l].neighbors_of(u))
                if (alive[w2]) mark_refresh(w2);
        }
        for (NodeId u : refresh) refresh_psi(l, u);
        ++stamp_version_;  // restore the dirty-pass stamp space
        for (NodeId u : dirty) stamp_[u] = stamp_version_;
        for (NodeId u : refresh) mark(u);
    }

    std::vector<NodeId> changed;
    changed.reserve(dirty.size());
    for (NodeId u : dirty) {
        std::int32_t s = recompute_score(u);
        if (s != score[u]) {
            if (s > score[u]) ++nonmonotone_updates;
            score[u] = s;
            changed.push_back(u);
        }
    }
    std::sort(changed.begin(), changed.end());
    return changed;
}

void PeelState::validate_psi() const {
    for (LayerId l = 0; l < g->num_layers(); ++l) {
        if (!layer_active[l]) continue;
        for (NodeId v = 0; v < g->num_nodes(); ++v) {
            if (!alive[v]) continue;
            double expect = detail::delta_kernel(
                g->layers[l], deg[l], v, p,
                [this](NodeId u) { return alive[u] != 0; });
            double got = psi[l][v];
            if (!(expect == got) && !(std::isinf(expect) && std::isinf(got) &&
                                      std::signbit(expect) == std::signbit(got)))
                throw std::logic_error("peel state: stale psi at node " +
                                       std::to_string(v) + " layer " + std::to_string(l));
        }
    }
}

namespace {

// Bucket queue over scores: index 0 holds the no-core sentinel, index
// s+1 holds score s, saturated scores live in their own bucket.  Buckets
// are ordered sets so equal scores pop lowest id first.
struct BucketQueue {
    std::vector<std::set<NodeId>> buckets;
    std::set<NodeId> saturated;
    std::size_t cursor = 0;

    static std::size_t index_of(std::int32_t score) {
        return static_cast<std::size_t>(score) + 1;  // kNoCore -> 0
    }

    void insert(NodeId v, std::int32_t score) {
        if (score == kCoreSaturated) {
            saturated.insert(v);
            return;
        }
        std::size_t idx = index_of(score);
        if (idx >= buckets.size()) buckets.resize(idx + 1);
        buckets[idx].insert(v);
        cursor = std::min(cursor, idx);
    }

    void erase(NodeId v, std::int32_t score) {
        if (score == kCoreSaturated) {
            saturated.erase(v);
            return;
        }
        buckets[index_of(score)].erase(v);
    }

    // Lowest-score node, ties by lowest id; kCoreSaturated nodes come last.
    std::pair<NodeId, std::int32_t> pop() {
        while (cursor < buckets.size() && buckets[cursor].empty()) ++cursor;
        if (cursor < buckets.size()) {
            NodeId v = *buckets[cursor].begin();
            buckets[cursor].erase(buckets[cursor].begin());
            return {v, static_cast<std::int32_t>(cursor) - 1};
        }
        NodeId v = *saturated.begin();
        saturated.erase(saturated.begin());
        return {v, kCoreSaturated};
    }
};

}  // namespace

CoreIndex decompose(const MultiplexGraph& g, double lambda, double p,
                    const DecomposeOptions& opts) {
    if (!(lambda > 0.0)) throw std::invalid_argument("decompose: lambda must be > 0");
    if (std::isnan(p)) throw std::invalid_argument("decompose: p must not be NaN");

    CoreIndex ci;
    ci.lambda = lambda;
    ci.p = p;
    const int n = g.num_nodes();
    ci.core_of.assign(n, 0);
    if (n == 0) return ci;

    PeelState st;
    st.init(g, lambda, p, 1e-9);

    BucketQueue q;
    std::vector<std::int32_t> placement(n);
    for (NodeId v = 0; v < n; ++v) {
        placement[v] = st.score[v];
        q.insert(v, placement[v]);
    }

    std::int32_t k_cur = 0;
    ci.peel_order.reserve(n);
    while (st.alive_count > 0) {
        auto [v, s] = q.pop();
        k_cur = std::max(k_cur, s);
        ci.core_of[v] = std::max(k_cur, 0);
        ci.peel_order.push_back(v);
        for (NodeId u : st.remove_node(v)) {
            q.erase(u, placement[u]);
            placement[u] = st.score[u];
            q.insert(u, placement[u]);
        }
        if (opts.validate_psi) st.validate_psi();
    }
    ci.nonmonotone_updates = st.nonmonotone_updates;
    ci.max_k = 0;
    for (std::int32_t k : ci.core_of) ci.max_k = std::max(ci.max_k, k);
    return ci;
}

NodeSet extract(const CoreIndex& ci, std::int32_t k) {
    if (k < 0 || k > ci.max_k)
        throw std::out_of_range("extract: k outside [0, max_k]");
    NodeSet s;
    for (NodeId v = 0; v < static_cast<NodeId>(ci.core_of.size()); ++v)
        if (ci.core_of[v] >= k) s.ids.push_back(v);
    return s;
}

void save_core_text(const CoreIndex& ci, const MultiplexGraph& g, std::ostream& out) {
    for (NodeId v = 0; v < static_cast<NodeId>(ci.core_of.size()); ++v)
        out << g.node_labels[v] << '\t' << ci.core_of[v] << '\n';
}

namespace {

template <class T>
void write_raw(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("core index: truncated binary input");
    return v;
}

}  // namespace

void save_core_binary(const CoreIndex& ci, std::ostream& out) {
    out.write("GFC1", 4);
    write_raw(out, ci.lambda);
    write_raw(out, ci.p);
    write_raw(out, static_cast<std::uint64_t>(ci.core_of.size()));
    for (std::int32_t k : ci.core_of) write_raw(out, k);
}

CoreIndex load_core_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "GFC1", 4) != 0)
        throw std::runtime_error("core index: bad magic");
    CoreIndex ci;
    ci.lambda = read_raw<double>(in);
    ci.p = read_raw<double>(in);
    auto n = read_raw<std::uint64_t>(in);
    ci.core_of.resize(n);
    for (auto& k : ci.core_of) k = read_raw<std::int32_t>(in);
    ci.max_k = 0;
    for (std::int32_t k : ci.core_of) ci.max_k = std::max(ci.max_k, k);
    return ci;
}

}  // namespace mplex
