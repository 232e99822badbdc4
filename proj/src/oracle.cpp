#include "mplex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mplex/firmcore.hpp"

namespace mplex {
namespace oracle {

namespace {

NodeSet set_from_mask(std::uint32_t mask, int n) {
    NodeSet s;
    for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) s.ids.push_back(v);
    return s;
}

bool better_dense(double value, const NodeSet& s, double best_value,
                  const NodeSet& best, double eps) {
    (void)eps;
    if (value != best_value) return value > best_value;
    if (s.size() != best.size()) return s.size() < best.size();
    return std::lexicographical_compare(s.ids.begin(), s.ids.end(), best.ids.begin(),
                                        best.ids.end());
}

}  // namespace

DenseResult exact_densest(const MultiplexGraph& g, const Params& params, int node_cap) {
    const int n = g.num_nodes();
    if (n > node_cap)
        throw std::invalid_argument("exact_densest: node count exceeds cap");
    if (n == 0) throw std::invalid_argument("exact_densest: empty graph");

    DenseResult best;
    best.rho_value = -1.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        NodeSet s = set_from_mask(mask, n);
        RhoResult r = rho(g, s, params);
        if (best.rho_value < 0.0 ||
            better_dense(r.value, s, best.rho_value, best.nodes, params.eps)) {
            best.rho_value = r.value;
            best.nodes = std::move(s);
            best.chosen_layers = r.chosen_layers;
        }
    }
    best.provenance = "exhaustive";
    return best;
}

namespace {

struct ScoreTable {
    std::vector<std::int32_t> score;

    // Recomputes everything from scratch on the alive subgraph.
    void compute(const MultiplexGraph& g, const std::vector<char>& alive,
                 double lambda, double p, double eps) {
        const int n = g.num_nodes();
        const int L = g.num_layers();
        std::vector<std::vector<int>> deg(L, std::vector<int>(n, 0));
        for (LayerId l = 0; l < L; ++l)
            for (NodeId v = 0; v < n; ++v) {
                if (!alive[v]) continue;
                int d = 0;
                for (NodeId u : g.layers[l].neighbors_of(v))
                    if (alive[u]) ++d;
                deg[l][v] = d;
            }
        score.assign(n, kNoCore);
        std::vector<double> row, w;
        for (NodeId v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            row.clear();
            w.clear();
            for (LayerId l = 0; l < L; ++l) {
                if (!(g.layers[l].weight > 0.0)) continue;
                row.push_back(detail::delta_kernel(
                    g.layers[l], deg[l], v, p,
                    [&alive](NodeId u) { return alive[u] != 0; }));
                w.push_back(g.layers[l].weight);
            }
            score[v] = top_lambda(row, w, lambda, eps);
        }
    }
};

template <class PickFn>
NodeSet iterate_deletion(const MultiplexGraph& g, std::int32_t k, double lambda,
                         double p, int node_cap, PickFn pick) {
    if (g.num_nodes() > node_cap)
        throw std::invalid_argument("exact_core: node count exceeds cap");
    if (!(lambda > 0.0)) throw std::invalid_argument("exact_core: lambda must be > 0");

    std::vector<char> alive(g.num_nodes(), 1);
    int alive_count = g.num_nodes();
    ScoreTable table;
    while (alive_count > 0) {
        table.compute(g, alive, lambda, p, 1e-9);
        std::vector<NodeId> violators;
        for (NodeId v = 0; v < g.num_nodes(); ++v)
            if (alive[v] && table.score[v] < k) violators.push_back(v);
        if (violators.empty()) break;
        NodeId victim = pick(violators, table.score);
        alive[victim] = 0;
        --alive_count;
    }
    NodeSet out;
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (alive[v]) out.ids.push_back(v);
    return out;
}

}  // namespace

NodeSet exact_core(const MultiplexGraph& g, std::int32_t k, double lambda, double p,
                   int node_cap) {
    return iterate_deletion(
        g, k, lambda, p, node_cap,
        [](const std::vector<NodeId>& violators, const std::vector<std::int32_t>& score) {
            NodeId best = violators.front();
            for (NodeId v : violators)
                if (score[v] < score[best] || (score[v] == score[best] && v < best))
                    best = v;
            return best;
        });
}

NodeSet exact_core_randomized(const MultiplexGraph& g, std::int32_t k, double lambda,
                              double p, std::mt19937_64& rng, int node_cap) {
    return iterate_deletion(g, k, lambda, p, node_cap,
                            [&rng](const std::vector<NodeId>& violators,
                                   const std::vector<std::int32_t>&) {
                                return violators[rng() % violators.size()];
                            });
}

RhoResult exact_rho_subsets(const MultiplexGraph& g, const NodeSet& s,
                            const Params& params, int layer_cap) {
    const int L = g.num_layers();
    if (L > layer_cap)
        throw std::invalid_argument("exact_rho_subsets: layer count exceeds cap");
    if (s.empty()) throw std::invalid_argument("exact_rho_subsets: empty node set");

    auto dens = layer_densities(g, s, params.p);
    RhoResult best;
    best.value = -1.0;
    for (std::uint32_t mask = 1; mask < (1u << L); ++mask) {
        double min_xi = kInf;
        LayerId min_layer = -1;
        double wsum = 0.0;
        for (LayerId l = 0; l < L; ++l) {
            if (!(mask & (1u << l))) continue;
            wsum += g.layers[l].weight;
            if (dens[l].xi < min_xi) {
                min_xi = dens[l].xi;
                min_layer = l;
            }
        }
        double value = min_xi * std::pow(wsum, params.beta);
        if (value > best.value) {
            best.value = value;
            best.min_layer = min_layer;
            best.chosen_layers.clear();
            for (LayerId l = 0; l < L; ++l)
                if (mask & (1u << l)) best.chosen_layers.push_back(l);
        }
    }
    return best;
}

NodeSet firmcore_baseline(const MultiplexGraph& g, int k, int lambda_count) {
    if (lambda_count < 1)
        throw std::invalid_argument("firmcore_baseline: lambda_count must be >= 1");
    const int n = g.num_nodes();
    const int L = g.num_layers();
    std::vector<char> alive(n, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            int layers_ok = 0;
            for (LayerId l = 0; l < L; ++l) {
                int d = 0;
                for (NodeId u : g.layers[l].neighbors_of(v))
                    if (alive[u]) ++d;
                if (d >= k) ++layers_ok;
            }
            if (layers_ok < lambda_count) {
                alive[v] = 0;
                changed = true;
            }
        }
    }
    NodeSet out;
    for (NodeId v = 0; v < n; ++v)
        if (alive[v]) out.ids.push_back(v);
    return out;
}

}  // namespace oracle
}  // namespace mplex
