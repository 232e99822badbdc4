#pragma once

#include <limits>
#include <span>
#include <vector>

#include "mplex/graph.hpp"

namespace mplex {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_pos_inf(double p) { return p == kInf; }
inline bool is_neg_inf(double p) { return p == -kInf; }
inline bool is_finite_p(double p) { return !is_pos_inf(p) && !is_neg_inf(p); }

// deg^p with the limit conventions used throughout: 0^p is 0 for p > 0,
// 0 for p = 0 (so a zero degree forces the geometric mean to 0), and
// +inf for p < 0.  For deg >= 1, deg^0 is 1.
double deg_pow(int deg, double p);

struct LayerDensity {
    LayerId layer = -1;
    double omega = 0.0;
    double xi = 0.0;  // omega * layer weight
};

struct RhoResult {
    double value = 0.0;
    std::vector<LayerId> chosen_layers;
    LayerId min_layer = -1;  // arg-min xi within chosen_layers
};

// p-power mean of induced degrees of s in one layer.  p = +inf/-inf give
// max/min induced degree, p = 0 the geometric mean (0 if any degree is 0),
// and for p < 0 any zero degree forces the result to 0.
double omega(const MultiplexGraph& g, LayerId layer, const NodeSet& s, double p);

// omega and xi for every layer of the graph, in layer order.
std::vector<LayerDensity> layer_densities(const MultiplexGraph& g, const NodeSet& s,
                                          double p);

// Exact maximizer of min_{l in Lhat} xi_l * (sum of Lhat weights)^beta over
// nonempty layer subsets, computed by the descending-xi prefix rule:
// enlarging Lhat with layers of xi >= the current minimum never lowers the
// minimum and never lowers the weight sum.
RhoResult rho_over_layers(const std::vector<LayerDensity>& dens,
                          const std::vector<double>& weights, double beta);

RhoResult rho(const MultiplexGraph& g, const NodeSet& s, const Params& params);

// Unnormalized removal delta:
//   sum_{v in S} deg(v)^p  -  sum_{v in S\{u}} deg'(v)^p
// = deg(u)^p + sum_{v in N(u) cap S} [deg(v)^p - (deg(v)-1)^p],
// with the zero-degree conventions of deg_pow applied termwise.  At
// p = +/-inf the score is the induced degree itself (min-degree peeling
// semantics).  For p < 0 a zero-degree term saturates the result to
// +/-inf.
double delta(const MultiplexGraph& g, LayerId layer, const NodeSet& s, NodeId node,
             double p);

// sum_l w_l |E_l[S]|  /  (w* * C(|S|, 2))
double edge_density(const MultiplexGraph& g, const NodeSet& s);

namespace detail {

// Induced degrees of s in one layer, in the order of s.ids.
std::vector<int> induced_degrees(const MultiplexGraph& g, LayerId layer,
                                 const NodeSet& s);

// Reduces a multiset of induced degrees to the p-mean.
double omega_from_degrees(std::span<const int> degs, double p);

// Shared removal-delta kernel over explicit degree state.  `member`
// returns whether a node is in the current subgraph; `deg` holds induced
// degrees on that subgraph.
template <class MemberFn>
double delta_kernel(const Layer& layer, std::span<const int> deg, NodeId u, double p,
                    MemberFn member) {
    if (!is_finite_p(p)) return static_cast<double>(deg[u]);
    double acc = deg_pow(deg[u], p);
    for (NodeId v : layer.neighbors_of(u)) {
        if (!member(v)) continue;
        acc += deg_pow(deg[v], p) - deg_pow(deg[v] - 1, p);
    }
    return acc;
}

}  // namespace detail

}  // namespace mplex
