#pragma once

#include <random>

#include "mplex/approx_types.hpp"
#include "mplex/density.hpp"
#include "mplex/graph.hpp"

namespace mplex {
namespace oracle {

inline constexpr int kDefaultNodeCap = 16;
inline constexpr int kDefaultLayerCap = 20;

// Exhaustive rho maximization over all nonempty node subsets.
// Deterministic tie-break: smaller set, then lexicographically smaller ids.
DenseResult exact_densest(const MultiplexGraph& g, const Params& params,
                          int node_cap = kDefaultNodeCap);

// Iterated deletion to fixpoint: while some node has Top-lambda(psi) < k
// on the current subgraph, delete the (score, id)-minimal one.  For p >= 1
// and p = +/-inf the fixpoint is order-independent; the minimal-first
// order is the canonical choice matching decompose() for every p.
NodeSet exact_core(const MultiplexGraph& g, std::int32_t k, double lambda, double p,
                   int node_cap = kDefaultNodeCap);

// Same fixpoint computed by deleting one uniformly random violator per
// step; used to check order-independence where it holds.
NodeSet exact_core_randomized(const MultiplexGraph& g, std::int32_t k, double lambda,
                              double p, std::mt19937_64& rng,
                              int node_cap = kDefaultNodeCap);

// Literal max over all 2^|L|-1 nonempty layer subsets.
RhoResult exact_rho_subsets(const MultiplexGraph& g, const NodeSet& s,
                            const Params& params, int layer_cap = kDefaultLayerCap);

// Independent unit-weight FirmCore: maximal subgraph where every node has
// induced degree >= k in at least lambda_count individual layers, by
// iterated deletion.
NodeSet firmcore_baseline(const MultiplexGraph& g, int k, int lambda_count);

}  // namespace oracle
}  // namespace mplex
