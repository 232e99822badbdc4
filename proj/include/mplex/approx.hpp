#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mplex/approx_types.hpp"
#include "mplex/density.hpp"
#include "mplex/firmcore.hpp"
#include "mplex/graph.hpp"

namespace mplex {

// All subset sums of layer weights with subset size in 1..alpha,
// deduplicated within eps (relative), ascending.
std::vector<double> candidate_lambdas(const std::vector<double>& weights, int alpha,
                                      double eps);

struct ShellRecord {
    double lambda = 0.0;
    double decompose_p = 1.0;  // the p the peeling ran at
    std::int32_t k = 0;
    double rho_value = 0.0;
    NodeSet nodes;
};

struct ApproxOptions {
    int workers = 1;            // parallel width of the lambda sweep
    bool record_shells = false; // keep every evaluated (lambda, k) shell
};

struct ApproxResult {
    DenseResult best;
    double lambda_used = 0.0;
    std::int32_t k_used = 0;
    std::int64_t candidates_evaluated = 0;
    double wall_time_s = 0.0;
    std::vector<ShellRecord> shells;
};

// Candidate-lambda sweep: for each lambda in candidate_lambdas (alpha
// clamped to |L|), decompose, evaluate rho on every k-shell, and return
// the global best.  For p < 1 the sweep additionally evaluates the p = 1
// decomposition's shells and the per-layer greedy prefixes under the
// requested objective; those extra candidates only raise the returned
// value.  Ties break toward smaller lambda, then the lexicographically
// smaller node set.
ApproxResult approx_densest(const MultiplexGraph& g, const Params& params,
                            const ApproxOptions& opts = {});

// Greedy peeling within one layer for finite p >= 1: repeatedly delete
// the node with minimal removal delta and return the visited subgraph
// maximizing omega(layer, ., p).  rho_value holds that omega.
DenseResult peel_single_layer(const MultiplexGraph& g, LayerId layer, double p);

enum class RatioCase {
    auto_select,  // p >= 1 case when p >= 1, general case otherwise
    p_ge_1,
    general,  // factor-2 denominator
};

// Guaranteed lower bound on rho(found)/rho(optimal):
//   (1/(p+1)^{1/p}) * w_min * max{lambda^{1/p}, lambda^{beta/p}}
//                   / (w_max * w*^{beta+1/p}),
// halved in the general case.  Exponents take their limit values at
// p = +/-inf; at p = 0 and finite p <= -1 the expression degenerates and
// the sound value 0 is returned.
double theoretical_ratio(const Params& params, double lambda_plus, double w_min,
                         double w_max, double w_star,
                         RatioCase rc = RatioCase::auto_select);

enum class BoundMode {
    delta_units,   // default: k is a removal-delta threshold, rescaled by (p+1)
    degree_units,   // raw substitution, k read as a degree-power threshold
    prefix_chain,  // tighter max-over-prefixes form (paper units)
};

// Lower bound on rho of a (k, lambda, p)-core:
//   (k_eff^{1/p} * w_min / w*^{1/p}) * max{lambda^{1/p}, lambda^{beta/p}}
// where k_eff = k/(p+1) in delta units (every node's delta is at most
// (p+1) times its degree power, exact at p = 1).  Finite p >= 1 only.
// `weights` supplies w*; w_min defaults to its smallest positive entry
// but may be overridden with the smallest weight contributing to the
// core's certificate.
double core_density_bound(std::int32_t k, double lambda, const Params& params,
                    const std::vector<double>& weights,
                    BoundMode mode = BoundMode::delta_units,
                    std::optional<double> w_min_override = std::nullopt);

// Layers appearing in some node's minimal qualifying prefix when psi is
// recomputed on `nodes` at the given (lambda, k, p); used by the bound
// report to pick w_min.
std::vector<LayerId> certificate_layers(const MultiplexGraph& g, const NodeSet& nodes,
                                        double lambda, double p);

}  // namespace mplex
