#pragma once

#include <iosfwd>
#include <set>
#include <span>
#include <vector>

#include "mplex/density.hpp"
#include "mplex/graph.hpp"

namespace mplex {

// Returned by top_lambda when no k >= 0 satisfies the threshold; such
// nodes belong to no core and are peeled first.
inline constexpr std::int32_t kNoCore = -1;

// Cap for scores driven to +inf by the p < 0 zero-degree convention.
inline constexpr std::int32_t kCoreSaturated = 1'000'000'000;

// Largest integer k >= 0 such that the layers with psi >= k have
// cumulative weight >= lambda.  Sorts layers by psi descending and takes
// the floor of the psi value where the accumulated weight crosses lambda;
// O(|L| log |L|).
std::int32_t top_lambda(std::span<const double> psi, std::span<const double> weights,
                        double lambda, double eps);

struct CoreIndex {
    double lambda = 0.0;
    double p = 1.0;
    std::vector<std::int32_t> core_of;  // node -> largest k containing it
    std::int32_t max_k = 0;
    std::vector<NodeId> peel_order;          // removal order, cores nondecreasing
    std::int64_t nonmonotone_updates = 0;    // score increases seen while peeling

    std::vector<std::int32_t> distinct_cores() const;  // ascending
};

struct DecomposeOptions {
    bool validate_psi = false;  // recheck psi against the from-scratch delta after every pop
};

// Mutable peeling state: induced degrees, per-layer removal deltas psi,
// Top-lambda scores, and the score-indexed bucket queue.  decompose()
// drives it; exposed so tests can exercise the invariants directly.
struct PeelState {
    const MultiplexGraph* g = nullptr;
    double p = 1.0;
    double lambda = 0.0;
    double eps = 1e-9;

    std::vector<char> alive;
    int alive_count = 0;
    std::vector<char> layer_active;            // zero-weight layers dropped up front
    std::vector<std::vector<int>> deg;         // [layer][node]
    std::vector<std::vector<double>> psi;      // [layer][node]
    std::vector<std::int32_t> score;           // current Top-lambda per node
    std::int64_t nonmonotone_updates = 0;

    void init(const MultiplexGraph& graph, double lambda_, double p_, double eps_);
    std::int32_t recompute_score(NodeId v) const;
    // Removes v, updates degrees and psi of affected alive nodes, and
    // returns the nodes whose score changed.
    std::vector<NodeId> remove_node(NodeId v);
    // Throws std::logic_error if any alive node's psi disagrees with the
    // from-scratch delta on the alive subgraph.
    void validate_psi() const;

  private:
    void refresh_psi(LayerId l, NodeId v);
    std::vector<NodeId> scratch_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t stamp_version_ = 0;
};

// Peeling decomposition for a fixed (lambda, p): every node's core index
// is the largest k whose (k, lambda, p)-core contains it.  Nodes are
// processed in nondecreasing score order, ties by lowest id; the walk
// index never moves backward, so a node popped below the current index
// keeps the index as its core.
CoreIndex decompose(const MultiplexGraph& g, double lambda, double p,
                    const DecomposeOptions& opts = {});

// { u : core_of[u] >= k }; k must lie in [0, max_k].
NodeSet extract(const CoreIndex& ci, std::int32_t k);

// "<label> \t <core>" per node, in id order.
void save_core_text(const CoreIndex& ci, const MultiplexGraph& g, std::ostream& out);

// Magic "GFC1", then lambda, p (doubles), n (u64), and n core values (i32),
// all little-endian.
void save_core_binary(const CoreIndex& ci, std::ostream& out);
CoreIndex load_core_binary(std::istream& in);

}  // namespace mplex
