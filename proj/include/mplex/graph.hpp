#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace mplex {

using NodeId = std::int32_t;
using LayerId = std::int32_t;

// Scalar knobs shared across the library.  p is an extended real: pass
// +/-std::numeric_limits<double>::infinity() for the limit objectives.
struct Params {
    double p = 1.0;
    double beta = 0.0;
    int alpha = 10;
    double eps = 1e-9;  // relative tolerance for floating comparisons
};

void validate_params(const Params& params, int num_layers);

// |a - b| <= eps * max(1, |a|, |b|)
bool nearly_equal(double a, double b, double eps);

// Sorted, duplicate-free collection of node ids.
struct NodeSet {
    std::vector<NodeId> ids;

    NodeSet() = default;
    explicit NodeSet(std::vector<NodeId> raw);  // sorts and deduplicates

    int size() const { return static_cast<int>(ids.size()); }
    bool empty() const { return ids.empty(); }
    bool contains(NodeId v) const;

    auto begin() const { return ids.begin(); }
    auto end() const { return ids.end(); }

    bool operator==(const NodeSet& other) const { return ids == other.ids; }
};

struct Layer {
    std::string label;
    double weight = 1.0;
    std::vector<std::int64_t> offsets;  // size n+1
    std::vector<NodeId> neighbors;      // sorted within each node's slice
    std::int64_t edge_count = 0;

    std::span<const NodeId> neighbors_of(NodeId v) const {
        return {neighbors.data() + offsets[v],
                neighbors.data() + offsets[v + 1]};
    }
};

// Immutable after construction; safe for shared read access from
// concurrent workers.
struct MultiplexGraph {
    std::vector<std::string> node_labels;
    std::unordered_map<std::string, NodeId> node_index;
    std::vector<Layer> layers;
    std::int64_t merged_duplicates = 0;  // duplicate edge lines folded at load

    int num_nodes() const { return static_cast<int>(node_labels.size()); }
    int num_layers() const { return static_cast<int>(layers.size()); }

    double total_weight() const;
    std::vector<double> layer_weights() const;

    int degree(NodeId v, LayerId l) const {
        const auto& lay = layers[l];
        return static_cast<int>(lay.offsets[v + 1] - lay.offsets[v]);
    }

    std::optional<NodeId> find_node(const std::string& label) const;
    std::optional<LayerId> find_layer(const std::string& label) const;

    NodeSet all_nodes() const;

    // Copy with replaced layer weights (all >= 0, sum > 0).
    MultiplexGraph with_layer_weights(const std::vector<double>& w) const;
};

// Direct construction from per-layer edge lists; used by generators and
// tests.  Edges are deduplicated and symmetrized; self-loops are an error.
MultiplexGraph build_graph(int n,
                           const std::vector<std::vector<std::pair<NodeId, NodeId>>>& layer_edges,
                           const std::vector<double>& weights,
                           std::vector<std::string> node_labels = {},
                           std::vector<std::string> layer_labels = {});

// Edge lines are "<u> <v> <layer>"; '#' starts a comment.  If the first
// line is exactly "#mplex v1" the stream is parsed as the self-describing
// container format (see README).  The optional weight stream holds
// "<layer> <weight>" lines; layers absent from it default to weight 1.
MultiplexGraph load_graph(std::istream& edges, std::istream* weights = nullptr);

MultiplexGraph load_graph_file(const std::string& edge_path,
                               const std::optional<std::string>& weight_path = std::nullopt);

// Container format: "#mplex v1" header, "#node <label>" and
// "#layer <label> <weight>" directives, then one edge per line.
void save_container(const MultiplexGraph& g, std::ostream& out);

// Induced degree of `node` in `layer`, restricted to `restrict` when given.
int degree(const MultiplexGraph& g, NodeId node, LayerId layer,
           const NodeSet* restrict = nullptr);

}  // namespace mplex
