#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "mplex/graph.hpp"

namespace mplex {

enum class PlantMode { none, clique, avg_degree };

// Recipe for a synthetic layer-weighted multiplex with an optional planted
// dense subgraph.  Deterministic given the seed.
struct GenSpec {
    int n = 100;
    std::int64_t m = 10000;  // target edge count summed over layers
    int layers = 4;
    std::uint64_t seed = 1;
    PlantMode plant_mode = PlantMode::clique;
    int plant_size = 10;
    double factor = 3.0;          // avg_degree mode: plant/background degree ratio
    std::vector<double> weights;  // empty = uniform 1.0
    int noisy_layers = 0;         // trailing layers kept background-only
};

void validate_spec(const GenSpec& spec);

// Background edges are sampled uniformly per layer up to ~m/|L| each; the
// plant occupies nodes 0..plant_size-1 in every non-noisy layer (all pairs
// in clique mode, an elevated-density random subgraph in avg_degree mode).
// Returns the graph and the planted node set.
std::pair<MultiplexGraph, NodeSet> generate(const GenSpec& spec);

// Container file plus a "<path>.planted" sidecar listing the planted nodes.
void write_instance(const MultiplexGraph& g, const NodeSet& planted,
                    const std::string& path);

NodeSet read_planted(const std::string& path);

// Presets mirroring the synthetic evaluation protocol: S1 plants a clique,
// S2 plants by average degree, and the noisy preset keeps one
// background-only layer whose weight is dropped to 0.1.
GenSpec s1_spec(std::uint64_t seed);
GenSpec s2_spec(std::uint64_t seed);
GenSpec s1_noisy_spec(std::uint64_t seed, double noisy_weight = 0.1);

}  // namespace mplex
