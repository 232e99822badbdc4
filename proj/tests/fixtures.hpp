#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mplex/graph.hpp"

namespace mplex::testing {

// Two-layer hand fixture: layer 1 holds {ab, bc, ca, cd}, layer 2 holds
// {ab}; weights (1.0, 0.5).  Node ids land as a=0, b=1, c=2, d=3.
inline MultiplexGraph make_t1() {
    std::istringstream edges("a b 1\nb c 1\nc a 1\nc d 1\na b 2\n");
    std::istringstream weights("1 1.0\n2 0.5\n");
    return load_graph(edges, &weights);
}

inline NodeSet ids(std::initializer_list<NodeId> list) {
    return NodeSet(std::vector<NodeId>(list));
}

struct RandomGraphOpts {
    int min_n = 4;
    int max_n = 10;
    int min_layers = 1;
    int max_layers = 3;
    double min_weight = 0.05;  // weights drawn uniformly in [min, max]
    double max_weight = 2.0;
    double min_edge_prob = 0.15;
    double max_edge_prob = 0.65;
};

inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline MultiplexGraph random_multiplex(std::mt19937_64& rng,
                                       const RandomGraphOpts& o = {}) {
    int n = o.min_n + static_cast<int>(rng() % (o.max_n - o.min_n + 1));
    int L = o.min_layers + static_cast<int>(rng() % (o.max_layers - o.min_layers + 1));
    std::vector<std::vector<std::pair<NodeId, NodeId>>> layer_edges(L);
    for (int l = 0; l < L; ++l) {
        double pe = o.min_edge_prob + (o.max_edge_prob - o.min_edge_prob) * unit(rng);
        for (NodeId a = 0; a < n; ++a)
            for (NodeId b = a + 1; b < n; ++b)
                if (unit(rng) < pe) layer_edges[l].emplace_back(a, b);
    }
    std::vector<double> weights(L);
    for (double& w : weights)
        w = o.min_weight + (o.max_weight - o.min_weight) * unit(rng);
    return build_graph(n, layer_edges, weights);
}

inline NodeSet random_subset(std::mt19937_64& rng, int n) {
    std::vector<NodeId> ids;
    for (NodeId v = 0; v < n; ++v)
        if (rng() % 2) ids.push_back(v);
    if (ids.empty()) ids.push_back(static_cast<NodeId>(rng() % n));
    return NodeSet(std::move(ids));
}

}  // namespace mplex::testing
