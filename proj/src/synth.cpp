#include "mplex/synth.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

namespace mplex {

void validate_spec(const GenSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("gen: n must be >= 1");
    if (spec.layers < 1) throw std::invalid_argument("gen: layers must be >= 1");
    if (spec.m < 0) throw std::invalid_argument("gen: m must be >= 0");
    if (spec.plant_size < 0 || spec.plant_size > spec.n)
        throw std::invalid_argument("gen: plant_size must be in 0..n");
    if (spec.noisy_layers < 0 || spec.noisy_layers >= spec.layers)
        throw std::invalid_argument("gen: noisy_layers must be < layers");
    if (!(spec.factor > 0.0)) throw std::invalid_argument("gen: factor must be > 0");
    if (!spec.weights.empty() &&
        static_cast<int>(spec.weights.size()) != spec.layers)
        throw std::invalid_argument("gen: weights must match layer count");
    double cap = 0.5 * static_cast<double>(spec.n) * (spec.n - 1);
    double per_layer =
        static_cast<double>(spec.m) / spec.layers;
    if (per_layer > cap)
        throw std::invalid_argument("gen: m infeasible for n");
}

namespace {

std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;  // modulo bias is irrelevant here; determinism is not
}

double rand_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::pair<MultiplexGraph, NodeSet> generate(const GenSpec& spec) {
    validate_spec(spec);
    std::mt19937_64 rng(spec.seed);

    const int n = spec.n;
    const int L = spec.layers;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> layer_edges(L);

    for (int l = 0; l < L; ++l) {
        std::int64_t target = spec.m / L + (l < spec.m % L ? 1 : 0);
        const bool planted_layer =
            spec.plant_mode != PlantMode::none && spec.plant_size >= 2 &&
            l < L - spec.noisy_layers;

        std::set<std::pair<NodeId, NodeId>> edges;
        if (planted_layer) {
            if (spec.plant_mode == PlantMode::clique) {
                for (NodeId a = 0; a < spec.plant_size; ++a)
                    for (NodeId b = a + 1; b < spec.plant_size; ++b)
                        edges.emplace(a, b);
            } else {
                // Target plant average degree = factor * background average
                // degree (2 * target / n), capped at clique density.
                double bg_avg = 2.0 * static_cast<double>(target) / n;
                double p_edge =
                    std::min(1.0, spec.factor * bg_avg / (spec.plant_size - 1));
                for (NodeId a = 0; a < spec.plant_size; ++a)
                    for (NodeId b = a + 1; b < spec.plant_size; ++b)
                        if (rand_unit(rng) < p_edge) edges.emplace(a, b);
            }
        }
        if (static_cast<std::int64_t>(edges.size()) > target)
            throw std::invalid_argument("gen: plant exceeds per-layer edge budget");

        std::int64_t cap = static_cast<std::int64_t>(n) * (n - 1) / 2;
        std::int64_t attempts = 0;
        while (static_cast<std::int64_t>(edges.size()) < target &&
               attempts < 64 * target + 1024) {
            ++attempts;
            NodeId a = static_cast<NodeId>(rand_below(rng, n));
            NodeId b = static_cast<NodeId>(rand_below(rng, n));
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            edges.emplace(a, b);
        }
        // Rejection can stall on very dense layers; finish by scanning.
        if (static_cast<std::int64_t>(edges.size()) < target) {
            for (NodeId a = 0; a < n && static_cast<std::int64_t>(edges.size()) < target;
                 ++a)
                for (NodeId b = a + 1;
                     b < n && static_cast<std::int64_t>(edges.size()) < target; ++b)
                    edges.emplace(a, b);
        }
        if (static_cast<std::int64_t>(edges.size()) < std::min(target, cap))
            throw std::runtime_error("gen: could not reach target edge count");
        layer_edges[l].assign(edges.begin(), edges.end());
    }

    std::vector<double> weights = spec.weights;
    if (weights.empty()) weights.assign(L, 1.0);
    MultiplexGraph g = build_graph(n, layer_edges, weights);

    NodeSet planted;
    if (spec.plant_mode != PlantMode::none)
        for (NodeId v = 0; v < spec.plant_size; ++v) planted.ids.push_back(v);
    return {std::move(g), std::move(planted)};
}

void write_instance(const MultiplexGraph& g, const NodeSet& planted,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("gen: cannot write '" + path + "'");
    save_container(g, out);
    std::ofstream side(path + ".planted");
    if (!side) throw std::runtime_error("gen: cannot write '" + path + ".planted'");
    for (NodeId v : planted) side << g.node_labels[v] << '\n';
}

NodeSet read_planted(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    NodeSet s;
    std::string label;
    while (in >> label) s.ids.push_back(static_cast<NodeId>(std::stol(label)));
    std::sort(s.ids.begin(), s.ids.end());
    s.ids.erase(std::unique(s.ids.begin(), s.ids.end()), s.ids.end());
    return s;
}

GenSpec s1_spec(std::uint64_t seed) {
    GenSpec s;
    s.n = 100;
    s.m = 10000;
    s.layers = 4;
    s.seed = seed;
    s.plant_mode = PlantMode::clique;
    s.plant_size = 10;
    return s;
}

GenSpec s2_spec(std::uint64_t seed) {
    GenSpec s = s1_spec(seed);
    s.plant_mode = PlantMode::avg_degree;
    s.factor = 3.0;
    return s;
}

GenSpec s1_noisy_spec(std::uint64_t seed, double noisy_weight) {
    // Background density is kept low enough that the planted clique stays
    // recoverable; at the full S1 density every weighting is dominated by
    // the background.
    GenSpec s;
    s.n = 100;
    s.m = 1200;
    s.layers = 4;
    s.seed = seed;
    s.plant_mode = PlantMode::clique;
    s.plant_size = 10;
    s.noisy_layers = 1;
    s.weights = {1.0, 1.0, 1.0, noisy_weight};
    return s;
}

}  // namespace mplex
