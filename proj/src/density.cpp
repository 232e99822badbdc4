#include "mplex/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mplex {

double deg_pow(int deg, double p) {
    if (deg == 0) {
        if (p > 0.0) return 0.0;
        if (p == 0.0) return 0.0;
        return kInf;
    }
    if (p == 0.0) return 1.0;
    if (p == 1.0) return static_cast<double>(deg);
    return std::pow(static_cast<double>(deg), p);
}

namespace detail {

namespace {

// Scratch membership marks, reused across calls.  Version stamps avoid
// clearing between uses.
struct Marks {
    std::vector<std::uint32_t> stamp;
    std::uint32_t version = 0;

    void set(int n, const NodeSet& s) {
        if (static_cast<int>(stamp.size()) < n) stamp.assign(n, 0);
        ++version;
        for (NodeId v : s) stamp[v] = version;
    }
    bool in(NodeId v) const { return stamp[v] == version; }
};

thread_local Marks t_marks;

}  // namespace

std::vector<int> induced_degrees(const MultiplexGraph& g, LayerId layer,
                                 const NodeSet& s) {
    t_marks.set(g.num_nodes(), s);
    std::vector<int> degs(s.size(), 0);
    const Layer& lay = g.layers[layer];
    for (int i = 0; i < s.size(); ++i) {
        int d = 0;
        for (NodeId nb : lay.neighbors_of(s.ids[i]))
            if (t_marks.in(nb)) ++d;
        degs[i] = d;
    }
    return degs;
}

double omega_from_degrees(std::span<const int> degs, double p) {
    if (degs.empty()) throw std::invalid_argument("omega: empty node set");
    const double n = static_cast<double>(degs.size());
    if (is_pos_inf(p)) return static_cast<double>(*std::max_element(degs.begin(), degs.end()));
    if (is_neg_inf(p)) return static_cast<double>(*std::min_element(degs.begin(), degs.end()));
    bool any_zero = false;
    for (int d : degs)
        if (d == 0) { any_zero = true; break; }
    if (p == 0.0) {
        if (any_zero) return 0.0;
        double sum_log = 0.0;
        for (int d : degs) sum_log += std::log(static_cast<double>(d));
        return std::exp(sum_log / n);
    }
    if (p < 0.0 && any_zero) return 0.0;
    double sum = 0.0;
    for (int d : degs) sum += deg_pow(d, p);
    if (sum == 0.0) return 0.0;
    return std::pow(sum / n, 1.0 / p);
}

}  // namespace detail

double omega(const MultiplexGraph& g, LayerId layer, const NodeSet& s, double p) {
    if (s.empty()) throw std::invalid_argument("omega: empty node set");
    if (layer < 0 || layer >= g.num_layers())
        throw std::invalid_argument("omega: layer out of range");
    auto degs = detail::induced_degrees(g, layer, s);
    return detail::omega_from_degrees(degs, p);
}

std::vector<LayerDensity> layer_densities(const MultiplexGraph& g, const NodeSet& s,
                                          double p) {
    if (s.empty()) throw std::invalid_argument("layer_densities: empty node set");
    std::vector<LayerDensity> out;
    out.reserve(g.num_layers());
    for (LayerId l = 0; l < g.num_layers(); ++l) {
        double om = omega(g, l, s, p);
        out.push_back({l, om, om * g.layers[l].weight});
    }
    return out;
}

RhoResult rho_over_layers(const std::vector<LayerDensity>& dens,
                          const std::vector<double>& weights, double beta) {
    if (dens.empty()) throw std::invalid_argument("rho: no layers");
    std::vector<int> order(dens.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (dens[a].xi != dens[b].xi) return dens[a].xi > dens[b].xi;
        return dens[a].layer < dens[b].layer;
    });

    RhoResult best;
    best.value = -1.0;
    double wsum = 0.0;
    for (std::size_t t = 0; t < order.size(); ++t) {
        wsum += weights[dens[order[t]].layer];
        double value = dens[order[t]].xi * std::pow(wsum, beta);
        if (value > best.value) {
            best.value = value;
            best.min_layer = dens[order[t]].layer;
            best.chosen_layers.assign(order.begin(), order.begin() + t + 1);
        }
    }
    for (auto& idx_as_layer : best.chosen_layers)
        idx_as_layer = dens[idx_as_layer].layer;
    std::sort(best.chosen_layers.begin(), best.chosen_layers.end());
    return best;
}

RhoResult rho(const MultiplexGraph& g, const NodeSet& s, const Params& params) {
    if (s.empty()) throw std::invalid_argument("rho: empty node set");
    auto dens = layer_densities(g, s, params.p);
    return rho_over_layers(dens, g.layer_weights(), params.beta);
}

double delta(const MultiplexGraph& g, LayerId layer, const NodeSet& s, NodeId node,
             double p) {
    if (layer < 0 || layer >= g.num_layers())
        throw std::invalid_argument("delta: layer out of range");
    if (!s.contains(node)) throw std::invalid_argument("delta: node not in set");
    if (s.size() < 2) throw std::invalid_argument("delta: set must have >= 2 nodes");

    // Dense degree array over all node ids, zero outside s.
    std::vector<int> deg(g.num_nodes(), 0);
    auto degs = detail::induced_degrees(g, layer, s);
    for (int i = 0; i < s.size(); ++i) deg[s.ids[i]] = degs[i];

    return detail::delta_kernel(g.layers[layer], deg, node, p,
                                [&s](NodeId v) { return s.contains(v); });
}

double edge_density(const MultiplexGraph& g, const NodeSet& s) {
    if (s.size() < 2) return 0.0;
    double num = 0.0;
    for (LayerId l = 0; l < g.num_layers(); ++l) {
        auto degs = detail::induced_degrees(g, l, s);
        std::int64_t twice_e = std::accumulate(degs.begin(), degs.end(), std::int64_t{0});
        num += g.layers[l].weight * static_cast<double>(twice_e / 2);
    }
    double pairs = 0.5 * static_cast<double>(s.size()) * (s.size() - 1);
    return num / (g.total_weight() * pairs);
}

}  // namespace mplex
