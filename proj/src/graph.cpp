#include "mplex/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mplex {

void validate_params(const Params& params, int num_layers) {
    if (std::isnan(params.p))
        throw std::invalid_argument("p must be a real number or +/-inf");
    if (!(params.beta >= 0.0))
        throw std::invalid_argument("beta must be >= 0");
    if (params.alpha < 1 || (num_layers > 0 && params.alpha > num_layers))
        throw std::invalid_argument("alpha must be in 1..|L|");
    if (!(params.eps > 0.0))
        throw std::invalid_argument("eps must be > 0");
}

bool nearly_equal(double a, double b, double eps) {
    if (a == b) return true;
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= eps * scale;
}

NodeSet::NodeSet(std::vector<NodeId> raw) : ids(std::move(raw)) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

bool NodeSet::contains(NodeId v) const {
    return std::binary_search(ids.begin(), ids.end(), v);
}

double MultiplexGraph::total_weight() const {
    double s = 0.0;
    for (const auto& l : layers) s += l.weight;
    return s;
}

std::vector<double> MultiplexGraph::layer_weights() const {
    std::vector<double> w;
    w.reserve(layers.size());
    for (const auto& l : layers) w.push_back(l.weight);
    return w;
}

std::optional<NodeId> MultiplexGraph::find_node(const std::string& label) const {
    auto it = node_index.find(label);
    if (it == node_index.end()) return std::nullopt;
    return it->second;
}

std::optional<LayerId> MultiplexGraph::find_layer(const std::string& label) const {
    for (LayerId l = 0; l < num_layers(); ++l)
        if (layers[l].label == label) return l;
    return std::nullopt;
}

NodeSet MultiplexGraph::all_nodes() const {
    NodeSet s;
    s.ids.resize(num_nodes());
    for (NodeId v = 0; v < num_nodes(); ++v) s.ids[v] = v;
    return s;
}

MultiplexGraph MultiplexGraph::with_layer_weights(const std::vector<double>& w) const {
    if (static_cast<int>(w.size()) != num_layers())
        throw std::invalid_argument("weight vector size must match layer count");
    MultiplexGraph out = *this;
    double total = 0.0;
    for (int l = 0; l < num_layers(); ++l) {
        if (!(w[l] >= 0.0))
            throw std::invalid_argument("layer weights must be >= 0");
        out.layers[l].weight = w[l];
        total += w[l];
    }
    if (!(total > 0.0))
        throw std::invalid_argument("total layer weight must be > 0");
    return out;
}

namespace {

struct EdgeTriple {
    NodeId u, v;
    LayerId layer;
};

void split_ws(const std::string& line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i) out.emplace_back(line.data() + i, j - i);
        i = j;
    }
}

double parse_weight(std::string_view tok, std::int64_t line_no) {
    double w;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), w);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw std::runtime_error("weight list line " + std::to_string(line_no) +
                                 ": malformed weight '" + std::string(tok) + "'");
    return w;
}

struct GraphBuilder {
    std::vector<std::string> node_labels;
    std::unordered_map<std::string, NodeId> node_index;
    std::vector<std::string> layer_labels;
    std::unordered_map<std::string, LayerId> layer_index;
    std::vector<EdgeTriple> edges;

    NodeId intern_node(std::string_view label) {
        auto it = node_index.find(std::string(label));
        if (it != node_index.end()) return it->second;
        NodeId id = static_cast<NodeId>(node_labels.size());
        node_labels.emplace_back(label);
        node_index.emplace(node_labels.back(), id);
        return id;
    }

    LayerId intern_layer(std::string_view label) {
        auto it = layer_index.find(std::string(label));
        if (it != layer_index.end()) return it->second;
        LayerId id = static_cast<LayerId>(layer_labels.size());
        layer_labels.emplace_back(label);
        layer_index.emplace(layer_labels.back(), id);
        return id;
    }

    void add_edge_line(const std::vector<std::string_view>& toks, std::int64_t line_no) {
        if (toks.size() != 3)
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": expected '<u> <v> <layer>'");
        NodeId u = intern_node(toks[0]);
        NodeId v = intern_node(toks[1]);
        if (u == v)
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": self-loop on '" + std::string(toks[0]) + "'");
        edges.push_back({u, v, intern_layer(toks[2])});
    }

    MultiplexGraph finish(std::vector<double> weights) {
        MultiplexGraph g;
        g.node_labels = std::move(node_labels);
        g.node_index = std::move(node_index);
        const int n = g.num_nodes();
        const int L = static_cast<int>(layer_labels.size());
        if (weights.empty()) weights.assign(L, 1.0);

        std::vector<std::vector<std::pair<NodeId, NodeId>>> per_layer(L);
        for (const auto& e : edges) {
            NodeId a = std::min(e.u, e.v), b = std::max(e.u, e.v);
            per_layer[e.layer].emplace_back(a, b);
        }

        double total = 0.0;
        for (int l = 0; l < L; ++l) {
            auto& pl = per_layer[l];
            std::sort(pl.begin(), pl.end());
            auto last = std::unique(pl.begin(), pl.end());
            g.merged_duplicates += static_cast<std::int64_t>(pl.end() - last);
            pl.erase(last, pl.end());

            Layer lay;
            lay.label = layer_labels[l];
            lay.weight = weights[l];
            lay.edge_count = static_cast<std::int64_t>(pl.size());
            std::vector<std::int64_t> deg(n, 0);
            for (auto [a, b] : pl) {
                ++deg[a];
                ++deg[b];
            }
            lay.offsets.assign(n + 1, 0);
            for (int v = 0; v < n; ++v) lay.offsets[v + 1] = lay.offsets[v] + deg[v];
            lay.neighbors.resize(lay.offsets[n]);
            std::vector<std::int64_t> cursor(lay.offsets.begin(), lay.offsets.end() - 1);
            for (auto [a, b] : pl) {
                lay.neighbors[cursor[a]++] = b;
                lay.neighbors[cursor[b]++] = a;
            }
            for (int v = 0; v < n; ++v)
                std::sort(lay.neighbors.begin() + lay.offsets[v],
                          lay.neighbors.begin() + lay.offsets[v + 1]);
            total += lay.weight;
            g.layers.push_back(std::move(lay));
        }
        if (L > 0 && !(total > 0.0))
            throw std::runtime_error("total layer weight must be > 0");
        return g;
    }
};

}  // namespace

MultiplexGraph build_graph(int n,
                           const std::vector<std::vector<std::pair<NodeId, NodeId>>>& layer_edges,
                           const std::vector<double>& weights,
                           std::vector<std::string> node_labels,
                           std::vector<std::string> layer_labels) {
    GraphBuilder b;
    for (NodeId v = 0; v < n; ++v) {
        std::string label = node_labels.empty() ? std::to_string(v) : node_labels[v];
        b.node_labels.push_back(label);
        b.node_index.emplace(label, v);
    }
    for (std::size_t l = 0; l < layer_edges.size(); ++l) {
        std::string label = layer_labels.empty() ? std::to_string(l + 1) : layer_labels[l];
        b.layer_labels.push_back(label);
        b.layer_index.emplace(label, static_cast<LayerId>(l));
    }
    for (std::size_t l = 0; l < layer_edges.size(); ++l)
        for (auto [u, v] : layer_edges[l]) {
            if (u == v) throw std::invalid_argument("build_graph: self-loop");
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw std::invalid_argument("build_graph: node id out of range");
            b.edges.push_back({u, v, static_cast<LayerId>(l)});
        }
    if (weights.size() != layer_edges.size())
        throw std::invalid_argument("build_graph: one weight per layer required");
    for (double w : weights)
        if (!(w >= 0.0)) throw std::invalid_argument("build_graph: negative weight");
    return b.finish(weights);
}

namespace {

MultiplexGraph load_container(std::istream& in) {
    GraphBuilder b;
    std::unordered_map<std::string, double> declared_weights;
    std::vector<std::string> declared_order;
    std::string line;
    std::vector<std::string_view> toks;
    std::int64_t line_no = 1;  // header already consumed
    while (std::getline(in, line)) {
        ++line_no;
        split_ws(line, toks);
        if (toks.empty()) continue;
        if (toks[0] == "#node") {
            if (toks.size() != 2)
                throw std::runtime_error("container line " + std::to_string(line_no) +
                                         ": expected '#node <label>'");
            b.intern_node(toks[1]);
            continue;
        }
        if (toks[0] == "#layer") {
            if (toks.size() != 3)
                throw std::runtime_error("container line " + std::to_string(line_no) +
                                         ": expected '#layer <label> <weight>'");
            double w = parse_weight(toks[2], line_no);
            if (w < 0.0)
                throw std::runtime_error("container line " + std::to_string(line_no) +
                                         ": negative weight");
            b.intern_layer(toks[1]);
            if (!declared_weights.emplace(std::string(toks[1]), w).second)
                throw std::runtime_error("container line " + std::to_string(line_no) +
                                         ": duplicate layer declaration");
            declared_order.emplace_back(toks[1]);
            continue;
        }
        if (!toks[0].empty() && toks[0][0] == '#') continue;  // plain comment
        b.add_edge_line(toks, line_no);
    }
    std::vector<double> weights(b.layer_labels.size(), 1.0);
    for (std::size_t l = 0; l < b.layer_labels.size(); ++l) {
        auto it = declared_weights.find(b.layer_labels[l]);
        if (it != declared_weights.end()) weights[l] = it->second;
    }
    return b.finish(std::move(weights));
}

}  // namespace

MultiplexGraph load_graph(std::istream& edges, std::istream* weights) {
    std::string line;
    if (!std::getline(edges, line)) throw std::runtime_error("empty edge input");
    // Strip a trailing CR so DOS files work.
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "#mplex v1") {
        if (weights)
            throw std::runtime_error("container input carries its own weights");
        return load_container(edges);
    }

    GraphBuilder b;
    std::vector<std::string_view> toks;
    std::int64_t line_no = 0;
    // First line was already read.
    do {
        ++line_no;
        split_ws(line, toks);
        if (toks.empty() || toks[0][0] == '#') continue;
        b.add_edge_line(toks, line_no);
    } while (std::getline(edges, line));

    std::vector<double> w(b.layer_labels.size(), 1.0);
    if (weights) {
        std::string wline;
        std::int64_t wline_no = 0;
        while (std::getline(*weights, wline)) {
            ++wline_no;
            split_ws(wline, toks);
            if (toks.empty() || toks[0][0] == '#') continue;
            if (toks.size() != 2)
                throw std::runtime_error("weight list line " + std::to_string(wline_no) +
                                         ": expected '<layer> <weight>'");
            auto it = b.layer_index.find(std::string(toks[0]));
            if (it == b.layer_index.end())
                throw std::runtime_error("weight list line " + std::to_string(wline_no) +
                                         ": unknown layer '" + std::string(toks[0]) + "'");
            double wv = parse_weight(toks[1], wline_no);
            if (wv < 0.0)
                throw std::runtime_error("weight list line " + std::to_string(wline_no) +
                                         ": negative weight");
            w[it->second] = wv;
        }
    }
    return b.finish(std::move(w));
}

MultiplexGraph load_graph_file(const std::string& edge_path,
                               const std::optional<std::string>& weight_path) {
    std::ifstream ef(edge_path);
    if (!ef) throw std::runtime_error("cannot open '" + edge_path + "'");
    if (weight_path) {
        std::ifstream wf(*weight_path);
        if (!wf) throw std::runtime_error("cannot open '" + *weight_path + "'");
        return load_graph(ef, &wf);
    }
    return load_graph(ef);
}

void save_container(const MultiplexGraph& g, std::ostream& out) {
    out << "#mplex v1\n";
    for (const auto& label : g.node_labels) out << "#node " << label << '\n';
    for (const auto& lay : g.layers) {
        std::ostringstream w;
        w.precision(17);
        w << lay.weight;
        out << "#layer " << lay.label << ' ' << w.str() << '\n';
    }
    for (const auto& lay : g.layers)
        for (NodeId u = 0; u < g.num_nodes(); ++u)
            for (NodeId v : lay.neighbors_of(u))
                if (u < v)
                    out << g.node_labels[u] << ' ' << g.node_labels[v] << ' '
                        << lay.label << '\n';
}

int degree(const MultiplexGraph& g, NodeId node, LayerId layer, const NodeSet* restrict) {
    if (node < 0 || node >= g.num_nodes())
        throw std::invalid_argument("degree: node out of range");
    if (layer < 0 || layer >= g.num_layers())
        throw std::invalid_argument("degree: layer out of range");
    if (!restrict) return g.degree(node, layer);
    if (!restrict->contains(node))
        throw std::invalid_argument("degree: node not in restrict set");
    int d = 0;
    for (NodeId nb : g.layers[layer].neighbors_of(node))
        if (restrict->contains(nb)) ++d;
    return d;
}

}  // namespace mplex
