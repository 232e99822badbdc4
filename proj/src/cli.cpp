#include "mplex/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mplex/approx.hpp"
#include "mplex/density.hpp"
#include "mplex/firmcore.hpp"
#include "mplex/graph.hpp"
#include "mplex/oracle.hpp"
#include "mplex/synth.hpp"

namespace mplex {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kErrInput = 2;
constexpr int kErrParams = 3;
constexpr int kErrExactCap = 4;

struct ParamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_p(const std::string& tok) {
    if (tok == "neg_inf") return -kInf;
    if (tok == "inf") return kInf;
    double v;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParamError("invalid --p value '" + tok + "' (use neg_inf, inf, or a real)");
    return v;
}

double eps_from_env() {
    const char* s = std::getenv("MPLEX_EPS");
    if (!s) return 1e-9;
    double v;
    auto [ptr, ec] = std::from_chars(s, s + std::string(s).size(), v);
    if (ec != std::errc() || !(v > 0.0))
        throw ParamError("MPLEX_EPS must be a positive real");
    return v;
}

MultiplexGraph load_or_throw(const std::string& graph_path,
                             const std::string& weights_path) {
    std::optional<std::string> w;
    if (!weights_path.empty()) w = weights_path;
    return load_graph_file(graph_path, w);
}

ordered_json xi_table(const MultiplexGraph& g, const NodeSet& s, double p) {
    ordered_json arr = ordered_json::array();
    for (const auto& d : layer_densities(g, s, p)) {
        ordered_json row;
        row["layer"] = g.layers[d.layer].label;
        row["weight"] = g.layers[d.layer].weight;
        row["omega"] = d.omega;
        row["xi"] = d.xi;
        arr.push_back(row);
    }
    return arr;
}

ordered_json result_document(const MultiplexGraph& g, const Params& params,
                             const ApproxResult& res, bool include_timing) {
    ordered_json doc;
    ordered_json nodes = ordered_json::array();
    for (NodeId v : res.best.nodes) nodes.push_back(g.node_labels[v]);
    doc["nodes"] = nodes;
    doc["rho"] = res.best.rho_value;
    doc["lambda"] = res.lambda_used;
    doc["k"] = res.k_used;
    ordered_json chosen = ordered_json::array();
    for (LayerId l : res.best.chosen_layers) chosen.push_back(g.layers[l].label);
    doc["chosen_layers"] = chosen;
    doc["xi_per_layer"] = xi_table(g, res.best.nodes, params.p);
    doc["candidates_evaluated"] = res.candidates_evaluated;
    doc["provenance"] = res.best.provenance;
    if (include_timing) doc["wall_time_s"] = res.wall_time_s;
    return doc;
}

ordered_json bound_report_document(const MultiplexGraph& g, const Params& params,
                                   const ApproxResult& res) {
    auto weights = g.layer_weights();
    double w_star = 0.0, w_max = 0.0;
    for (double w : weights) {
        w_star += w;
        w_max = std::max(w_max, w);
    }
    auto cert = certificate_layers(g, res.best.nodes, res.lambda_used, params.p);
    double w_min = w_max;
    for (LayerId l : cert) w_min = std::min(w_min, weights[l]);
    if (cert.empty())
        for (double w : weights)
            if (w > 0.0) w_min = std::min(w_min, w);

    const bool strong_case = params.p >= 1.0;
    double lambda_plus = res.lambda_used > 0.0 ? res.lambda_used : w_star;
    ordered_json doc;
    doc["case"] = strong_case ? "p_ge_1" : "general";
    doc["lambda_plus"] = lambda_plus;
    doc["k_plus"] = res.k_used;
    doc["w_min"] = w_min;
    doc["w_max"] = w_max;
    doc["w_star"] = w_star;
    doc["certified_ratio"] = theoretical_ratio(
        params, lambda_plus, w_min, w_max, w_star,
        strong_case ? RatioCase::p_ge_1 : RatioCase::general);
    if (strong_case && res.k_used >= 1)
        doc["core_rho_lower_bound"] = core_density_bound(
            res.k_used, lambda_plus, params, weights, BoundMode::delta_units, w_min);
    ordered_json certj = ordered_json::array();
    for (LayerId l : cert) certj.push_back(g.layers[l].label);
    doc["certificate_layers"] = certj;
    doc["note"] =
        "certificate evaluated at the returned core's (lambda, k); the "
        "guarantee is existential over candidate cores";
    return doc;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

int cmd_decompose(const std::string& graph_path, const std::string& weights_path,
                  double lambda, const std::string& p_tok, const std::string& out_path,
                  const std::string& out_bin_path) {
    double p = parse_p(p_tok);
    if (!(lambda > 0.0)) throw ParamError("--lambda must be > 0");
    MultiplexGraph g = load_or_throw(graph_path, weights_path);
    CoreIndex ci = decompose(g, lambda, p);

    std::cout << "max_k = " << ci.max_k << '\n';
    std::map<std::int32_t, int> hist;
    for (std::int32_t k : ci.core_of) ++hist[k];
    for (const auto& [k, cnt] : hist)
        std::cout << "core " << k << ": " << cnt << " nodes\n";

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        save_core_text(ci, g, out);
    }
    if (!out_bin_path.empty()) {
        std::ofstream out(out_bin_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + out_bin_path + "'");
        save_core_binary(ci, out);
    }
    return kOk;
}

int cmd_densest(const std::string& graph_path, const std::string& weights_path,
                const std::string& p_tok, double beta, int alpha, int workers,
                bool exact, int exact_cap, const std::string& out_path,
                const std::string& bound_path, const std::string& csv_path) {
    Params params;
    params.p = parse_p(p_tok);
    params.beta = beta;
    params.alpha = alpha;
    params.eps = eps_from_env();
    if (!(params.beta >= 0.0)) throw ParamError("--beta must be >= 0");
    if (params.alpha < 1) throw ParamError("--alpha must be >= 1");
    if (workers < 1) throw ParamError("--workers must be >= 1");

    MultiplexGraph g = load_or_throw(graph_path, weights_path);

    ApproxResult res;
    if (exact) {
        if (g.num_nodes() > exact_cap) {
            std::cerr << "error: --exact limited to " << exact_cap << " nodes\n";
            return kErrExactCap;
        }
        auto t0 = std::chrono::steady_clock::now();
        DenseResult d = oracle::exact_densest(g, params, exact_cap);
        res.best = d;
        res.lambda_used = 0.0;
        res.k_used = 0;
        res.candidates_evaluated = (std::int64_t{1} << g.num_nodes()) - 1;
        res.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
    } else {
        ApproxOptions opts;
        opts.workers = workers;
        res = approx_densest(g, params, opts);
    }

    ordered_json doc = result_document(g, params, res, true);
    std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);

    if (!bound_path.empty()) {
        if (exact) throw ParamError("--bound-report applies to the approximate mode");
        write_text(bound_path, bound_report_document(g, params, res).dump(2) + "\n");
    }
    if (!csv_path.empty()) {
        std::ostringstream row;
        bool fresh = !std::ifstream(csv_path).good();
        std::ofstream out(csv_path, std::ios::app);
        if (!out) throw std::runtime_error("cannot write '" + csv_path + "'");
        if (fresh)
            out << "p,beta,alpha,lambda,k,rho,edge_density,nodes,wall_time_s\n";
        row.precision(17);
        row << p_tok << ',' << beta << ',' << alpha << ',' << res.lambda_used << ','
            << res.k_used << ',' << res.best.rho_value << ','
            << edge_density(g, res.best.nodes) << ',' << res.best.nodes.size() << ','
            << res.wall_time_s << '\n';
        out << row.str();
    }
    return kOk;
}

int cmd_gen(const GenSpec& spec, const std::string& out_path) {
    auto [g, planted] = generate(spec);
    write_instance(g, planted, out_path);
    std::cout << "wrote " << out_path << " (" << g.num_nodes() << " nodes, ";
    std::int64_t m = 0;
    for (const auto& l : g.layers) m += l.edge_count;
    std::cout << m << " edges, " << g.num_layers() << " layers)\n";
    return kOk;
}

int cmd_eval(const std::string& graph_path, const std::string& weights_path,
             const std::string& nodes_path, const std::string& p_tok, double beta) {
    Params params;
    params.p = parse_p(p_tok);
    params.beta = beta;
    params.eps = eps_from_env();
    if (!(params.beta >= 0.0)) throw ParamError("--beta must be >= 0");

    MultiplexGraph g = load_or_throw(graph_path, weights_path);
    std::ifstream nf(nodes_path);
    if (!nf) throw std::runtime_error("cannot open '" + nodes_path + "'");
    std::vector<NodeId> ids;
    std::string label;
    while (nf >> label) {
        auto id = g.find_node(label);
        if (!id) throw std::runtime_error("node '" + label + "' not in graph");
        ids.push_back(*id);
    }
    NodeSet s{std::move(ids)};
    if (s.empty()) throw std::runtime_error("node file '" + nodes_path + "' is empty");

    RhoResult r = rho(g, s, params);
    ordered_json doc;
    doc["rho"] = r.value;
    ordered_json chosen = ordered_json::array();
    for (LayerId l : r.chosen_layers) chosen.push_back(g.layers[l].label);
    doc["chosen_layers"] = chosen;
    doc["min_layer"] = r.min_layer >= 0 ? g.layers[r.min_layer].label : "";
    doc["xi_per_layer"] = xi_table(g, s, params.p);
    doc["edge_density"] = edge_density(g, s);
    std::cout << doc.dump(2) << "\n";
    return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"p-mean densest subgraph toolkit for layer-weighted multiplex graphs"};
    app.require_subcommand(1);

    // decompose
    auto* dc = app.add_subcommand("decompose", "core decomposition for one lambda");
    std::string dc_graph, dc_weights, dc_p = "1", dc_out, dc_out_bin;
    double dc_lambda = 1.0;
    dc->add_option("--graph", dc_graph)->required();
    dc->add_option("--weights", dc_weights);
    dc->add_option("--lambda", dc_lambda)->required();
    dc->add_option("--p", dc_p);
    dc->add_option("--out", dc_out);
    dc->add_option("--out-bin", dc_out_bin);

    // densest
    auto* dn = app.add_subcommand("densest", "approximate (or exact) densest subgraph");
    std::string dn_graph, dn_weights, dn_p = "1", dn_out, dn_bound, dn_csv;
    double dn_beta = 0.0;
    int dn_alpha = 10, dn_workers = 1, dn_cap = 16;
    bool dn_exact = false;
    dn->add_option("--graph", dn_graph)->required();
    dn->add_option("--weights", dn_weights);
    dn->add_option("--p", dn_p);
    dn->add_option("--beta", dn_beta);
    dn->add_option("--alpha", dn_alpha);
    dn->add_option("--workers", dn_workers);
    dn->add_flag("--exact", dn_exact);
    dn->add_option("--exact-cap", dn_cap);
    dn->add_option("--out", dn_out);
    dn->add_option("--bound-report", dn_bound);
    dn->add_option("--csv", dn_csv);

    // gen
    auto* gn = app.add_subcommand("gen", "generate a synthetic planted instance");
    GenSpec spec;
    std::string gn_mode = "clique", gn_out, gn_preset;
    std::vector<double> gn_weights;
    gn->add_option("--preset", gn_preset)
        ->check(CLI::IsMember({"s1", "s2", "s1-noisy"}));
    gn->add_option("--n", spec.n);
    gn->add_option("--m", spec.m);
    gn->add_option("--layers", spec.layers);
    gn->add_option("--seed", spec.seed);
    gn->add_option("--plant-mode", gn_mode)
        ->check(CLI::IsMember({"none", "clique", "avg_degree"}));
    gn->add_option("--plant-size", spec.plant_size);
    gn->add_option("--factor", spec.factor);
    gn->add_option("--noisy-layers", spec.noisy_layers);
    gn->add_option("--weights", gn_weights);
    gn->add_option("--out", gn_out)->required();

    // eval
    auto* ev = app.add_subcommand("eval", "evaluate rho of a node set");
    std::string ev_graph, ev_weights, ev_nodes, ev_p = "1";
    double ev_beta = 0.0;
    ev->add_option("--graph", ev_graph)->required();
    ev->add_option("--weights", ev_weights);
    ev->add_option("--nodes", ev_nodes)->required();
    ev->add_option("--p", ev_p);
    ev->add_option("--beta", ev_beta);

    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kErrInput;
    }

    try {
        if (dc->parsed())
            return cmd_decompose(dc_graph, dc_weights, dc_lambda, dc_p, dc_out,
                                 dc_out_bin);
        if (dn->parsed())
            return cmd_densest(dn_graph, dn_weights, dn_p, dn_beta, dn_alpha,
                               dn_workers, dn_exact, dn_cap, dn_out, dn_bound, dn_csv);
        if (gn->parsed()) {
            if (gn_preset == "s1")
                spec = s1_spec(spec.seed);
            else if (gn_preset == "s2")
                spec = s2_spec(spec.seed);
            else if (gn_preset == "s1-noisy")
                spec = s1_noisy_spec(spec.seed);
            else {
                if (gn_mode == "none") spec.plant_mode = PlantMode::none;
                if (gn_mode == "clique") spec.plant_mode = PlantMode::clique;
                if (gn_mode == "avg_degree") spec.plant_mode = PlantMode::avg_degree;
                spec.weights = gn_weights;
            }
            return cmd_gen(spec, gn_out);
        }
        if (ev->parsed())
            return cmd_eval(ev_graph, ev_weights, ev_nodes, ev_p, ev_beta);
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kErrParams;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kErrParams;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kErrInput;
    }
    return kErrInput;
}

}  // namespace mplex
