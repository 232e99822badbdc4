#include "mplex/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace mplex {

std::vector<double> candidate_lambdas(const std::vector<double>& weights, int alpha,
                                      double eps) {
    const int L = static_cast<int>(weights.size());
    if (alpha < 1 || alpha > L)
        throw std::invalid_argument("candidate_lambdas: alpha out of range");

    // Guard against combinatorial blow-up before enumerating.
    double count = 0.0, binom = 1.0;
    for (int s = 1; s <= alpha; ++s) {
        binom = binom * (L - s + 1) / s;
        count += binom;
        if (count > 5e6)
            throw std::invalid_argument("candidate_lambdas: candidate set too large");
    }

    std::vector<double> sums;
    sums.reserve(static_cast<std::size_t>(count));
    std::vector<int> stack;
    auto dfs = [&](auto&& self, int start, double acc) -> void {
        for (int i = start; i < L; ++i) {
            double next = acc + weights[i];
            sums.push_back(next);
            if (static_cast<int>(stack.size()) + 1 < alpha) {
                stack.push_back(i);
                self(self, i + 1, next);
                stack.pop_back();
            }
        }
    };
    dfs(dfs, 0, 0.0);

    std::sort(sums.begin(), sums.end());
    std::vector<double> out;
    for (double v : sums)
        if (out.empty() || !nearly_equal(out.back(), v, eps)) out.push_back(v);
    return out;
}

namespace {

// Incrementally maintained per-layer power sums over the alive set, enough
// to evaluate omega for any finite p as nodes are peeled off.
struct ReplayStats {
    double p = 1.0;
    int alive = 0;
    std::vector<std::vector<int>> deg;  // [layer][node]
    std::vector<double> sum_pow;        // per layer, over deg >= 1 nodes
    std::vector<double> sum_log;        // per layer, used when p == 0
    std::vector<std::int64_t> zero_cnt; // per layer

    void init(const MultiplexGraph& g, double p_) {
        p = p_;
        alive = g.num_nodes();
        const int L = g.num_layers();
        deg.assign(L, {});
        sum_pow.assign(L, 0.0);
        sum_log.assign(L, 0.0);
        zero_cnt.assign(L, 0);
        for (LayerId l = 0; l < L; ++l) {
            deg[l].resize(g.num_nodes());
            for (NodeId v = 0; v < g.num_nodes(); ++v) {
                int d = g.degree(v, l);
                deg[l][v] = d;
                add_term(l, d);
            }
        }
    }

    void add_term(LayerId l, int d) {
        if (d == 0) {
            ++zero_cnt[l];
            return;
        }
        if (p == 0.0)
            sum_log[l] += std::log(static_cast<double>(d));
        else
            sum_pow[l] += deg_pow(d, p);
    }

    void drop_term(LayerId l, int d) {
        if (d == 0) {
            --zero_cnt[l];
            return;
        }
        if (p == 0.0)
            sum_log[l] -= std::log(static_cast<double>(d));
        else
            sum_pow[l] -= deg_pow(d, p);
    }

    void remove(const MultiplexGraph& g, NodeId v, const std::vector<char>& alive_mask) {
        for (LayerId l = 0; l < g.num_layers(); ++l) {
            drop_term(l, deg[l][v]);
            for (NodeId u : g.layers[l].neighbors_of(v)) {
                if (!alive_mask[u]) continue;
                drop_term(l, deg[l][u]);
                deg[l][u] -= 1;
                add_term(l, deg[l][u]);
            }
        }
        --alive;
    }

    double omega_of(LayerId l) const {
        if (alive == 0) return 0.0;
        const double n = static_cast<double>(alive);
        if (p == 0.0) {
            if (zero_cnt[l] > 0) return 0.0;
            return std::exp(sum_log[l] / n);
        }
        if (p < 0.0 && zero_cnt[l] > 0) return 0.0;
        double mean = sum_pow[l] / n;
        if (mean <= 0.0) return 0.0;
        return std::pow(mean, 1.0 / p);
    }
};

struct LambdaBest {
    bool valid = false;
    double value = -1.0;
    std::int32_t k = 0;
    double lambda = 0.0;
    double decompose_p = 1.0;
    NodeSet nodes;
    std::int64_t evals = 0;
    std::vector<ShellRecord> shells;
};

RhoResult rho_from_stats(const MultiplexGraph& g, const ReplayStats& stats,
                         const Params& params) {
    std::vector<LayerDensity> dens(g.num_layers());
    for (LayerId l = 0; l < g.num_layers(); ++l) {
        double om = stats.omega_of(l);
        dens[l] = {l, om, om * g.layers[l].weight};
    }
    return rho_over_layers(dens, g.layer_weights(), params.beta);
}

// One decomposition at (lambda, decompose_p) with every k-shell scored
// under the caller's objective.
LambdaBest sweep_lambda(const MultiplexGraph& g, double lambda, double decompose_p,
                        const Params& params, bool record_shells) {
    LambdaBest best;
    best.lambda = lambda;
    best.decompose_p = decompose_p;

    CoreIndex ci = decompose(g, lambda, decompose_p);
    if (ci.max_k < 1) return best;

    const bool from_scratch = !is_finite_p(params.p);
    ReplayStats stats;
    std::vector<char> alive_mask;
    if (!from_scratch) {
        stats.init(g, params.p);
        alive_mask.assign(g.num_nodes(), 1);
    }

    auto consider = [&](std::int32_t k, double value) {
        ++best.evals;
        if (!best.valid || value > best.value ||
            (value == best.value && k > best.k)) {
            best.valid = true;
            best.value = value;
            best.k = k;
        }
        if (record_shells)
            best.shells.push_back({lambda, decompose_p, k, value, extract(ci, k)});
    };

    std::int32_t prev_core = -1;
    for (std::size_t i = 0; i < ci.peel_order.size(); ++i) {
        NodeId v = ci.peel_order[i];
        std::int32_t c = ci.core_of[v];
        if (c != prev_core && c >= 1) {
            if (from_scratch) {
                NodeSet shell = extract(ci, c);
                consider(c, rho(g, shell, params).value);
            } else {
                consider(c, rho_from_stats(g, stats, params).value);
            }
        }
        prev_core = c;
        if (!from_scratch) {
            stats.remove(g, v, alive_mask);
            alive_mask[v] = 0;
        }
    }

    if (best.valid) best.nodes = extract(ci, best.k);
    return best;
}

}  // namespace

DenseResult peel_single_layer(const MultiplexGraph& g, LayerId layer, double p) {
    if (!is_finite_p(p) || !(p >= 1.0))
        throw std::invalid_argument("peel_single_layer: requires finite p >= 1");
    if (layer < 0 || layer >= g.num_layers())
        throw std::invalid_argument("peel_single_layer: layer out of range");
    const int n = g.num_nodes();
    if (n == 0) throw std::invalid_argument("peel_single_layer: empty graph");

    const Layer& lay = g.layers[layer];
    std::vector<char> alive(n, 1);
    std::vector<int> deg(n);
    double sum_pow = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        deg[v] = g.degree(v, layer);
        sum_pow += deg_pow(deg[v], p);
    }

    auto delta_of = [&](NodeId v) {
        return detail::delta_kernel(lay, deg, v, p,
                                    [&alive](NodeId u) { return alive[u] != 0; });
    };

    std::set<std::pair<double, NodeId>> queue;
    std::vector<double> key(n);
    for (NodeId v = 0; v < n; ++v) {
        key[v] = delta_of(v);
        queue.insert({key[v], v});
    }

    std::vector<NodeId> order;
    order.reserve(n);
    double best_value = -1.0;
    int best_prefix = 0;  // number of removals preceding the best subgraph
    int remaining = n;
    while (remaining > 0) {
        double value = (sum_pow <= 0.0) ? 0.0 : std::pow(sum_pow / remaining, 1.0 / p);
        if (value > best_value) {
            best_value = value;
            best_prefix = static_cast<int>(order.size());
        }
        auto [dv, v] = *queue.begin();
        queue.erase(queue.begin());
        alive[v] = 0;
        sum_pow -= dv;  // removal delta is exactly the power-sum decrease
        order.push_back(v);
        --remaining;

        // Refresh affected keys: neighbors lose a degree; for p > 1 their
        // neighbors' deltas shift too.
        thread_local std::vector<NodeId> touched, refresh;
        touched.clear();
        for (NodeId u : lay.neighbors_of(v))
            if (alive[u]) {
                deg[u] -= 1;
                touched.push_back(u);
            }
        refresh.clear();
        if (p == 1.0) {
            refresh = touched;
        } else {
            std::set<NodeId> uniq(touched.begin(), touched.end());
            for (NodeId u : touched)
                for (NodeId w : lay.neighbors_of(u))
                    if (alive[w]) uniq.insert(w);
            refresh.assign(uniq.begin(), uniq.end());
        }
        for (NodeId u : refresh) {
            queue.erase({key[u], u});
            key[u] = delta_of(u);
            queue.insert({key[u], u});
        }
    }

    DenseResult out;
    std::vector<NodeId> nodes(order.begin() + best_prefix, order.end());
    out.nodes = NodeSet(std::move(nodes));
    out.rho_value = best_value;
    out.chosen_layers = {layer};
    out.provenance = "single-layer peel";
    return out;
}

namespace {

struct Candidate {
    double value = -1.0;
    double lambda = kInf;  // peel candidates order after every sweep lambda
    std::int32_t k = 0;
    double decompose_p = 1.0;
    NodeSet nodes;
    std::string provenance;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
    // "less" means worse: lower value, then larger lambda, then
    // lexicographically larger node set.
    if (a.value != b.value) return a.value < b.value;
    if (a.lambda != b.lambda) return a.lambda > b.lambda;
    return std::lexicographical_compare(b.nodes.ids.begin(), b.nodes.ids.end(),
                                        a.nodes.ids.begin(), a.nodes.ids.end());
}

}  // namespace

ApproxResult approx_densest(const MultiplexGraph& g, const Params& params,
                            const ApproxOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    if (g.num_nodes() == 0)
        throw std::invalid_argument("approx_densest: empty graph");
    if (g.num_layers() == 0 || !(g.total_weight() > 0.0))
        throw std::invalid_argument("approx_densest: graph has no positive layer weight");

    Params pr = params;
    pr.alpha = std::min(pr.alpha, g.num_layers());
    validate_params(pr, g.num_layers());

    const auto weights = g.layer_weights();
    const auto lambdas = candidate_lambdas(weights, pr.alpha, pr.eps);

    // Job list: one decomposition per (lambda, peel-p).  For p < 1 the
    // p = 1 decomposition is swept as well; its shells are scored under
    // the requested objective.
    std::vector<std::pair<double, double>> jobs;
    for (double lam : lambdas) {
        jobs.emplace_back(lam, pr.p);
        if (pr.p < 1.0) jobs.emplace_back(lam, 1.0);
    }

    std::vector<LambdaBest> per_job(jobs.size());
    std::vector<std::string> errors(jobs.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, opts.workers)) \
    if (opts.workers > 1)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(jobs.size()); ++i) {
        try {
            per_job[i] =
                sweep_lambda(g, jobs[i].first, jobs[i].second, pr, opts.record_shells);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (const auto& err : errors)
        if (!err.empty()) throw std::runtime_error("approx_densest: " + err);

    ApproxResult result;
    Candidate best;
    for (const auto& jb : per_job) {
        result.candidates_evaluated += jb.evals;
        if (opts.record_shells)
            result.shells.insert(result.shells.end(), jb.shells.begin(),
                                 jb.shells.end());
        if (!jb.valid) continue;
        Candidate c{jb.value, jb.lambda, jb.k, jb.decompose_p, jb.nodes, ""};
        c.provenance = "core sweep";
        if (candidate_less(best, c)) best = std::move(c);
    }

    if (pr.p < 1.0) {
        for (LayerId l = 0; l < g.num_layers(); ++l) {
            if (!(g.layers[l].weight > 0.0)) continue;
            DenseResult peel = peel_single_layer(g, l, 1.0);
            if (peel.nodes.empty()) continue;
            Candidate c;
            c.value = rho(g, peel.nodes, pr).value;
            c.k = 0;
            c.nodes = peel.nodes;
            c.provenance = "single-layer peel, layer " + g.layers[l].label;
            ++result.candidates_evaluated;
            if (candidate_less(best, c)) best = std::move(c);
        }
    }

    if (best.value < 0.0) {
        // Degenerate inputs (no shell reaches k = 1, e.g. an edgeless
        // graph) fall back to the whole node set, still scored exactly.
        best.value = rho(g, g.all_nodes(), pr).value;
        best.lambda = lambdas.front();
        best.k = 0;
        best.nodes = g.all_nodes();
        best.provenance = "whole graph fallback";
        ++result.candidates_evaluated;
    }

    RhoResult exact = rho(g, best.nodes, pr);
    result.best.nodes = best.nodes;
    result.best.rho_value = exact.value;
    result.best.chosen_layers = exact.chosen_layers;
    result.best.provenance = best.provenance;
    result.lambda_used = best.lambda;
    result.k_used = best.k;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

double theoretical_ratio(const Params& params, double lambda_plus, double w_min,
                         double w_max, double w_star, RatioCase rc) {
    if (!(lambda_plus > 0.0) || !(w_min > 0.0) || !(w_max > 0.0) || !(w_star > 0.0))
        throw std::invalid_argument("theoretical_ratio: inputs must be positive");
    const double p = params.p;
    bool halve;
    switch (rc) {
        case RatioCase::p_ge_1:
            if (p < 1.0)
                throw std::invalid_argument("theoretical_ratio: p >= 1 case needs p >= 1");
            halve = false;
            break;
        case RatioCase::general:
            halve = true;
            break;
        default:
            halve = p < 1.0;
            break;
    }

    double inv_p, factor;  // factor = (p+1)^{1/p}
    if (!is_finite_p(p)) {
        inv_p = 0.0;
        factor = 1.0;
    } else if (p == 0.0) {
        return 0.0;  // exponents 1/p blow up; 0 is the sound value
    } else if (p <= -1.0) {
        return 0.0;  // (p+1)^{1/p} undefined / infinite
    } else {
        inv_p = 1.0 / p;
        factor = std::pow(p + 1.0, inv_p);
    }

    double num = w_min * std::max(std::pow(lambda_plus, inv_p),
                                  std::pow(lambda_plus, params.beta * inv_p));
    double den = factor * w_max * std::pow(w_star, params.beta + inv_p);
    double ratio = num / den;
    if (halve) ratio *= 0.5;
    return ratio;
}

double core_density_bound(std::int32_t k, double lambda, const Params& params,
                    const std::vector<double>& weights, BoundMode mode,
                    std::optional<double> w_min_override) {
    if (k < 1) throw std::invalid_argument("core_density_bound: k must be >= 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("core_density_bound: lambda must be > 0");
    const double p = params.p;
    if (!is_finite_p(p) || !(p >= 1.0))
        throw std::invalid_argument("core_density_bound: requires finite p >= 1");
    if (weights.empty()) throw std::invalid_argument("core_density_bound: no weights");

    double w_star = 0.0, w_min = kInf;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("core_density_bound: negative weight");
        w_star += w;
        if (w > 0.0) w_min = std::min(w_min, w);
    }
    if (!(w_star > 0.0)) throw std::invalid_argument("core_density_bound: zero total weight");
    if (w_min_override) {
        if (!(*w_min_override > 0.0))
            throw std::invalid_argument("core_density_bound: w_min must be positive");
        w_min = *w_min_override;
    }

    const double inv_p = 1.0 / p;
    const double keff = (mode == BoundMode::delta_units)
                            ? static_cast<double>(k) / (p + 1.0)
                            : static_cast<double>(k);
    const double base = std::pow(keff, inv_p) / std::pow(w_star, inv_p);

    if (mode == BoundMode::prefix_chain) {
        // Max over prefixes of the given weight order: at step t the
        // pigeonhole still guarantees (lambda - W_{t-1}) worth of layer
        // weight carrying delta >= k.
        double best = 0.0, wsum = 0.0, wmax_prefix = 0.0;
        for (double w : weights) {
            double gap = std::max(lambda - wsum, 0.0);
            wsum += w;
            wmax_prefix = std::max(wmax_prefix, w);
            best = std::max(best, std::pow(gap, inv_p) * wmax_prefix *
                                      std::pow(wsum, params.beta));
        }
        return base * best;
    }
    return base * w_min *
           std::max(std::pow(lambda, inv_p), std::pow(lambda, params.beta * inv_p));
}

std::vector<LayerId> certificate_layers(const MultiplexGraph& g, const NodeSet& nodes,
                                        double lambda, double p) {
    if (nodes.empty()) return {};
    std::vector<char> member(g.num_nodes(), 0);
    for (NodeId v : nodes) member[v] = 1;
    const int L = g.num_layers();
    std::vector<std::vector<int>> deg(L, std::vector<int>(g.num_nodes(), 0));
    for (LayerId l = 0; l < L; ++l)
        for (NodeId v : nodes) {
            int d = 0;
            for (NodeId u : g.layers[l].neighbors_of(v))
                if (member[u]) ++d;
            deg[l][v] = d;
        }

    std::set<LayerId> cert;
    std::vector<std::pair<double, LayerId>> row;
    for (NodeId v : nodes) {
        row.clear();
        for (LayerId l = 0; l < L; ++l) {
            if (!(g.layers[l].weight > 0.0)) continue;
            row.emplace_back(detail::delta_kernel(
                                 g.layers[l], deg[l], v, p,
                                 [&member](NodeId u) { return member[u] != 0; }),
                             l);
        }
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        double cum = 0.0;
        for (const auto& [ps, l] : row) {
            cert.insert(l);
            cum += g.layers[l].weight;
            if (cum >= lambda - 1e-9 * std::max(1.0, lambda)) break;
        }
    }
    return {cert.begin(), cert.end()};
}

}  // namespace mplex
