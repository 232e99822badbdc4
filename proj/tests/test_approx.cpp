#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mplex/approx.hpp"
#include "mplex/oracle.hpp"

using namespace mplex;
using mplex::testing::ids;
using mplex::testing::make_t1;

namespace {

// K5 on nodes 0..4 plus the path 5-6-...-14, one layer.
MultiplexGraph k5_plus_p10() {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (NodeId a = 0; a < 5; ++a)
        for (NodeId b = a + 1; b < 5; ++b) e.emplace_back(a, b);
    for (NodeId v = 5; v < 14; ++v) e.emplace_back(v, v + 1);
    return build_graph(15, {e}, {1.0});
}

}  // namespace

TEST_CASE("candidate lambdas enumerate subset sums") {
    CHECK(candidate_lambdas({1.0, 0.5}, 2, 1e-9) ==
          std::vector<double>{0.5, 1.0, 1.5});
    CHECK(candidate_lambdas({1.0, 1.0}, 1, 1e-9) == std::vector<double>{1.0});
    CHECK(candidate_lambdas({1.0, 2.0, 4.0}, 3, 1e-9) ==
          std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0});
    CHECK_THROWS_AS(candidate_lambdas({1.0}, 2, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(candidate_lambdas({1.0}, 0, 1e-9), std::invalid_argument);
}

TEST_CASE("approx on t1 finds the exhaustive optimum") {
    MultiplexGraph g = make_t1();
    Params pr;
    pr.p = 1.0;
    pr.beta = 1.0;
    pr.alpha = 2;
    ApproxResult res = approx_densest(g, pr);
    CHECK(res.best.rho_value == doctest::Approx(2.0));
    CHECK(res.best.nodes == ids({0, 1, 2}));
    CHECK(res.k_used == 4);
    // Both lambda = 0.5 and lambda = 1.0 attain the optimum; ties resolve
    // toward the smaller candidate.
    CHECK(res.lambda_used == doctest::Approx(0.5));

    DenseResult exact = oracle::exact_densest(g, pr);
    CHECK(exact.rho_value == doctest::Approx(2.0));
    CHECK(res.best.rho_value == doctest::Approx(exact.rho_value));
}

TEST_CASE("approx on a lone triangle returns it") {
    MultiplexGraph g = build_graph(3, {{{0, 1}, {1, 2}, {0, 2}}}, {1.0});
    Params pr;
    pr.p = 1.0;
    pr.beta = 0.0;
    pr.alpha = 1;
    ApproxResult res = approx_densest(g, pr);
    CHECK(res.best.rho_value == doctest::Approx(2.0));
    CHECK(res.best.nodes == g.all_nodes());
}

TEST_CASE("approx at p = -inf isolates the clique from the path") {
    MultiplexGraph g = k5_plus_p10();
    Params pr;
    pr.p = -kInf;
    pr.beta = 0.0;
    pr.alpha = 1;
    ApproxResult res = approx_densest(g, pr);
    CHECK(res.best.rho_value == doctest::Approx(4.0));
    CHECK(res.best.nodes == ids({0, 1, 2, 3, 4}));
    // Iterated-deletion oracle confirms K5 is the max-min-degree subgraph.
    CHECK(oracle::exact_core(g, 4, 1.0, -kInf) == ids({0, 1, 2, 3, 4}));
}

TEST_CASE("single-layer peeling") {
    SUBCASE("triangle") {
        MultiplexGraph g = build_graph(3, {{{0, 1}, {1, 2}, {0, 2}}}, {1.0});
        DenseResult r = peel_single_layer(g, 0, 1.0);
        CHECK(r.rho_value == doctest::Approx(2.0));
        CHECK(r.nodes == g.all_nodes());
    }
    SUBCASE("K5 plus path at p = 1") {
        MultiplexGraph g = k5_plus_p10();
        DenseResult r = peel_single_layer(g, 0, 1.0);
        CHECK(r.rho_value == doctest::Approx(4.0));
        CHECK(r.nodes == ids({0, 1, 2, 3, 4}));
        // Exhaustive optimum over all 2^15-1 subsets for reference.
        Params pr;
        pr.p = 1.0;
        pr.beta = 0.0;
        DenseResult exact = oracle::exact_densest(g, pr);
        CHECK(exact.rho_value == doctest::Approx(4.0));
    }
    SUBCASE("star at p = 2 stays within the (p+1) guarantee") {
        std::vector<std::pair<NodeId, NodeId>> e;
        for (NodeId v = 1; v <= 5; ++v) e.emplace_back(0, v);
        MultiplexGraph g = build_graph(6, {e}, {1.0});
        DenseResult r = peel_single_layer(g, 0, 2.0);
        Params pr;
        pr.p = 2.0;
        pr.beta = 0.0;
        DenseResult exact = oracle::exact_densest(g, pr);
        double got_pow = std::pow(r.rho_value, 2.0);
        double opt_pow = std::pow(exact.rho_value, 2.0);
        CHECK(got_pow >= opt_pow / 3.0 - 1e-9);
        CHECK(got_pow <= opt_pow + 1e-9);
    }
    SUBCASE("domain errors") {
        MultiplexGraph g = make_t1();
        CHECK_THROWS_AS(peel_single_layer(g, 0, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(peel_single_layer(g, 0, kInf), std::invalid_argument);
        CHECK_THROWS_AS(peel_single_layer(g, 9, 1.0), std::invalid_argument);
    }
}

TEST_CASE("theoretical ratio formula values") {
    Params pr;
    pr.p = 1.0;
    pr.beta = 0.0;
    CHECK(theoretical_ratio(pr, 1.0, 1.0, 1.0, 1.0) == doctest::Approx(0.5));

    pr.beta = 1.0;
    const double L = 3.0;
    CHECK(theoretical_ratio(pr, 1.0, 1.0, 1.0, L) == doctest::Approx(1.0 / (2 * L * L)));
    CHECK(theoretical_ratio(pr, 1.0, 1.0, 1.0, L, RatioCase::general) ==
          doctest::Approx(0.5 / (2 * L * L)));

    SUBCASE("limit and degenerate points") {
        Params q;
        q.beta = 0.5;
        q.p = -kInf;
        CHECK(theoretical_ratio(q, 1.0, 1.0, 2.0, 4.0) ==
              doctest::Approx(1.0 / (2.0 * 2.0 * 2.0)));  // w_min/(2 w_max w*^beta)
        q.p = 0.0;
        CHECK(theoretical_ratio(q, 1.0, 1.0, 2.0, 4.0) == doctest::Approx(0.0));
        q.p = -1.0;
        CHECK(theoretical_ratio(q, 1.0, 1.0, 2.0, 4.0) == doctest::Approx(0.0));
        q.p = 2.0;
        CHECK(theoretical_ratio(q, 1.0, 1.0, 1.0, 1.0) ==
              doctest::Approx(1.0 / std::sqrt(3.0)));
    }
    SUBCASE("domain errors") {
        Params q;
        CHECK_THROWS_AS(theoretical_ratio(q, 0.0, 1.0, 1.0, 1.0), std::invalid_argument);
        q.p = 0.5;
        CHECK_THROWS_AS(theoretical_ratio(q, 1.0, 1.0, 1.0, 1.0, RatioCase::p_ge_1),
                        std::invalid_argument);
    }
}

TEST_CASE("core density bound calculator") {
    Params pr;
    pr.p = 1.0;
    pr.beta = 0.0;
    SUBCASE("raw substitution examples") {
        CHECK(core_density_bound(4, 1.0, pr, {1.0, 0.5}, BoundMode::degree_units, 1.0) ==
              doctest::Approx(8.0 / 3.0));
        CHECK(core_density_bound(1, 1.0, pr, {1.0}, BoundMode::degree_units) ==
              doctest::Approx(1.0));
    }
    SUBCASE("delta units stay below the true rho of the t1 core") {
        MultiplexGraph g = make_t1();
        double bound = core_density_bound(4, 1.0, pr, g.layer_weights(),
                                    BoundMode::delta_units, 1.0);
        CHECK(bound == doctest::Approx(4.0 / 3.0));
        double true_rho = rho(g, ids({0, 1, 2}), pr).value;
        CHECK(bound <= true_rho + 1e-9);
        double chain = core_density_bound(4, 1.0, pr, g.layer_weights(),
                                    BoundMode::prefix_chain);
        CHECK(chain >= 0.0);
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(core_density_bound(0, 1.0, pr, {1.0}), std::invalid_argument);
        CHECK_THROWS_AS(core_density_bound(1, 0.0, pr, {1.0}), std::invalid_argument);
        Params q;
        q.p = 0.5;
        CHECK_THROWS_AS(core_density_bound(1, 1.0, q, {1.0}), std::invalid_argument);
        q.p = kInf;
        CHECK_THROWS_AS(core_density_bound(1, 1.0, q, {1.0}), std::invalid_argument);
    }
}

TEST_CASE("shell bounds hold on random instances at p >= 1") {
    std::mt19937_64 rng(83);
    mplex::testing::RandomGraphOpts o;
    o.min_weight = 1.0;  // the bound drops factors that need weights >= 1
    o.max_weight = 2.0;
    const double betas[] = {0.0, 0.5, 1.0};
    for (int it = 0; it < 20; ++it) {
        MultiplexGraph g = mplex::testing::random_multiplex(rng, o);
        Params pr;
        pr.p = (it % 2) ? 2.0 : 1.0;
        pr.beta = betas[it % 3];
        pr.alpha = g.num_layers();
        ApproxOptions opts;
        opts.record_shells = true;
        ApproxResult res = approx_densest(g, pr, opts);
        for (const auto& shell : res.shells) {
            if (shell.k < 1) continue;
            double bound = core_density_bound(shell.k, shell.lambda, pr, g.layer_weights());
            double val = rho(g, shell.nodes, pr).value;
            CHECK(bound <= val + 1e-9);
        }
    }
}

TEST_CASE("approx never beats the exhaustive oracle and grows with alpha") {
    std::mt19937_64 rng(89);
    const double ps[] = {-kInf, -1.0, 0.0, 1.0, 2.0, kInf};
    for (int it = 0; it < 18; ++it) {
        MultiplexGraph g = mplex::testing::random_multiplex(rng);
        Params pr;
        pr.p = ps[it % 6];
        pr.beta = (it % 3) * 0.5;
        DenseResult exact = oracle::exact_densest(g, pr);
        double prev = -1.0;
        for (int alpha = 1; alpha <= g.num_layers(); ++alpha) {
            pr.alpha = alpha;
            ApproxResult res = approx_densest(g, pr);
            CHECK(res.best.rho_value <= exact.rho_value + 1e-9);
            CHECK(res.best.rho_value >= prev - 1e-12);
            prev = res.best.rho_value;
        }
    }
}

TEST_CASE("parallel sweep reproduces the serial reference") {
    std::mt19937_64 rng(97);
    mplex::testing::RandomGraphOpts o;
    o.min_n = 12;
    o.max_n = 24;
    o.max_layers = 4;
    for (int it = 0; it < 6; ++it) {
        MultiplexGraph g = mplex::testing::random_multiplex(rng, o);
        Params pr;
        pr.p = (it % 2) ? 1.0 : 2.0;
        pr.beta = 0.5;
        ApproxOptions serial{1, false}, parallel{4, false};
        ApproxResult a = approx_densest(g, pr, serial);
        ApproxResult b = approx_densest(g, pr, parallel);
        CHECK(a.best.nodes == b.best.nodes);
        CHECK(a.best.rho_value == b.best.rho_value);
        CHECK(a.lambda_used == b.lambda_used);
        CHECK(a.k_used == b.k_used);
        CHECK(a.candidates_evaluated == b.candidates_evaluated);
    }
}

TEST_CASE("certificate layers on the t1 core") {
    MultiplexGraph g = make_t1();
    auto cert = certificate_layers(g, ids({0, 1, 2}), 1.0, 1.0);
    CHECK(cert == std::vector<LayerId>{0});
}

TEST_CASE("approx degenerate inputs") {
    MultiplexGraph empty_edges = build_graph(3, {{}}, {1.0});
    Params pr;
    pr.alpha = 1;
    ApproxResult res = approx_densest(empty_edges, pr);
    CHECK(res.best.rho_value == doctest::Approx(0.0));
    CHECK_THROWS_AS(approx_densest(MultiplexGraph{}, pr), std::invalid_argument);
}
