#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "mplex/density.hpp"
#include "mplex/oracle.hpp"

using namespace mplex;
using mplex::testing::ids;
using mplex::testing::make_t1;

namespace {
const double kEps = 1e-9;
}

TEST_CASE("omega on the t1 fixture") {
    MultiplexGraph g = make_t1();
    NodeSet abc = ids({0, 1, 2});
    NodeSet all = g.all_nodes();

    CHECK(omega(g, 0, abc, 1.0) == doctest::Approx(2.0));
    CHECK(omega(g, 0, all, -kInf) == doctest::Approx(1.0));  // d has degree 1
    CHECK(omega(g, 1, abc, 0.0) == doctest::Approx(0.0));    // c is isolated
    CHECK(omega(g, 0, all, 1.0) == doctest::Approx(2.0));    // (2+2+3+1)/4
    CHECK(omega(g, 0, all, kInf) == doctest::Approx(3.0));
    CHECK(omega(g, 0, all, -1.0) == doctest::Approx(12.0 / 7.0));
    CHECK_THROWS_AS(omega(g, 0, NodeSet{}, 1.0), std::invalid_argument);
}

TEST_CASE("omega is nondecreasing in p") {
    const double ps[] = {-kInf, -2.0, -1.0, 0.0, 0.5, 1.0, 2.0, kInf};
    std::mt19937_64 rng(31);
    for (int it = 0; it < 40; ++it) {
        MultiplexGraph g = mplex::testing::random_multiplex(rng);
        NodeSet s = mplex::testing::random_subset(rng, g.num_nodes());
        for (LayerId l = 0; l < g.num_layers(); ++l) {
            double prev = -1.0;
            for (double p : ps) {
                double om = omega(g, l, s, p);
                CHECK(om >= prev - 1e-12);
                prev = om;
            }
        }
    }
}

TEST_CASE("omega closed forms at p = 1 and p = 0") {
    std::mt19937_64 rng(37);
    for (int it = 0; it < 30; ++it) {
        MultiplexGraph g = mplex::testing::random_multiplex(rng);
        NodeSet s = mplex::testing::random_subset(rng, g.num_nodes());
        for (LayerId l = 0; l < g.num_layers(); ++l) {
            std::int64_t twice_e = 0;
            bool any_zero = false;
            double sum_log = 0.0;
            for (NodeId v : s) {
                int d = degree(g, v, l, &s);
                twice_e += d;
                if (d == 0)
                    any_zero = true;
                else
                    sum_log += std::log(static_cast<double>(d));
            }
            CHECK(omega(g, l, s, 1.0) ==
                  doctest::Approx(static_cast<double>(twice_e) / s.size()));
            double geo = any_zero ? 0.0 : std::exp(sum_log / s.size());
            CHECK(omega(g, l, s, 0.0) == doctest::Approx(geo));
        }
    }
}

TEST_CASE("rho on the t1 fixture") {
    MultiplexGraph g = make_t1();
    Params pr;
    pr.p = 1.0;
    pr.beta = 1.0;

    RhoResult r = rho(g, ids({0, 1, 2}), pr);
    CHECK(r.value == doctest::Approx(2.0));
    CHECK(r.chosen_layers == std::vector<LayerId>{0});
    CHECK(r.min_layer == 0);

    RhoResult rv = rho(g, g.all_nodes(), pr);
    CHECK(rv.value == doctest::Approx(2.0));
    CHECK(rv.chosen_layers == std::vector<LayerId>{0});

    CHECK_THROWS_AS(rho(g, NodeSet{}, pr), std::invalid_argument);
}

TEST_CASE("rho with beta = 0 on a single layer equals xi") {
    std::vector<std::vector<std::pair<NodeId, NodeId>>> tri = {{{0, 1}, {1, 2}, {0, 2}}};
    MultiplexGraph g = build_graph(3, tri, {0.75});
    Params pr;
    pr.beta = 0.0;
    RhoResult r = rho(g, g.all_nodes(), pr);
    CHECK(r.value == doctest::Approx(2.0 * 0.75));
}

TEST_CASE("prefix rule matches the exhaustive subset maximum") {
    std::mt19937_64 rng(41);
    mplex::testing::RandomGraphOpts o;
    o.max_layers = 4;
    const double ps[] = {-kInf, -1.0, 0.0, 1.0, 2.0, kInf};
    const double betas[] = {0.0, 0.5, 1.0, 2.0};
    for (int it = 0; it < 100; ++it) {
        MultiplexGraph g = mplex::testing::random_multiplex(rng, o);
        NodeSet s = mplex::testing::random_subset(rng, g.num_nodes());
        Params pr;
        pr.p = ps[it % 6];
        pr.beta = betas[it % 4];
        double fast = rho(g, s, pr).value;
        double slow = oracle::exact_rho_subsets(g, s, pr).value;
        CHECK(nearly_equal(fast, slow, kEps));
    }
}

TEST_CASE("delta on the t1 fixture") {
    MultiplexGraph g = make_t1();
    NodeSet all = g.all_nodes();
    CHECK(delta(g, 0, all, 2, 1.0) == doctest::Approx(6.0));   // 2*deg(c)
    CHECK(delta(g, 0, ids({0, 1, 2}), 0, 1.0) == doctest::Approx(4.0));
    CHECK(delta(g, 1, all, 2, 1.0) == doctest::Approx(0.0));   // isolated in layer 2
    CHECK_THROWS_AS(delta(g, 0, ids({0, 1}), 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(delta(g, 0, ids({0}), 0, 1.0), std::invalid_argument);
}

TEST_CASE("delta equals the power-sum difference for finite p") {
    std::mt19937_64 rng(43);
    const double ps[] = {0.5, 1.0, 2.0, 3.0, -1.0};
    for (int it = 0; it < 60; ++it) {
        MultiplexGraph g = mplex::testing::random_multiplex(rng);
        NodeSet s = mplex::testing::random_subset(rng, g.num_nodes());
        if (s.size() < 2) continue;
        double p = ps[it % 5];
        for (LayerId l = 0; l < g.num_layers(); ++l) {
            NodeId u = s.ids[rng() % s.size()];
            NodeSet rest;
            for (NodeId v : s)
                if (v != u) rest.ids.push_back(v);

            if (p < 0.0) {
                // Skip configurations that hit the zero-degree sentinel.
                bool zero = false;
                for (NodeId v : s)
                    if (degree(g, v, l, &s) == 0) zero = true;
                for (NodeId v : rest)
                    if (degree(g, v, l, &rest) == 0) zero = true;
                if (zero) continue;
            }

            double n1 = s.size() * std::pow(omega(g, l, s, p), p);
            double n0 = rest.size() * std::pow(omega(g, l, rest, p), p);
            if (!std::isfinite(n1) || !std::isfinite(n0)) continue;  // all-zero degrees
            CHECK(nearly_equal(delta(g, l, s, u, p), n1 - n0, 1e-7));
        }
    }
}

TEST_CASE("delta limit conventions") {
    MultiplexGraph g = make_t1();
    NodeSet all = g.all_nodes();
    SUBCASE("p = +/-inf is the induced degree") {
        CHECK(delta(g, 0, all, 2, kInf) == doctest::Approx(3.0));
        CHECK(delta(g, 0, all, 2, -kInf) == doctest::Approx(3.0));
        CHECK(delta(g, 0, ids({0, 1, 2}), 0, kInf) == doctest::Approx(2.0));
    }
    SUBCASE("p = 0 counts nodes dropping to zero degree") {
        // Path a-b-c in one layer: removing b isolates both neighbors.
        MultiplexGraph path = build_graph(3, {{{0, 1}, {1, 2}}}, {1.0});
        NodeSet s = path.all_nodes();
        CHECK(delta(path, 0, s, 1, 0.0) == doctest::Approx(3.0));
        CHECK(delta(path, 0, s, 0, 0.0) == doctest::Approx(1.0));
    }
    SUBCASE("p < 0 saturates on zero degrees") {
        // d is isolated in layer 2, so removing it drops an infinite term.
        CHECK(delta(g, 1, all, 3, -1.0) == kInf);
        // Removing c in layer 1 would isolate d (degree 1 neighbor).
        CHECK(delta(g, 0, all, 2, -1.0) == -kInf);
    }
}

TEST_CASE("edge density of t1") {
    MultiplexGraph g = make_t1();
    // (1.0*4 + 0.5*1) / (1.5 * C(4,2)) = 4.5 / 9
    CHECK(edge_density(g, g.all_nodes()) == doctest::Approx(0.5));
    CHECK(edge_density(g, ids({0})) == doctest::Approx(0.0));
}
