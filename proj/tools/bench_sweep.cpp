// Times the candidate-lambda sweep with the serial reference against the
// OpenMP map and checks the two produce the same result document fields.
//
//   bench_sweep [--n N] [--m M] [--layers L] [--seed S] [--alpha A]
//               [--p P] [--beta B] [--workers W] [--repeat R]

#include <chrono>
#include <iostream>
#include <string>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "mplex/approx.hpp"
#include "mplex/synth.hpp"

using namespace mplex;

namespace {

double run_once(const MultiplexGraph& g, const Params& params, int workers,
                ApproxResult& out) {
    ApproxOptions opts;
    opts.workers = workers;
    auto t0 = std::chrono::steady_clock::now();
    out = approx_densest(g, params, opts);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP lambda-sweep benchmark"};
    GenSpec spec;
    spec.n = 20000;
    spec.m = 400000;
    spec.layers = 4;
    spec.seed = 7;
    spec.plant_mode = PlantMode::clique;
    spec.plant_size = 30;
    Params params;
    int workers = 0;
    int repeat = 3;
    app.add_option("--n", spec.n);
    app.add_option("--m", spec.m);
    app.add_option("--layers", spec.layers);
    app.add_option("--seed", spec.seed);
    app.add_option("--alpha", params.alpha);
    app.add_option("--p", params.p);
    app.add_option("--beta", params.beta);
    app.add_option("--workers", workers);
    app.add_option("--repeat", repeat);
    CLI11_PARSE(app, argc, argv);

    if (workers <= 0) {
#if defined(_OPENMP)
        workers = omp_get_max_threads();
#else
        workers = 1;
#endif
    }

    std::cout << "generating n=" << spec.n << " m=" << spec.m
              << " layers=" << spec.layers << " seed=" << spec.seed << "\n";
    auto [g, planted] = generate(spec);

    double serial_best = 1e300, parallel_best = 1e300;
    ApproxResult serial_res, parallel_res;
    for (int r = 0; r < repeat; ++r) {
        serial_best = std::min(serial_best, run_once(g, params, 1, serial_res));
        parallel_best = std::min(parallel_best, run_once(g, params, workers, parallel_res));
    }

    bool same = serial_res.best.nodes == parallel_res.best.nodes &&
                serial_res.best.rho_value == parallel_res.best.rho_value &&
                serial_res.lambda_used == parallel_res.lambda_used &&
                serial_res.k_used == parallel_res.k_used;

    std::cout << "candidates evaluated: " << serial_res.candidates_evaluated << "\n"
              << "rho: " << serial_res.best.rho_value
              << "  (lambda=" << serial_res.lambda_used << ", k=" << serial_res.k_used
              << ", |S|=" << serial_res.best.nodes.size() << ")\n"
              << "serial reference: " << serial_best * 1e3 << " ms\n"
              << "openmp x" << workers << ":      " << parallel_best * 1e3 << " ms\n"
              << "speedup: " << serial_best / parallel_best << "\n"
              << "results identical: " << (same ? "yes" : "NO") << "\n";
    return same ? 0 : 1;
}
