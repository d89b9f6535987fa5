// Timing comparison between the serial reference implementations and the
// OpenMP-parallel kernels: the Monte-Carlo moment estimator and the
// optimal-gain sweep.

#include "noiseeater/gain.hpp"
#include "noiseeater/mc_oracle.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t samples = 10'000'000;
    if (argc > 1) {
        samples = std::stoull(argv[1]);
    }
    const int threads = max_threads();
    std::printf("threads available: %d\n", threads);

    noiseeater::SystemParams params;
    params.tapoff = noiseeater::TapOffSpec::beamsplitter(0.9);
    params.v_in = 10.0;
    params.gain = -1.4;
    params.eta_m = 0.9;
    params.eta_s = 0.9025;
    const noiseeater::TapOffMatrix m = noiseeater::make_matrix(params.tapoff);

    std::printf("\nMonte-Carlo moment estimator, %llu samples\n",
                static_cast<unsigned long long>(samples));
    auto t0 = std::chrono::steady_clock::now();
    const auto serial = noiseeater::mc::estimate_serial(m, params, samples, 42);
    const double t_serial = seconds_since(t0);
    std::printf("  serial reference: %8.3f s  (%.1f Msamples/s)  v_s=%.6f\n", t_serial,
                static_cast<double>(samples) / t_serial / 1e6, serial.v_s);

    set_threads(1);
    t0 = std::chrono::steady_clock::now();
    const auto par1 = noiseeater::mc::estimate(m, params, samples, 42);
    const double t_chunked1 = seconds_since(t0);
    std::printf("  chunked, 1 thread: %7.3f s  (%.1f Msamples/s)  v_s=%.6f\n", t_chunked1,
                static_cast<double>(samples) / t_chunked1 / 1e6, par1.v_s);

    set_threads(threads);
    t0 = std::chrono::steady_clock::now();
    const auto par = noiseeater::mc::estimate(m, params, samples, 42);
    const double t_par = seconds_since(t0);
    std::printf("  chunked, %d threads: %6.3f s  (%.1f Msamples/s)  v_s=%.6f\n", threads, t_par,
                static_cast<double>(samples) / t_par / 1e6, par.v_s);
    std::printf("  speedup over serial: %.2fx\n", t_serial / t_par);
    std::printf("  deterministic across thread counts: %s\n",
                par.v_s == par1.v_s && par.v_m == par1.v_m && par.cov == par1.cov ? "yes" : "NO");

    const auto grid = noiseeater::uniform_grid(0.005, 0.995, 20000);
    noiseeater::SystemParams shared;
    shared.v_in = 10.0;
    shared.eta_m = 0.9;
    shared.eta_s = 0.9025;

    std::printf("\noptimal-gain sweep, %zu grid points x 2 models\n", grid.size());
    set_threads(1);
    t0 = std::chrono::steady_clock::now();
    const auto sweep1 = noiseeater::optimal_sweep(grid, shared);
    const double t_sweep1 = seconds_since(t0);
    std::printf("  1 thread: %8.3f s\n", t_sweep1);

    set_threads(threads);
    t0 = std::chrono::steady_clock::now();
    const auto sweepN = noiseeater::optimal_sweep(grid, shared);
    const double t_sweepN = seconds_since(t0);
    std::printf("  %d threads: %6.3f s  (speedup %.2fx)\n", threads, t_sweepN,
                t_sweep1 / t_sweepN);
    std::printf("  results identical: %s\n",
                sweep1.bs.back().v_star == sweepN.bs.back().v_star &&
                        sweep1.shg.back().v_star == sweepN.shg.back().v_star
                    ? "yes"
                    : "NO");
    return 0;
}
