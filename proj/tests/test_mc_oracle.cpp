#include "noiseeater/mc_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace noiseeater;

namespace {

SystemParams noisy_system() {
    SystemParams p;
    p.tapoff = TapOffSpec::beamsplitter(0.9);
    p.v_in = 10.0;
    p.gain = -1.0;
    p.eta_m = 0.9;
    p.eta_s = 0.9;
    return p;
}

} // namespace

TEST_CASE("chunked estimator matches the analytic moments") {
    const SystemParams p = noisy_system();
    const mc::Comparison cmp = mc::compare(p, 500'000, 1);
    CHECK(cmp.agrees);
    CHECK(cmp.z_v_s <= 5.0);
    CHECK(cmp.z_v_m <= 5.0);
    CHECK(cmp.z_cov <= 5.0);
}

TEST_CASE("serial reference matches the analytic moments") {
    const SystemParams p = noisy_system();
    const TapOffMatrix m = make_matrix(p.tapoff);
    const mc::Estimate est = mc::estimate_serial(m, p, 500'000, 2);

    const PropagationResult fields = propagate(m, p);
    const NoiseBasis basis = p.basis();
    CHECK(std::abs(est.v_s - variance(fields.signal_out, basis)) <= 5.0 * est.se_v_s);
    CHECK(std::abs(est.v_m - variance(fields.meter_out, basis)) <= 5.0 * est.se_v_m);
    CHECK(std::abs(est.cov - covariance(fields.signal_out, fields.meter_out, basis)) <=
          5.0 * est.se_cov);
}

TEST_CASE("estimates are reproducible for a fixed seed") {
    const SystemParams p = noisy_system();
    const TapOffMatrix m = make_matrix(p.tapoff);
    const mc::Estimate a = mc::estimate(m, p, 300'000, 99);
    const mc::Estimate b = mc::estimate(m, p, 300'000, 99);
    CHECK(a.v_s == b.v_s);
    CHECK(a.v_m == b.v_m);
    CHECK(a.cov == b.cov);

    const mc::Estimate c = mc::estimate(m, p, 300'000, 100);
    CHECK(a.v_s != c.v_s); // a different stream, almost surely
}

TEST_CASE("chunked estimator is independent of the thread count") {
    const SystemParams p = noisy_system();
    const TapOffMatrix m = make_matrix(p.tapoff);
#ifdef _OPENMP
    const int threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const mc::Estimate single = mc::estimate(m, p, 400'000, 7);
    omp_set_num_threads(threads);
    const mc::Estimate parallel = mc::estimate(m, p, 400'000, 7);
    CHECK(single.v_s == parallel.v_s);
    CHECK(single.v_m == parallel.v_m);
    CHECK(single.cov == parallel.cov);
#else
    const mc::Estimate a = mc::estimate(m, p, 400'000, 7);
    const mc::Estimate b = mc::estimate(m, p, 400'000, 7);
    CHECK(a.v_s == b.v_s);
#endif
}

TEST_CASE("SHG point with losses and feedforward agrees with sampling") {
    SystemParams p;
    p.tapoff = TapOffSpec::second_harmonic(1.0);
    p.v_in = 10.0;
    p.gain = 1.2;
    p.eta_m = 0.85;
    p.eta_s = 0.9;
    const mc::Comparison cmp = mc::compare(p, 500'000, 5);
    CHECK(cmp.agrees);
}

TEST_CASE("estimator rejects degenerate sample counts") {
    const SystemParams p = noisy_system();
    const TapOffMatrix m = make_matrix(p.tapoff);
    CHECK_THROWS_AS(mc::estimate(m, p, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(mc::estimate_serial(m, p, 0, 0), std::invalid_argument);
}

TEST_CASE("standard errors shrink with the sample count") {
    const SystemParams p = noisy_system();
    const TapOffMatrix m = make_matrix(p.tapoff);
    const mc::Estimate small = mc::estimate(m, p, 100'000, 3);
    const mc::Estimate large = mc::estimate(m, p, 1'000'000, 3);
    CHECK(large.se_v_s < small.se_v_s);
    CHECK(large.se_cov < small.se_cov);
}
