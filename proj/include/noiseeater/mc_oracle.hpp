#pragma once

#include "noiseeater/system.hpp"

#include <cstdint>

namespace noiseeater::mc {

// Sample estimates of the output second moments, with Gaussian standard errors
// derived from the samples themselves.
struct Estimate {
    double v_s = 0.0;
    double v_m = 0.0;
    double cov = 0.0;
    double se_v_s = 0.0;
    double se_v_m = 0.0;
    double se_cov = 0.0;
    std::uint64_t samples = 0;
};

// Draws `samples` realizations of the five noise sources and applies the
// feedforward-chain arithmetic per sample (an arithmetic path independent of
// propagate()). Work is split into fixed-size chunks with per-chunk RNG
// streams and the partial sums are reduced in chunk order, so the result is
// identical for any thread count. Runs the chunks in parallel under OpenMP.
Estimate estimate(const TapOffMatrix& m, const SystemParams& params,
                  std::uint64_t samples, std::uint64_t seed);

// Plain single-stream reference implementation, kept for testing and as the
// baseline in the benchmark.
Estimate estimate_serial(const TapOffMatrix& m, const SystemParams& params,
                         std::uint64_t samples, std::uint64_t seed);

struct Comparison {
    Estimate sampled;
    double analytic_v_s = 0.0;
    double analytic_v_m = 0.0;
    double analytic_cov = 0.0;
    double z_v_s = 0.0; // |analytic - sampled| / standard error
    double z_v_m = 0.0;
    double z_cov = 0.0;
    double max_z = 0.0;
    bool agrees = false; // max_z <= threshold
    double threshold = 5.0;
};

// Analytic vs sampled moments; flags any discrepancy beyond `threshold`
// standard errors.
Comparison compare(const SystemParams& params, std::uint64_t samples,
                   std::uint64_t seed, double threshold = 5.0);

} // namespace noiseeater::mc
