#include "noiseeater/mc_oracle.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace noiseeater::mc {

namespace {

constexpr std::uint64_t kChunkSamples = 1 << 16;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
    return splitmix64(seed ^ (0x9E3779B97F4A7C15ull * (chunk + 1)));
}

// Raw sums of one block of samples.
struct Accumulator {
    double s = 0.0, m = 0.0, ss = 0.0, mm = 0.0, sm = 0.0;

    void add(double s_out, double m_out) {
        s += s_out;
        m += m_out;
        ss += s_out * s_out;
        mm += m_out * m_out;
        sm += s_out * m_out;
    }

    void merge(const Accumulator& o) {
        s += o.s;
        m += o.m;
        ss += o.ss;
        mm += o.mm;
        sm += o.sm;
    }
};

// Fixed coefficients of the per-sample feedforward-chain arithmetic. This is
// deliberately written out from the transfer relation itself rather than going
// through propagate(), so the oracle exercises an independent arithmetic path.
struct SampleChain {
    TapOffMatrix m;
    double sig_in_sd = 1.0;
    double se = 1.0, sm = 1.0;
    double loss_s = 0.0, loss_m = 0.0;
    double g = 0.0, g_es_em = 0.0, g_es_lm = 0.0;

    SampleChain(const TapOffMatrix& matrix, const SystemParams& p) : m(matrix), g(p.gain) {
        sig_in_sd = std::sqrt(p.v_in);
        se = std::sqrt(p.eta_s);
        sm = std::sqrt(p.eta_m);
        loss_s = std::sqrt(1.0 - p.eta_s);
        loss_m = std::sqrt(1.0 - p.eta_m);
        g_es_em = g * std::sqrt(p.eta_s * p.eta_m);
        g_es_lm = g * std::sqrt(p.eta_s * (1.0 - p.eta_m));
    }

    template <typename Rng, typename Dist>
    void sample(Rng& rng, Dist& normal, Accumulator& acc) const {
        const double x_sig = sig_in_sd * normal(rng);
        const double x_met = normal(rng);
        const double x_vl = normal(rng);
        const double x_vs = normal(rng);
        const double x_vm = normal(rng);
        const double tap_s = m.a * x_sig + m.b * x_met + m.c * x_vl;
        const double tap_m = m.d * x_sig + m.e * x_met + m.f * x_vl;
        const double s_out = se * tap_s + g_es_em * tap_m + loss_s * x_vs + g_es_lm * x_vm;
        const double m_out = sm * tap_m + loss_m * x_vm;
        acc.add(s_out, m_out);
    }
};

Estimate finalize(const Accumulator& acc, std::uint64_t n) {
    const double nn = static_cast<double>(n);
    const double mean_s = acc.s / nn;
    const double mean_m = acc.m / nn;
    Estimate est;
    est.samples = n;
    est.v_s = (acc.ss - nn * mean_s * mean_s) / (nn - 1.0);
    est.v_m = (acc.mm - nn * mean_m * mean_m) / (nn - 1.0);
    est.cov = (acc.sm - nn * mean_s * mean_m) / (nn - 1.0);
    // Gaussian sampling errors, evaluated from the sample moments themselves.
    est.se_v_s = est.v_s * std::sqrt(2.0 / (nn - 1.0));
    est.se_v_m = est.v_m * std::sqrt(2.0 / (nn - 1.0));
    est.se_cov = std::sqrt((est.v_s * est.v_m + est.cov * est.cov) / (nn - 1.0));
    return est;
}

void require_samples(std::uint64_t samples) {
    if (samples < 2) {
        throw std::invalid_argument("Monte-Carlo estimate needs at least 2 samples");
    }
}

} // namespace

Estimate estimate(const TapOffMatrix& m, const SystemParams& params,
                  std::uint64_t samples, std::uint64_t seed) {
    require_samples(samples);
    params.validate();
    const SampleChain chain(m, params);

    const std::uint64_t chunks = (samples + kChunkSamples - 1) / kChunkSamples;
    std::vector<Accumulator> partial(chunks);

    // Chunking is fixed by the sample count alone and the partial sums are
    // merged in chunk order below, so the result does not depend on how the
    // chunks are scheduled over threads.
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunkSamples;
        const std::uint64_t end = std::min(begin + kChunkSamples, samples);
        std::mt19937_64 rng(chunk_seed(seed, static_cast<std::uint64_t>(c)));
        std::normal_distribution<double> normal;
        Accumulator acc;
        for (std::uint64_t i = begin; i < end; ++i) {
            chain.sample(rng, normal, acc);
        }
        partial[static_cast<std::size_t>(c)] = acc;
    }

    Accumulator total;
    for (const Accumulator& acc : partial) {
        total.merge(acc);
    }
    return finalize(total, samples);
}

Estimate estimate_serial(const TapOffMatrix& m, const SystemParams& params,
                         std::uint64_t samples, std::uint64_t seed) {
    require_samples(samples);
    params.validate();
    const SampleChain chain(m, params);

    std::mt19937_64 rng(splitmix64(seed));
    std::normal_distribution<double> normal;
    Accumulator acc;
    for (std::uint64_t i = 0; i < samples; ++i) {
        chain.sample(rng, normal, acc);
    }
    return finalize(acc, samples);
}

Comparison compare(const SystemParams& params, std::uint64_t samples,
                   std::uint64_t seed, double threshold) {
    const TapOffMatrix m = make_matrix(params.tapoff);
    Comparison cmp;
    cmp.threshold = threshold;
    cmp.sampled = estimate(m, params, samples, seed);

    const PropagationResult fields = propagate(m, params);
    const NoiseBasis basis = params.basis();
    cmp.analytic_v_s = variance(fields.signal_out, basis);
    cmp.analytic_v_m = variance(fields.meter_out, basis);
    cmp.analytic_cov = covariance(fields.signal_out, fields.meter_out, basis);

    cmp.z_v_s = std::abs(cmp.analytic_v_s - cmp.sampled.v_s) / cmp.sampled.se_v_s;
    cmp.z_v_m = std::abs(cmp.analytic_v_m - cmp.sampled.v_m) / cmp.sampled.se_v_m;
    cmp.z_cov = std::abs(cmp.analytic_cov - cmp.sampled.cov) / cmp.sampled.se_cov;
    cmp.max_z = std::max({cmp.z_v_s, cmp.z_v_m, cmp.z_cov});
    cmp.agrees = cmp.max_z <= threshold;
    return cmp;
}

} // namespace noiseeater::mc
