#include "noiseeater/noise_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace noiseeater {

NoiseBasis NoiseBasis::with_signal_variance(double v_in) {
    if (!std::isfinite(v_in) || v_in < 0.0) {
        throw std::invalid_argument("NoiseBasis: signal variance must be finite and >= 0");
    }
    NoiseBasis basis;
    basis.variances[static_cast<std::size_t>(NoiseSource::kSignalIn)] = v_in;
    return basis;
}

double variance(const FluctuationVector& f, const NoiseBasis& basis) {
    double v = 0.0;
    for (std::size_t i = 0; i < kNumNoiseSources; ++i) {
        v += f.coeffs[i] * f.coeffs[i] * basis.variances[i];
    }
    return v;
}

double covariance(const FluctuationVector& f, const FluctuationVector& g, const NoiseBasis& basis) {
    double c = 0.0;
    for (std::size_t i = 0; i < kNumNoiseSources; ++i) {
        c += f.coeffs[i] * g.coeffs[i] * basis.variances[i];
    }
    return c;
}

} // namespace noiseeater
