#pragma once

#include <array>
#include <cstddef>

namespace noiseeater {

// The five independent noise sources entering the device, in fixed order.
enum class NoiseSource : std::size_t {
    kSignalIn = 0,     // input signal field
    kMeterIn = 1,      // input meter field (vacuum)
    kTapoffVac = 2,    // vacuum entering through tap-off loss
    kSignalArmVac = 3, // vacuum entering through signal-arm loss
    kMeterArmVac = 4,  // vacuum entering through meter detection loss
};

inline constexpr std::size_t kNumNoiseSources = 5;

// Variances of the noise sources, in shot-noise units (shot noise = 1).
// All sources are mutually independent, zero-mean and Gaussian.
struct NoiseBasis {
    std::array<double, kNumNoiseSources> variances{1.0, 1.0, 1.0, 1.0, 1.0};

    // Basis with classical excess noise v_in on the input signal and vacuum
    // (variance 1) on everything else.
    static NoiseBasis with_signal_variance(double v_in);

    double operator[](NoiseSource s) const { return variances[static_cast<std::size_t>(s)]; }
};

// A field's amplitude-quadrature fluctuation expressed as real coefficients
// over the five basis sources.
struct FluctuationVector {
    std::array<double, kNumNoiseSources> coeffs{};

    double operator[](NoiseSource s) const { return coeffs[static_cast<std::size_t>(s)]; }
};

// V = <dX^2> = sum_i c_i^2 var_i
double variance(const FluctuationVector& f, const NoiseBasis& basis);

// <dX_f dX_g> = sum_i f_i g_i var_i; covariance(f, f) == variance(f)
double covariance(const FluctuationVector& f, const FluctuationVector& g, const NoiseBasis& basis);

} // namespace noiseeater
