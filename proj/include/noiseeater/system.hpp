#pragma once

#include "noiseeater/noise_basis.hpp"
#include "noiseeater/tapoff.hpp"

namespace noiseeater {

// Full device configuration: tap-off stage, input noise, feedforward gain and
// the two loss channels of the feedforward chain.
struct SystemParams {
    TapOffSpec tapoff{};
    double v_in = 10.0; // input signal variance, shot-noise units, >= 1
    double gain = 0.0;  // real feedforward gain G
    double eta_m = 1.0; // meter detection efficiency, in [0, 1]
    double eta_s = 1.0; // net signal-arm transmission, in [0, 1]

    // Throws std::invalid_argument on any violated bound or non-finite field.
    void validate() const;

    NoiseBasis basis() const { return NoiseBasis::with_signal_variance(v_in); }
};

struct PropagationResult {
    FluctuationVector signal_out;
    FluctuationVector meter_out;
};

// Propagates the five source fluctuations through tap-off, meter detection,
// feedforward and the loss channels:
//   signal_out = [se*(a + G*sm*d), se*(b + G*sm*e), se*(c + G*sm*f),
//                 sqrt(1-eta_s),  G*sqrt(eta_s*(1-eta_m))]
//   meter_out  = [sm*d, sm*e, sm*f, 0, sqrt(1-eta_m)]
// with se = sqrt(eta_s), sm = sqrt(eta_m).
PropagationResult propagate(const TapOffMatrix& m, const SystemParams& params);

// Convenience overload building the matrix from params.tapoff.
PropagationResult propagate(const SystemParams& params);

} // namespace noiseeater
