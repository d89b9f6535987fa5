#pragma once

#include "noiseeater/system.hpp"

namespace noiseeater {

// The QND characterization of one operating point.
struct MetricsReport {
    double v_s_out = 0.0;    // output signal variance, shot-noise units
    double v_m_out = 0.0;    // output meter variance
    double cov_sm = 0.0;     // covariance of the two output fluctuations
    double t_s = 0.0;        // signal transfer coefficient
    double t_m = 0.0;        // meter transfer coefficient
    double t_total = 0.0;    // t_s + t_m
    double v_cond = 0.0;     // conditional variance V_{s|m}
    double corr_sm = 0.0;    // correlation C in [0, 1]
    double v_s_out_db = 0.0; // 10*log10(v_s_out)
    double v_m_out_db = 0.0;
};

// (S - N)/N with the quantum limit N normalized to 1: snr(v) = v - 1.
// Negative for squeezed fields.
double snr(double v);

// 10*log10(v), dB relative to shot noise.
double to_db(double v);

struct TransferCoefficients {
    double t_s = 0.0;
    double t_m = 0.0;
    double t_total = 0.0;
};

// Both coefficients are referenced to the input *signal* SNR; the vacuum meter
// input has no SNR of its own. Requires v_s_in > 1.
TransferCoefficients transfer_coefficients(double v_s_out, double v_m_out, double v_s_in);

// V_{s|m} = v_s_out - cov^2 / v_m_out, in [0, v_s_out]. Requires v_m_out > 0.
double conditional_variance(double v_s_out, double v_m_out, double cov_sm);

// C = cov^2 / (v1*v2), in [0, 1] by Cauchy-Schwarz. Requires v1, v2 > 0.
double correlation(double v1, double v2, double cov);

// Full pipeline: propagate params, then evaluate every metric at the physical
// output fields. Requires params.v_in > 1 (transfer coefficients undefined at
// the shot-noise limit).
MetricsReport compute_metrics(const SystemParams& params);

} // namespace noiseeater
