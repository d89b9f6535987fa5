#include "noiseeater/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace noiseeater {

double snr(double v) {
    return v - 1.0;
}

double to_db(double v) {
    return 10.0 * std::log10(v);
}

TransferCoefficients transfer_coefficients(double v_s_out, double v_m_out, double v_s_in) {
    if (!(v_s_in > 1.0)) {
        throw std::invalid_argument(
            "transfer coefficients need v_s_in > 1: the reference SNR vanishes at shot noise");
    }
    const double snr_in = snr(v_s_in);
    TransferCoefficients t;
    t.t_s = snr(v_s_out) / snr_in;
    t.t_m = snr(v_m_out) / snr_in;
    t.t_total = t.t_s + t.t_m;
    return t;
}

double conditional_variance(double v_s_out, double v_m_out, double cov_sm) {
    if (!(v_m_out > 0.0)) {
        throw std::invalid_argument("conditional variance needs v_m_out > 0 (degenerate meter)");
    }
    return v_s_out - cov_sm * cov_sm / v_m_out;
}

double correlation(double v1, double v2, double cov) {
    if (!(v1 > 0.0) || !(v2 > 0.0)) {
        throw std::invalid_argument("correlation needs positive variances (degenerate field)");
    }
    return cov * cov / (v1 * v2);
}

MetricsReport compute_metrics(const SystemParams& params) {
    const PropagationResult fields = propagate(params);
    const NoiseBasis basis = params.basis();

    MetricsReport r;
    r.v_s_out = variance(fields.signal_out, basis);
    r.v_m_out = variance(fields.meter_out, basis);
    r.cov_sm = covariance(fields.signal_out, fields.meter_out, basis);
    const TransferCoefficients t = transfer_coefficients(r.v_s_out, r.v_m_out, params.v_in);
    r.t_s = t.t_s;
    r.t_m = t.t_m;
    r.t_total = t.t_total;
    r.v_cond = conditional_variance(r.v_s_out, r.v_m_out, r.cov_sm);
    r.corr_sm = correlation(r.v_s_out, r.v_m_out, r.cov_sm);
    r.v_s_out_db = to_db(r.v_s_out);
    r.v_m_out_db = to_db(r.v_m_out);
    return r;
}

} // namespace noiseeater
