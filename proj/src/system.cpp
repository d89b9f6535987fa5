#include "noiseeater/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace noiseeater {

namespace {

void require_efficiency(double value, const char* name) {
    if (!(value >= 0.0) || !(value <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                    std::to_string(value));
    }
}

} // namespace

void SystemParams::validate() const {
    if (!(v_in >= 1.0) || !std::isfinite(v_in)) {
        throw std::invalid_argument("v_in must be finite and >= 1, got " + std::to_string(v_in));
    }
    if (!std::isfinite(gain)) {
        throw std::invalid_argument("gain must be finite");
    }
    require_efficiency(eta_m, "eta_m");
    require_efficiency(eta_s, "eta_s");
    make_matrix(tapoff); // validates the tap-off parameter range
}

PropagationResult propagate(const TapOffMatrix& m, const SystemParams& params) {
    params.validate();
    const double se = std::sqrt(params.eta_s);
    const double sm = std::sqrt(params.eta_m);
    const double g = params.gain;

    PropagationResult out;
    out.signal_out.coeffs = {
        se * (m.a + g * sm * m.d),
        se * (m.b + g * sm * m.e),
        se * (m.c + g * sm * m.f),
        std::sqrt(1.0 - params.eta_s),
        g * std::sqrt(params.eta_s * (1.0 - params.eta_m)),
    };
    out.meter_out.coeffs = {
        sm * m.d,
        sm * m.e,
        sm * m.f,
        0.0,
        std::sqrt(1.0 - params.eta_m),
    };
    return out;
}

PropagationResult propagate(const SystemParams& params) {
    return propagate(make_matrix(params.tapoff), params);
}

} // namespace noiseeater
