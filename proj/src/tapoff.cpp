#include "noiseeater/tapoff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace noiseeater {

namespace {

void require_bs_ratio(double eta) {
    if (!(eta > 0.0) || !(eta <= 1.0)) {
        throw std::invalid_argument("beamsplitter tap-off ratio must satisfy 0 < eta <= 1, got " +
                                    std::to_string(eta));
    }
}

void require_xi(double xi) {
    if (!(xi >= 0.0) || !(xi <= kXiMax)) {
        throw std::invalid_argument("SHG interaction strength must satisfy 0 <= xi <= " +
                                    std::to_string(kXiMax) + ", got " + std::to_string(xi));
    }
}

} // namespace

TapOffSpec TapOffSpec::beamsplitter(double eta) {
    require_bs_ratio(eta);
    return TapOffSpec{TapOffKind::kBeamsplitter, eta};
}

TapOffSpec TapOffSpec::second_harmonic(double xi) {
    require_xi(xi);
    return TapOffSpec{TapOffKind::kSecondHarmonic, xi};
}

TapOffMatrix bs_matrix(double eta) {
    require_bs_ratio(eta);
    const double t = std::sqrt(eta);
    const double r = std::sqrt(1.0 - eta);
    return TapOffMatrix{t, -r, 0.0, r, t, 0.0};
}

TapOffMatrix shg_matrix(double xi) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw std::invalid_argument("SHG interaction strength must be >= 0, got " +
                                    std::to_string(xi));
    }
    const double sech = 1.0 / std::cosh(xi);
    const double tanh = std::tanh(xi);
    const double a = (1.0 - xi * tanh) * sech;
    const double b = std::sqrt(2.0) * tanh * sech;
    const double d = -(tanh + xi * sech * sech) / std::sqrt(2.0);
    const double e = sech * sech;
    return TapOffMatrix{a, b, 0.0, d, e, 0.0};
}

double shg_tapoff_ratio(double xi) {
    const double sech = 1.0 / std::cosh(xi);
    return sech * sech;
}

double xi_from_tapoff(double eta) {
    require_bs_ratio(eta);
    // acosh evaluates the log form ln(x + sqrt(x^2 - 1)) with better
    // conditioning near eta = 1.
    const double x = 1.0 / std::sqrt(eta);
    return std::acosh(x);
}

TapOffMatrix make_matrix(const TapOffSpec& spec) {
    switch (spec.kind) {
        case TapOffKind::kBeamsplitter:
            return bs_matrix(spec.parameter);
        case TapOffKind::kSecondHarmonic:
            require_xi(spec.parameter);
            return shg_matrix(spec.parameter);
    }
    throw std::invalid_argument("unknown tap-off kind");
}

double tapoff_ratio(const TapOffSpec& spec) {
    switch (spec.kind) {
        case TapOffKind::kBeamsplitter:
            return spec.parameter;
        case TapOffKind::kSecondHarmonic:
            return shg_tapoff_ratio(spec.parameter);
    }
    throw std::invalid_argument("unknown tap-off kind");
}

} // namespace noiseeater
