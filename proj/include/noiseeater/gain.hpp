#pragma once

#include "noiseeater/metrics.hpp"
#include "noiseeater/system.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace noiseeater {

// Output signal variance as a function of the feedforward gain g is exactly
// quadratic: V_s(g) = alpha*g^2 + beta*g + gamma with
//   alpha = eta_s*(eta_m*(d^2 v_in + e^2 + f^2) + (1 - eta_m))
//   beta  = 2 eta_s sqrt(eta_m) (a d v_in + b e + c f)
//   gamma = eta_s*(a^2 v_in + b^2 + c^2) + (1 - eta_s)
struct GainQuadratic {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    double at(double g) const { return (alpha * g + beta) * g + gamma; }
};

// params.gain is ignored; the quadratic covers all gains at once.
GainQuadratic gain_quadratic(const TapOffMatrix& m, const SystemParams& params);

// Equals variance(propagate(...).signal_out) with the gain set to g.
double variance_of_gain(const TapOffSpec& spec, const SystemParams& params, double g);

struct OptimalGain {
    double g_star = 0.0; // -beta / (2 alpha)
    double v_star = 0.0; // gamma - beta^2 / (4 alpha)
};

// Exact quadratic minimum. Throws if alpha <= 0 (degenerate system, eta_s = 0).
OptimalGain optimal_gain(const TapOffSpec& spec, const SystemParams& params);

struct GainCurve {
    std::vector<double> gains;
    std::vector<double> v_s_out;
    std::vector<double> v_m_out;
    double g_star = 0.0;
    double v_star = 0.0;
};

// Evaluates the signal/meter output variances on a uniform gain grid and
// records the closed-form optimum alongside. The scan is the verification
// oracle for optimal_gain and the source of the Fig.-7-style curve data.
GainCurve gain_scan(const TapOffSpec& spec, const SystemParams& params,
                    double g_min, double g_max, std::size_t steps);

struct SweepRecord {
    double g_star = 0.0;
    double v_star = 0.0;
    MetricsReport metrics; // evaluated at g_star
};

struct SweepResult {
    std::vector<double> tapoff_grid; // tapped power fractions 1 - eta
    std::vector<SweepRecord> bs;
    std::vector<SweepRecord> shg;
    std::vector<double> diff_db; // v_star_db(bs) - v_star_db(shg)
};

// For each tapped power fraction on the grid, evaluates both models at equal
// tap-off ratio (xi = xi_from_tapoff(eta) for the SHG) at their optimal gains.
// shared.tapoff and shared.gain are ignored. Grid points are evaluated
// independently (in parallel when OpenMP is enabled); results are in grid order.
SweepResult optimal_sweep(std::span<const double> tapoff_grid, const SystemParams& shared);

// 200 uniform tapped-power fractions in [0.005, 0.995]; resolves the
// correlation crossing near 0.3 and avoids the degenerate endpoints.
std::vector<double> default_tapoff_grid();

std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

} // namespace noiseeater
