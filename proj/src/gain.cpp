#include "noiseeater/gain.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace noiseeater {

GainQuadratic gain_quadratic(const TapOffMatrix& m, const SystemParams& params) {
    SystemParams p = params;
    p.gain = 0.0;
    p.validate();

    const double v = p.v_in;
    const double em = p.eta_m;
    const double es = p.eta_s;
    GainQuadratic q;
    q.alpha = es * (em * (m.d * m.d * v + m.e * m.e + m.f * m.f) + (1.0 - em));
    q.beta = 2.0 * es * std::sqrt(em) * (m.a * m.d * v + m.b * m.e + m.c * m.f);
    q.gamma = es * (m.a * m.a * v + m.b * m.b + m.c * m.c) + (1.0 - es);
    return q;
}

double variance_of_gain(const TapOffSpec& spec, const SystemParams& params, double g) {
    return gain_quadratic(make_matrix(spec), params).at(g);
}

OptimalGain optimal_gain(const TapOffSpec& spec, const SystemParams& params) {
    const GainQuadratic q = gain_quadratic(make_matrix(spec), params);
    if (!(q.alpha > 0.0)) {
        throw std::invalid_argument("optimal_gain: degenerate system, no meter noise reaches "
                                    "the signal (alpha <= 0)");
    }
    OptimalGain opt;
    opt.g_star = -q.beta / (2.0 * q.alpha);
    opt.v_star = q.gamma - q.beta * q.beta / (4.0 * q.alpha);
    return opt;
}

GainCurve gain_scan(const TapOffSpec& spec, const SystemParams& params,
                    double g_min, double g_max, std::size_t steps) {
    if (!(g_min < g_max) || steps < 3) {
        throw std::invalid_argument("gain_scan: need g_min < g_max and steps >= 3");
    }
    const TapOffMatrix m = make_matrix(spec);
    const GainQuadratic q = gain_quadratic(m, params);

    // The meter does not see the feedforward, so its variance is flat in g.
    SystemParams p = params;
    p.gain = 0.0;
    const double v_m = variance(propagate(m, p).meter_out, p.basis());

    GainCurve curve;
    curve.gains = uniform_grid(g_min, g_max, steps);
    curve.v_s_out.resize(steps);
    curve.v_m_out.assign(steps, v_m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(steps); ++i) {
        curve.v_s_out[static_cast<std::size_t>(i)] =
            q.at(curve.gains[static_cast<std::size_t>(i)]);
    }

    const OptimalGain opt = optimal_gain(spec, params);
    curve.g_star = opt.g_star;
    curve.v_star = opt.v_star;
    return curve;
}

SweepResult optimal_sweep(std::span<const double> tapoff_grid, const SystemParams& shared) {
    if (tapoff_grid.empty()) {
        throw std::invalid_argument("optimal_sweep: empty tap-off grid");
    }
    double prev = 0.0;
    for (double x : tapoff_grid) {
        if (!(x > 0.0) || !(x < 1.0)) {
            throw std::invalid_argument("optimal_sweep: tapped fractions must lie in (0, 1)");
        }
        if (x <= prev) {
            throw std::invalid_argument("optimal_sweep: grid must be strictly increasing");
        }
        prev = x;
    }

    const std::size_t n = tapoff_grid.size();
    SweepResult result;
    result.tapoff_grid.assign(tapoff_grid.begin(), tapoff_grid.end());
    result.bs.resize(n);
    result.shg.resize(n);
    result.diff_db.resize(n);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double eta = 1.0 - tapoff_grid[k];
        const TapOffSpec specs[2] = {
            TapOffSpec::beamsplitter(eta),
            TapOffSpec::second_harmonic(xi_from_tapoff(eta)),
        };
        SweepRecord* records[2] = {&result.bs[k], &result.shg[k]};
        for (int model = 0; model < 2; ++model) {
            SystemParams p = shared;
            p.tapoff = specs[model];
            const OptimalGain opt = optimal_gain(p.tapoff, p);
            p.gain = opt.g_star;
            records[model]->g_star = opt.g_star;
            records[model]->v_star = opt.v_star;
            records[model]->metrics = compute_metrics(p);
        }
        result.diff_db[k] = to_db(result.bs[k].v_star) - to_db(result.shg[k].v_star);
    }
    return result;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    if (n < 2 || !(lo < hi)) {
        throw std::invalid_argument("uniform_grid: need n >= 2 and lo < hi");
    }
    std::vector<double> grid(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = lo + step * static_cast<double>(i);
    }
    grid.back() = hi;
    return grid;
}

std::vector<double> default_tapoff_grid() {
    return uniform_grid(0.005, 0.995, 200);
}

} // namespace noiseeater
