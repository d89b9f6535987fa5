#include "noiseeater/figures.hpp"

#include <cmath>
#include <stdexcept>

namespace noiseeater {

namespace {

struct PointMoments {
    double v_s = 0.0, v_m = 0.0, cov = 0.0;
};

PointMoments moments_at(const TapOffSpec& spec, const FigureParams& fp, double gain) {
    SystemParams p;
    p.tapoff = spec;
    p.v_in = fp.v_in;
    p.gain = gain;
    p.eta_m = fp.eta_m;
    p.eta_s = fp.eta_s();
    const PropagationResult fields = propagate(p);
    const NoiseBasis basis = p.basis();
    PointMoments pm;
    pm.v_s = variance(fields.signal_out, basis);
    pm.v_m = variance(fields.meter_out, basis);
    pm.cov = covariance(fields.signal_out, fields.meter_out, basis);
    return pm;
}

SystemParams sweep_params(const FigureParams& fp) {
    SystemParams p;
    p.v_in = fp.v_in;
    p.eta_m = fp.eta_m;
    p.eta_s = fp.eta_s();
    return p;
}

DataTable tapoff_comparison(int figure, const FigureParams& fp) {
    DataTable table;
    switch (figure) {
        case 4:
            table.columns = {"tapoff", "v_s_bs", "v_m_bs", "v_s_shg", "v_m_shg"};
            break;
        case 5:
            table.columns = {"tapoff", "t_s_bs", "t_m_bs", "t_total_bs",
                             "t_s_shg", "t_m_shg", "t_total_shg"};
            break;
        case 6:
            table.columns = {"tapoff", "corr_bs", "corr_shg"};
            break;
    }
    for (double x : uniform_grid(fp.grid_min, fp.grid_max, fp.grid_points)) {
        const double eta = 1.0 - x;
        const PointMoments bs = moments_at(TapOffSpec::beamsplitter(eta), fp, 0.0);
        const PointMoments sh =
            moments_at(TapOffSpec::second_harmonic(xi_from_tapoff(eta)), fp, 0.0);
        switch (figure) {
            case 4:
                table.rows.push_back({x, bs.v_s, bs.v_m, sh.v_s, sh.v_m});
                break;
            case 5: {
                const TransferCoefficients tb = transfer_coefficients(bs.v_s, bs.v_m, fp.v_in);
                const TransferCoefficients ts = transfer_coefficients(sh.v_s, sh.v_m, fp.v_in);
                table.rows.push_back({x, tb.t_s, tb.t_m, tb.t_total, ts.t_s, ts.t_m, ts.t_total});
                break;
            }
            case 6:
                table.rows.push_back({x, correlation(bs.v_s, bs.v_m, bs.cov),
                                      correlation(sh.v_s, sh.v_m, sh.cov)});
                break;
        }
    }
    return table;
}

DataTable gain_comparison(const FigureParams& fp) {
    const double eta = 1.0 - fp.tapoff;
    const SystemParams shared = sweep_params(fp);
    const GainCurve bs = gain_scan(TapOffSpec::beamsplitter(eta), shared,
                                   fp.gain_min, fp.gain_max, fp.gain_steps);
    const GainCurve sh = gain_scan(TapOffSpec::second_harmonic(xi_from_tapoff(eta)), shared,
                                   fp.gain_min, fp.gain_max, fp.gain_steps);

    DataTable table;
    table.columns = {"gain", "v_s_db_bs", "v_m_db_bs", "v_s_db_shg", "v_m_db_shg"};
    for (std::size_t i = 0; i < bs.gains.size(); ++i) {
        table.rows.push_back({bs.gains[i], to_db(bs.v_s_out[i]), to_db(bs.v_m_out[i]),
                              to_db(sh.v_s_out[i]), to_db(sh.v_m_out[i])});
    }
    return table;
}

DataTable optimum_comparison(const FigureParams& fp) {
    const std::vector<double> grid = uniform_grid(fp.grid_min, fp.grid_max, fp.grid_points);
    const SweepResult sweep = optimal_sweep(grid, sweep_params(fp));

    DataTable table;
    table.columns = {"tapoff", "v_star_db_bs", "v_star_db_shg", "diff_db"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        table.rows.push_back({grid[i], to_db(sweep.bs[i].v_star), to_db(sweep.shg[i].v_star),
                              sweep.diff_db[i]});
    }
    return table;
}

} // namespace

bool DataTable::all_finite() const {
    for (const auto& row : rows) {
        for (double v : row) {
            if (!std::isfinite(v)) {
                return false;
            }
        }
    }
    return true;
}

FigureParams figure_defaults(int figure) {
    FigureParams fp;
    switch (figure) {
        case 4:
        case 5:
        case 6:
            break; // lossless tap-off comparison at G = 0
        case 7:
        case 8:
            fp.eta_m = 0.9;
            fp.eta_insertion = 0.95;
            fp.eta_modulator = 0.95;
            break;
        default:
            throw std::invalid_argument("unknown figure number " + std::to_string(figure));
    }
    return fp;
}

DataTable make_figure_table(int figure, const FigureParams& params) {
    switch (figure) {
        case 4:
        case 5:
        case 6:
            return tapoff_comparison(figure, params);
        case 7:
            return gain_comparison(params);
        case 8:
            return optimum_comparison(params);
        default:
            throw std::invalid_argument("unknown figure number " + std::to_string(figure));
    }
}

} // namespace noiseeater
