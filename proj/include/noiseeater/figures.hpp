#pragma once

#include "noiseeater/gain.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace noiseeater {

// A rectangular table of doubles with named columns; the common currency of
// the CSV/JSON writers and the figure generators.
struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool all_finite() const;
};

// Parameters shared by the figure-reproduction commands. eta_s is composed as
// eta_insertion * eta_modulator.
struct FigureParams {
    double v_in = 10.0;
    double eta_m = 1.0;
    double eta_insertion = 1.0;
    double eta_modulator = 1.0;
    // tap-off grid for figures 4-6 and 8
    double grid_min = 0.005;
    double grid_max = 0.995;
    std::size_t grid_points = 200;
    // gain scan for figure 7
    double tapoff = 0.1; // tapped power fraction 1 - eta
    double gain_min = -5.0;
    double gain_max = 5.0;
    std::size_t gain_steps = 10001;

    double eta_s() const { return eta_insertion * eta_modulator; }
};

// Caption defaults: figures 4-6 are the lossless G=0 tap-off comparison;
// figures 7-8 use eta_m = 0.9 and 5% insertion + 5% modulator loss.
FigureParams figure_defaults(int figure);

// fig4: tapoff, v_s_bs, v_m_bs, v_s_shg, v_m_shg
// fig5: tapoff, t_s_bs, t_m_bs, t_total_bs, t_s_shg, t_m_shg, t_total_shg
// fig6: tapoff, corr_bs, corr_shg
// fig7: gain, v_s_db_bs, v_m_db_bs, v_s_db_shg, v_m_db_shg
// fig8: tapoff, v_star_db_bs, v_star_db_shg, diff_db
DataTable make_figure_table(int figure, const FigureParams& params);

} // namespace noiseeater
