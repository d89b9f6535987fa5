#include "noiseeater/figures.hpp"
#include "noiseeater/gain.hpp"
#include "noiseeater/mc_oracle.hpp"
#include "noiseeater/metrics.hpp"
#include "noiseeater/table_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using noiseeater::DataTable;
using noiseeater::FigureParams;
using noiseeater::MetricsReport;
using noiseeater::SystemParams;
using noiseeater::TapOffSpec;

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitNumericalFailure = 3;

// Raised when a computed result is non-finite; maps to exit code 3.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every knob of a run. Unset fields fall back to preset values and then to
// built-in defaults; command-line flags override config-file values.
struct Options {
    std::optional<std::string> model, preset, out, format;
    std::optional<double> v_in, eta_m, eta_insertion, eta_modulator;
    std::optional<double> tapoff, xi, gain;
    std::optional<double> gain_min, gain_max, grid_min, grid_max;
    std::optional<std::uint64_t> gain_steps, grid_points, samples, seed;
    std::string config_path;
    int figure = 0;

    template <typename T>
    static void fill(std::optional<T>& field, const T& value) {
        if (!field) {
            field = value;
        }
    }
};

void load_config_file(Options& o) {
    if (o.config_path.empty()) {
        return;
    }
    std::ifstream in(o.config_path);
    if (!in) {
        throw std::invalid_argument("cannot read config file '" + o.config_path + "'");
    }
    nlohmann::json doc = nlohmann::json::parse(in); // throws parse_error on bad input
    if (!doc.is_object()) {
        throw std::invalid_argument("config file must hold a flat JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "model") {
            Options::fill(o.model, value.get<std::string>());
        } else if (key == "preset") {
            Options::fill(o.preset, value.get<std::string>());
        } else if (key == "out") {
            Options::fill(o.out, value.get<std::string>());
        } else if (key == "format") {
            Options::fill(o.format, value.get<std::string>());
        } else if (key == "v_in") {
            Options::fill(o.v_in, value.get<double>());
        } else if (key == "eta_m") {
            Options::fill(o.eta_m, value.get<double>());
        } else if (key == "eta_insertion") {
            Options::fill(o.eta_insertion, value.get<double>());
        } else if (key == "eta_modulator") {
            Options::fill(o.eta_modulator, value.get<double>());
        } else if (key == "tapoff") {
            Options::fill(o.tapoff, value.get<double>());
        } else if (key == "xi") {
            Options::fill(o.xi, value.get<double>());
        } else if (key == "gain") {
            Options::fill(o.gain, value.get<double>());
        } else if (key == "gain_min") {
            Options::fill(o.gain_min, value.get<double>());
        } else if (key == "gain_max") {
            Options::fill(o.gain_max, value.get<double>());
        } else if (key == "grid_min") {
            Options::fill(o.grid_min, value.get<double>());
        } else if (key == "grid_max") {
            Options::fill(o.grid_max, value.get<double>());
        } else if (key == "gain_steps") {
            Options::fill(o.gain_steps, value.get<std::uint64_t>());
        } else if (key == "grid_points") {
            Options::fill(o.grid_points, value.get<std::uint64_t>());
        } else if (key == "samples") {
            Options::fill(o.samples, value.get<std::uint64_t>());
        } else if (key == "seed") {
            Options::fill(o.seed, value.get<std::uint64_t>());
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

// Caption parameter sets. A preset only fills fields the user left unset.
void apply_preset(Options& o) {
    if (!o.preset) {
        return;
    }
    std::string name = *o.preset;
    if (name.size() > 6 && name.compare(name.size() - 6, 6, "-point") == 0) {
        name.resize(name.size() - 6); // accept fig4-point etc.
    }
    if (name == "fig4" || name == "fig5" || name == "fig6") {
        Options::fill(o.v_in, 10.0);
        Options::fill(o.eta_m, 1.0);
        Options::fill(o.eta_insertion, 1.0);
        Options::fill(o.eta_modulator, 1.0);
        Options::fill(o.gain, 0.0);
    } else if (name == "fig7") {
        Options::fill(o.v_in, 10.0);
        Options::fill(o.eta_m, 0.9);
        Options::fill(o.eta_insertion, 0.95);
        Options::fill(o.eta_modulator, 0.95);
        Options::fill(o.tapoff, 0.1);
        Options::fill(o.gain_min, -5.0);
        Options::fill(o.gain_max, 5.0);
        Options::fill(o.gain_steps, std::uint64_t{10001});
    } else if (name == "fig8") {
        Options::fill(o.v_in, 10.0);
        Options::fill(o.eta_m, 0.9);
        Options::fill(o.eta_insertion, 0.95);
        Options::fill(o.eta_modulator, 0.95);
    } else {
        throw std::invalid_argument("unknown preset '" + *o.preset + "'");
    }
}

void apply_defaults(Options& o) {
    Options::fill(o.model, std::string{"both"});
    Options::fill(o.format, std::string{"csv"});
    Options::fill(o.out, std::string{});
    Options::fill(o.v_in, 10.0);
    Options::fill(o.eta_m, 1.0);
    Options::fill(o.eta_insertion, 1.0);
    Options::fill(o.eta_modulator, 1.0);
    Options::fill(o.gain, 0.0);
    Options::fill(o.gain_min, -5.0);
    Options::fill(o.gain_max, 5.0);
    Options::fill(o.gain_steps, std::uint64_t{10001});
    Options::fill(o.grid_min, 0.005);
    Options::fill(o.grid_max, 0.995);
    Options::fill(o.grid_points, std::uint64_t{200});
    Options::fill(o.samples, std::uint64_t{1000000});
}

struct ModelPoint {
    std::string name; // "bs" or "shg"
    TapOffSpec spec;
    double tapoff = 0.0; // tapped power fraction 1 - eta
};

// Resolves --model together with the single-point --tapoff/--xi selection.
std::vector<ModelPoint> resolve_points(const Options& o) {
    if (o.tapoff && o.xi) {
        throw std::invalid_argument("give exactly one of --tapoff and --xi");
    }
    if (!o.tapoff && !o.xi) {
        throw std::invalid_argument("single-point mode needs --tapoff or --xi");
    }
    const std::string& model = *o.model;
    if (model != "bs" && model != "shg" && model != "both") {
        throw std::invalid_argument("model must be bs, shg or both, got '" + model + "'");
    }

    std::vector<ModelPoint> points;
    if (o.xi) {
        if (model != "shg") {
            throw std::invalid_argument("--xi selects an SHG interaction strength; use --model shg");
        }
        const TapOffSpec spec = TapOffSpec::second_harmonic(*o.xi);
        points.push_back({"shg", spec, 1.0 - noiseeater::tapoff_ratio(spec)});
        return points;
    }
    const double x = *o.tapoff;
    if (!(x >= 0.0) || !(x < 1.0)) {
        throw std::invalid_argument("--tapoff is the tapped power fraction 1-eta, in [0, 1)");
    }
    const double eta = 1.0 - x;
    if (model == "bs" || model == "both") {
        points.push_back({"bs", TapOffSpec::beamsplitter(eta), x});
    }
    if (model == "shg" || model == "both") {
        points.push_back({"shg", TapOffSpec::second_harmonic(noiseeater::xi_from_tapoff(eta)), x});
    }
    return points;
}

SystemParams shared_params(const Options& o) {
    SystemParams p;
    p.v_in = *o.v_in;
    p.gain = *o.gain;
    p.eta_m = *o.eta_m;
    p.eta_s = *o.eta_insertion * *o.eta_modulator;
    return p;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot open output file '" + path + "'");
    }
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing output file '" + path + "'");
    }
}

void require_finite(const DataTable& table) {
    if (!table.all_finite()) {
        throw NumericalFailure("non-finite value in computed table");
    }
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw NumericalFailure(std::string("non-finite ") + what);
    }
    return v;
}

// ---------------------------------------------------------------------------
// metrics

void append_metrics_fields(std::vector<std::pair<std::string, double>>& fields,
                           const MetricsReport& r) {
    fields.emplace_back("v_s_out", r.v_s_out);
    fields.emplace_back("v_m_out", r.v_m_out);
    fields.emplace_back("cov_sm", r.cov_sm);
    fields.emplace_back("t_s", r.t_s);
    fields.emplace_back("t_m", r.t_m);
    fields.emplace_back("t_total", r.t_total);
    fields.emplace_back("v_cond", r.v_cond);
    fields.emplace_back("corr_sm", r.corr_sm);
    fields.emplace_back("v_s_out_db", r.v_s_out_db);
    fields.emplace_back("v_m_out_db", r.v_m_out_db);
}

int run_metrics(const Options& o) {
    const std::vector<ModelPoint> points = resolve_points(o);

    std::vector<std::pair<std::string, std::vector<std::pair<std::string, double>>>> rows;
    for (const ModelPoint& point : points) {
        SystemParams p = shared_params(o);
        p.tapoff = point.spec;
        const MetricsReport r = noiseeater::compute_metrics(p);
        std::vector<std::pair<std::string, double>> fields;
        fields.emplace_back("tapoff", point.tapoff);
        fields.emplace_back("gain", p.gain);
        append_metrics_fields(fields, r);
        for (const auto& [name, value] : fields) {
            checked(value, name.c_str());
        }
        rows.emplace_back(point.name, std::move(fields));
    }

    std::ostringstream text;
    if (*o.format == "csv") {
        text << "model";
        for (const auto& [name, value] : rows.front().second) {
            text << ',' << name;
        }
        text << '\n';
        for (const auto& [model, fields] : rows) {
            text << model;
            for (const auto& [name, value] : fields) {
                text << ',' << noiseeater::format_value(value);
            }
            text << '\n';
        }
    } else if (*o.format == "json") {
        nlohmann::ordered_json records = nlohmann::ordered_json::array();
        for (const auto& [model, fields] : rows) {
            nlohmann::ordered_json record;
            record["model"] = model;
            for (const auto& [name, value] : fields) {
                record[name] = value;
            }
            records.push_back(std::move(record));
        }
        text << records.dump(2) << '\n';
    } else {
        throw std::invalid_argument("unknown output format '" + *o.format + "'");
    }
    write_text(*o.out, text.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// figure

int run_figure(const Options& o) {
    FigureParams fp = noiseeater::figure_defaults(o.figure);
    if (o.v_in) fp.v_in = *o.v_in;
    if (o.eta_m) fp.eta_m = *o.eta_m;
    if (o.eta_insertion) fp.eta_insertion = *o.eta_insertion;
    if (o.eta_modulator) fp.eta_modulator = *o.eta_modulator;
    if (o.tapoff) fp.tapoff = *o.tapoff;
    if (o.grid_min) fp.grid_min = *o.grid_min;
    if (o.grid_max) fp.grid_max = *o.grid_max;
    if (o.grid_points) fp.grid_points = *o.grid_points;
    if (o.gain_min) fp.gain_min = *o.gain_min;
    if (o.gain_max) fp.gain_max = *o.gain_max;
    if (o.gain_steps) fp.gain_steps = *o.gain_steps;

    const DataTable table = noiseeater::make_figure_table(o.figure, fp);
    require_finite(table);

    std::ostringstream text;
    if (*o.format == "csv") {
        noiseeater::write_csv(text, table);
    } else if (*o.format == "json") {
        noiseeater::write_json(text, table);
    } else {
        throw std::invalid_argument("unknown output format '" + *o.format + "'");
    }
    write_text(*o.out, text.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

int run_sweep(const Options& o) {
    const std::vector<double> grid =
        noiseeater::uniform_grid(*o.grid_min, *o.grid_max, *o.grid_points);
    const noiseeater::SweepResult sweep = noiseeater::optimal_sweep(grid, shared_params(o));

    DataTable table;
    table.columns = {"tapoff"};
    for (const char* prefix : {"bs_", "shg_"}) {
        for (const char* name : {"g_star", "v_star", "v_star_db", "v_m_out", "v_m_out_db",
                                 "cov_sm", "t_s", "t_m", "t_total", "v_cond", "corr_sm"}) {
            table.columns.push_back(std::string(prefix) + name);
        }
    }
    table.columns.push_back("diff_db");

    for (std::size_t i = 0; i < sweep.tapoff_grid.size(); ++i) {
        std::vector<double> row;
        row.push_back(sweep.tapoff_grid[i]);
        for (const noiseeater::SweepRecord* rec : {&sweep.bs[i], &sweep.shg[i]}) {
            row.push_back(rec->g_star);
            row.push_back(rec->v_star);
            row.push_back(noiseeater::to_db(rec->v_star));
            row.push_back(rec->metrics.v_m_out);
            row.push_back(rec->metrics.v_m_out_db);
            row.push_back(rec->metrics.cov_sm);
            row.push_back(rec->metrics.t_s);
            row.push_back(rec->metrics.t_m);
            row.push_back(rec->metrics.t_total);
            row.push_back(rec->metrics.v_cond);
            row.push_back(rec->metrics.corr_sm);
        }
        row.push_back(sweep.diff_db[i]);
        table.rows.push_back(std::move(row));
    }
    require_finite(table);

    std::ostringstream text;
    if (*o.format == "csv") {
        noiseeater::write_csv(text, table);
    } else {
        noiseeater::write_json(text, table);
    }
    write_text(*o.out, text.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle

int run_oracle(const Options& o) {
    if (!o.seed) {
        throw std::invalid_argument("oracle needs an explicit --seed for reproducibility");
    }
    if (*o.samples < 100000) {
        throw std::invalid_argument("oracle needs at least 1e5 samples");
    }
    const std::vector<ModelPoint> points = resolve_points(o);

    std::vector<std::pair<std::string, noiseeater::mc::Comparison>> rows;
    for (const ModelPoint& point : points) {
        SystemParams p = shared_params(o);
        p.tapoff = point.spec;
        rows.emplace_back(point.name, noiseeater::mc::compare(p, *o.samples, *o.seed));
    }

    std::ostringstream text;
    if (*o.format == "csv") {
        text << "model,samples,seed,analytic_v_s,sampled_v_s,se_v_s,analytic_v_m,sampled_v_m,"
                "se_v_m,analytic_cov,sampled_cov,se_cov,z_v_s,z_v_m,z_cov,max_z,agrees\n";
        for (const auto& [model, c] : rows) {
            text << model << ',' << c.sampled.samples << ',' << *o.seed;
            text << ',' << noiseeater::format_value(c.analytic_v_s);
            text << ',' << noiseeater::format_value(c.sampled.v_s);
            text << ',' << noiseeater::format_value(c.sampled.se_v_s);
            text << ',' << noiseeater::format_value(c.analytic_v_m);
            text << ',' << noiseeater::format_value(c.sampled.v_m);
            text << ',' << noiseeater::format_value(c.sampled.se_v_m);
            text << ',' << noiseeater::format_value(c.analytic_cov);
            text << ',' << noiseeater::format_value(c.sampled.cov);
            text << ',' << noiseeater::format_value(c.sampled.se_cov);
            text << ',' << noiseeater::format_value(c.z_v_s);
            text << ',' << noiseeater::format_value(c.z_v_m);
            text << ',' << noiseeater::format_value(c.z_cov);
            text << ',' << noiseeater::format_value(c.max_z);
            text << ',' << (c.agrees ? 1 : 0) << '\n';
        }
    } else if (*o.format == "json") {
        nlohmann::ordered_json records = nlohmann::ordered_json::array();
        for (const auto& [model, c] : rows) {
            nlohmann::ordered_json record;
            record["model"] = model;
            record["samples"] = c.sampled.samples;
            record["seed"] = *o.seed;
            record["analytic"] = {{"v_s", c.analytic_v_s}, {"v_m", c.analytic_v_m},
                                  {"cov", c.analytic_cov}};
            record["sampled"] = {{"v_s", c.sampled.v_s}, {"v_m", c.sampled.v_m},
                                 {"cov", c.sampled.cov}};
            record["se"] = {{"v_s", c.sampled.se_v_s}, {"v_m", c.sampled.se_v_m},
                            {"cov", c.sampled.se_cov}};
            record["z"] = {{"v_s", c.z_v_s}, {"v_m", c.z_v_m}, {"cov", c.z_cov}};
            record["max_z"] = c.max_z;
            record["threshold"] = c.threshold;
            record["agrees"] = c.agrees;
            records.push_back(std::move(record));
        }
        text << records.dump(2) << '\n';
    } else {
        throw std::invalid_argument("unknown output format '" + *o.format + "'");
    }

    bool all_agree = true;
    for (const auto& [model, c] : rows) {
        if (!c.agrees) {
            all_agree = false;
        }
    }
    write_text(*o.out, text.str());
    if (!all_agree) {
        std::cerr << "warning: Monte-Carlo estimate disagrees with analytic moments beyond "
                  << rows.front().second.threshold << " standard errors\n";
    }
    return kExitOk;
}

void add_shared_options(CLI::App* sub, Options& o) {
    sub->add_option_function<std::string>(
        "--config", [&o](const std::string& v) { o.config_path = v; },
        "flat JSON config file; flags override file values");
    sub->add_option_function<std::string>(
        "--out,-o", [&o](const std::string& v) { o.out = v; }, "output path (default: stdout)");
    sub->add_option_function<std::string>(
        "--format,-f", [&o](const std::string& v) { o.format = v; }, "csv or json");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&o](std::uint64_t v) { o.seed = v; }, "Monte-Carlo seed");
    sub->add_option_function<std::string>(
        "--preset", [&o](const std::string& v) { o.preset = v; },
        "figure caption parameter set: fig4 .. fig8");
    sub->add_option_function<std::string>(
        "--model,-m", [&o](const std::string& v) { o.model = v; }, "bs, shg or both");
    sub->add_option_function<double>(
        "--v-in", [&o](double v) { o.v_in = v; }, "input signal variance, shot-noise units");
    sub->add_option_function<double>(
        "--eta-m", [&o](double v) { o.eta_m = v; }, "meter detection efficiency");
    sub->add_option_function<double>(
        "--eta-insertion", [&o](double v) { o.eta_insertion = v; },
        "tap-off stage insertion transmission");
    sub->add_option_function<double>(
        "--eta-modulator", [&o](double v) { o.eta_modulator = v; },
        "modulator transmission; eta_s = insertion * modulator");
    sub->add_option_function<double>(
        "--tapoff", [&o](double v) { o.tapoff = v; }, "tapped power fraction 1-eta");
    sub->add_option_function<double>(
        "--xi", [&o](double v) { o.xi = v; }, "SHG interaction strength (model shg)");
    sub->add_option_function<double>(
        "--gain", [&o](double v) { o.gain = v; }, "feedforward gain G");
    sub->add_option_function<double>(
        "--gain-min", [&o](double v) { o.gain_min = v; }, "scan range lower edge");
    sub->add_option_function<double>(
        "--gain-max", [&o](double v) { o.gain_max = v; }, "scan range upper edge");
    sub->add_option_function<std::uint64_t>(
        "--gain-steps", [&o](std::uint64_t v) { o.gain_steps = v; }, "scan grid size");
    sub->add_option_function<double>(
        "--grid-min", [&o](double v) { o.grid_min = v; }, "tap-off grid lower edge");
    sub->add_option_function<double>(
        "--grid-max", [&o](double v) { o.grid_max = v; }, "tap-off grid upper edge");
    sub->add_option_function<std::uint64_t>(
        "--grid-points", [&o](std::uint64_t v) { o.grid_points = v; }, "tap-off grid size");
    sub->add_option_function<std::uint64_t>(
        "--samples", [&o](std::uint64_t v) { o.samples = v; }, "Monte-Carlo sample count");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"feedforward intensity noise eater: QND metrics, gain optimization and "
                 "figure data for beamsplitter and second-harmonic tap-off stages"};
    app.require_subcommand(1);

    Options o;
    CLI::App* metrics = app.add_subcommand("metrics", "QND metric suite at one operating point");
    CLI::App* figure = app.add_subcommand("figure", "write figure-reproduction data (4..8)");
    CLI::App* sweep = app.add_subcommand("sweep", "optimal-gain sweep over the tap-off grid");
    CLI::App* oracle = app.add_subcommand("oracle", "Monte-Carlo check of the analytic moments");
    for (CLI::App* sub : {metrics, figure, sweep, oracle}) {
        add_shared_options(sub, o);
    }
    figure->add_option("n", o.figure, "figure number")->required()->check(CLI::Range(4, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    try {
        load_config_file(o);
        apply_preset(o);
        if (figure->parsed()) {
            // the figure number picks the caption defaults; only explicitly
            // given values override them
            Options::fill(o.format, std::string{"csv"});
            Options::fill(o.out, std::string{});
            return run_figure(o);
        }
        apply_defaults(o);
        if (metrics->parsed()) {
            return run_metrics(o);
        }
        if (sweep->parsed()) {
            return run_sweep(o);
        }
        return run_oracle(o);
    } catch (const NumericalFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericalFailure;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: bad config: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
}
