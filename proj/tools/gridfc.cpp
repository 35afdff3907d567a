#include "gridfc/config.hpp"
#include "gridfc/study.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

namespace {

std::string output_dir(const std::string& flag_value, const std::string& leaf) {
    if (!flag_value.empty()) return flag_value;
    if (const char* root = std::getenv("GRIDFC_OUT"); root && *root)
        return (std::filesystem::path(root) / leaf).string();
    return (std::filesystem::path("gridfc_out") / leaf).string();
}

gridfc::AppConfig load_or_default(const std::string& path) {
    if (path.empty()) return gridfc::default_config();
    return gridfc::load_config(path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solar PV / battery sizing for isolated grids under frequency-stability "
                 "constraints"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    app.add_option("-c,--config", config_path, "JSON config file (defaults to the built-in case study)")
        ->capture_default_str();

    // ramps
    auto* ramps = app.add_subcommand("ramps", "Extract worst-case irradiance ramp hulls");
    std::string irr_path;
    double min_drop = -1.0;
    int smooth_window = 0;
    ramps->add_option("irradiance", irr_path, "High-resolution irradiance CSV (timestamp,kW/m2)")
        ->required();
    ramps->add_option("--min-drop", min_drop, "Minimum drop to keep (kW/m2)");
    ramps->add_option("--smooth-window", smooth_window, "Moving-average window (samples)");
    ramps->add_option("-o,--out", out_dir, "Output directory");

    // size
    auto* size = app.add_subcommand("size", "Build and solve the sizing problem per scenario mode");
    std::string load_path, irr_hourly_path, hull_path;
    std::vector<std::string> mode_names{"baseline", "no_fc", "static_fc", "dynamic_fc"};
    double gap = 0.01;
    int horizon = 0;
    bool robust = false;
    long max_nodes = 100000;
    double max_time = 0.0;
    size->add_option("--load", load_path, "Hourly load CSV (index,MW)")->required();
    size->add_option("--irradiance", irr_hourly_path, "Hourly mean irradiance CSV (index,kW/m2)")
        ->required();
    size->add_option("--hull", hull_path, "Hull CSV from 'ramps' (needed for static_fc/dynamic_fc)");
    size->add_option("--mode", mode_names, "Scenario modes to run")->delimiter(',');
    size->add_option("--gap", gap, "MIP gap tolerance")->capture_default_str();
    size->add_option("--horizon", horizon, "Number of hourly steps (0 = full series)");
    size->add_flag("--robust", robust, "Use the robust reserve sizing variant");
    size->add_option("--max-nodes", max_nodes, "Branch-and-bound node cap");
    size->add_option("--max-time", max_time, "Solver wall-clock cap per mode (s)");
    size->add_option("-o,--out", out_dir, "Output directory");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Validate a solution with worst-case simulations");
    std::string solution_path, sim_hull_path;
    double sim_dt = 0.0;
    bool sim_robust = false;
    simulate->add_option("solution", solution_path, "solution.json from 'size'")->required();
    simulate->add_option("--hull", sim_hull_path, "Hull CSV from 'ramps'");
    simulate->add_option("--dt", sim_dt, "Integration step (s)");
    simulate->add_flag("--robust", sim_robust, "Use the robust reserve sizing variant");
    simulate->add_option("-o,--out", out_dir, "Output directory");

    // report
    auto* report = app.add_subcommand("report", "Recompute indicators for a stored solution");
    std::string rep_solution, rep_load, rep_irr, rep_hull;
    report->add_option("solution", rep_solution, "solution.json from 'size'")->required();
    report->add_option("--load", rep_load, "Hourly load CSV")->required();
    report->add_option("--irradiance", rep_irr, "Hourly mean irradiance CSV")->required();
    report->add_option("--hull", rep_hull, "Hull CSV (needed for static_fc/dynamic_fc solutions)");
    report->add_option("-o,--out", out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        gridfc::AppConfig cfg = load_or_default(config_path);
        if (ramps->parsed()) {
            if (min_drop >= 0.0) cfg.ramps.min_drop_kw_m2 = min_drop;
            if (smooth_window > 0) cfg.ramps.smooth_window = smooth_window;
            return gridfc::study::run_ramps(cfg, irr_path, output_dir(out_dir, "ramps"));
        }
        if (size->parsed()) {
            gridfc::study::SizeOptions opts;
            for (const auto& name : mode_names) opts.modes.push_back(gridfc::mode_from_name(name));
            opts.gap = gap;
            opts.horizon = horizon;
            opts.robust = robust;
            opts.max_nodes = max_nodes;
            opts.max_time_s = max_time;
            return gridfc::study::run_size(cfg, load_path, irr_hourly_path, hull_path, opts,
                                           output_dir(out_dir, "size"));
        }
        if (simulate->parsed()) {
            gridfc::study::SimulateOptions opts;
            opts.dt_s = sim_dt;
            opts.robust = sim_robust;
            return gridfc::study::run_simulate(cfg, solution_path, sim_hull_path, opts,
                                               output_dir(out_dir, "simulate"));
        }
        if (report->parsed()) {
            return gridfc::study::run_report(cfg, rep_solution, rep_load, rep_irr, rep_hull,
                                             output_dir(out_dir, "report"));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
