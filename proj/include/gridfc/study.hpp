#pragma once

#include "gridfc/config.hpp"
#include "gridfc/model.hpp"
#include "gridfc/report.hpp"
#include "gridfc/sim.hpp"
#include "gridfc/solve.hpp"

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

namespace gridfc::study {

/// Per-unit values at one hour of a stored solution.
struct UnitState {
    double p_mw = 0.0, rho = 0.0, u = 0.0, v = 0.0, p_fcr_mw = 0.0;
};

struct HourState {
    double load_mw = 0.0, irradiance_kw_m2 = 0.0;
    double p_inj_mw = 0.0, p_sud_mw = 0.0, p_pvb_mw = 0.0, p_bat_fcr_mw = 0.0;
    std::vector<UnitState> units;
};

/// Self-describing solution dump, written by `size` and read by `simulate`/`report`.
struct SolutionDump {
    ScenarioMode mode = ScenarioMode::Baseline;
    std::string status;
    double objective = 0.0, bound = 0.0, gap = 0.0;
    long nodes = 0, lp_iterations = 0;
    double a_pv_m2 = 0.0, p_pv_inst_mw = 0.0, p_bat_inst_mw = 0.0;
    std::vector<HourState> schedule;
    std::map<std::string, double> variables;
};

std::string solution_json(const SizingProblem& sp, const lp::Solution& sol,
                          const SizingInputs& in);
SolutionDump parse_solution_json(const std::string& text);

/// Assigns the hulls read from a hull CSV to study steps. Per-hour hulls are
/// pooled by hour-of-day; a global hull applies to every step with sunlight.
std::vector<RampHull> map_hulls_to_steps(const std::vector<RampHull>& file_hulls,
                                         const Eigen::VectorXd& irradiance_kw_m2);

/// Hour whose recomputed battery requirement is largest (falls back to peak
/// injection, then peak unit dispatch). The requirement is re-derived from the
/// schedule because the stored per-hour values may carry slack away from the
/// binding row. Ties resolve to the earliest hour.
int binding_hour(const SolutionDump& dump, const std::vector<RampHull>& step_hulls,
                 const PlantConfig& plant);

int run_ramps(const AppConfig& cfg, const std::string& irradiance_csv,
              const std::string& out_dir);

struct SizeOptions {
    std::vector<ScenarioMode> modes;
    double gap = 0.01;
    int horizon = 0; ///< 0 = full series
    bool robust = false;
    long max_nodes = 100000;
    double max_time_s = 0.0;
};

int run_size(const AppConfig& cfg, const std::string& load_csv, const std::string& irradiance_csv,
             const std::string& hull_csv, const SizeOptions& opts, const std::string& out_dir);

struct SimulateOptions {
    double dt_s = 0.0; ///< 0 keeps the config value
    bool robust = false;
};

int run_simulate(const AppConfig& cfg, const std::string& solution_json_path,
                 const std::string& hull_csv, const SimulateOptions& opts,
                 const std::string& out_dir);

int run_report(const AppConfig& cfg, const std::string& solution_json_path,
               const std::string& load_csv, const std::string& irradiance_csv,
               const std::string& hull_csv, const std::string& out_dir);

} // namespace gridfc::study
