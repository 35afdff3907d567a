#pragma once

#include "gridfc/model.hpp"
#include "gridfc/solve.hpp"

#include <span>
#include <string>
#include <vector>

namespace gridfc {

/// Techno-economic indicators for one solved scenario.
struct StudyReport {
    ScenarioMode mode = ScenarioMode::Baseline;
    std::string status;
    double p_pv_mw = 0.0;
    double p_bat_mw = 0.0;
    double capex_musd = 0.0;
    double fuel_vol_per_y = 0.0;
    double co2_t_per_y = 0.0;
    double lcoe_usd_mwh = 0.0;
    double total_cost_musd = 0.0;
    double gap = 0.0;
    std::string feasibility = "n/a";
    std::string sim_verdict = "n/a";
    std::string warning;
};

/// Derives the report from a solved sizing problem. Throws std::invalid_argument
/// when the solution carries no usable assignment.
StudyReport compute_indicators(const SizingProblem& sp, const lp::Solution& sol,
                               const SizingInputs& in);

/// One JSON object per scenario report.
std::string report_json(std::span<const StudyReport> reports);

/// Indicator rows, one column per scenario.
std::string report_csv(std::span<const StudyReport> reports);

} // namespace gridfc
