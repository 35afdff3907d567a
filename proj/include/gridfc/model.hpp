#pragma once

#include "gridfc/domain.hpp"
#include "gridfc/lp.hpp"
#include "gridfc/ramps.hpp"

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

namespace gridfc {

enum class ScenarioMode { Baseline, NoFC, StaticFC, DynamicFC };

std::string mode_name(ScenarioMode m);
ScenarioMode mode_from_name(const std::string& name);

/// Hourly inputs for the sizing problem.
struct SizingInputs {
    Eigen::VectorXd load_mw;
    Eigen::VectorXd irradiance_kw_m2; ///< hourly mean
    std::vector<RampHull> hulls;      ///< one per step; may be empty for Baseline/NoFC
    PlantConfig plant;
    EconomicParams econ;
    bool annualize = true; ///< scale fuel terms to a full year when horizon < 8760

    int horizon() const { return static_cast<int>(load_mw.size()); }
    void validate(ScenarioMode mode) const;
};

/// Variable and constraint lookup for a built sizing problem; -1 marks symbols
/// a scenario mode does not carry.
struct SizingIndex {
    int horizon = 0;
    int n_units = 0;

    std::vector<std::vector<int>> p, rho, u, v, p_fcr; ///< [unit][hour]
    std::vector<int> p_inj, p_sud, p_pvb, p_bat_fcr;   ///< [hour]
    int a_pv = -1, p_pv_inst = -1, p_bat_inst = -1;

    std::vector<int> r_balance, r_pv_prod, r_pv_inst;                   ///< [hour]
    std::vector<std::vector<int>> r_fcr_cap, r_gen_max, r_gen_min;      ///< [unit][hour]
    std::vector<std::vector<int>> r_commit, r_excl, r_min_up, r_min_dn; ///< [unit][hour]
    std::vector<std::vector<int>> r_sud_max, r_sud_min;                 ///< [unit][hour]
    std::vector<std::vector<int>> r_pvb_ramp, r_bat_fcr;                ///< [hour][ramp]
    std::vector<int> r_pvb_inj, r_frr_up, r_frr_dn, r_bat_inst;         ///< [hour]
};

struct SizingProblem {
    ScenarioMode mode = ScenarioMode::Baseline;
    lp::Problem lp;
    SizingIndex idx;
};

/// Builds the frequency-constrained sizing MILP for one scenario mode.
/// Deterministic: identical inputs produce identical problems.
SizingProblem build_problem(ScenarioMode mode, const SizingInputs& in);

/// Battery power needed to cover the reserve deficit of one ramp event:
/// max(0, p_sud - total_gt_fcr + dp_pv - total_frr_ramp), all MW.
double battery_fcr_requirement(double p_sud_mw, double total_gt_fcr_mw, double dp_pv_mw,
                               double total_frr_ramp_mw);

/// A ramp event expressed as a power excursion.
struct PowerRampEvent {
    double duration_s = 0.0;
    double drop_mw = 0.0;
};

/// True when restoration reserve ramped over the event duration plus containment
/// reserve covers the power excursion.
bool short_term_feasibility(std::span<const double> frr_rates_mw_s,
                            std::span<const double> fcr_mw, const PowerRampEvent& ramp);

} // namespace gridfc
