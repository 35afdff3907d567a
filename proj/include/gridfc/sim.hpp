#pragma once

#include "gridfc/domain.hpp"

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gridfc {

/// Scripted disturbance: an instantaneous load step or a constant-rate power ramp.
struct DisturbanceEvent {
    enum class Kind { LoadStep, PowerRamp };
    Kind kind = Kind::LoadStep;
    double t_s = 0.0;
    double duration_s = 0.0;   ///< ramps only
    double magnitude_mw = 0.0; ///< step size or total ramp drop

    static DisturbanceEvent load_step(double t_s, double magnitude_mw);
    static DisturbanceEvent power_ramp(double t0_s, double duration_s, double total_drop_mw);
    double end_time_s() const {
        return kind == Kind::PowerRamp ? t_s + duration_s : t_s;
    }
};

enum class GovernorSplit { Combined, FcrOnly, FrrOnly };

/// One committed unit: operating point plus its containment-reserve assignment.
struct CommittedUnit {
    GeneratorSpec gen;
    double p0_mw = 0.0;
    double fcr_cap_mw = 0.0;
};

struct SimConfig {
    std::vector<CommittedUnit> committed;
    int inertia_units = 0;        ///< units contributing inertia; 0 = all committed
    double battery_power_mw = 0.0;
    double battery_droop = 0.0;   ///< per-unit; 0 selects freq.r_ss (full output at band edge)
    FrequencyLimits freq;
    double s_base_mw = 0.0;
    double dt_s = 0.01;
    double t_end_s = 120.0;
    std::vector<DisturbanceEvent> events;
    double load_damping = 0.0;    ///< natural load damping, per-unit
    GovernorSplit split = GovernorSplit::Combined;
    double frr_gain_mw_pu = 0.0;  ///< restoration gain per unit; 0 selects 100 * p_max
    bool inertia_drops_after_step = false; ///< drop one unit's inertia at the first load step

    void validate() const;
};

/// Simulated frequency deviation and per-device power trajectories.
struct FrequencyTrace {
    Eigen::VectorXd t_s;
    Eigen::VectorXd df_pu;
    Eigen::MatrixXd gen_mw;     ///< rows: steps, cols: committed units (absolute output)
    Eigen::VectorXd battery_mw;
    Eigen::VectorXd unserved_mw;
    Eigen::VectorXd balance_integral_pu; ///< running integral of (p_g - p_l - D*df)
    double f_nom_hz = 50.0;
    double s_base_mw = 0.0;
    double inertia_pu_s = 0.0;
    double last_event_end_s = 0.0;
    bool aborted = false;
    std::string abort_reason;

    Eigen::VectorXd df_hz() const { return df_pu * f_nom_hz; }
};

/// Fixed-step 4th-order integration of the normalized swing equation with droop
/// containment, rate-limited restoration and battery droop saturation.
FrequencyTrace simulate(const SimConfig& cfg);

struct LimitVerdict {
    bool pass = false;
    double nadir_hz = 0.0;
    double max_abs_df_pu = 0.0;
    double settling_time_s = 0.0; ///< first time after which |df| stays within r_ss
    std::string detail;
};

/// Pass iff |df| <= r_tr throughout and |df| <= r_ss from settling until the end,
/// with settling no later than the last event end plus the allowed window.
LimitVerdict verify_limits(const FrequencyTrace& trace, const FrequencyLimits& limits,
                           double settle_window_s = 30.0);

/// Minimum per-unit damping that keeps a continuous imbalance p_b inside the
/// steady-state band (robust variant divides by 1 - r_tr).
double min_damping(double p_b_mw, const FrequencyLimits& limits, double s_base_mw);

} // namespace gridfc
