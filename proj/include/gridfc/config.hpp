#pragma once

#include "gridfc/domain.hpp"

#include <string>

namespace gridfc {

struct RampParams {
    double min_drop_kw_m2 = 0.02;
    int smooth_window = 5;
};

struct SimParams {
    double dt_s = 0.01;
    double t_end_s = 120.0;
    double battery_droop = 0.0; ///< 0 selects r_ss
    double settle_window_s = 30.0;
    double trip_time_s = 10.0;
    double frr_gain_mw_pu = 0.0; ///< 0 selects the simulator default
};

/// Everything a study needs besides the time series.
struct AppConfig {
    PlantConfig plant;
    EconomicParams econ;
    RampParams ramps;
    SimParams sim;
    bool annualize = true;
};

/// The bundled case-study parameter set (four 45 MW turbines, 50 Hz island).
AppConfig default_config();

/// Reads a JSON config; missing keys fall back to default_config() values.
AppConfig load_config(const std::string& path);

/// JSON document for an AppConfig, schema-stable.
std::string config_json(const AppConfig& cfg);

} // namespace gridfc
