#pragma once

#include <string>
#include <vector>

namespace gridfc {

/// Permitted frequency deviation bands, expressed per-unit of rated frequency.
struct FrequencyLimits {
    double f_nom_hz = 50.0;
    double r_ss = 0.01;    ///< steady-state band
    double r_tr = 0.03;    ///< transient band
    bool robust = false;   ///< size reserves assuming excursions up to r_tr

    void validate() const;
};

/// Dispatchable thermal unit parameters.
struct GeneratorSpec {
    std::string name;
    double p_min_mw = 0.0;
    double p_max_mw = 0.0;
    double droop = 0.1;         ///< governor droop, per-unit
    double inertia_s = 0.0;     ///< inertia constant H
    double frr_rate_mw_s = 0.0; ///< restoration-reserve ramp rate
    int min_up_h = 1;
    int min_down_h = 1;
    double fuel_a = 0.0;        ///< fuel volume per hour per MW
    double fuel_b = 0.0;        ///< fuel volume per hour while committed

    void validate() const;
};

struct PlantConfig {
    std::vector<GeneratorSpec> generators;
    double p_base_mw = 0.0; ///< droop normalization base
    double s_base_mw = 0.0; ///< per-unit power base; 0 means "use p_base_mw"
    double d_pv = 1.0;      ///< PV derating factor
    FrequencyLimits freq;

    double power_base() const { return s_base_mw > 0.0 ? s_base_mw : p_base_mw; }
    void validate() const;
};

struct EconomicParams {
    double c_pv_usd_kw = 0.0;
    double c_bat_usd_kw = 0.0;
    double c_fuel_usd = 0.0;     ///< per volume of fuel
    double c_co2_usd_t = 0.0;
    double co2_t_per_vol = 0.0;  ///< emission factor (calibration input)
    double discount_rate = 0.0;
    int lifetime_y = 1;
    double fuel_a_scale = 1.0;   ///< unit-scale factor applied to fuel_a

    void validate() const;
};

/// value / base. Throws std::invalid_argument when base <= 0.
double to_per_unit(double value, double base);
/// Inverse of to_per_unit.
double from_per_unit(double value, double base);

/// Per-unit damping contributed by one unit: p_max / (droop * p_base).
double damping_of(const GeneratorSpec& gen, const PlantConfig& plant);

/// Cap on the unit's containment-reserve assignment, in MW.
double fcr_capacity(const GeneratorSpec& gen, const PlantConfig& plant);

/// Linear fuel curve, volume per hour at output p_mw. Valid while committed.
double fuel_rate(const GeneratorSpec& gen, double p_mw);

/// Present-value factor applied to recurring yearly cost over the project lifetime.
double annuity_factor(const EconomicParams& econ);

} // namespace gridfc
