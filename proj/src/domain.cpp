#include "gridfc/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace gridfc {

void FrequencyLimits::validate() const {
    if (f_nom_hz <= 0.0) throw std::invalid_argument("rated frequency must be positive");
    if (!(r_ss > 0.0 && r_ss <= r_tr && r_tr < 1.0))
        throw std::invalid_argument("frequency bands must satisfy 0 < r_ss <= r_tr < 1");
}

void GeneratorSpec::validate() const {
    if (p_min_mw < 0.0 || p_min_mw >= p_max_mw)
        throw std::invalid_argument("generator '" + name + "': need 0 <= p_min < p_max");
    if (droop <= 0.0) throw std::invalid_argument("generator '" + name + "': droop must be positive");
    if (frr_rate_mw_s < 0.0) throw std::invalid_argument("generator '" + name + "': negative FRR ramp rate");
    if (min_up_h < 1 || min_down_h < 1)
        throw std::invalid_argument("generator '" + name + "': min up/down times must be >= 1 h");
}

void PlantConfig::validate() const {
    if (generators.empty()) throw std::invalid_argument("plant has no generators");
    if (p_base_mw <= 0.0) throw std::invalid_argument("p_base must be positive");
    if (!(d_pv > 0.0 && d_pv <= 1.0)) throw std::invalid_argument("d_pv must be in (0, 1]");
    freq.validate();
    for (const auto& g : generators) g.validate();
}

void EconomicParams::validate() const {
    if (c_pv_usd_kw < 0.0 || c_bat_usd_kw < 0.0 || c_fuel_usd < 0.0 || c_co2_usd_t < 0.0 ||
        co2_t_per_vol < 0.0)
        throw std::invalid_argument("costs must be non-negative");
    if (discount_rate < 0.0 || discount_rate >= 1.0)
        throw std::invalid_argument("discount rate must be in [0, 1)");
    if (lifetime_y < 1) throw std::invalid_argument("project lifetime must be >= 1 year");
}

double to_per_unit(double value, double base) {
    if (base <= 0.0) throw std::invalid_argument("per-unit base must be positive");
    return value / base;
}

double from_per_unit(double value, double base) {
    if (base <= 0.0) throw std::invalid_argument("per-unit base must be positive");
    return value * base;
}

double damping_of(const GeneratorSpec& gen, const PlantConfig& plant) {
    if (gen.droop <= 0.0) throw std::invalid_argument("droop must be positive");
    if (plant.p_base_mw <= 0.0) throw std::invalid_argument("p_base must be positive");
    return gen.p_max_mw / (gen.droop * plant.p_base_mw);
}

double fcr_capacity(const GeneratorSpec& gen, const PlantConfig& plant) {
    const auto& f = plant.freq;
    double cap = damping_of(gen, plant) * f.r_ss * plant.power_base();
    if (f.robust) cap *= 1.0 - f.r_tr;
    return cap;
}

double fuel_rate(const GeneratorSpec& gen, double p_mw) {
    if (p_mw < 0.0 || p_mw > gen.p_max_mw)
        throw std::domain_error("fuel_rate: output outside [0, p_max]");
    return gen.fuel_a * p_mw + gen.fuel_b;
}

double annuity_factor(const EconomicParams& econ) {
    double sum = 0.0;
    for (int y = 0; y <= econ.lifetime_y; ++y) sum += std::pow(1.0 + econ.discount_rate, -y);
    return sum;
}

} // namespace gridfc
