#include "gridfc/config.hpp"

#include "gridfc/csv.hpp"

#include <json.hpp>

#include <stdexcept>

namespace gridfc {

using nlohmann::ordered_json;

AppConfig default_config() {
    AppConfig cfg;
    cfg.plant.p_base_mw = 45.0;
    cfg.plant.s_base_mw = 45.0;
    cfg.plant.d_pv = 0.8;
    cfg.plant.freq = {50.0, 0.01, 0.03, false};
    GeneratorSpec gt;
    gt.p_min_mw = 0.0;
    gt.p_max_mw = 45.0;
    gt.droop = 0.10;
    gt.inertia_s = 5.51;
    gt.frr_rate_mw_s = 0.208;
    gt.min_up_h = 6;
    gt.min_down_h = 6;
    gt.fuel_a = 13782.0;
    gt.fuel_b = 5523.0;
    for (int i = 0; i < 4; ++i) {
        gt.name = "gt" + std::to_string(i + 1);
        cfg.plant.generators.push_back(gt);
    }
    cfg.econ.c_pv_usd_kw = 400.0;
    cfg.econ.c_bat_usd_kw = 250.0;
    cfg.econ.c_fuel_usd = 1.01;
    cfg.econ.c_co2_usd_t = 120.0;
    cfg.econ.co2_t_per_vol = 0.002;
    cfg.econ.discount_rate = 0.03;
    cfg.econ.lifetime_y = 20;
    cfg.econ.fuel_a_scale = 1.0;
    return cfg;
}

namespace {

template <typename T>
void get_to_if(const ordered_json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

GeneratorSpec parse_generator(const ordered_json& j, const GeneratorSpec& defaults) {
    GeneratorSpec g = defaults;
    get_to_if(j, "name", g.name);
    get_to_if(j, "p_min_mw", g.p_min_mw);
    get_to_if(j, "p_max_mw", g.p_max_mw);
    get_to_if(j, "droop", g.droop);
    get_to_if(j, "inertia_s", g.inertia_s);
    get_to_if(j, "frr_rate_mw_per_s", g.frr_rate_mw_s);
    get_to_if(j, "min_up_h", g.min_up_h);
    get_to_if(j, "min_down_h", g.min_down_h);
    get_to_if(j, "fuel_a", g.fuel_a);
    get_to_if(j, "fuel_b", g.fuel_b);
    return g;
}

} // namespace

AppConfig load_config(const std::string& path) {
    AppConfig cfg = default_config();
    ordered_json j;
    try {
        j = ordered_json::parse(io::read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }

    if (j.contains("frequency")) {
        const auto& f = j["frequency"];
        get_to_if(f, "f_nom_hz", cfg.plant.freq.f_nom_hz);
        get_to_if(f, "r_ss", cfg.plant.freq.r_ss);
        get_to_if(f, "r_tr", cfg.plant.freq.r_tr);
        get_to_if(f, "robust", cfg.plant.freq.robust);
    }
    if (j.contains("plant")) {
        const auto& p = j["plant"];
        get_to_if(p, "p_base_mw", cfg.plant.p_base_mw);
        get_to_if(p, "s_base_mw", cfg.plant.s_base_mw);
        get_to_if(p, "d_pv", cfg.plant.d_pv);
    }
    if (j.contains("generators")) {
        const GeneratorSpec defaults = cfg.plant.generators.front();
        cfg.plant.generators.clear();
        int next = 1;
        for (const auto& gj : j["generators"]) {
            GeneratorSpec g = parse_generator(gj, defaults);
            int count = 1;
            if (gj.contains("count")) gj.at("count").get_to(count);
            for (int c = 0; c < count; ++c) {
                GeneratorSpec gc = g;
                if (gc.name.empty() || count > 1) gc.name = "gt" + std::to_string(next);
                cfg.plant.generators.push_back(gc);
                ++next;
            }
        }
        if (cfg.plant.generators.empty())
            throw std::runtime_error(path + ": 'generators' must not be empty");
    }
    if (j.contains("economics")) {
        const auto& e = j["economics"];
        get_to_if(e, "c_pv_usd_per_kw", cfg.econ.c_pv_usd_kw);
        get_to_if(e, "c_bat_usd_per_kw", cfg.econ.c_bat_usd_kw);
        get_to_if(e, "c_fuel_usd_per_vol", cfg.econ.c_fuel_usd);
        get_to_if(e, "c_co2_usd_per_t", cfg.econ.c_co2_usd_t);
        get_to_if(e, "co2_t_per_vol", cfg.econ.co2_t_per_vol);
        get_to_if(e, "discount_rate", cfg.econ.discount_rate);
        get_to_if(e, "lifetime_y", cfg.econ.lifetime_y);
        get_to_if(e, "fuel_a_scale", cfg.econ.fuel_a_scale);
    }
    if (j.contains("ramps")) {
        const auto& r = j["ramps"];
        get_to_if(r, "min_drop_kw_m2", cfg.ramps.min_drop_kw_m2);
        get_to_if(r, "smooth_window", cfg.ramps.smooth_window);
    }
    if (j.contains("simulation")) {
        const auto& s = j["simulation"];
        get_to_if(s, "dt_s", cfg.sim.dt_s);
        get_to_if(s, "t_end_s", cfg.sim.t_end_s);
        get_to_if(s, "battery_droop", cfg.sim.battery_droop);
        get_to_if(s, "settle_window_s", cfg.sim.settle_window_s);
        get_to_if(s, "trip_time_s", cfg.sim.trip_time_s);
        get_to_if(s, "frr_gain_mw_pu", cfg.sim.frr_gain_mw_pu);
    }
    if (j.contains("sizing")) get_to_if(j["sizing"], "annualize", cfg.annualize);

    cfg.plant.validate();
    cfg.econ.validate();
    return cfg;
}

std::string config_json(const AppConfig& cfg) {
    ordered_json j;
    j["frequency"] = {{"f_nom_hz", cfg.plant.freq.f_nom_hz},
                      {"r_ss", cfg.plant.freq.r_ss},
                      {"r_tr", cfg.plant.freq.r_tr},
                      {"robust", cfg.plant.freq.robust}};
    j["plant"] = {{"p_base_mw", cfg.plant.p_base_mw},
                  {"s_base_mw", cfg.plant.s_base_mw},
                  {"d_pv", cfg.plant.d_pv}};
    j["generators"] = ordered_json::array();
    for (const auto& g : cfg.plant.generators)
        j["generators"].push_back({{"name", g.name},
                                   {"p_min_mw", g.p_min_mw},
                                   {"p_max_mw", g.p_max_mw},
                                   {"droop", g.droop},
                                   {"inertia_s", g.inertia_s},
                                   {"frr_rate_mw_per_s", g.frr_rate_mw_s},
                                   {"min_up_h", g.min_up_h},
                                   {"min_down_h", g.min_down_h},
                                   {"fuel_a", g.fuel_a},
                                   {"fuel_b", g.fuel_b}});
    j["economics"] = {{"c_pv_usd_per_kw", cfg.econ.c_pv_usd_kw},
                      {"c_bat_usd_per_kw", cfg.econ.c_bat_usd_kw},
                      {"c_fuel_usd_per_vol", cfg.econ.c_fuel_usd},
                      {"c_co2_usd_per_t", cfg.econ.c_co2_usd_t},
                      {"co2_t_per_vol", cfg.econ.co2_t_per_vol},
                      {"discount_rate", cfg.econ.discount_rate},
                      {"lifetime_y", cfg.econ.lifetime_y},
                      {"fuel_a_scale", cfg.econ.fuel_a_scale}};
    j["ramps"] = {{"min_drop_kw_m2", cfg.ramps.min_drop_kw_m2},
                  {"smooth_window", cfg.ramps.smooth_window}};
    j["simulation"] = {{"dt_s", cfg.sim.dt_s},
                       {"t_end_s", cfg.sim.t_end_s},
                       {"battery_droop", cfg.sim.battery_droop},
                       {"settle_window_s", cfg.sim.settle_window_s},
                       {"trip_time_s", cfg.sim.trip_time_s},
                       {"frr_gain_mw_pu", cfg.sim.frr_gain_mw_pu}};
    j["sizing"] = {{"annualize", cfg.annualize}};
    return j.dump(2) + "\n";
}

} // namespace gridfc
