#include "gridfc/report.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace gridfc {

StudyReport compute_indicators(const SizingProblem& sp, const lp::Solution& sol,
                               const SizingInputs& in) {
    if (sol.status != lp::SolveStatus::Optimal &&
        sol.status != lp::SolveStatus::FeasibleWithinGap)
        throw std::invalid_argument("report refused: solution status is " +
                                    lp::status_text(sol.status));
    if (!sol.has_assignment()) throw std::invalid_argument("report refused: empty assignment");

    const SizingIndex& ix = sp.idx;
    const int T = ix.horizon;
    const auto& gens = in.plant.generators;

    StudyReport r;
    r.mode = sp.mode;
    r.status = lp::status_text(sol.status);
    r.gap = sol.gap;
    r.p_pv_mw = ix.p_pv_inst >= 0 ? sol.x[ix.p_pv_inst] : 0.0;
    r.p_bat_mw = ix.p_bat_inst >= 0 ? sol.x[ix.p_bat_inst] : 0.0;
    r.capex_musd = (r.p_pv_mw * in.econ.c_pv_usd_kw + r.p_bat_mw * in.econ.c_bat_usd_kw) * 1e3 / 1e6;

    const double year_scale = in.annualize && T < 8760 ? 8760.0 / T : 1.0;
    double fuel_vol = 0.0;
    for (int h = 0; h < T; ++h)
        for (int m = 0; m < ix.n_units; ++m)
            fuel_vol += in.econ.fuel_a_scale * gens[static_cast<std::size_t>(m)].fuel_a *
                            sol.x[ix.p[static_cast<std::size_t>(m)][static_cast<std::size_t>(h)]] +
                        gens[static_cast<std::size_t>(m)].fuel_b *
                            sol.x[ix.rho[static_cast<std::size_t>(m)][static_cast<std::size_t>(h)]];
    r.fuel_vol_per_y = fuel_vol * year_scale;
    r.co2_t_per_y = r.fuel_vol_per_y * in.econ.co2_t_per_vol;

    const double annuity = annuity_factor(in.econ);
    const double yearly_opex =
        r.fuel_vol_per_y * in.econ.c_fuel_usd + r.co2_t_per_y * in.econ.c_co2_usd_t;
    const double total_usd = r.capex_musd * 1e6 + annuity * yearly_opex;
    r.total_cost_musd = total_usd / 1e6;

    const double energy_mwh_per_y = in.load_mw.sum() * year_scale; // hourly steps
    r.lcoe_usd_mwh = total_usd / (annuity * energy_mwh_per_y);

    if (sp.mode == ScenarioMode::NoFC)
        r.warning = "reserve constraints omitted: solution ignores frequency stability";
    return r;
}

namespace {

nlohmann::ordered_json report_object(const StudyReport& r) {
    nlohmann::ordered_json j;
    j["mode"] = mode_name(r.mode);
    j["status"] = r.status;
    j["p_pv_inst_mw"] = r.p_pv_mw;
    j["p_bat_inst_mw"] = r.p_bat_mw;
    j["capex_musd"] = r.capex_musd;
    j["fuel_vol_per_y"] = r.fuel_vol_per_y;
    j["co2_t_per_y"] = r.co2_t_per_y;
    j["lcoe_usd_per_mwh"] = r.lcoe_usd_mwh;
    j["total_cost_musd"] = r.total_cost_musd;
    j["solver_gap"] = r.gap;
    j["feasibility"] = r.feasibility;
    j["sim_verdict"] = r.sim_verdict;
    if (!r.warning.empty()) j["warning"] = r.warning;
    return j;
}

} // namespace

std::string report_json(std::span<const StudyReport> reports) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : reports) j.push_back(report_object(r));
    return j.dump(2) + "\n";
}

std::string report_csv(std::span<const StudyReport> reports) {
    auto row = [&](const std::string& label, auto get) {
        std::string line = label;
        for (const auto& r : reports) line += "," + get(r);
        return line + "\n";
    };
    auto num = [](double v) { return lp::format_number(v); };
    std::string out = row("indicator", [](const StudyReport& r) { return mode_name(r.mode); });
    out += row("p_pv_inst_mw", [&](const StudyReport& r) { return num(r.p_pv_mw); });
    out += row("p_bat_inst_mw", [&](const StudyReport& r) { return num(r.p_bat_mw); });
    out += row("capex_musd", [&](const StudyReport& r) { return num(r.capex_musd); });
    out += row("co2_t_per_y", [&](const StudyReport& r) { return num(r.co2_t_per_y); });
    out += row("lcoe_usd_per_mwh", [&](const StudyReport& r) { return num(r.lcoe_usd_mwh); });
    out += row("total_cost_musd", [&](const StudyReport& r) { return num(r.total_cost_musd); });
    out += row("status", [](const StudyReport& r) { return r.status; });
    return out;
}

} // namespace gridfc
