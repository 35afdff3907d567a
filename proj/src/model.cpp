#include "gridfc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gridfc {

std::string mode_name(ScenarioMode m) {
    switch (m) {
        case ScenarioMode::Baseline: return "baseline";
        case ScenarioMode::NoFC: return "no_fc";
        case ScenarioMode::StaticFC: return "static_fc";
        case ScenarioMode::DynamicFC: return "dynamic_fc";
    }
    return "?";
}

ScenarioMode mode_from_name(const std::string& name) {
    if (name == "baseline") return ScenarioMode::Baseline;
    if (name == "no_fc") return ScenarioMode::NoFC;
    if (name == "static_fc") return ScenarioMode::StaticFC;
    if (name == "dynamic_fc") return ScenarioMode::DynamicFC;
    throw std::invalid_argument("unknown scenario mode '" + name +
                                "' (expected baseline|no_fc|static_fc|dynamic_fc)");
}

void SizingInputs::validate(ScenarioMode mode) const {
    plant.validate();
    econ.validate();
    const int T = horizon();
    if (T < 1) throw std::invalid_argument("load series is empty");
    if (irradiance_kw_m2.size() != T)
        throw std::invalid_argument("irradiance series has length " +
                                    std::to_string(irradiance_kw_m2.size()) + ", expected " +
                                    std::to_string(T) + " (load series length)");
    const bool needs_hulls = mode == ScenarioMode::StaticFC || mode == ScenarioMode::DynamicFC;
    if (needs_hulls && static_cast<int>(hulls.size()) != T)
        throw std::invalid_argument("hull series has length " + std::to_string(hulls.size()) +
                                    ", expected " + std::to_string(T) + " (load series length)");
    for (int h = 0; h < T; ++h) {
        if (!(load_mw[h] > 0.0))
            throw std::invalid_argument("load series must be positive (step " + std::to_string(h) +
                                        ")");
        if (irradiance_kw_m2[h] < 0.0)
            throw std::invalid_argument("irradiance series must be non-negative (step " +
                                        std::to_string(h) + ")");
    }
}

namespace {

std::string tag(const char* base, int a) { return std::string(base) + "[" + std::to_string(a) + "]"; }
std::string tag(const char* base, int a, int b) {
    return std::string(base) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}

} // namespace

SizingProblem build_problem(ScenarioMode mode, const SizingInputs& in) {
    in.validate(mode);
    const int T = in.horizon();
    const int M = static_cast<int>(in.plant.generators.size());
    const auto& gens = in.plant.generators;
    const double d_pv = in.plant.d_pv;

    const bool pv_active = mode != ScenarioMode::Baseline;
    const bool with_fcr = mode != ScenarioMode::NoFC; // FCR symbols in family (d)
    const bool with_freq = mode == ScenarioMode::StaticFC || mode == ScenarioMode::DynamicFC;
    const bool fcr_in_battery_rows = mode == ScenarioMode::DynamicFC;

    SizingProblem sp;
    sp.mode = mode;
    lp::Problem& lp = sp.lp;
    SizingIndex& ix = sp.idx;
    ix.horizon = T;
    ix.n_units = M;

    auto grid = [&](int rows, int cols) {
        return std::vector<std::vector<int>>(static_cast<std::size_t>(rows),
                                             std::vector<int>(static_cast<std::size_t>(cols), -1));
    };
    ix.p = grid(M, T);
    ix.rho = grid(M, T);
    ix.u = grid(M, T);
    ix.v = grid(M, T);
    ix.p_fcr = grid(M, T);
    ix.p_inj.assign(static_cast<std::size_t>(T), -1);
    ix.p_sud.assign(static_cast<std::size_t>(T), -1);
    ix.p_pvb.assign(static_cast<std::size_t>(T), -1);
    ix.p_bat_fcr.assign(static_cast<std::size_t>(T), -1);
    ix.r_balance.assign(static_cast<std::size_t>(T), -1);
    ix.r_pv_prod.assign(static_cast<std::size_t>(T), -1);
    ix.r_pv_inst.assign(static_cast<std::size_t>(T), -1);
    ix.r_fcr_cap = grid(M, T);
    ix.r_gen_max = grid(M, T);
    ix.r_gen_min = grid(M, T);
    ix.r_commit = grid(M, T);
    ix.r_excl = grid(M, T);
    ix.r_min_up = grid(M, T);
    ix.r_min_dn = grid(M, T);
    ix.r_sud_max = grid(M, T);
    ix.r_sud_min = grid(M, T);
    ix.r_pvb_ramp.assign(static_cast<std::size_t>(T), {});
    ix.r_bat_fcr.assign(static_cast<std::size_t>(T), {});
    ix.r_pvb_inj.assign(static_cast<std::size_t>(T), -1);
    ix.r_frr_up.assign(static_cast<std::size_t>(T), -1);
    ix.r_frr_dn.assign(static_cast<std::size_t>(T), -1);
    ix.r_bat_inst.assign(static_cast<std::size_t>(T), -1);

    // ---- variables ------------------------------------------------------
    const bool pv_vars_fixed = mode == ScenarioMode::Baseline;
    ix.a_pv = lp.add_variable("apv", 0.0, pv_vars_fixed ? 0.0 : lp::kInf);
    ix.p_pv_inst = lp.add_variable("ppvinst", 0.0, pv_vars_fixed ? 0.0 : lp::kInf);
    if (mode != ScenarioMode::NoFC)
        ix.p_bat_inst = lp.add_variable("pbatinst", 0.0, pv_vars_fixed ? 0.0 : lp::kInf);

    for (int h = 0; h < T; ++h) {
        for (int m = 0; m < M; ++m) {
            ix.p[m][h] = lp.add_variable(tag("p", m, h), 0.0, gens[m].p_max_mw);
            ix.rho[m][h] = lp.add_binary(tag("rho", m, h));
            ix.u[m][h] = lp.add_variable(tag("u", m, h), 0.0, 1.0);
            ix.v[m][h] = lp.add_variable(tag("v", m, h), 0.0, 1.0);
            if (with_fcr)
                ix.p_fcr[m][h] =
                    lp.add_variable(tag("pfcr", m, h), 0.0, fcr_capacity(gens[m], in.plant));
        }
        ix.p_inj[h] = lp.add_variable(tag("pinj", h), 0.0, pv_vars_fixed ? 0.0 : lp::kInf);
        if (with_freq) {
            ix.p_sud[h] = lp.add_variable(tag("psud", h), 0.0, lp::kInf);
            ix.p_pvb[h] = lp.add_variable(tag("ppvb", h), 0.0, lp::kInf);
            ix.p_bat_fcr[h] = lp.add_variable(tag("pbatfcr", h), 0.0, lp::kInf);
        }
    }

    // ---- objective -------------------------------------------------------
    const double fuel_usd_per_vol = in.econ.c_fuel_usd + in.econ.co2_t_per_vol * in.econ.c_co2_usd_t;
    const double year_scale = in.annualize && T < 8760 ? 8760.0 / T : 1.0;
    const double fuel_weight = fuel_usd_per_vol * year_scale * annuity_factor(in.econ);
    for (int h = 0; h < T; ++h)
        for (int m = 0; m < M; ++m) {
            lp.set_objective(ix.p[m][h], in.econ.fuel_a_scale * gens[m].fuel_a * fuel_weight);
            lp.set_objective(ix.rho[m][h], gens[m].fuel_b * fuel_weight);
        }
    lp.set_objective(ix.p_pv_inst, in.econ.c_pv_usd_kw * 1e3);
    if (ix.p_bat_inst >= 0) lp.set_objective(ix.p_bat_inst, in.econ.c_bat_usd_kw * 1e3);

    // ---- constraints ------------------------------------------------------
    using lp::Relation;
    for (int h = 0; h < T; ++h) {
        const double irr = in.irradiance_kw_m2[h];

        { // (b) balance
            std::vector<std::pair<int, double>> terms;
            for (int m = 0; m < M; ++m) terms.push_back({ix.p[m][h], 1.0});
            terms.push_back({ix.p_inj[h], 1.0});
            ix.r_balance[h] = lp.add_constraint(tag("bal", h), std::move(terms),
                                                Relation::GreaterEqual, in.load_mw[h]);
        }

        if (pv_active) { // (c) PV production and installed capacity
            ix.r_pv_prod[h] = lp.add_constraint(
                tag("pvprod", h), {{ix.p_inj[h], 1.0}, {ix.a_pv, -d_pv * irr * 1e-3}},
                Relation::LessEqual, 0.0);
            ix.r_pv_inst[h] =
                lp.add_constraint(tag("pvinst", h), {{ix.p_pv_inst, 1.0}, {ix.a_pv, -irr * 1e-3}},
                                  Relation::GreaterEqual, 0.0);
        }

        for (int m = 0; m < M; ++m) { // (d) unit limits with FCR headroom
            if (with_fcr) {
                ix.r_fcr_cap[m][h] = lp.add_constraint(
                    tag("fcrcap", m, h),
                    {{ix.p_fcr[m][h], 1.0}, {ix.rho[m][h], -fcr_capacity(gens[m], in.plant)}},
                    Relation::LessEqual, 0.0);
            }
            {
                std::vector<std::pair<int, double>> up{{ix.p[m][h], 1.0},
                                                       {ix.rho[m][h], -gens[m].p_max_mw}};
                std::vector<std::pair<int, double>> dn{{ix.p[m][h], 1.0},
                                                       {ix.rho[m][h], -gens[m].p_min_mw}};
                if (with_fcr) {
                    up.push_back({ix.p_fcr[m][h], 1.0});
                    dn.push_back({ix.p_fcr[m][h], -1.0});
                }
                ix.r_gen_max[m][h] =
                    lp.add_constraint(tag("genmax", m, h), std::move(up), Relation::LessEqual, 0.0);
                ix.r_gen_min[m][h] =
                    lp.add_constraint(tag("genmin", m, h), std::move(dn), Relation::GreaterEqual, 0.0);
            }
        }

        for (int m = 0; m < M; ++m) { // (e) commitment logic; units on before h=0
            const int t_up = gens[m].min_up_h, t_dn = gens[m].min_down_h;
            {
                std::vector<std::pair<int, double>> terms{
                    {ix.u[m][h], 1.0}, {ix.v[m][h], -1.0}, {ix.rho[m][h], -1.0}};
                double rhs = 0.0;
                if (h > 0) terms.push_back({ix.rho[m][h - 1], 1.0});
                else rhs = -1.0; // rho[-1] = 1
                ix.r_commit[m][h] = lp.add_constraint(tag("commit", m, h), std::move(terms),
                                                      Relation::GreaterEqual, rhs);
            }
            ix.r_excl[m][h] =
                lp.add_constraint(tag("startstop", m, h), {{ix.u[m][h], 1.0}, {ix.v[m][h], 1.0}},
                                  Relation::LessEqual, 1.0);
            {
                std::vector<std::pair<int, double>> terms{{ix.v[m][h], -static_cast<double>(t_up)}};
                int hist = 0;
                for (int k = h - t_up; k < h; ++k)
                    if (k >= 0) terms.push_back({ix.rho[m][k], 1.0});
                    else ++hist;
                ix.r_min_up[m][h] = lp.add_constraint(tag("minup", m, h), std::move(terms),
                                                      Relation::GreaterEqual, -hist);
            }
            {
                std::vector<std::pair<int, double>> terms{{ix.u[m][h], static_cast<double>(t_dn)}};
                int hist = 0;
                for (int k = h - t_dn; k < h; ++k)
                    if (k >= 0) terms.push_back({ix.rho[m][k], 1.0});
                    else ++hist;
                ix.r_min_dn[m][h] = lp.add_constraint(tag("mindn", m, h), std::move(terms),
                                                      Relation::LessEqual, t_dn - hist);
            }
        }

        if (with_freq) {
            const auto& hull = in.hulls[static_cast<std::size_t>(h)];
            const int R = static_cast<int>(hull.events.size());

            for (int m = 0; m < M; ++m) { // (f) worst sudden loss
                ix.r_sud_max[m][h] =
                    lp.add_constraint(tag("sudmax", m, h), {{ix.p_sud[h], 1.0}},
                                      Relation::LessEqual, gens[m].p_max_mw);
                ix.r_sud_min[m][h] = lp.add_constraint(
                    tag("sudmin", m, h), {{ix.p_sud[h], 1.0}, {ix.p[m][h], -1.0}},
                    Relation::GreaterEqual, 0.0);
            }

            // (g) worst PV disturbance
            ix.r_pvb_ramp[h].resize(static_cast<std::size_t>(R), -1);
            for (int r = 0; r < R; ++r) {
                ix.r_pvb_ramp[h][static_cast<std::size_t>(r)] = lp.add_constraint(
                    tag("pvbramp", h, r),
                    {{ix.p_pvb[h], 1.0},
                     {ix.a_pv, -d_pv * hull.events[static_cast<std::size_t>(r)].drop_kw_m2 * 1e-3}},
                    Relation::GreaterEqual, 0.0);
            }
            ix.r_pvb_inj[h] =
                lp.add_constraint(tag("pvbinj", h), {{ix.p_pvb[h], 1.0}, {ix.p_inj[h], -1.0}},
                                  Relation::LessEqual, 0.0);

            { // (h) restoration-reserve capacity, up and down
                std::vector<std::pair<int, double>> up{{ix.p_sud[h], -1.0}, {ix.p_pvb[h], -1.0}};
                std::vector<std::pair<int, double>> dn = up;
                for (int m = 0; m < M; ++m) {
                    up.push_back({ix.rho[m][h], gens[m].p_max_mw});
                    up.push_back({ix.p[m][h], -1.0});
                    dn.push_back({ix.p[m][h], 1.0});
                    dn.push_back({ix.rho[m][h], -gens[m].p_min_mw});
                }
                ix.r_frr_up[h] =
                    lp.add_constraint(tag("frrup", h), std::move(up), Relation::GreaterEqual, 0.0);
                ix.r_frr_dn[h] =
                    lp.add_constraint(tag("frrdn", h), std::move(dn), Relation::GreaterEqual, 0.0);
            }

            // (i) battery covers the residual deficit for every ramp
            ix.r_bat_fcr[h].resize(static_cast<std::size_t>(R), -1);
            for (int r = 0; r < R; ++r) {
                const auto& ev = hull.events[static_cast<std::size_t>(r)];
                std::vector<std::pair<int, double>> terms{
                    {ix.p_bat_fcr[h], 1.0},
                    {ix.p_sud[h], -1.0},
                    {ix.a_pv, -d_pv * ev.drop_kw_m2 * 1e-3}};
                if (fcr_in_battery_rows)
                    for (int m = 0; m < M; ++m) terms.push_back({ix.p_fcr[m][h], 1.0});
                for (int m = 0; m < M; ++m)
                    terms.push_back({ix.rho[m][h], gens[m].frr_rate_mw_s * ev.duration_s});
                ix.r_bat_fcr[h][static_cast<std::size_t>(r)] = lp.add_constraint(
                    tag("batfcr", h, r), std::move(terms), Relation::GreaterEqual, 0.0);
            }
            ix.r_bat_inst[h] = lp.add_constraint(
                tag("batinst", h), {{ix.p_bat_inst, 1.0}, {ix.p_bat_fcr[h], -1.0}},
                Relation::GreaterEqual, 0.0);
        }
    }

    lp.validate();
    return sp;
}

double battery_fcr_requirement(double p_sud_mw, double total_gt_fcr_mw, double dp_pv_mw,
                               double total_frr_ramp_mw) {
    return std::max(0.0, p_sud_mw - total_gt_fcr_mw + dp_pv_mw - total_frr_ramp_mw);
}

bool short_term_feasibility(std::span<const double> frr_rates_mw_s, std::span<const double> fcr_mw,
                            const PowerRampEvent& ramp) {
    if (ramp.duration_s <= 0.0) throw std::invalid_argument("ramp duration must be positive");
    double frr = 0.0;
    for (double r : frr_rates_mw_s) frr += r * ramp.duration_s;
    double fcr = 0.0;
    for (double f : fcr_mw) fcr += f;
    return frr + fcr >= ramp.drop_mw;
}

} // namespace gridfc
