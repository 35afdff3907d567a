#include "gridfc/study.hpp"

#include "gridfc/csv.hpp"
#include "gridfc/feasibility.hpp"
#include "gridfc/mps.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace gridfc::study {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

double value_or(const Eigen::VectorXd& x, int idx) { return idx >= 0 ? x[idx] : 0.0; }

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

std::string join(const std::string& dir, const std::string& leaf) {
    return (fs::path(dir) / leaf).string();
}

} // namespace

std::string solution_json(const SizingProblem& sp, const lp::Solution& sol,
                          const SizingInputs& in) {
    if (!sol.has_assignment()) throw std::invalid_argument("solution has no assignment to dump");
    const SizingIndex& ix = sp.idx;
    ordered_json j;
    j["generator"] = "gridfc";
    j["mode"] = mode_name(sp.mode);
    j["status"] = lp::status_text(sol.status);
    j["objective"] = sol.objective;
    j["bound"] = sol.bound;
    j["gap"] = sol.gap;
    j["nodes"] = sol.nodes;
    j["lp_iterations"] = sol.lp_iterations;
    j["horizon"] = ix.horizon;
    j["pv"] = {{"a_pv_m2", value_or(sol.x, ix.a_pv)},
               {"p_pv_inst_mw", value_or(sol.x, ix.p_pv_inst)}};
    j["battery"] = {{"p_bat_inst_mw", value_or(sol.x, ix.p_bat_inst)}};
    j["schedule"] = ordered_json::array();
    for (int h = 0; h < ix.horizon; ++h) {
        ordered_json row;
        row["hour"] = h;
        row["load_mw"] = in.load_mw[h];
        row["irradiance_kw_m2"] = in.irradiance_kw_m2[h];
        row["p_inj_mw"] = value_or(sol.x, ix.p_inj[static_cast<std::size_t>(h)]);
        row["p_sud_mw"] = value_or(sol.x, ix.p_sud[static_cast<std::size_t>(h)]);
        row["p_pvb_mw"] = value_or(sol.x, ix.p_pvb[static_cast<std::size_t>(h)]);
        row["p_bat_fcr_mw"] = value_or(sol.x, ix.p_bat_fcr[static_cast<std::size_t>(h)]);
        row["units"] = ordered_json::array();
        for (int m = 0; m < ix.n_units; ++m) {
            const auto mh = [&](const std::vector<std::vector<int>>& g) {
                return value_or(sol.x, g[static_cast<std::size_t>(m)][static_cast<std::size_t>(h)]);
            };
            row["units"].push_back({{"p_mw", mh(ix.p)},
                                    {"rho", mh(ix.rho)},
                                    {"u", mh(ix.u)},
                                    {"v", mh(ix.v)},
                                    {"p_fcr_mw", mh(ix.p_fcr)}});
        }
        j["schedule"].push_back(row);
    }
    ordered_json vars;
    for (int k = 0; k < sp.lp.num_variables(); ++k)
        vars[sp.lp.variables[static_cast<std::size_t>(k)].name] = sol.x[k];
    j["variables"] = vars;
    return j.dump(2) + "\n";
}

SolutionDump parse_solution_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("solution dump: ") + e.what());
    }
    SolutionDump d;
    d.mode = mode_from_name(j.at("mode").get<std::string>());
    d.status = j.value("status", "");
    d.objective = j.value("objective", 0.0);
    d.bound = j.value("bound", 0.0);
    d.gap = j.value("gap", 0.0);
    d.nodes = j.value("nodes", 0L);
    d.lp_iterations = j.value("lp_iterations", 0L);
    d.a_pv_m2 = j.at("pv").value("a_pv_m2", 0.0);
    d.p_pv_inst_mw = j.at("pv").value("p_pv_inst_mw", 0.0);
    d.p_bat_inst_mw = j.at("battery").value("p_bat_inst_mw", 0.0);
    for (const auto& row : j.at("schedule")) {
        HourState hs;
        hs.load_mw = row.value("load_mw", 0.0);
        hs.irradiance_kw_m2 = row.value("irradiance_kw_m2", 0.0);
        hs.p_inj_mw = row.value("p_inj_mw", 0.0);
        hs.p_sud_mw = row.value("p_sud_mw", 0.0);
        hs.p_pvb_mw = row.value("p_pvb_mw", 0.0);
        hs.p_bat_fcr_mw = row.value("p_bat_fcr_mw", 0.0);
        for (const auto& uj : row.at("units")) {
            UnitState us;
            us.p_mw = uj.value("p_mw", 0.0);
            us.rho = uj.value("rho", 0.0);
            us.u = uj.value("u", 0.0);
            us.v = uj.value("v", 0.0);
            us.p_fcr_mw = uj.value("p_fcr_mw", 0.0);
            hs.units.push_back(us);
        }
        d.schedule.push_back(std::move(hs));
    }
    if (j.contains("variables"))
        for (const auto& [name, v] : j["variables"].items()) d.variables[name] = v.get<double>();
    if (d.schedule.empty()) throw std::runtime_error("solution dump: empty schedule");
    return d;
}

namespace {

// A drop deeper than the hour's mean irradiance cannot happen at that hour;
// clip and re-reduce so the applied set stays a well-formed hull.
std::vector<RampEvent> clip_to_irradiance(const std::vector<RampEvent>& events, double irr,
                                          int hour) {
    std::vector<RampEvent> out;
    for (RampEvent e : events) {
        e.hour = hour;
        e.drop_kw_m2 = std::min(e.drop_kw_m2, irr);
        if (e.drop_kw_m2 > 0.0) out.push_back(e);
    }
    return out;
}

} // namespace

std::vector<RampHull> map_hulls_to_steps(const std::vector<RampHull>& file_hulls,
                                         const Eigen::VectorXd& irradiance_kw_m2) {
    const int T = static_cast<int>(irradiance_kw_m2.size());
    std::vector<RampHull> steps(static_cast<std::size_t>(T));
    for (int h = 0; h < T; ++h) steps[static_cast<std::size_t>(h)].hour = h;

    std::vector<RampEvent> hourly;
    RampHull global;
    for (const auto& hull : file_hulls) {
        if (hull.hour < 0) {
            global.events.insert(global.events.end(), hull.events.begin(), hull.events.end());
        } else {
            hourly.insert(hourly.end(), hull.events.begin(), hull.events.end());
        }
    }

    // pool detected events by hour-of-day, then reduce once per slot
    std::vector<RampHull> hod(24);
    if (!hourly.empty()) {
        std::vector<std::vector<RampEvent>> by_hod(24);
        for (const auto& e : hourly) by_hod[static_cast<std::size_t>(e.hour % 24)].push_back(e);
        for (int s = 0; s < 24; ++s)
            hod[static_cast<std::size_t>(s)] = hull_reduce(by_hod[static_cast<std::size_t>(s)]);
    }
    const RampHull reduced_global = hull_reduce(std::move(global.events));

    for (int h = 0; h < T; ++h) {
        const std::vector<RampEvent>* src = nullptr;
        if (!hourly.empty())
            src = &hod[static_cast<std::size_t>(h % 24)].events;
        else if (!reduced_global.events.empty() && irradiance_kw_m2[h] > 0.0)
            src = &reduced_global.events;
        if (!src) continue;
        RampHull clipped = hull_reduce(clip_to_irradiance(*src, irradiance_kw_m2[h], h));
        steps[static_cast<std::size_t>(h)].events = std::move(clipped.events);
    }
    return steps;
}

// Tight battery requirement of one hour, re-derived from the schedule.
static double hour_requirement(const HourState& s, const RampHull& hull,
                               const PlantConfig& plant, double a_pv_m2) {
    double p_sud = 0.0, fcr = 0.0;
    bool committed = false;
    for (std::size_t m = 0; m < s.units.size(); ++m) {
        if (s.units[m].rho <= 0.5) continue;
        committed = true;
        p_sud = std::max(p_sud, s.units[m].p_mw);
        fcr += s.units[m].p_fcr_mw;
    }
    if (!committed || hull.empty()) return 0.0;
    double worst = 0.0;
    for (const auto& e : hull.events) {
        const double dp = std::min(pv_power_drop(e, plant.d_pv, a_pv_m2), s.p_inj_mw);
        double frr = 0.0;
        for (std::size_t m = 0; m < s.units.size(); ++m)
            if (s.units[m].rho > 0.5)
                frr += plant.generators[m].frr_rate_mw_s * e.duration_s;
        worst = std::max(worst, battery_fcr_requirement(p_sud, fcr, dp, frr));
    }
    return worst;
}

int binding_hour(const SolutionDump& dump, const std::vector<RampHull>& step_hulls,
                 const PlantConfig& plant) {
    const int T = static_cast<int>(dump.schedule.size());
    auto argmax = [&](auto key) {
        int best = -1;
        double best_v = 0.0;
        for (int h = 0; h < T; ++h) {
            const double v = key(h, dump.schedule[static_cast<std::size_t>(h)]);
            if (v > best_v + 1e-9) {
                best_v = v;
                best = h;
            }
        }
        return best;
    };
    if (!step_hulls.empty()) {
        const int h = argmax([&](int idx, const HourState& s) {
            return hour_requirement(s, step_hulls[static_cast<std::size_t>(idx)], plant,
                                    dump.a_pv_m2);
        });
        if (h >= 0) return h;
    }
    int h = argmax([](int, const HourState& s) { return s.p_inj_mw; });
    if (h >= 0) return h;
    h = argmax([](int, const HourState& s) {
        double mx = 0.0;
        for (const auto& u : s.units) mx = std::max(mx, u.p_mw);
        return mx;
    });
    return h >= 0 ? h : 0;
}

int run_ramps(const AppConfig& cfg, const std::string& irradiance_csv,
              const std::string& out_dir) {
    const IrradianceSeries series = io::read_irradiance_csv(irradiance_csv);
    if (series.dt_s > 5.0)
        std::fprintf(stderr, "warning: sampling step %.1f s is coarser than 5 s; short ramps may be missed\n",
                     series.dt_s);
    const auto slices = slice_hours(series);
    ensure_dir(out_dir);
    std::vector<RampHull> hourly;
    for (std::size_t h = 0; h < slices.size(); ++h) {
        auto events = detect_ramps(slices[h], cfg.ramps.min_drop_kw_m2, cfg.ramps.smooth_window,
                                   static_cast<int>(h));
        if (events.empty()) continue;
        hourly.push_back(hull_reduce(std::move(events)));
    }
    RampHull global = global_hull(hourly);
    global.hour = -1;
    io::write_hull_csv(join(out_dir, "hulls_hourly.csv"), hourly);
    io::write_hull_csv(join(out_dir, "hull_global.csv"), {global});
    std::printf("ramps: %zu hour slices, %zu with events, global hull size %zu\n", slices.size(),
                hourly.size(), global.events.size());
    if (slices.empty()) std::printf("ramps: series shorter than one hour, empty result\n");
    return 0;
}

namespace {

SizingInputs assemble_inputs(const AppConfig& cfg, const std::string& load_csv,
                             const std::string& irradiance_csv, const std::string& hull_csv,
                             int horizon, bool robust, ScenarioMode mode) {
    SizingInputs in;
    in.plant = cfg.plant;
    in.plant.freq.robust = robust || cfg.plant.freq.robust;
    in.econ = cfg.econ;
    in.annualize = cfg.annualize;
    in.load_mw = io::read_series_csv(load_csv);
    in.irradiance_kw_m2 = io::read_series_csv(irradiance_csv);
    if (in.load_mw.size() != in.irradiance_kw_m2.size())
        throw std::invalid_argument("load series (" + load_csv + ", " +
                                    std::to_string(in.load_mw.size()) + " rows) and irradiance series (" +
                                    irradiance_csv + ", " + std::to_string(in.irradiance_kw_m2.size()) +
                                    " rows) have different lengths");
    if (horizon > 0) {
        if (horizon > in.load_mw.size())
            throw std::invalid_argument("requested horizon exceeds the series length");
        in.load_mw.conservativeResize(horizon);
        in.irradiance_kw_m2.conservativeResize(horizon);
    }
    const bool needs_hulls = mode == ScenarioMode::StaticFC || mode == ScenarioMode::DynamicFC;
    if (needs_hulls) {
        if (hull_csv.empty())
            throw std::invalid_argument(mode_name(mode) + " needs a hull CSV (--hull)");
        in.hulls = map_hulls_to_steps(io::read_hull_csv(hull_csv), in.irradiance_kw_m2);
    }
    return in;
}

} // namespace

int run_size(const AppConfig& cfg, const std::string& load_csv, const std::string& irradiance_csv,
             const std::string& hull_csv, const SizeOptions& opts, const std::string& out_dir) {
    if (opts.modes.empty()) throw std::invalid_argument("at least one scenario mode is required");
    ensure_dir(out_dir);

    lp::SolveOptions sopts;
    sopts.gap_tol = opts.gap;
    sopts.limits.max_nodes = opts.max_nodes;
    sopts.limits.max_time_s = opts.max_time_s;

    std::vector<StudyReport> reports;
    bool all_ok = true;
    for (ScenarioMode mode : opts.modes) {
        const std::string mdir = join(out_dir, mode_name(mode));
        ensure_dir(mdir);
        SizingInputs in =
            assemble_inputs(cfg, load_csv, irradiance_csv, hull_csv, opts.horizon, opts.robust, mode);
        SizingProblem sp = build_problem(mode, in);

        io::write_text_file(join(mdir, "problem.txt"), lp::dump(sp.lp));
        const lp::MpsDocument mps = lp::export_mps(sp.lp, "GRIDFC");
        io::write_text_file(join(mdir, "problem.mps"), mps.text);
        if (mps.renamed()) io::write_text_file(join(mdir, "problem.names.csv"), mps.name_map_csv());

        const lp::Solution sol = lp::solve(sp.lp, sopts);
        const bool solved = sol.status == lp::SolveStatus::Optimal ||
                            sol.status == lp::SolveStatus::FeasibleWithinGap;
        if (!solved) {
            std::printf("size[%s]: %s (no usable solution)\n", mode_name(mode).c_str(),
                        lp::status_text(sol.status).c_str());
            StudyReport r;
            r.mode = mode;
            r.status = lp::status_text(sol.status);
            r.feasibility = "n/a";
            reports.push_back(r);
            all_ok = false;
            continue;
        }

        io::write_text_file(join(mdir, "solution.json"), solution_json(sp, sol, in));

        const lp::ViolationReport vr = lp::check_feasible(sp.lp, sol.x, 1e-6);
        StudyReport r = compute_indicators(sp, sol, in);
        if (!vr.feasible()) {
            io::write_text_file(join(mdir, "violations.csv"), vr.to_csv());
            r.feasibility = "VIOLATED (" + std::to_string(vr.items.size()) + " rows, see violations.csv)";
            std::printf("size[%s]: feasibility check FAILED:\n%s", mode_name(mode).c_str(),
                        vr.to_text().c_str());
            all_ok = false;
        } else {
            r.feasibility = "ok";
        }
        reports.push_back(r);
        io::write_text_file(join(mdir, "report.json"),
                            report_json(std::span<const StudyReport>(&reports.back(), 1)));
        std::printf("size[%s]: %s obj=%.6g gap=%.2f%% pv=%.2f MW bat=%.2f MW%s\n",
                    mode_name(mode).c_str(), lp::status_text(sol.status).c_str(), sol.objective,
                    100.0 * sol.gap, r.p_pv_mw, r.p_bat_mw,
                    r.warning.empty() ? "" : ("\n  warning: " + r.warning).c_str());
    }

    io::write_text_file(join(out_dir, "report.json"), report_json(reports));
    io::write_text_file(join(out_dir, "report.csv"), report_csv(reports));
    return all_ok ? 0 : 1;
}

int run_simulate(const AppConfig& cfg, const std::string& solution_json_path,
                 const std::string& hull_csv, const SimulateOptions& opts,
                 const std::string& out_dir) {
    const SolutionDump dump = parse_solution_json(io::read_text_file(solution_json_path));
    const int T = static_cast<int>(dump.schedule.size());
    if (!dump.schedule.empty() &&
        dump.schedule.front().units.size() != cfg.plant.generators.size())
        throw std::invalid_argument("solution dump has " +
                                    std::to_string(dump.schedule.front().units.size()) +
                                    " units per hour but the config defines " +
                                    std::to_string(cfg.plant.generators.size()));

    Eigen::VectorXd irr(T);
    for (int h = 0; h < T; ++h) irr[h] = dump.schedule[static_cast<std::size_t>(h)].irradiance_kw_m2;
    std::vector<RampHull> step_hulls(static_cast<std::size_t>(T));
    if (!hull_csv.empty()) step_hulls = map_hulls_to_steps(io::read_hull_csv(hull_csv), irr);

    const int hb = binding_hour(dump, hull_csv.empty() ? std::vector<RampHull>{} : step_hulls,
                                cfg.plant);
    const HourState& H = dump.schedule[static_cast<std::size_t>(hb)];
    const RampHull& hull = step_hulls[static_cast<std::size_t>(hb)];
    if (!hull_csv.empty() && hull.empty() && dump.p_pv_inst_mw > 1e-9 && H.p_inj_mw > 1e-9)
        throw std::invalid_argument(
            "hull file does not cover the binding hour " + std::to_string(hb) +
            " (hour indexing mismatch between solution dump and hull CSV?)");

    SimConfig base;
    for (std::size_t m = 0; m < H.units.size(); ++m) {
        if (H.units[m].rho > 0.5)
            base.committed.push_back(
                {cfg.plant.generators[m], H.units[m].p_mw, H.units[m].p_fcr_mw});
    }
    base.freq = cfg.plant.freq;
    base.freq.robust = base.freq.robust || opts.robust;
    base.s_base_mw = cfg.plant.power_base();
    base.battery_power_mw = dump.p_bat_inst_mw;
    base.battery_droop = cfg.sim.battery_droop;
    base.dt_s = opts.dt_s > 0.0 ? opts.dt_s : cfg.sim.dt_s;
    base.t_end_s = cfg.sim.t_end_s;
    base.frr_gain_mw_pu = cfg.sim.frr_gain_mw_pu;

    double trip = 0.0;
    for (const auto& cu : base.committed) trip = std::max(trip, cu.p0_mw);

    ensure_dir(out_dir);
    ordered_json verdicts = ordered_json::array();
    bool all_pass = true;

    auto run_one = [&](const std::string& label, const RampEvent* ev) {
        SimConfig sc = base;
        sc.events.push_back(DisturbanceEvent::load_step(cfg.sim.trip_time_s, trip));
        double drop = 0.0;
        if (ev) {
            drop = std::min(pv_power_drop(*ev, cfg.plant.d_pv, dump.a_pv_m2), H.p_inj_mw);
            sc.events.push_back(
                DisturbanceEvent::power_ramp(cfg.sim.trip_time_s, ev->duration_s, drop));
        }
        LimitVerdict v;
        if (sc.committed.empty()) {
            v.pass = false;
            v.detail = "no committed units at the binding hour";
            v.nadir_hz = 0.0;
        } else {
            const FrequencyTrace tr = simulate(sc);
            v = verify_limits(tr, sc.freq, cfg.sim.settle_window_s);
            io::write_trace_csv(join(out_dir, "trace_" + label + ".csv"), tr);
        }
        ordered_json row;
        row["case"] = label;
        row["binding_hour"] = hb;
        row["trip_mw"] = trip;
        if (ev) {
            row["ramp_duration_s"] = ev->duration_s;
            row["ramp_drop_mw"] = drop;
        }
        row["pass"] = v.pass;
        row["nadir_hz"] = v.nadir_hz;
        row["max_abs_df_pu"] = v.max_abs_df_pu;
        row["settling_time_s"] = v.settling_time_s;
        row["detail"] = v.detail;
        verdicts.push_back(row);
        all_pass = all_pass && v.pass;
        std::printf("simulate[%s] hour %d: %s nadir=%.3f Hz settle=%.1f s %s\n", label.c_str(), hb,
                    v.pass ? "PASS" : "FAIL", v.nadir_hz, v.settling_time_s, v.detail.c_str());
    };

    if (hull.empty()) {
        run_one("trip", nullptr);
    } else {
        for (std::size_t r = 0; r < hull.events.size(); ++r)
            run_one("r" + std::to_string(r + 1), &hull.events[r]);
    }
    io::write_text_file(join(out_dir, "verdicts.json"), verdicts.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

int run_report(const AppConfig& cfg, const std::string& solution_json_path,
               const std::string& load_csv, const std::string& irradiance_csv,
               const std::string& hull_csv, const std::string& out_dir) {
    const SolutionDump dump = parse_solution_json(io::read_text_file(solution_json_path));
    SizingInputs in = assemble_inputs(cfg, load_csv, irradiance_csv, hull_csv,
                                      static_cast<int>(dump.schedule.size()), false, dump.mode);
    SizingProblem sp = build_problem(dump.mode, in);

    Eigen::VectorXd x(sp.lp.num_variables());
    for (int k = 0; k < sp.lp.num_variables(); ++k) {
        const auto it = dump.variables.find(sp.lp.variables[static_cast<std::size_t>(k)].name);
        if (it == dump.variables.end())
            throw std::invalid_argument("solution dump is missing variable '" +
                                        sp.lp.variables[static_cast<std::size_t>(k)].name + "'");
        x[k] = it->second;
    }
    lp::Solution sol;
    sol.status = lp::SolveStatus::FeasibleWithinGap;
    sol.x = x;
    sol.objective = dump.objective;
    sol.bound = dump.bound;
    sol.gap = dump.gap;

    const lp::ViolationReport vr = lp::check_feasible(sp.lp, x, 1e-6);
    StudyReport r = compute_indicators(sp, sol, in);
    r.status = dump.status;
    r.feasibility = vr.feasible()
                        ? "ok"
                        : "VIOLATED (" + std::to_string(vr.items.size()) + " rows)";
    ensure_dir(out_dir);
    if (!vr.feasible()) io::write_text_file(join(out_dir, "violations.csv"), vr.to_csv());
    std::vector<StudyReport> reports{r};
    io::write_text_file(join(out_dir, "report.json"), report_json(reports));
    io::write_text_file(join(out_dir, "report.csv"), report_csv(reports));
    std::printf("report[%s]: pv=%.2f MW bat=%.2f MW capex=%.1f M$ lcoe=%.1f $/MWh feasibility=%s\n",
                mode_name(r.mode).c_str(), r.p_pv_mw, r.p_bat_mw, r.capex_musd, r.lcoe_usd_mwh,
                r.feasibility.c_str());
    return vr.feasible() ? 0 : 1;
}

} // namespace gridfc::study
