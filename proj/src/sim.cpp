#include "gridfc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gridfc {

namespace {
constexpr double kAbortDfPu = 0.5;
constexpr double kTrack1s = 2.0;   // restoration tracking rate when unconstrained
constexpr double kBandTol = 1e-6;  // slack on band comparisons
} // namespace

DisturbanceEvent DisturbanceEvent::load_step(double t_s, double magnitude_mw) {
    return {Kind::LoadStep, t_s, 0.0, magnitude_mw};
}

DisturbanceEvent DisturbanceEvent::power_ramp(double t0_s, double duration_s,
                                              double total_drop_mw) {
    return {Kind::PowerRamp, t0_s, duration_s, total_drop_mw};
}

void SimConfig::validate() const {
    if (committed.empty()) throw std::invalid_argument("simulation needs committed units");
    if (dt_s <= 0.0) throw std::invalid_argument("dt must be positive");
    if (s_base_mw <= 0.0) throw std::invalid_argument("s_base must be positive");
    freq.validate();
    double last = 0.0;
    for (const auto& e : events) {
        if (e.kind == DisturbanceEvent::Kind::PowerRamp && e.duration_s <= 0.0)
            throw std::invalid_argument("ramp events need a positive duration");
        last = std::max(last, e.end_time_s());
    }
    if (t_end_s <= last) throw std::invalid_argument("t_end must exceed the last event time");
    for (const auto& cu : committed) cu.gen.validate();
}

namespace {

struct UnitModel {
    double p0, p_min, p_max;
    double fcr_cap, fcr_gain; // MW, MW per pu deviation
    double frr_gain, frr_rate;
    double avail_up, avail_dn;
};

struct Engine {
    const SimConfig& cfg;
    std::vector<UnitModel> units;
    double bat_gain = 0.0;
    double m_full = 0.0, m_reduced = 0.0;
    double first_step_t = -1.0;

    explicit Engine(const SimConfig& c) : cfg(c) {
        const double band = c.freq.r_ss * (c.freq.robust ? 1.0 - c.freq.r_tr : 1.0);
        for (const auto& cu : c.committed) {
            UnitModel u;
            u.p0 = cu.p0_mw;
            u.p_min = cu.gen.p_min_mw;
            u.p_max = cu.gen.p_max_mw;
            u.fcr_cap = cfg.split == GovernorSplit::FrrOnly ? 0.0 : cu.fcr_cap_mw;
            u.fcr_gain = u.fcr_cap > 0.0 ? u.fcr_cap / band : 0.0;
            u.frr_gain = cfg.split == GovernorSplit::FcrOnly
                             ? 0.0
                             : (c.frr_gain_mw_pu > 0.0 ? c.frr_gain_mw_pu : 100.0 * u.p_max);
            u.frr_rate = cfg.split == GovernorSplit::FcrOnly ? 0.0 : cu.gen.frr_rate_mw_s;
            u.avail_up = std::max(0.0, u.p_max - u.p0);
            u.avail_dn = std::max(0.0, u.p0 - u.p_min);
            units.push_back(u);
        }
        bat_gain = c.battery_power_mw > 0.0
                       ? c.battery_power_mw / (c.battery_droop > 0.0 ? c.battery_droop : c.freq.r_ss)
                       : 0.0;

        const int n = static_cast<int>(units.size());
        const int n_inertia = c.inertia_units > 0 ? c.inertia_units : n;
        auto unit_m = [&](int i) {
            const auto& g = c.committed[static_cast<std::size_t>(std::min(i, n - 1))].gen;
            return 2.0 * g.inertia_s * g.p_max_mw / c.s_base_mw;
        };
        for (int i = 0; i < n_inertia; ++i) m_full += unit_m(i);
        m_reduced = n_inertia > 1 ? m_full - unit_m(n_inertia - 1) : m_full;
        for (const auto& e : c.events)
            if (e.kind == DisturbanceEvent::Kind::LoadStep &&
                (first_step_t < 0.0 || e.t_s < first_step_t))
                first_step_t = e.t_s;
    }

    double disturbance(double t) const {
        double w = 0.0;
        for (const auto& e : cfg.events) {
            if (t < e.t_s) continue;
            if (e.kind == DisturbanceEvent::Kind::LoadStep) {
                w += e.magnitude_mw;
            } else {
                const double frac = std::min(1.0, (t - e.t_s) / e.duration_s);
                w += e.magnitude_mw * frac;
            }
        }
        return w;
    }

    double inertia_at(double t) const {
        if (cfg.inertia_drops_after_step && first_step_t >= 0.0 && t >= first_step_t)
            return m_reduced;
        return m_full;
    }

    double unit_fcr(const UnitModel& u, double df) const {
        return std::clamp(u.fcr_gain * -df, -u.fcr_cap, u.fcr_cap);
    }
    double unit_response(const UnitModel& u, double frr_state, double df) const {
        return std::clamp(unit_fcr(u, df) + frr_state, -u.avail_dn, u.avail_up);
    }
    double battery(double df) const {
        return std::clamp(bat_gain * -df, -cfg.battery_power_mw, cfg.battery_power_mw);
    }

    // state: [df, frr_0 .. frr_{n-1}, balance_integral]
    Eigen::VectorXd deriv(double t, const Eigen::VectorXd& y) const {
        const double df = y[0];
        Eigen::VectorXd dy(y.size());
        double total = battery(df) - disturbance(t);
        for (std::size_t m = 0; m < units.size(); ++m) {
            const UnitModel& u = units[m];
            const double frr = y[static_cast<Eigen::Index>(m) + 1];
            const double target = std::clamp(u.frr_gain * -df, -u.avail_dn, u.avail_up);
            dy[static_cast<Eigen::Index>(m) + 1] =
                std::clamp(kTrack1s * (target - frr), -u.frr_rate, u.frr_rate);
            total += unit_response(u, frr, df);
        }
        const double rhs_pu = total / cfg.s_base_mw - cfg.load_damping * df;
        dy[0] = rhs_pu / (inertia_at(t) * (1.0 + df));
        dy[y.size() - 1] = rhs_pu;
        return dy;
    }
};

} // namespace

FrequencyTrace simulate(const SimConfig& cfg) {
    cfg.validate();
    Engine eng(cfg);
    const int n_units = static_cast<int>(eng.units.size());
    const auto steps = static_cast<Eigen::Index>(std::ceil(cfg.t_end_s / cfg.dt_s - 1e-12));

    FrequencyTrace tr;
    tr.f_nom_hz = cfg.freq.f_nom_hz;
    tr.s_base_mw = cfg.s_base_mw;
    tr.inertia_pu_s = eng.m_full;
    for (const auto& e : cfg.events) tr.last_event_end_s = std::max(tr.last_event_end_s, e.end_time_s());
    tr.t_s.resize(steps + 1);
    tr.df_pu.resize(steps + 1);
    tr.gen_mw.resize(steps + 1, n_units);
    tr.battery_mw.resize(steps + 1);
    tr.unserved_mw.resize(steps + 1);
    tr.balance_integral_pu.resize(steps + 1);

    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_units + 2);
    Eigen::Index recorded = 0;
    for (Eigen::Index k = 0; k <= steps; ++k) {
        const double t = k * cfg.dt_s;
        const double df = y[0];
        tr.t_s[k] = t;
        tr.df_pu[k] = df;
        double total = 0.0;
        for (int m = 0; m < n_units; ++m) {
            const double resp = eng.unit_response(eng.units[static_cast<std::size_t>(m)], y[m + 1], df);
            tr.gen_mw(k, m) = eng.units[static_cast<std::size_t>(m)].p0 + resp;
            total += resp;
        }
        tr.battery_mw[k] = eng.battery(df);
        tr.unserved_mw[k] = eng.disturbance(t) - total - tr.battery_mw[k];
        tr.balance_integral_pu[k] = y[n_units + 1];
        recorded = k;

        if (std::abs(df) > kAbortDfPu) {
            tr.aborted = true;
            tr.abort_reason = "instability: |df| exceeded " + std::to_string(kAbortDfPu) +
                              " pu at t=" + std::to_string(t) + " s";
            break;
        }
        if (k == steps) break;

        const double h = cfg.dt_s;
        const Eigen::VectorXd k1 = eng.deriv(t, y);
        const Eigen::VectorXd k2 = eng.deriv(t + 0.5 * h, y + 0.5 * h * k1);
        const Eigen::VectorXd k3 = eng.deriv(t + 0.5 * h, y + 0.5 * h * k2);
        const Eigen::VectorXd k4 = eng.deriv(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    if (recorded < steps) {
        tr.t_s.conservativeResize(recorded + 1);
        tr.df_pu.conservativeResize(recorded + 1);
        tr.gen_mw.conservativeResize(recorded + 1, n_units);
        tr.battery_mw.conservativeResize(recorded + 1);
        tr.unserved_mw.conservativeResize(recorded + 1);
        tr.balance_integral_pu.conservativeResize(recorded + 1);
    }
    return tr;
}

LimitVerdict verify_limits(const FrequencyTrace& trace, const FrequencyLimits& limits,
                           double settle_window_s) {
    if (trace.t_s.size() == 0) throw std::invalid_argument("empty trace");
    LimitVerdict v;
    v.max_abs_df_pu = trace.df_pu.cwiseAbs().maxCoeff();
    v.nadir_hz = limits.f_nom_hz * (1.0 + trace.df_pu.minCoeff());

    const double ss = limits.r_ss + kBandTol;
    Eigen::Index unsettled = -1;
    for (Eigen::Index k = trace.df_pu.size() - 1; k >= 0; --k) {
        if (std::abs(trace.df_pu[k]) > ss) {
            unsettled = k;
            break;
        }
    }
    const bool settles = unsettled + 1 < trace.df_pu.size();
    v.settling_time_s = unsettled < 0 ? 0.0 : trace.t_s[std::min(unsettled + 1, trace.t_s.size() - 1)];

    if (trace.aborted) {
        v.pass = false;
        v.detail = "simulation aborted: " + trace.abort_reason;
        return v;
    }
    const bool transient_ok = v.max_abs_df_pu <= limits.r_tr + kBandTol;
    const bool settle_ok = settles && v.settling_time_s <= trace.last_event_end_s + settle_window_s;
    v.pass = transient_ok && settle_ok;
    if (!transient_ok)
        v.detail = "transient band exceeded: |df| reached " + std::to_string(v.max_abs_df_pu) + " pu";
    else if (!settle_ok)
        v.detail = settles ? "settled too late (t=" + std::to_string(v.settling_time_s) + " s)"
                           : "never settled inside the steady-state band";
    else
        v.detail = "within limits";
    return v;
}

double min_damping(double p_b_mw, const FrequencyLimits& limits, double s_base_mw) {
    if (p_b_mw < 0.0) throw std::invalid_argument("imbalance must be >= 0");
    if (limits.r_ss <= 0.0) throw std::invalid_argument("r_ss must be positive");
    if (s_base_mw <= 0.0) throw std::invalid_argument("s_base must be positive");
    double d = p_b_mw / (limits.r_ss * s_base_mw);
    if (limits.robust) d /= 1.0 - limits.r_tr;
    return d;
}

} // namespace gridfc
