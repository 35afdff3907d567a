#include "gridfc/ramps.hpp"

#include <algorithm>
#include <stdexcept>

namespace gridfc {

void IrradianceSeries::validate() const {
    if (dt_s <= 0.0) throw std::invalid_argument("irradiance series: dt must be positive");
    if ((values.array() < 0.0).any())
        throw std::invalid_argument("irradiance series: negative sample");
}

bool RampHull::well_formed() const {
    for (std::size_t k = 1; k < events.size(); ++k) {
        if (!(events[k].duration_s > events[k - 1].duration_s)) return false;
        if (!(events[k].drop_kw_m2 > events[k - 1].drop_kw_m2)) return false;
    }
    for (std::size_t k = 2; k < events.size(); ++k) {
        const double s0 = (events[k - 1].drop_kw_m2 - events[k - 2].drop_kw_m2) /
                          (events[k - 1].duration_s - events[k - 2].duration_s);
        const double s1 = (events[k].drop_kw_m2 - events[k - 1].drop_kw_m2) /
                          (events[k].duration_s - events[k - 1].duration_s);
        if (!(s1 < s0)) return false;
    }
    return true;
}

Eigen::VectorXd moving_average(const Eigen::VectorXd& x, int window) {
    if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");
    const int n = static_cast<int>(x.size());
    const int half = (window - 1) / 2;
    if (half == 0) return x;
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        out[i] = x.segment(lo, hi - lo + 1).mean();
    }
    return out;
}

std::vector<IrradianceSeries> slice_hours(const IrradianceSeries& series) {
    series.validate();
    const auto samples_per_hour = static_cast<Eigen::Index>(3600.0 / series.dt_s + 0.5);
    std::vector<IrradianceSeries> slices;
    if (samples_per_hour < 1) return slices;
    const Eigen::Index whole = series.values.size() / samples_per_hour;
    slices.reserve(static_cast<std::size_t>(whole));
    for (Eigen::Index h = 0; h < whole; ++h) {
        IrradianceSeries s;
        s.start_epoch_s = series.start_epoch_s + static_cast<std::int64_t>(h * 3600);
        s.dt_s = series.dt_s;
        s.values = series.values.segment(h * samples_per_hour, samples_per_hour);
        slices.push_back(std::move(s));
    }
    return slices;
}

std::vector<RampEvent> detect_ramps(const IrradianceSeries& slice, double min_drop_kw_m2,
                                    int smooth_window, int hour) {
    slice.validate();
    if (min_drop_kw_m2 < 0.0) throw std::invalid_argument("min_drop must be >= 0");
    const Eigen::VectorXd s = moving_average(slice.values, smooth_window);
    const Eigen::Index n = s.size();
    std::vector<RampEvent> events;
    Eigen::Index i = 0;
    while (i + 1 < n) {
        if (!(s[i + 1] < s[i])) {
            ++i;
            continue;
        }
        // maximal strictly decreasing run; a plateau is the local minimum and
        // terminates the event (smoothing keeps genuine descents strict)
        Eigen::Index j = i + 1;
        while (j + 1 < n && s[j + 1] < s[j]) ++j;
        const double drop = s[i] - s[j];
        if (drop >= min_drop_kw_m2)
            events.push_back({hour, static_cast<double>(j - i) * slice.dt_s, drop});
        i = j;
    }
    return events;
}

RampHull hull_reduce(std::vector<RampEvent> events) {
    RampHull hull;
    if (events.empty()) return hull;

    hull.hour = events.front().hour;
    for (const auto& e : events)
        if (e.hour != hull.hour) hull.hour = -1;

    std::sort(events.begin(), events.end(), [](const RampEvent& a, const RampEvent& b) {
        if (a.duration_s != b.duration_s) return a.duration_s < b.duration_s;
        return a.drop_kw_m2 > b.drop_kw_m2;
    });

    // Pareto sweep: an event survives only if it drops more than everything at
    // shorter (or equal) duration.
    std::vector<RampEvent> kept;
    double best_drop = -1.0;
    for (const auto& e : events) {
        if (e.drop_kw_m2 > best_drop) {
            kept.push_back(e);
            best_drop = e.drop_kw_m2;
        }
    }

    // Upper concave envelope: successive segment slopes must strictly decrease.
    std::vector<RampEvent>& chain = hull.events;
    for (const auto& e : kept) {
        while (chain.size() >= 2) {
            const RampEvent& a = chain[chain.size() - 2];
            const RampEvent& b = chain.back();
            const double slope_ab = (b.drop_kw_m2 - a.drop_kw_m2) / (b.duration_s - a.duration_s);
            const double slope_be = (e.drop_kw_m2 - b.drop_kw_m2) / (e.duration_s - b.duration_s);
            if (slope_be >= slope_ab)
                chain.pop_back();
            else
                break;
        }
        chain.push_back(e);
    }
    return hull;
}

RampHull global_hull(const std::vector<RampHull>& hulls) {
    std::vector<RampEvent> all;
    for (const auto& h : hulls) all.insert(all.end(), h.events.begin(), h.events.end());
    return hull_reduce(std::move(all));
}

double pv_power_drop(const RampEvent& event, double d_pv, double area_m2) {
    if (area_m2 < 0.0) throw std::invalid_argument("PV area must be >= 0");
    return d_pv * event.drop_kw_m2 * area_m2 * 1e-3; // kW -> MW
}

} // namespace gridfc
