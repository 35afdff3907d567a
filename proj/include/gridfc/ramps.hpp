#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace gridfc {

/// Uniformly sampled irradiance record (kW/m2).
struct IrradianceSeries {
    std::int64_t start_epoch_s = 0;
    double dt_s = 1.0;
    Eigen::VectorXd values;

    double duration_s() const { return values.size() > 0 ? (values.size() - 1) * dt_s : 0.0; }
    void validate() const;
};

/// One irradiance descent: duration and total drop. hour = -1 marks global sets.
struct RampEvent {
    int hour = 0;
    double duration_s = 0.0;
    double drop_kw_m2 = 0.0;
};

/// Worst-case ramp set for one hour (or globally): duration-sorted points on the
/// upper concave envelope of all detected events.
struct RampHull {
    int hour = -1;
    std::vector<RampEvent> events;

    bool empty() const { return events.empty(); }
    /// Checks strictly increasing duration/drop and strictly decreasing segment slopes.
    bool well_formed() const;
};

/// Centered moving average; window is the nominal full width (effective width is odd).
Eigen::VectorXd moving_average(const Eigen::VectorXd& x, int window);

/// Splits a series into whole-hour slices; a trailing partial hour is dropped.
std::vector<IrradianceSeries> slice_hours(const IrradianceSeries& series);

/// Detects maximal monotone descents of the smoothed slice, local max to local min,
/// keeping those with drop >= min_drop.
std::vector<RampEvent> detect_ramps(const IrradianceSeries& slice, double min_drop_kw_m2,
                                    int smooth_window, int hour = 0);

/// Pareto filter + upper concave envelope of (duration, drop) points.
RampHull hull_reduce(std::vector<RampEvent> events);

/// Hull of the union of several hulls' events (hour = -1).
RampHull global_hull(const std::vector<RampHull>& hulls);

/// PV power drop in MW caused by an irradiance drop over a given PV area.
double pv_power_drop(const RampEvent& event, double d_pv, double area_m2);

} // namespace gridfc
