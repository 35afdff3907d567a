#pragma once

#include "gridfc/ramps.hpp"
#include "gridfc/sim.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace gridfc::io {

/// Parse failure carrying file and line context.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, int line, const std::string& why)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + why) {}
};

/// Seconds since the Unix epoch for an ISO-8601 timestamp (UTC, no offset support).
std::int64_t parse_timestamp(const std::string& text);

/// Two-column CSV (ISO-8601 timestamp or plain seconds, value) with constant step.
IrradianceSeries read_irradiance_csv(const std::string& path);

/// Two-column CSV (index or timestamp, value); values returned in file order.
Eigen::VectorXd read_series_csv(const std::string& path);

/// Hull rows: hour,duration_s,drop_kw_m2. hour = -1 marks the global set.
void write_hull_csv(const std::string& path, const std::vector<RampHull>& hulls);
std::vector<RampHull> read_hull_csv(const std::string& path);

/// Plot-ready trace: t_s, df_hz, per-device MW, unserved MW.
void write_trace_csv(const std::string& path, const FrequencyTrace& trace);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace gridfc::io
