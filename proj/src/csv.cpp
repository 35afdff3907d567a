#include "gridfc/csv.hpp"

#include "gridfc/lp.hpp" // format_number

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gridfc::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.front()))) f.erase(f.begin());
        while (!f.empty() && std::isspace(static_cast<unsigned char>(f.back()))) f.pop_back();
    }
    return fields;
}

bool looks_numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

double to_number(const std::string& s, const std::string& file, int line) {
    if (!looks_numeric(s)) throw ParseError(file, line, "expected a number, got '" + s + "'");
    return std::strtod(s.c_str(), nullptr);
}

// days since 1970-01-01 for a civil date (proleptic Gregorian)
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

} // namespace

std::int64_t parse_timestamp(const std::string& text) {
    int y, mo, d, h, mi, s;
    if (std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &s) == 6 ||
        std::sscanf(text.c_str(), "%d-%d-%d %d:%d:%d", &y, &mo, &d, &h, &mi, &s) == 6) {
        return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
    }
    if (looks_numeric(text)) return static_cast<std::int64_t>(std::llround(std::strtod(text.c_str(), nullptr)));
    throw std::invalid_argument("unrecognized timestamp '" + text + "'");
}

IrradianceSeries read_irradiance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    int line_no = 0;
    std::vector<std::int64_t> times;
    std::vector<double> values;
    std::vector<int> lines;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() < 2) throw ParseError(path, line_no, "expected two columns");
        if (line_no == 1 && !looks_numeric(f[1])) continue; // header
        std::int64_t t;
        try {
            t = parse_timestamp(f[0]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(path, line_no, e.what());
        }
        times.push_back(t);
        values.push_back(to_number(f[1], path, line_no));
        lines.push_back(line_no);
    }
    if (times.size() < 2) throw ParseError(path, line_no, "need at least two samples");
    const std::int64_t dt = times[1] - times[0];
    if (dt <= 0) throw ParseError(path, lines[1], "timestamps must be strictly increasing");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] - times[i - 1] != dt)
            throw ParseError(path, lines[i], "non-uniform sampling step");
    IrradianceSeries s;
    s.start_epoch_s = times[0];
    s.dt_s = static_cast<double>(dt);
    s.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    s.validate();
    return s;
}

Eigen::VectorXd read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    int line_no = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() < 2) throw ParseError(path, line_no, "expected two columns");
        if (line_no == 1 && !looks_numeric(f[1])) continue; // header
        values.push_back(to_number(f[1], path, line_no));
    }
    if (values.empty()) throw ParseError(path, line_no, "no rows");
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_hull_csv(const std::string& path, const std::vector<RampHull>& hulls) {
    std::string out = "hour,duration_s,drop_kw_m2\n";
    for (const auto& h : hulls)
        for (const auto& e : h.events)
            out += std::to_string(h.hour) + "," + lp::format_number(e.duration_s) + "," +
                   lp::format_number(e.drop_kw_m2) + "\n";
    write_text_file(path, out);
}

std::vector<RampHull> read_hull_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    int line_no = 0;
    std::vector<RampHull> hulls;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() < 3) throw ParseError(path, line_no, "expected hour,duration_s,drop_kw_m2");
        if (line_no == 1 && !looks_numeric(f[2])) continue; // header
        const int hour = static_cast<int>(to_number(f[0], path, line_no));
        RampEvent e{hour, to_number(f[1], path, line_no), to_number(f[2], path, line_no)};
        if (e.duration_s <= 0.0) throw ParseError(path, line_no, "duration must be positive");
        if (hulls.empty() || hulls.back().hour != hour) {
            hulls.push_back(RampHull{hour, {}});
        }
        hulls.back().events.push_back(e);
    }
    return hulls;
}

void write_trace_csv(const std::string& path, const FrequencyTrace& trace) {
    std::string out = "t_s,df_hz,df_pu";
    for (Eigen::Index m = 0; m < trace.gen_mw.cols(); ++m)
        out += ",gen" + std::to_string(m) + "_mw";
    out += ",battery_mw,unserved_mw\n";
    for (Eigen::Index k = 0; k < trace.t_s.size(); ++k) {
        out += lp::format_number(trace.t_s[k]) + "," +
               lp::format_number(trace.df_pu[k] * trace.f_nom_hz) + "," +
               lp::format_number(trace.df_pu[k]);
        for (Eigen::Index m = 0; m < trace.gen_mw.cols(); ++m)
            out += "," + lp::format_number(trace.gen_mw(k, m));
        out += "," + lp::format_number(trace.battery_mw[k]) + "," +
               lp::format_number(trace.unserved_mw[k]) + "\n";
    }
    write_text_file(path, out);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

} // namespace gridfc::io
