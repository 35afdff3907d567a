#include <doctest.h>

#include "gridfc/csv.hpp"
#include "gridfc/study.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace gridfc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gridfc_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& leaf) const { return (path / leaf).string(); }
    static int counter;
};
int TempDir::counter = 0;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// 24-hour toy profile: load stays under the restoration-capacity ceiling
void write_day_profiles(const TempDir& dir, std::string& load_csv, std::string& irr_csv) {
    std::string load = "hour,load_mw\n", irr = "hour,irradiance_kw_m2\n";
    for (int h = 0; h < 24; ++h) {
        const double l = 110.0 + 20.0 * std::exp(-0.5 * std::pow((h - 14.0) / 4.0, 2.0));
        const double sun =
            h >= 6 && h <= 18 ? std::max(0.0, std::sin(M_PI * (h - 6.0) / 12.0)) : 0.0;
        load += std::to_string(h) + "," + std::to_string(l) + "\n";
        irr += std::to_string(h) + "," + std::to_string(sun) + "\n";
    }
    load_csv = dir.file("load.csv");
    irr_csv = dir.file("irr.csv");
    write_file(load_csv, load);
    write_file(irr_csv, irr);
}

} // namespace

TEST_CASE("timestamp parsing") {
    CHECK(io::parse_timestamp("1970-01-01T00:00:00") == 0);
    CHECK(io::parse_timestamp("1970-01-02 00:00:00") == 86400);
    CHECK(io::parse_timestamp("2020-01-01T00:00:00") == 1577836800);
    CHECK(io::parse_timestamp("42") == 42);
    CHECK_THROWS_AS(io::parse_timestamp("not-a-time"), std::invalid_argument);
}

TEST_CASE("irradiance CSV round trip and validation") {
    TempDir dir;
    const std::string path = dir.file("irr.csv");
    write_file(path, "timestamp,irradiance_kw_m2\n"
                     "2020-01-01T00:00:00,0.5\n"
                     "2020-01-01T00:00:02,0.6\n"
                     "2020-01-01T00:00:04,0.7\n");
    IrradianceSeries s = io::read_irradiance_csv(path);
    CHECK(s.dt_s == 2.0);
    CHECK(s.values.size() == 3);
    CHECK(s.values[2] == doctest::Approx(0.7));

    const std::string bad = dir.file("bad.csv");
    write_file(bad, "timestamp,v\n2020-01-01T00:00:00,0.5\n2020-01-01T00:00:02,0.6\n"
                    "2020-01-01T00:00:05,0.7\n");
    CHECK_THROWS_WITH_AS(io::read_irradiance_csv(bad), doctest::Contains("bad.csv:4"),
                         io::ParseError);

    const std::string junk = dir.file("junk.csv");
    write_file(junk, "timestamp,v\n2020-01-01T00:00:00,zero\n2020-01-01T00:00:01,0.5\n");
    CHECK_THROWS_AS(io::read_irradiance_csv(junk), io::ParseError);
}

TEST_CASE("hull CSV round trip") {
    TempDir dir;
    std::vector<RampHull> hulls{hull_reduce({{11, 2, 0.061}, {11, 19, 0.613}})};
    const std::string path = dir.file("hull.csv");
    io::write_hull_csv(path, hulls);
    auto back = io::read_hull_csv(path);
    REQUIRE(back.size() == 1);
    CHECK(back[0].hour == 11);
    REQUIRE(back[0].events.size() == 2);
    CHECK(back[0].events[1].drop_kw_m2 == doctest::Approx(0.613));
}

TEST_CASE("hull-to-step mapping") {
    Eigen::VectorXd irr(48);
    for (int h = 0; h < 48; ++h) {
        const int hod = h % 24;
        irr[h] = hod >= 6 && hod <= 18 ? 1.0 : 0.0;
    }
    irr[11] = 0.3; // first day's hour 11 is cloudy

    SUBCASE("global hull applies to sunny steps, clipped to the hour's irradiance") {
        RampHull g = hull_reduce({{-1, 19.0, 0.613}, {-1, 48.0, 0.878}});
        auto steps = study::map_hulls_to_steps({g}, irr);
        REQUIRE(steps.size() == 48);
        CHECK(steps[0].empty());             // midnight
        CHECK(steps[12].events.size() == 2); // full sun, unclipped
        CHECK(steps[12].events[1].drop_kw_m2 == doctest::Approx(0.878));
        REQUIRE(!steps[11].empty()); // cloudy hour: clipped at 0.3
        for (const auto& e : steps[11].events) CHECK(e.drop_kw_m2 <= 0.3 + 1e-12);
        CHECK(steps[11].well_formed());
    }

    SUBCASE("per-hour hulls pool by hour-of-day") {
        RampHull h11 = hull_reduce({{11, 19.0, 0.613}});
        RampHull h35 = hull_reduce({{35, 48.0, 0.878}}); // hour 11 of day 2
        RampHull h14 = hull_reduce({{14, 10.0, 0.4}});
        auto steps = study::map_hulls_to_steps({h11, h35, h14}, irr);
        CHECK(steps[38].events.size() == 1); // 38 % 24 == 14
        CHECK(steps[35].events.size() == 2); // pooled hours 11 and 35
        CHECK(steps[12].empty());            // nothing detected at hour 12
    }
}

TEST_CASE("ramps pipeline on a synthetic file") {
    TempDir dir;
    // 1 hour flat + one descent, 1 s sampling
    std::string csv = "timestamp,irradiance_kw_m2\n";
    for (int i = 0; i < 3600; ++i) {
        double v = 0.9;
        if (i >= 1000 && i < 1019) v = 0.9 - 0.5 * (i - 1000) / 19.0;
        else if (i >= 1019) v = 0.4;
        csv += std::to_string(1577836800 + i) + "," + std::to_string(v) + "\n";
    }
    const std::string irr = dir.file("hires.csv");
    write_file(irr, csv);
    AppConfig cfg = default_config();
    cfg.ramps.smooth_window = 1;
    const std::string out = dir.file("ramps_out");
    CHECK(study::run_ramps(cfg, irr, out) == 0);
    auto hourly = io::read_hull_csv(out + "/hulls_hourly.csv");
    REQUIRE(hourly.size() == 1);
    REQUIRE(hourly[0].events.size() == 1);
    CHECK(hourly[0].events[0].duration_s == doctest::Approx(19.0));
    CHECK(hourly[0].events[0].drop_kw_m2 == doctest::Approx(0.5));
    auto global = io::read_hull_csv(out + "/hull_global.csv");
    REQUIRE(global.size() == 1);
    CHECK(global[0].hour == -1);
}

TEST_CASE("flat irradiance produces an empty hull file with header") {
    TempDir dir;
    std::string csv = "timestamp,irradiance_kw_m2\n";
    for (int i = 0; i < 3600; ++i) csv += std::to_string(i) + ",1.0\n";
    const std::string irr = dir.file("flat.csv");
    write_file(irr, csv);
    CHECK(study::run_ramps(default_config(), irr, dir.file("out")) == 0);
    const std::string content = io::read_text_file(dir.file("out") + "/hull_global.csv");
    CHECK(content == "hour,duration_s,drop_kw_m2\n");
}

TEST_CASE("size pipeline end to end") {
    TempDir dir;
    std::string load_csv, irr_csv;
    write_day_profiles(dir, load_csv, irr_csv);
    const std::string hull_csv = dir.file("hull.csv");
    write_file(hull_csv, "hour,duration_s,drop_kw_m2\n"
                         "11,2,0.061\n11,19,0.613\n11,36,0.778\n11,48,0.878\n");

    AppConfig cfg = default_config();
    study::SizeOptions opts;
    opts.modes = {ScenarioMode::Baseline, ScenarioMode::StaticFC, ScenarioMode::DynamicFC};
    opts.gap = 0.01;
    const std::string out = dir.file("size_out");
    REQUIRE(study::run_size(cfg, load_csv, irr_csv, hull_csv, opts, out) == 0);

    for (const char* mode : {"baseline", "static_fc", "dynamic_fc"}) {
        CHECK(fs::exists(out + "/" + mode + "/problem.mps"));
        CHECK(fs::exists(out + "/" + mode + "/problem.txt"));
        CHECK(fs::exists(out + "/" + mode + "/solution.json"));
        CHECK(fs::exists(out + "/" + mode + "/report.json"));
    }
    CHECK(fs::exists(out + "/report.csv"));

    auto stat = study::parse_solution_json(io::read_text_file(out + "/static_fc/solution.json"));
    auto dyn = study::parse_solution_json(io::read_text_file(out + "/dynamic_fc/solution.json"));
    CHECK(dyn.p_bat_inst_mw <= stat.p_bat_inst_mw + 1e-6);
    CHECK(stat.schedule.size() == 24);
    CHECK(stat.schedule[0].units.size() == 4);

    SUBCASE("simulate validates both scenario solutions") {
        study::SimulateOptions sopts;
        CHECK(study::run_simulate(cfg, out + "/static_fc/solution.json", hull_csv, sopts,
                                  dir.file("sim_static")) == 0);
        CHECK(study::run_simulate(cfg, out + "/dynamic_fc/solution.json", hull_csv, sopts,
                                  dir.file("sim_dynamic")) == 0);
        CHECK(fs::exists(dir.file("sim_dynamic") + "/verdicts.json"));
        CHECK(fs::exists(dir.file("sim_static") + "/trace_r1.csv"));
    }

    SUBCASE("report recomputes indicators from the dump") {
        CHECK(study::run_report(cfg, out + "/dynamic_fc/solution.json", load_csv, irr_csv,
                                hull_csv, dir.file("rep_out")) == 0);
        const std::string rep = io::read_text_file(dir.file("rep_out") + "/report.json");
        CHECK(rep.find("dynamic_fc") != std::string::npos);
    }

    SUBCASE("runs are deterministic byte for byte") {
        const std::string out2 = dir.file("size_out2");
        REQUIRE(study::run_size(cfg, load_csv, irr_csv, hull_csv, opts, out2) == 0);
        CHECK(io::read_text_file(out + "/report.csv") == io::read_text_file(out2 + "/report.csv"));
        CHECK(io::read_text_file(out + "/dynamic_fc/solution.json") ==
              io::read_text_file(out2 + "/dynamic_fc/solution.json"));
    }
}

TEST_CASE("solution dump round trip") {
    TempDir dir;
    std::string load_csv, irr_csv;
    write_day_profiles(dir, load_csv, irr_csv);
    AppConfig cfg = default_config();
    study::SizeOptions opts;
    opts.modes = {ScenarioMode::Baseline};
    const std::string out = dir.file("out");
    REQUIRE(study::run_size(cfg, load_csv, irr_csv, "", opts, out) == 0);
    auto dump = study::parse_solution_json(io::read_text_file(out + "/baseline/solution.json"));
    CHECK(dump.mode == ScenarioMode::Baseline);
    CHECK(dump.p_pv_inst_mw == 0.0);
    CHECK(dump.schedule.size() == 24);
    CHECK(!dump.variables.empty());
    // committed units carry the full load at every hour
    for (const auto& hs : dump.schedule) {
        double total = 0.0;
        for (const auto& u : hs.units) total += u.p_mw;
        CHECK(total == doctest::Approx(hs.load_mw).epsilon(1e-6));
    }
}

TEST_CASE("config loading") {
    TempDir dir;
    const std::string path = dir.file("cfg.json");
    write_file(path, R"({
      "frequency": {"r_ss": 0.02},
      "generators": [{"name": "big", "p_max_mw": 60.0, "count": 2}],
      "economics": {"c_pv_usd_per_kw": 500.0}
    })");
    AppConfig cfg = load_config(path);
    CHECK(cfg.plant.freq.r_ss == 0.02);
    CHECK(cfg.plant.freq.f_nom_hz == 50.0); // default retained
    CHECK(cfg.plant.generators.size() == 2);
    CHECK(cfg.plant.generators[1].p_max_mw == 60.0);
    CHECK(cfg.econ.c_pv_usd_kw == 500.0);
    CHECK(cfg.econ.c_bat_usd_kw == 250.0);

    const std::string bad = dir.file("bad.json");
    write_file(bad, "{ not json }");
    CHECK_THROWS_AS(load_config(bad), std::runtime_error);

    // the emitted document reads back
    const std::string echo = dir.file("echo.json");
    write_file(echo, config_json(cfg));
    AppConfig cfg2 = load_config(echo);
    CHECK(cfg2.plant.freq.r_ss == 0.02);
    CHECK(cfg2.plant.generators.size() == 2);
}

TEST_CASE("missing scenario inputs fail with context") {
    TempDir dir;
    std::string load_csv, irr_csv;
    write_day_profiles(dir, load_csv, irr_csv);
    AppConfig cfg = default_config();
    study::SizeOptions opts;
    opts.modes = {ScenarioMode::DynamicFC};
    CHECK_THROWS_WITH_AS(study::run_size(cfg, load_csv, irr_csv, "", opts, dir.file("o")),
                         doctest::Contains("hull"), std::invalid_argument);

    const std::string short_load = dir.file("short.csv");
    write_file(short_load, "hour,load_mw\n0,100\n1,100\n");
    study::SizeOptions base_opts;
    base_opts.modes = {ScenarioMode::Baseline};
    CHECK_THROWS_WITH_AS(study::run_size(cfg, short_load, irr_csv, "", base_opts, dir.file("o2")),
                         doctest::Contains("different lengths"), std::invalid_argument);
}
