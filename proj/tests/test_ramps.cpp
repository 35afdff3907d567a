#include <doctest.h>

#include "gridfc/ramps.hpp"

#include <algorithm>
#include <random>
#include <vector>

using namespace gridfc;

namespace {

IrradianceSeries flat_series(int n, double value, double dt = 1.0) {
    IrradianceSeries s;
    s.dt_s = dt;
    s.values = Eigen::VectorXd::Constant(n, value);
    return s;
}

// linear segment [from -> to] written over `steps` intervals starting at index i0
void write_descent(Eigen::VectorXd& v, int i0, int steps, double from, double to) {
    for (int k = 0; k <= steps; ++k)
        v[i0 + k] = from + (to - from) * static_cast<double>(k) / steps;
}

// O(n^2) dominance oracle: e is dominated when another event has
// duration <= e.duration and drop >= e.drop.
bool dominated(const RampEvent& e, const std::vector<RampEvent>& all) {
    for (const auto& o : all) {
        if (&o == &e) continue;
        if (o.duration_s <= e.duration_s && o.drop_kw_m2 >= e.drop_kw_m2 &&
            (o.duration_s < e.duration_s || o.drop_kw_m2 > e.drop_kw_m2))
            return true;
    }
    return false;
}

// drop of the hull's linear interpolation at a duration (clamped at the ends)
double hull_interp(const RampHull& h, double duration) {
    REQUIRE(!h.events.empty());
    if (duration <= h.events.front().duration_s) return h.events.front().drop_kw_m2;
    if (duration >= h.events.back().duration_s) return h.events.back().drop_kw_m2;
    for (std::size_t k = 1; k < h.events.size(); ++k) {
        const auto& a = h.events[k - 1];
        const auto& b = h.events[k];
        if (duration <= b.duration_s) {
            const double t = (duration - a.duration_s) / (b.duration_s - a.duration_s);
            return a.drop_kw_m2 + t * (b.drop_kw_m2 - a.drop_kw_m2);
        }
    }
    return h.events.back().drop_kw_m2;
}

std::vector<RampEvent> table2_events() {
    return {{11, 2.0, 0.061}, {11, 19.0, 0.613}, {11, 36.0, 0.778}, {11, 48.0, 0.878}};
}

} // namespace

TEST_CASE("hour slicing") {
    CHECK(slice_hours(flat_series(7200, 1.0)).size() == 2);
    auto slices = slice_hours(flat_series(5400, 1.0));
    CHECK(slices.size() == 1);
    CHECK(slices[0].values.size() == 3600);
    CHECK(slice_hours(flat_series(3600, 1.0)).size() == 1);
    CHECK(slice_hours(flat_series(100, 1.0)).empty());

    SUBCASE("slices reproduce the covered prefix") {
        IrradianceSeries s = flat_series(7300, 0.0);
        for (int i = 0; i < 7300; ++i) s.values[i] = i * 1e-4;
        auto sl = slice_hours(s);
        REQUIRE(sl.size() == 2);
        int idx = 0;
        for (const auto& part : sl)
            for (Eigen::Index k = 0; k < part.values.size(); ++k)
                CHECK(part.values[k] == s.values[idx++]);
        CHECK(idx == 7200);
        CHECK(sl[1].start_epoch_s == s.start_epoch_s + 3600);
    }

    SUBCASE("coarser sampling still slices by wall time") {
        auto sl = slice_hours(flat_series(2400, 1.0, 3.0)); // 2 hours at dt=3
        CHECK(sl.size() == 2);
        CHECK(sl[0].values.size() == 1200);
    }
}

TEST_CASE("ramp detection") {
    SUBCASE("constant series has no ramps") {
        CHECK(detect_ramps(flat_series(3600, 1.0), 0.0, 1).empty());
    }

    SUBCASE("single descent") {
        IrradianceSeries s = flat_series(3600, 1.0);
        write_descent(s.values, 600, 19, 1.0, 0.4);
        for (int i = 620; i < 3600; ++i) s.values[i] = 0.4;
        auto events = detect_ramps(s, 0.0, 1, 4);
        REQUIRE(events.size() == 1);
        CHECK(events[0].duration_s == doctest::Approx(19.0));
        CHECK(events[0].drop_kw_m2 == doctest::Approx(0.6));
        CHECK(events[0].hour == 4);
    }

    SUBCASE("two separated descents") {
        IrradianceSeries s = flat_series(3600, 1.0);
        write_descent(s.values, 100, 2, 1.0, 0.9);
        for (int i = 103; i < 1000; ++i) s.values[i] = 0.9;
        write_descent(s.values, 1000, 36, 0.9, 0.3);
        for (int i = 1037; i < 3600; ++i) s.values[i] = 0.3;
        auto events = detect_ramps(s, 0.0, 1);
        REQUIRE(events.size() == 2);
        CHECK(events[0].duration_s == doctest::Approx(2.0));
        CHECK(events[0].drop_kw_m2 == doctest::Approx(0.1));
        CHECK(events[1].duration_s == doctest::Approx(36.0));
        CHECK(events[1].drop_kw_m2 == doctest::Approx(0.6));
    }

    SUBCASE("min_drop filters small events") {
        IrradianceSeries s = flat_series(3600, 1.0);
        write_descent(s.values, 100, 2, 1.0, 0.99);
        for (int i = 103; i < 1000; ++i) s.values[i] = 0.99;
        write_descent(s.values, 1000, 10, 0.99, 0.5);
        for (int i = 1011; i < 3600; ++i) s.values[i] = 0.5;
        auto events = detect_ramps(s, 0.05, 1);
        REQUIRE(events.size() == 1);
        CHECK(events[0].drop_kw_m2 == doctest::Approx(0.49));
    }

    SUBCASE("rising section is not a ramp") {
        IrradianceSeries s = flat_series(3600, 0.2);
        for (int i = 1000; i < 3600; ++i) s.values[i] = std::min(1.0, 0.2 + (i - 1000) * 1e-3);
        CHECK(detect_ramps(s, 0.0, 1).empty());
    }
}

TEST_CASE("moving average") {
    Eigen::VectorXd x(5);
    x << 1, 2, 3, 4, 5;
    CHECK((moving_average(x, 1) - x).cwiseAbs().maxCoeff() == 0.0);
    Eigen::VectorXd m = moving_average(x, 3);
    CHECK(m[0] == doctest::Approx(1.5)); // truncated window at the edge
    CHECK(m[2] == doctest::Approx(3.0));
    CHECK_THROWS_AS(moving_average(x, 0), std::invalid_argument);
}

TEST_CASE("hull reduction") {
    SUBCASE("pairwise dominance example") {
        auto h = hull_reduce({{0, 2, 0.3}, {0, 5, 0.2}, {0, 10, 0.6}, {0, 10, 0.4}});
        REQUIRE(h.events.size() == 2);
        CHECK(h.events[0].duration_s == 2);
        CHECK(h.events[0].drop_kw_m2 == 0.3);
        CHECK(h.events[1].duration_s == 10);
        CHECK(h.events[1].drop_kw_m2 == 0.6);
    }

    SUBCASE("reference hull is already reduced") {
        auto h = hull_reduce(table2_events());
        REQUIRE(h.events.size() == 4);
        CHECK(h.hour == 11);
        CHECK(h.events[1].duration_s == 19);
        CHECK(h.events[1].drop_kw_m2 == doctest::Approx(0.613));
        CHECK(h.well_formed());
    }

    SUBCASE("singleton and empty") {
        auto h = hull_reduce({{3, 10, 0.5}});
        REQUIRE(h.events.size() == 1);
        CHECK(h.hour == 3);
        CHECK(hull_reduce({}).empty());
    }

    SUBCASE("interior point below the chord is removed") {
        auto h = hull_reduce({{0, 2, 0.2}, {0, 10, 0.3}, {0, 20, 0.9}});
        // (10, 0.3) lies under the chord from (2,0.2) to (20,0.9)
        REQUIRE(h.events.size() == 2);
        CHECK(h.events[1].duration_s == 20);
    }

    SUBCASE("fuzz against the dominance oracle") {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<int> count(1, 40);
        std::uniform_real_distribution<double> dur(1.0, 60.0), drop(0.0, 1.0);
        for (int iter = 0; iter < 1000; ++iter) {
            std::vector<RampEvent> events;
            const int n = count(rng);
            for (int i = 0; i < n; ++i) events.push_back({0, dur(rng), drop(rng)});
            RampHull h = hull_reduce(events);
            REQUIRE(!h.events.empty());
            CHECK(h.well_formed());
            // no surviving point may be dominated
            for (const auto& e : h.events) CHECK(!dominated(e, events));
            // dominance completeness: every event is dominated by some hull point
            // or lies on/below the hull's interpolation
            for (const auto& e : events) {
                bool covered = false;
                for (const auto& he : h.events)
                    if (he.duration_s <= e.duration_s && he.drop_kw_m2 >= e.drop_kw_m2) {
                        covered = true;
                        break;
                    }
                if (!covered) covered = e.drop_kw_m2 <= hull_interp(h, e.duration_s) + 1e-12;
                CHECK(covered);
            }
            // idempotence
            RampHull h2 = hull_reduce(h.events);
            REQUIRE(h2.events.size() == h.events.size());
            for (std::size_t k = 0; k < h.events.size(); ++k) {
                CHECK(h2.events[k].duration_s == h.events[k].duration_s);
                CHECK(h2.events[k].drop_kw_m2 == h.events[k].drop_kw_m2);
            }
        }
    }
}

TEST_CASE("global hull") {
    SUBCASE("union of identical hulls is unchanged") {
        RampHull h = hull_reduce(table2_events());
        RampHull g = global_hull({h, h});
        REQUIRE(g.events.size() == 4);
        CHECK(g.hour == 11); // all events from the same hour
    }

    SUBCASE("dominance across hulls") {
        RampHull a = hull_reduce({{0, 2, 0.3}});
        RampHull b = hull_reduce({{1, 2, 0.5}});
        RampHull g = global_hull({a, b});
        REQUIRE(g.events.size() == 1);
        CHECK(g.events[0].drop_kw_m2 == 0.5);
        CHECK(g.hour == -1);
    }

    SUBCASE("singleton list is the identity") {
        RampHull h = hull_reduce(table2_events());
        RampHull g = global_hull({h});
        REQUIRE(g.events.size() == h.events.size());
        for (std::size_t k = 0; k < h.events.size(); ++k)
            CHECK(g.events[k].drop_kw_m2 == h.events[k].drop_kw_m2);
    }

    CHECK(global_hull({}).empty());
}

TEST_CASE("PV power drop") {
    CHECK(pv_power_drop({11, 19, 0.613}, 0.8, 46200.0) == doctest::Approx(22.656).epsilon(1e-4));
    CHECK(pv_power_drop({11, 19, 0.0}, 0.8, 46200.0) == 0.0);
    CHECK(pv_power_drop({11, 48, 0.878}, 1.0, 1000.0) == doctest::Approx(0.878));
    CHECK_THROWS_AS(pv_power_drop({0, 1, 0.5}, 0.8, -1.0), std::invalid_argument);

    SUBCASE("linear in drop and area") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> d(0.0, 1.0), a(0.0, 1e5);
        for (int i = 0; i < 100; ++i) {
            const double drop = d(rng), area = a(rng), k = 3.0;
            RampEvent e{0, 10.0, drop}, ek{0, 10.0, k * drop};
            CHECK(pv_power_drop(ek, 0.8, area) ==
                  doctest::Approx(k * pv_power_drop(e, 0.8, area)).epsilon(1e-12));
            CHECK(pv_power_drop(e, 0.8, k * area) ==
                  doctest::Approx(k * pv_power_drop(e, 0.8, area)).epsilon(1e-12));
        }
    }
}
