#include <doctest.h>

#include "gridfc/feasibility.hpp"
#include "gridfc/lp.hpp"
#include "gridfc/simplex.hpp"
#include "gridfc/solve.hpp"

#include <cmath>
#include <random>

using namespace gridfc::lp;

namespace {

// exhaustive oracle for pure-binary instances
struct EnumResult {
    bool feasible = false;
    double best = kInf;
};

EnumResult enumerate_binaries(const Problem& p) {
    const int n = p.num_variables();
    EnumResult res;
    for (long mask = 0; mask < (1L << n); ++mask) {
        bool ok = true;
        for (const auto& c : p.constraints) {
            double act = 0.0;
            for (const auto& [j, coef] : c.terms) act += coef * ((mask >> j) & 1);
            if (c.rel == Relation::LessEqual && act > c.rhs + 1e-9) ok = false;
            if (c.rel == Relation::GreaterEqual && act < c.rhs - 1e-9) ok = false;
            if (c.rel == Relation::Equal && std::abs(act - c.rhs) > 1e-9) ok = false;
            if (!ok) break;
        }
        if (!ok) continue;
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += p.objective[static_cast<std::size_t>(j)] * ((mask >> j) & 1);
        res.feasible = true;
        res.best = std::min(res.best, obj);
    }
    return res;
}

Problem knapsack_pair() {
    // max x + y s.t. x + y <= 1.5, x,y binary  ==  min -x - y
    Problem p;
    const int x = p.add_binary("x");
    const int y = p.add_binary("y");
    p.set_objective(x, -1.0);
    p.set_objective(y, -1.0);
    p.add_constraint("cap", {{x, 1.0}, {y, 1.0}}, Relation::LessEqual, 1.5);
    return p;
}

} // namespace

TEST_CASE("simplex basics") {
    SUBCASE("bounded minimization without rows") {
        Problem p;
        const int x = p.add_variable("x", 0.0, 7.0);
        p.set_objective(x, -1.0);
        LpResult r = solve_lp(p);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(-7.0));
        CHECK(r.x[x] == doctest::Approx(7.0));
    }

    SUBCASE("unbounded direction") {
        Problem p;
        const int x = p.add_variable("x", 0.0, kInf);
        p.set_objective(x, -1.0);
        CHECK(solve_lp(p).status == LpStatus::Unbounded);
    }

    SUBCASE("all variables fixed, empty constraint set") {
        Problem p;
        const int x = p.add_variable("x", 2.0, 2.0);
        const int y = p.add_variable("y", -1.5, -1.5);
        p.set_objective(x, 3.0);
        p.set_objective(y, 2.0);
        LpResult r = solve_lp(p);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(6.0 - 3.0));
    }

    SUBCASE("equality row") {
        Problem p;
        const int x = p.add_variable("x", 0.0, 1.0);
        const int y = p.add_variable("y", 0.0, 1.0);
        p.set_objective(x, 1.0);
        p.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, Relation::Equal, 1.0);
        LpResult r = solve_lp(p);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(0.0));
        CHECK(r.x[y] == doctest::Approx(1.0));
    }

    SUBCASE("free variable against a row") {
        Problem p;
        const int x = p.add_variable("x", -kInf, kInf);
        p.set_objective(x, 1.0);
        p.add_constraint("floor", {{x, 1.0}}, Relation::GreaterEqual, -5.0);
        LpResult r = solve_lp(p);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(-5.0));
    }

    SUBCASE("infeasible combinations") {
        Problem p;
        const int x = p.add_variable("x", 0.0, 1.0);
        p.add_constraint("high", {{x, 1.0}}, Relation::GreaterEqual, 2.0);
        CHECK(solve_lp(p).status == LpStatus::Infeasible);

        Problem q;
        q.add_variable("x", 3.0, 1.0); // inverted bounds
        CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    }

    SUBCASE("degenerate rows still terminate") {
        Problem p;
        const int x = p.add_variable("x", 0.0, 1.0);
        const int y = p.add_variable("y", 0.0, 1.0);
        const int z = p.add_variable("z", 0.0, 1.0);
        p.set_objective(x, -1.0);
        p.set_objective(y, -1.0);
        p.set_objective(z, -1.0);
        for (int k = 0; k < 6; ++k)
            p.add_constraint("r" + std::to_string(k), {{x, 1.0}, {y, 1.0}, {z, 1.0}},
                             Relation::LessEqual, 1.0);
        LpResult r = solve_lp(p);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(-1.0));
    }

    SUBCASE("LP relaxation of the knapsack pair") {
        Problem p = knapsack_pair();
        LpResult r = solve_lp(p);
        CHECK(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(-1.5));
    }
}

TEST_CASE("branch and bound") {
    SUBCASE("binary pair") {
        Solution s = solve(knapsack_pair(), {.gap_tol = 1e-9});
        CHECK(s.status == SolveStatus::Optimal);
        CHECK(s.objective == doctest::Approx(-1.0));
        CHECK(s.bound <= s.objective + 1e-9);
        CHECK(check_feasible(knapsack_pair(), s.x).feasible());
    }

    SUBCASE("mixed integer with a continuous variable") {
        Problem p;
        const int x = p.add_variable("x", 0.0, 5.0);
        const int y = p.add_binary("y");
        p.set_objective(x, -1.0);
        p.set_objective(y, -10.0);
        p.add_constraint("cap", {{x, 1.0}, {y, 4.0}}, Relation::LessEqual, 6.0);
        Solution s = solve(p, {.gap_tol = 1e-9});
        CHECK(s.status == SolveStatus::Optimal);
        CHECK(s.objective == doctest::Approx(-12.0));
        CHECK(s.x[y] == doctest::Approx(1.0));
        CHECK(s.x[x] == doctest::Approx(2.0));
    }

    SUBCASE("infeasible integer program") {
        Problem p;
        const int x = p.add_binary("x");
        const int y = p.add_binary("y");
        p.add_constraint("half", {{x, 2.0}, {y, 2.0}}, Relation::Equal, 3.0);
        CHECK(solve(p).status == SolveStatus::Infeasible);
    }

    SUBCASE("deterministic replays") {
        Problem p = knapsack_pair();
        Solution a = solve(p), b = solve(p);
        CHECK(a.objective == b.objective);
        CHECK(a.nodes == b.nodes);
        CHECK(a.lp_iterations == b.lp_iterations);
        REQUIRE(a.x.size() == b.x.size());
        for (Eigen::Index j = 0; j < a.x.size(); ++j) CHECK(a.x[j] == b.x[j]);
    }
}

TEST_CASE("solver soundness against exhaustive enumeration") {
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<int> nvars(1, 12), nrows(1, 8), coef(-3, 3), rhs(-4, 8);
    std::uniform_real_distribution<double> obj(-5.0, 5.0);
    std::uniform_int_distribution<int> rel(0, 2);

    int infeasible_seen = 0;
    for (int iter = 0; iter < 200; ++iter) {
        Problem p;
        const int n = nvars(rng);
        for (int j = 0; j < n; ++j) p.add_binary("b" + std::to_string(j));
        for (int j = 0; j < n; ++j) p.set_objective(j, obj(rng));
        const int m = nrows(rng);
        for (int i = 0; i < m; ++i) {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < n; ++j) {
                const int c = coef(rng);
                if (c != 0) terms.push_back({j, static_cast<double>(c)});
            }
            const int rk = rel(rng);
            const Relation r = rk == 0   ? Relation::LessEqual
                               : rk == 1 ? Relation::GreaterEqual
                                         : Relation::Equal;
            p.add_constraint("r" + std::to_string(i), std::move(terms), r,
                             static_cast<double>(rhs(rng)));
        }

        const EnumResult oracle = enumerate_binaries(p);
        Solution s = solve(p, {.gap_tol = 1e-9});
        if (!oracle.feasible) {
            ++infeasible_seen;
            CHECK(s.status == SolveStatus::Infeasible);
            continue;
        }
        REQUIRE((s.status == SolveStatus::Optimal || s.status == SolveStatus::FeasibleWithinGap));
        CHECK(s.objective == doctest::Approx(oracle.best).epsilon(1e-6));
        CHECK(s.bound <= s.objective + 1e-6);
        CHECK(check_feasible(p, s.x).feasible());
    }
    CHECK(infeasible_seen > 0); // the generator must exercise both outcomes
}

TEST_CASE("feasibility checker") {
    Problem p;
    std::vector<std::pair<int, double>> terms;
    for (int m = 0; m < 3; ++m) {
        const int j = p.add_variable("p" + std::to_string(m), 0.0, 45.0);
        terms.push_back({j, 1.0});
    }
    p.add_constraint("balance", terms, Relation::GreaterEqual, 160.0);

    SUBCASE("three units at full output cannot carry 160 MW") {
        Eigen::VectorXd x = Eigen::VectorXd::Constant(3, 45.0);
        auto rep = check_feasible(p, x);
        REQUIRE(rep.items.size() == 1);
        CHECK(rep.items[0].name == "balance");
        CHECK(rep.items[0].violation == doctest::Approx(25.0));
        CHECK(rep.items[0].slack == doctest::Approx(-25.0));
    }

    SUBCASE("bound and integrality violations are reported") {
        Problem q;
        q.add_variable("x", 0.0, 1.0, true);
        Eigen::VectorXd x(1);
        x << 1.4;
        auto rep = check_feasible(q, x);
        CHECK(rep.items.size() == 2); // above the bound and fractional
    }

    SUBCASE("missing variables are rejected") {
        Eigen::VectorXd x(2);
        x << 1.0, 2.0;
        CHECK_THROWS_AS(check_feasible(p, x), std::invalid_argument);
    }

    SUBCASE("zero assignment on the knapsack pair is feasible") {
        Problem k = knapsack_pair();
        Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
        CHECK(check_feasible(k, x).feasible());
    }
}
