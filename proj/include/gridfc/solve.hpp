#pragma once

#include "gridfc/lp.hpp"
#include "gridfc/simplex.hpp"

#include <Eigen/Core>
#include <string>

namespace gridfc::lp {

enum class SolveStatus { Optimal, FeasibleWithinGap, Infeasible, Unbounded, IterationLimit };

std::string status_text(SolveStatus s);

struct SolveLimits {
    long max_nodes = 100000;
    double max_time_s = 0.0;      ///< 0 disables the wall-clock cap
    long max_lp_iterations = 0;   ///< per LP; 0 selects the automatic cap
};

struct SolveOptions {
    double gap_tol = 0.01;   ///< relative optimality gap target
    double int_tol = 1e-6;   ///< integrality tolerance
    double feas_tol = 1e-7;  ///< feasibility tolerance
    SolveLimits limits;
    bool use_rounding_heuristic = true;
};

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    Eigen::VectorXd x;        ///< empty when no incumbent was found
    double objective = 0.0;
    double bound = 0.0;       ///< best proven lower bound (minimization)
    double gap = 0.0;         ///< (objective - bound) / |objective|
    long nodes = 0;
    long lp_iterations = 0;

    bool has_assignment() const { return x.size() > 0; }
};

/// Best-first branch and bound over the bounded-simplex LP relaxation.
/// Branches on the most fractional integer variable; deterministic.
Solution solve(const Problem& p, const SolveOptions& opts = {});

} // namespace gridfc::lp
