#pragma once

#include "gridfc/lp.hpp"

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

namespace gridfc::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    Eigen::VectorXd x; ///< structural variable values
    double objective = 0.0;
    long iterations = 0;
};

/// Numerical breakdown inside the simplex; carries the offending basis columns.
class SimplexNumericError : public std::runtime_error {
public:
    SimplexNumericError(const std::string& what, std::vector<int> basis)
        : std::runtime_error(what), basis_(std::move(basis)) {}
    const std::vector<int>& basis() const { return basis_; }

private:
    std::vector<int> basis_;
};

struct SimplexOptions {
    long max_iterations = 0; ///< 0 selects an automatic cap
    double feas_tol = 1e-7;
    double dual_tol = 1e-9;
    int refactor_interval = 64;
    int stall_threshold = 50; ///< degenerate steps before Bland's rule engages
};

/// Bounded-variable primal simplex (two-phase, product-form basis updates).
/// Bounds are passed separately so branch-and-bound can tighten them without
/// copying the problem. Integrality marks are ignored here.
LpResult solve_lp(const Problem& p, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                  const SimplexOptions& opts = {});

/// Convenience overload using the problem's own bounds (the LP relaxation).
LpResult solve_lp(const Problem& p, const SimplexOptions& opts = {});

} // namespace gridfc::lp
