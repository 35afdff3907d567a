#pragma once

#include "gridfc/lp.hpp"

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gridfc::lp {

struct Violation {
    std::string name;    ///< constraint or variable name
    std::string kind;    ///< "row", "bound" or "integrality"
    double violation;    ///< amount beyond the tolerance-free limit (positive)
    double slack;        ///< signed distance to the limit (negative = violated)
};

struct ViolationReport {
    std::vector<Violation> items;

    bool feasible() const { return items.empty(); }
    std::string to_text() const;
    /// Machine-readable rows: name,kind,violation,slack
    std::string to_csv() const;
};

/// Independent row-by-row evaluation of an assignment against the problem.
/// Lists every constraint, bound and integrality violation beyond tol.
/// Throws std::invalid_argument when the assignment does not cover all variables.
ViolationReport check_feasible(const Problem& p, const Eigen::VectorXd& x, double tol = 1e-6);

} // namespace gridfc::lp
