#include "gridfc/feasibility.hpp"

#include <cmath>
#include <stdexcept>

namespace gridfc::lp {

std::string ViolationReport::to_text() const {
    if (items.empty()) return "feasible: no violations\n";
    std::string out;
    for (const auto& v : items)
        out += v.kind + " " + v.name + " violated by " + format_number(v.violation) +
               " (slack " + format_number(v.slack) + ")\n";
    return out;
}

std::string ViolationReport::to_csv() const {
    std::string out = "name,kind,violation,slack\n";
    for (const auto& v : items)
        out += v.name + "," + v.kind + "," + format_number(v.violation) + "," +
               format_number(v.slack) + "\n";
    return out;
}

ViolationReport check_feasible(const Problem& p, const Eigen::VectorXd& x, double tol) {
    if (x.size() != p.num_variables())
        throw std::invalid_argument("assignment covers " + std::to_string(x.size()) +
                                    " variables, problem has " +
                                    std::to_string(p.num_variables()));
    ViolationReport rep;
    for (const auto& c : p.constraints) {
        double act = 0.0;
        for (const auto& [j, coef] : c.terms) act += coef * x[j];
        double slack = 0.0;
        switch (c.rel) {
            case Relation::LessEqual: slack = c.rhs - act; break;
            case Relation::GreaterEqual: slack = act - c.rhs; break;
            case Relation::Equal: slack = -std::abs(act - c.rhs); break;
        }
        if (slack < -tol) rep.items.push_back({c.name, "row", -slack, slack});
    }
    for (int j = 0; j < p.num_variables(); ++j) {
        const auto& v = p.variables[static_cast<std::size_t>(j)];
        const double lo_slack = x[j] - v.lower;
        const double up_slack = v.upper - x[j];
        if (lo_slack < -tol) rep.items.push_back({v.name, "bound", -lo_slack, lo_slack});
        if (up_slack < -tol) rep.items.push_back({v.name, "bound", -up_slack, up_slack});
        if (v.integral) {
            const double f = std::abs(x[j] - std::round(x[j]));
            if (f > tol) rep.items.push_back({v.name, "integrality", f, -f});
        }
    }
    return rep;
}

} // namespace gridfc::lp
