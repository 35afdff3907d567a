#include "gridfc/lp.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace gridfc::lp {

int Problem::add_variable(std::string name, double lower, double upper, bool integral) {
    variables.push_back({std::move(name), lower, upper, integral});
    objective.push_back(0.0);
    return static_cast<int>(variables.size()) - 1;
}

void Problem::set_objective(int var, double coeff) { objective.at(static_cast<std::size_t>(var)) = coeff; }

int Problem::add_constraint(std::string name, std::vector<std::pair<int, double>> terms,
                            Relation rel, double rhs) {
    constraints.push_back({std::move(name), std::move(terms), rel, rhs});
    return static_cast<int>(constraints.size()) - 1;
}

int Problem::num_integers() const {
    int n = 0;
    for (const auto& v : variables) n += v.integral ? 1 : 0;
    return n;
}

void Problem::validate() const {
    if (objective.size() != variables.size())
        throw std::invalid_argument("objective length does not match variable count");
    for (const auto& v : variables) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
            throw std::invalid_argument("variable '" + v.name + "' has inconsistent bounds");
    }
    const int n = num_variables();
    for (const auto& c : constraints) {
        for (const auto& [j, coef] : c.terms) {
            if (j < 0 || j >= n)
                throw std::invalid_argument("constraint '" + c.name + "' references unknown variable");
            if (!std::isfinite(coef))
                throw std::invalid_argument("constraint '" + c.name + "' has non-finite coefficient");
        }
    }
}

std::string relation_text(Relation rel) {
    switch (rel) {
        case Relation::LessEqual: return "<=";
        case Relation::GreaterEqual: return ">=";
        case Relation::Equal: return "=";
    }
    return "?";
}

std::string format_number(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string dump(const Problem& p) {
    std::string out;
    out += "min:";
    for (int j = 0; j < p.num_variables(); ++j) {
        if (p.objective[static_cast<std::size_t>(j)] == 0.0) continue;
        out += " + " + format_number(p.objective[static_cast<std::size_t>(j)]) + " " +
               p.variables[static_cast<std::size_t>(j)].name;
    }
    out += "\n";
    for (const auto& c : p.constraints) {
        out += c.name + ":";
        for (const auto& [j, coef] : c.terms)
            out += " + " + format_number(coef) + " " + p.variables[static_cast<std::size_t>(j)].name;
        out += " " + relation_text(c.rel) + " " + format_number(c.rhs) + "\n";
    }
    for (const auto& v : p.variables) {
        out += "var " + v.name + " in [" + format_number(v.lower) + ", " + format_number(v.upper) +
               "]" + (v.integral ? " integer" : "") + "\n";
    }
    return out;
}

} // namespace gridfc::lp
