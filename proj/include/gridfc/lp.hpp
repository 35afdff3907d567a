#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace gridfc::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    bool integral = false;
};

struct Constraint {
    std::string name;
    std::vector<std::pair<int, double>> terms; ///< (variable index, coefficient)
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
};

/// Sparse linear program with integrality marks. Minimization.
struct Problem {
    std::vector<Variable> variables;
    std::vector<double> objective; ///< dense, aligned with variables
    std::vector<Constraint> constraints;

    int add_variable(std::string name, double lower, double upper, bool integral = false);
    int add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, true); }
    void set_objective(int var, double coeff);
    int add_constraint(std::string name, std::vector<std::pair<int, double>> terms, Relation rel,
                       double rhs);

    int num_variables() const { return static_cast<int>(variables.size()); }
    int num_constraints() const { return static_cast<int>(constraints.size()); }
    int num_integers() const;

    /// Checks bound ordering and term indices; throws std::invalid_argument on defects.
    void validate() const;
};

/// Relation as text, for dumps and reports.
std::string relation_text(Relation rel);

/// Shortest round-trip decimal representation of a double.
std::string format_number(double v);

/// Human-readable problem listing: objective, one constraint per line, bounds.
std::string dump(const Problem& p);

} // namespace gridfc::lp
