#pragma once

#include <ccpareto/types.hpp>

namespace ccpareto {

/// minimize c'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  lower <= x <= upper.
/// Bounds may be infinite; rows may be empty.
struct LinearProgram {
    Vector cost;
    Matrix a_ub;
    Vector b_ub;
    Matrix a_eq;
    Vector b_eq;
    Vector lower;
    Vector upper;

    /// nv variables, no rows, bounds [0, +inf).
    explicit LinearProgram(int num_variables);

    [[nodiscard]] int num_variables() const { return static_cast<int>(cost.size()); }
    void add_less_equal(const Vector &row, double rhs);
    void add_equal(const Vector &row, double rhs);
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vector x;
    double objective = 0.0;
    int iterations = 0;
};

struct SimplexOptions {
    int max_iterations = 200000;
    double pivot_tol = 1e-11;
    double optimality_tol = 1e-11;
    double feasibility_tol = 1e-9;
};

/// Dense two-phase primal simplex with Bland's anti-cycling rule.
LpSolution solve_linear_program(const LinearProgram &lp, const SimplexOptions &options = {});

const char *to_string(LpStatus s);

} // namespace ccpareto
