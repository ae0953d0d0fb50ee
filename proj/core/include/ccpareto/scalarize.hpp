#pragma once

#include <optional>
#include <vector>

#include <ccpareto/problem.hpp>

namespace ccpareto {

enum class Provenance { charnes_cooper, proximal, weighted_sum };

/// Single-objective convex program: minimize objective over {x in box : constraints(x) <= 0}.
struct ScalarSubproblem {
    ConvexExpr objective;
    std::vector<ConvexExpr> constraints;
    Box box;
    Provenance provenance = Provenance::charnes_cooper;
    std::optional<Vector> anchor;

    [[nodiscard]] int dimension() const { return box.dimension(); }
    [[nodiscard]] double max_violation(const Vector &x) const;
    [[nodiscard]] bool is_smooth() const;
    [[nodiscard]] bool has_quadratic() const;
};

/// Anchor feasibility tolerance used when none is given explicitly.
inline constexpr double kAnchorFeasTol = 1e-8;

/// min sum_i f_i(x)  s.t.  f_i(x) <= f_i(x0), g_j(x) <= 0, x in box.
ScalarSubproblem charnes_cooper(const VectorProblem &problem, const Vector &x0, double feas_tol = kAnchorFeasTol);

/// min sum_i (f_i(x) + 1/2 ||x - x0||^2). With keep_dominance the feasible set is that of
/// charnes_cooper(problem, x0); without it only X remains.
ScalarSubproblem proximal_charnes_cooper(const VectorProblem &problem, const Vector &x0, bool keep_dominance = true,
                                         double feas_tol = kAnchorFeasTol);

/// min sum_i tau_i f_i(x) over X. tau must be nonnegative and not all zero.
ScalarSubproblem weighted_sum(const VectorProblem &problem, const Vector &tau);

const char *to_string(Provenance p);

} // namespace ccpareto
