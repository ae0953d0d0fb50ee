#pragma once

#include <optional>
#include <vector>

#include <ccpareto/scalarize.hpp>
#include <ccpareto/simplex.hpp>

namespace ccpareto {

enum class Backend { automatic, lp, penalty_subgradient };
enum class SolveStatus { optimal, iteration_budget_reached, infeasible_detected };

/// Knobs for the inner solvers. The subgradient phase runs in stages of
/// restart_period iterations; within a stage the step along the normalized
/// subgradient is scale * diag(box) * step_a / (step_b + t), t counted from the
/// stage start, and each stage restarts from the best point with a smaller scale.
struct SolverConfig {
    double feas_tol = 1e-8;
    int budget = 200000;
    double step_a = 100.0;
    double step_b = 100.0;
    double initial_penalty = 10.0;
    double penalty_growth = 2.0;
    double penalty_cap = 1e10;
    int penalty_period = 1000;   // iterations between penalty increases while the best point is infeasible
    int restart_period = 5000;
    double restart_shrink = 0.3;
    double min_relative_step = 1e-12; // stop once scale * step_a / step_b drops below this
    bool polish = true;          // augmented-Lagrangian refinement when every term is smooth or piecewise linear
    Backend backend = Backend::automatic;

    void validate() const;
};

struct SolveResult {
    Vector x;
    double objective = 0.0;
    double max_violation = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::optimal;
    Backend backend = Backend::automatic;
};

/// Dispatch on cfg.backend. `automatic` picks the simplex path when objective and all
/// constraints are piecewise linear and the penalty path otherwise. The warm start, if
/// any, must lie in the box; it seeds the penalty path and is ignored by the LP path.
SolveResult solve(const ScalarSubproblem &problem, const SolverConfig &cfg = {},
                  const std::optional<Vector> &warm_start = std::nullopt);

/// min t  s.t.  <a_p,x> + b_p <= t (objective pieces), <a_q,x> + b_q <= 0 (constraint pieces), x in box.
SolveResult solve_lp(const PiecewiseLinearForm &objective, const std::vector<PiecewiseLinearForm> &constraints,
                     const Box &box, const SimplexOptions &options = {});

/// Projected subgradient descent on objective + rho * sum_j max(0, g_j), keeping the best
/// feasible-enough iterate. rho grows while the best iterate is infeasible. When cfg.polish
/// is set and every term is smooth or piecewise linear, the result is then refined.
SolveResult solve_penalty_subgradient(const ScalarSubproblem &problem, const SolverConfig &cfg, const Vector &start);

const char *to_string(Backend b);
const char *to_string(SolveStatus s);
Backend parse_backend(const std::string &name);

} // namespace ccpareto
