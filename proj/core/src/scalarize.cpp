#include <ccpareto/scalarize.hpp>

#include <algorithm>

namespace ccpareto {

double ScalarSubproblem::max_violation(const Vector &x) const
{
    double v = 0.0;
    for (const auto &g : constraints) {
        v = std::max(v, g.eval(x));
    }
    return v;
}

bool ScalarSubproblem::is_smooth() const
{
    return objective.is_smooth()
           && std::all_of(constraints.begin(), constraints.end(), [](const ConvexExpr &g) { return g.is_smooth(); });
}

bool ScalarSubproblem::has_quadratic() const
{
    return objective.has_quadratic()
           || std::any_of(constraints.begin(), constraints.end(), [](const ConvexExpr &g) { return g.has_quadratic(); });
}

namespace {

std::vector<ConvexExpr> anchored_constraints(const VectorProblem &problem, const Vector &x0, double feas_tol)
{
    std::vector<ConvexExpr> cons = problem.constraints();
    for (auto &d : dominance_constraints(problem, x0, feas_tol)) {
        cons.push_back(std::move(d));
    }
    return cons;
}

} // namespace

ScalarSubproblem charnes_cooper(const VectorProblem &problem, const Vector &x0, double feas_tol)
{
    return ScalarSubproblem{
        .objective = ConvexExpr::sum_of(problem.objectives()),
        .constraints = anchored_constraints(problem, x0, feas_tol),
        .box = problem.box(),
        .provenance = Provenance::charnes_cooper,
        .anchor = x0,
    };
}

ScalarSubproblem proximal_charnes_cooper(const VectorProblem &problem, const Vector &x0, bool keep_dominance,
                                         double feas_tol)
{
    require_dimension(x0.size(), problem.dimension(), "proximal_charnes_cooper");
    if (!problem.is_feasible(x0, feas_tol)) {
        throw InfeasiblePointError("proximal_charnes_cooper: anchor point is not feasible");
    }
    // Each of the m summands carries its own 1/2 ||x - x0||^2.
    const double m = problem.num_objectives();
    auto terms = problem.objectives();
    terms.push_back(ConvexExpr::scaled(0.5 * m, ConvexExpr::squared_distance(x0)));
    return ScalarSubproblem{
        .objective = ConvexExpr::sum_of(std::move(terms)),
        .constraints = keep_dominance ? anchored_constraints(problem, x0, feas_tol) : problem.constraints(),
        .box = problem.box(),
        .provenance = Provenance::proximal,
        .anchor = x0,
    };
}

ScalarSubproblem weighted_sum(const VectorProblem &problem, const Vector &tau)
{
    require_dimension(tau.size(), problem.num_objectives(), "weighted_sum weights");
    if ((tau.array() < 0.0).any() || !tau.allFinite()) {
        throw std::invalid_argument("weighted_sum: weights must be finite and nonnegative");
    }
    if ((tau.array() == 0.0).all()) {
        throw std::invalid_argument("weighted_sum: weights must not all be zero");
    }
    std::vector<ConvexExpr> terms;
    for (int i = 0; i < problem.num_objectives(); ++i) {
        if (tau[i] > 0.0) {
            terms.push_back(ConvexExpr::scaled(tau[i], problem.objectives()[i]));
        }
    }
    return ScalarSubproblem{
        .objective = ConvexExpr::sum_of(std::move(terms)),
        .constraints = problem.constraints(),
        .box = problem.box(),
        .provenance = Provenance::weighted_sum,
        .anchor = std::nullopt,
    };
}

const char *to_string(Provenance p)
{
    switch (p) {
    case Provenance::charnes_cooper: return "charnes-cooper";
    case Provenance::proximal: return "proximal";
    case Provenance::weighted_sum: return "weighted-sum";
    }
    return "unknown";
}

} // namespace ccpareto
