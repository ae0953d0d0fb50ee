#include <ccpareto/problem.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace ccpareto {

Box::Box(Vector lower, Vector upper) : lo(std::move(lower)), hi(std::move(upper))
{
    if (lo.size() == 0) {
        throw std::invalid_argument("Box: dimension must be positive");
    }
    require_dimension(hi.size(), static_cast<int>(lo.size()), "Box upper bound");
    if (!lo.allFinite() || !hi.allFinite()) {
        throw std::invalid_argument("Box: bounds must be finite");
    }
    if (!(lo.array() < hi.array()).all()) {
        throw std::invalid_argument("Box: lower bound must be strictly below upper bound in every coordinate");
    }
}

Box Box::uniform(int n, double lower, double upper)
{
    return Box(Vector::Constant(n, lower), Vector::Constant(n, upper));
}

bool Box::contains(const Vector &x) const
{
    require_dimension(x.size(), dimension(), "Box::contains");
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

Vector Box::project(const Vector &x) const
{
    return x.cwiseMax(lo).cwiseMin(hi);
}

VectorProblem::VectorProblem(std::vector<ConvexExpr> objectives, std::vector<ConvexExpr> constraints, Box box)
    : objectives_(std::move(objectives)), constraints_(std::move(constraints)), box_(std::move(box))
{
    if (objectives_.size() < 2) {
        throw std::invalid_argument("VectorProblem: needs at least two objectives, got "
                                    + std::to_string(objectives_.size()));
    }
    const int n = box_.dimension();
    if (n == 0) {
        throw std::invalid_argument("VectorProblem: box is empty");
    }
    for (const auto &f : objectives_) {
        require_dimension(f.dimension(), n, "VectorProblem objective");
    }
    for (const auto &g : constraints_) {
        require_dimension(g.dimension(), n, "VectorProblem constraint");
    }
}

Vector VectorProblem::objective_values(const Vector &x) const
{
    require_dimension(x.size(), dimension(), "VectorProblem::objective_values");
    Vector f(num_objectives());
    for (int i = 0; i < num_objectives(); ++i) {
        f[i] = objectives_[i].eval(x);
    }
    return f;
}

double VectorProblem::max_violation(const Vector &x) const
{
    require_dimension(x.size(), dimension(), "VectorProblem::max_violation");
    double v = 0.0;
    for (const auto &g : constraints_) {
        v = std::max(v, g.eval(x));
    }
    return v;
}

bool VectorProblem::is_feasible(const Vector &x, double tol) const
{
    require_dimension(x.size(), dimension(), "VectorProblem::is_feasible");
    if (!box_.contains(x)) {
        return false;
    }
    return std::all_of(constraints_.begin(), constraints_.end(), [&](const ConvexExpr &g) { return g.eval(x) <= tol; });
}

DominanceVerdict classify_slack(Vector slack, double tol)
{
    const auto better = (slack.array() < -tol).count();
    const auto worse = (slack.array() > tol).count();
    const auto m = slack.size();
    DominanceVerdict v;
    if (better == 0 && worse == 0) {
        v.relation = Dominance::equal;
    } else if (worse == 0) {
        v.relation = better == m ? Dominance::weakly_dominates : Dominance::dominates;
    } else if (better == 0) {
        v.relation = worse == m ? Dominance::weakly_dominated : Dominance::dominated;
    } else {
        v.relation = Dominance::incomparable;
    }
    v.slack = std::move(slack);
    return v;
}

DominanceVerdict compare(const VectorProblem &problem, const Vector &x, const Vector &y, double tol)
{
    return classify_slack(problem.objective_values(x) - problem.objective_values(y), tol);
}

std::vector<ConvexExpr> dominance_constraints(const VectorProblem &problem, const Vector &x0, double feas_tol)
{
    require_dimension(x0.size(), problem.dimension(), "dominance_constraints");
    if (!problem.is_feasible(x0, feas_tol)) {
        throw InfeasiblePointError("dominance_constraints: anchor point is not feasible");
    }
    std::vector<ConvexExpr> out;
    out.reserve(problem.objectives().size());
    for (const auto &f : problem.objectives()) {
        out.push_back(f.shifted(-f.eval(x0)));
    }
    return out;
}

const char *to_string(Dominance d)
{
    switch (d) {
    case Dominance::equal: return "equal";
    case Dominance::dominates: return "dominates";
    case Dominance::weakly_dominates: return "weakly-dominates";
    case Dominance::dominated: return "dominated";
    case Dominance::weakly_dominated: return "weakly-dominated";
    case Dominance::incomparable: return "incomparable";
    }
    return "unknown";
}

} // namespace ccpareto
