#pragma once

#include <vector>

#include <ccpareto/expr.hpp>

namespace ccpareto {

/// Finite axis-aligned box lo <= x <= hi with lo < hi componentwise.
struct Box {
    Vector lo;
    Vector hi;

    Box() = default;
    Box(Vector lower, Vector upper);
    static Box uniform(int n, double lower, double upper);

    [[nodiscard]] int dimension() const { return static_cast<int>(lo.size()); }
    [[nodiscard]] bool contains(const Vector &x) const;
    [[nodiscard]] Vector project(const Vector &x) const;
    [[nodiscard]] Vector center() const { return 0.5 * (lo + hi); }
    [[nodiscard]] double diagonal() const { return (hi - lo).norm(); }
};

/// m >= 2 convex objectives minimized over X = {x in box : g_j(x) <= 0}.
class VectorProblem {
public:
    VectorProblem(std::vector<ConvexExpr> objectives, std::vector<ConvexExpr> constraints, Box box);

    [[nodiscard]] int dimension() const { return box_.dimension(); }
    [[nodiscard]] int num_objectives() const { return static_cast<int>(objectives_.size()); }
    [[nodiscard]] int num_constraints() const { return static_cast<int>(constraints_.size()); }
    [[nodiscard]] const std::vector<ConvexExpr> &objectives() const { return objectives_; }
    [[nodiscard]] const std::vector<ConvexExpr> &constraints() const { return constraints_; }
    [[nodiscard]] const Box &box() const { return box_; }

    [[nodiscard]] Vector objective_values(const Vector &x) const;
    /// max(0, max_j g_j(x)); box membership is not part of this number.
    [[nodiscard]] double max_violation(const Vector &x) const;
    /// Box membership is exact; constraints may exceed zero by at most tol.
    [[nodiscard]] bool is_feasible(const Vector &x, double tol = 0.0) const;

private:
    std::vector<ConvexExpr> objectives_;
    std::vector<ConvexExpr> constraints_;
    Box box_;
};

/// Relation of x to y under the componentwise order, with a dead band of width tol.
enum class Dominance {
    equal,              ///< |f_i(x) - f_i(y)| <= tol for every i
    dominates,          ///< f(x) <= f(y) + tol everywhere, strictly better (beyond tol) somewhere
    weakly_dominates,   ///< strictly better beyond tol in every objective
    dominated,          ///< y dominates x
    weakly_dominated,   ///< y weakly dominates x
    incomparable,
};

struct DominanceVerdict {
    Dominance relation = Dominance::incomparable;
    Vector slack; ///< f(x) - f(y)

    /// True for both Pareto-improving relations.
    [[nodiscard]] bool x_dominates() const
    {
        return relation == Dominance::dominates || relation == Dominance::weakly_dominates;
    }
};

/// Classify a slack vector d = f(x) - f(y).
DominanceVerdict classify_slack(Vector slack, double tol);

DominanceVerdict compare(const VectorProblem &problem, const Vector &x, const Vector &y, double tol = 0.0);

/// The m expressions f_i(.) - f_i(x0) that cut X down to the dominance region of x0.
/// Throws InfeasiblePointError when x0 is not feasible at feas_tol.
std::vector<ConvexExpr> dominance_constraints(const VectorProblem &problem, const Vector &x0, double feas_tol = 1e-9);

const char *to_string(Dominance d);

} // namespace ccpareto
