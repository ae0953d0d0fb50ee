#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <ccpareto/problem.hpp>

namespace ccpareto {

/// A library problem with whatever closed-form facts are known about it.
struct NamedProblem {
    std::string id;
    VectorProblem problem;
    std::string pareto_set_description;
    /// Vanishes on the frontier image; empty when no closed form is known.
    std::function<double(const Vector &f)> frontier_residual;
    /// Pareto set parameterized by t in [0, 1].
    std::function<Vector(double t)> pareto_point;
    /// Infinity-norm distance from x to the Pareto set.
    std::function<double(const Vector &x)> pareto_set_distance;

    [[nodiscard]] bool has_analytic_frontier() const { return static_cast<bool>(frontier_residual); }
};

/// Builtins: schaffer, jahn, binh, maxabs, and random-quadratic:SEED:N:M.
NamedProblem get_problem(const std::string &id);

/// m strictly convex quadratics ||A_i x - b_i||^2 on [-10, 10]^n, redrawn until every
/// unconstrained minimizer lies in the box.
NamedProblem random_quadratic(std::uint64_t seed, int n, int m);

/// Ids of the fixed builtins (random-quadratic excluded).
std::vector<std::string> builtin_problem_ids();

} // namespace ccpareto
