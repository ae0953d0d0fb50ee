#pragma once

#include <string>
#include <vector>

#include <ccpareto/problem.hpp>

namespace ccpareto {

/// Grid points surviving the non-dominated filter, with their objective vectors.
struct FrontierSet {
    std::vector<Vector> points;
    std::vector<Vector> values;
    int resolution = 0;
    std::string problem_id;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

inline constexpr long long kMaxGridPoints = 10'000'000;

/// Evaluates the feasible (tol 0) points of a uniform box grid with `resolution`
/// points per axis and keeps the non-dominated ones.
FrontierSet grid_pareto(const VectorProblem &problem, int resolution, std::string problem_id = {});

/// Same, for any number of objectives (including one).
FrontierSet grid_pareto(const std::vector<ConvexExpr> &objectives, const std::vector<ConvexExpr> &constraints,
                        const Box &box, int resolution, std::string problem_id = {});

/// Indices (ascending) of vectors not dominated by any other. Equal vectors do not
/// dominate each other, so ties are all kept.
std::vector<std::size_t> nondominated_filter(const std::vector<Vector> &values);

/// Filters an existing set, keeping metadata.
FrontierSet filter(const FrontierSet &set);

/// Grid spacing per axis for a given resolution.
Vector grid_step(const Box &box, int resolution);

} // namespace ccpareto
