#include <ccpareto/oracle.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ccpareto {

namespace {

// a dominates b: a <= b everywhere and a < b somewhere.
bool dominates(const Vector &a, const Vector &b)
{
    bool strict = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
        strict = strict || a[i] < b[i];
    }
    return strict;
}

} // namespace

std::vector<std::size_t> nondominated_filter(const std::vector<Vector> &values)
{
    if (values.empty()) {
        throw std::invalid_argument("nondominated_filter: empty input");
    }
    const auto m = values.front().size();
    for (const auto &v : values) {
        if (v.size() != m) {
            throw DimensionError("nondominated_filter: ragged objective vectors");
        }
    }
    // A dominator precedes what it dominates in lexicographic order, and anything
    // dominated by a dominated vector is dominated by a survivor, so one pass
    // against the survivors found so far suffices.
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto &x = values[a];
        const auto &y = values[b];
        for (Eigen::Index i = 0; i < m; ++i) {
            if (x[i] != y[i]) {
                return x[i] < y[i];
            }
        }
        return false;
    });
    std::vector<std::size_t> survivors;
    if (m == 2) {
        // Sweep by f1: within a run of equal f1 only the smallest f2 survives (with its
        // ties); across runs f2 must drop strictly below every earlier survivor.
        double best_prev = std::numeric_limits<double>::infinity();
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            const double f1 = values[order[i]][0];
            const double f2_min = values[order[i]][1];
            while (j < order.size() && values[order[j]][0] == f1) {
                ++j;
            }
            if (f2_min < best_prev) {
                for (std::size_t q = i; q < j && values[order[q]][1] == f2_min; ++q) {
                    survivors.push_back(order[q]);
                }
                best_prev = f2_min;
            }
            i = j;
        }
    } else {
        for (std::size_t idx : order) {
            const bool dominated = std::any_of(survivors.begin(), survivors.end(),
                                               [&](std::size_t s) { return dominates(values[s], values[idx]); });
            if (!dominated) {
                survivors.push_back(idx);
            }
        }
    }
    std::sort(survivors.begin(), survivors.end());
    return survivors;
}

Vector grid_step(const Box &box, int resolution)
{
    if (resolution < 2) {
        throw std::invalid_argument("grid resolution must be at least 2");
    }
    return (box.hi - box.lo) / static_cast<double>(resolution - 1);
}

FrontierSet grid_pareto(const std::vector<ConvexExpr> &objectives, const std::vector<ConvexExpr> &constraints,
                        const Box &box, int resolution, std::string problem_id)
{
    if (resolution < 2) {
        throw std::invalid_argument("grid_pareto: resolution must be at least 2");
    }
    if (objectives.empty()) {
        throw std::invalid_argument("grid_pareto: need at least one objective");
    }
    const int n = box.dimension();
    long long total = 1;
    for (int d = 0; d < n; ++d) {
        total *= resolution;
        if (total > kMaxGridPoints) {
            throw std::invalid_argument("grid_pareto: grid too large (more than 1e7 points)");
        }
    }
    const Vector step = grid_step(box, resolution);
    std::vector<Vector> points;
    std::vector<Vector> values;
    Vector x(n);
    const auto m = static_cast<Eigen::Index>(objectives.size());
    for (long long c = 0; c < total; ++c) {
        long long rem = c;
        for (int d = 0; d < n; ++d) {
            const auto i = rem % resolution;
            rem /= resolution;
            // Last node pinned to the upper bound to avoid drift.
            x[d] = i == resolution - 1 ? box.hi[d] : box.lo[d] + static_cast<double>(i) * step[d];
        }
        const bool feasible = std::all_of(constraints.begin(), constraints.end(),
                                          [&](const ConvexExpr &g) { return g.eval(x) <= 0.0; });
        if (!feasible) {
            continue;
        }
        Vector f(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            f[i] = objectives[i].eval(x);
        }
        points.push_back(x);
        values.push_back(std::move(f));
    }
    FrontierSet out;
    out.resolution = resolution;
    out.problem_id = std::move(problem_id);
    if (points.empty()) {
        return out;
    }
    for (std::size_t i : nondominated_filter(values)) {
        out.points.push_back(points[i]);
        out.values.push_back(values[i]);
    }
    return out;
}

FrontierSet grid_pareto(const VectorProblem &problem, int resolution, std::string problem_id)
{
    return grid_pareto(problem.objectives(), problem.constraints(), problem.box(), resolution, std::move(problem_id));
}

FrontierSet filter(const FrontierSet &set)
{
    FrontierSet out;
    out.resolution = set.resolution;
    out.problem_id = set.problem_id;
    if (set.values.empty()) {
        return out;
    }
    for (std::size_t i : nondominated_filter(set.values)) {
        out.points.push_back(set.points[i]);
        out.values.push_back(set.values[i]);
    }
    return out;
}

} // namespace ccpareto
