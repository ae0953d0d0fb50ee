#include <ccpareto/bench.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

namespace ccpareto {

namespace {

using E = ConvexExpr;

// Infinity-norm distance from x to the arc {(cos a, sin a) : a in [pi, 3pi/2]}. The
// distance along the arc is sampled, then every sampled local minimum is refined by
// golden-section search on its bracket.
double arc_inf_distance(const Vector &x)
{
    constexpr int kSamples = 2048;
    const double lo = std::numbers::pi;
    const double width = 0.5 * std::numbers::pi;
    auto dist = [&](double a) { return std::max(std::abs(x[0] - std::cos(a)), std::abs(x[1] - std::sin(a))); };
    std::vector<double> d(kSamples + 1);
    for (int i = 0; i <= kSamples; ++i) {
        d[i] = dist(lo + width * i / kSamples);
    }
    double best = *std::min_element(d.begin(), d.end());
    for (int i = 0; i <= kSamples; ++i) {
        if ((i > 0 && d[i - 1] < d[i]) || (i < kSamples && d[i + 1] < d[i])) {
            continue;
        }
        double a = lo + width * std::max(0, i - 1) / kSamples;
        double b = lo + width * std::min(kSamples, i + 1) / kSamples;
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - r * (b - a);
        double e = a + r * (b - a);
        double fc = dist(c);
        double fe = dist(e);
        for (int it = 0; it < 80; ++it) {
            if (fc < fe) {
                b = e;
                e = c;
                fe = fc;
                c = b - r * (b - a);
                fc = dist(c);
            } else {
                a = c;
                c = e;
                fc = fe;
                e = a + r * (b - a);
                fe = dist(e);
            }
        }
        best = std::min({best, fc, fe});
    }
    return best;
}

NamedProblem schaffer()
{
    const Vector two = Vector::Constant(1, 2.0);
    VectorProblem p({E::squared_distance(Vector::Zero(1)), E::squared_distance(two)}, {}, Box::uniform(1, -10.0, 10.0));
    return NamedProblem{
        .id = "schaffer",
        .problem = std::move(p),
        .pareto_set_description = "[0, 2]",
        .frontier_residual = [](const Vector &f) { return std::sqrt(std::max(0.0, f[0])) + std::sqrt(std::max(0.0, f[1])) - 2.0; },
        .pareto_point = [](double t) { return Vector::Constant(1, 2.0 * t); },
        .pareto_set_distance = [](const Vector &x) { return std::max({0.0, -x[0], x[0] - 2.0}); },
    };
}

NamedProblem jahn()
{
    Matrix q = Matrix::Identity(2, 2);
    VectorProblem p({E::coordinate(2, 0), E::coordinate(2, 1)}, {E::quadratic(q, Vector::Zero(2), -1.0)},
                    Box::uniform(2, -1.0, 1.0));
    return NamedProblem{
        .id = "jahn",
        .problem = std::move(p),
        .pareto_set_description = "unit circle arc with x1, x2 <= 0",
        .frontier_residual = [](const Vector &f) { return f[0] * f[0] + f[1] * f[1] - 1.0; },
        .pareto_point =
            [](double t) {
                const double a = std::numbers::pi * (1.0 + 0.5 * t);
                return Vector{{std::cos(a), std::sin(a)}};
            },
        .pareto_set_distance = [](const Vector &x) { return arc_inf_distance(x); },
    };
}

NamedProblem binh()
{
    const Matrix q4 = 4.0 * Matrix::Identity(2, 2);
    VectorProblem p({E::quadratic(q4, Vector::Zero(2), 0.0), E::squared_distance(Vector::Constant(2, 5.0))}, {},
                    Box::uniform(2, -5.0, 10.0));
    return NamedProblem{
        .id = "binh",
        .problem = std::move(p),
        .pareto_set_description = "{(t, t) : t in [0, 5]}",
        .frontier_residual =
            [](const Vector &f) {
                return std::sqrt(std::max(0.0, f[0]) / 8.0) + std::sqrt(std::max(0.0, f[1]) / 2.0) - 5.0;
            },
        .pareto_point = [](double t) { return Vector::Constant(2, 5.0 * t); },
        .pareto_set_distance =
            [](const Vector &x) {
                const double s = std::clamp(0.5 * (x[0] + x[1]), 0.0, 5.0);
                return std::max(std::abs(x[0] - s), std::abs(x[1] - s));
            },
    };
}

NamedProblem maxabs()
{
    VectorProblem p({E::max_of({E::coordinate(2, 0), E::coordinate(2, 1)}),
                     E::sum_of({E::abs_coordinate(2, 0), E::abs_coordinate(2, 1)})},
                    {}, Box::uniform(2, -2.0, 2.0));
    return NamedProblem{
        .id = "maxabs",
        .problem = std::move(p),
        .pareto_set_description = "{(t, t) : t in [-2, 0]}",
        .frontier_residual = [](const Vector &f) { return f[1] + 2.0 * f[0]; },
        .pareto_point = [](double t) { return Vector::Constant(2, -2.0 * t); },
        .pareto_set_distance =
            [](const Vector &x) {
                const double s = std::clamp(0.5 * (x[0] + x[1]), -2.0, 0.0);
                return std::max(std::abs(x[0] - s), std::abs(x[1] - s));
            },
    };
}

double uniform(std::mt19937_64 &rng, double lo, double hi)
{
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

} // namespace

NamedProblem random_quadratic(std::uint64_t seed, int n, int m)
{
    if (n < 1 || n > 10) {
        throw std::invalid_argument("random_quadratic: n must lie in [1, 10]");
    }
    if (m < 2 || m > 5) {
        throw std::invalid_argument("random_quadratic: m must lie in [2, 5]");
    }
    std::mt19937_64 rng(seed);
    const Box box = Box::uniform(n, -10.0, 10.0);
    std::vector<ConvexExpr> objectives;
    for (int i = 0; i < m; ++i) {
        for (;;) {
            Matrix a(n, n);
            Vector b(n);
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) {
                    a(r, c) = uniform(rng, -1.0, 1.0);
                }
            }
            for (int r = 0; r < n; ++r) {
                b[r] = uniform(rng, -5.0, 5.0);
            }
            const Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
            if (svd.singularValues().minCoeff() < 0.05) {
                continue;
            }
            const Vector minimizer = svd.solve(b);
            if (!box.contains(minimizer)) {
                continue;
            }
            // ||Ax - b||^2 = x'(A'A)x - 2(A'b)'x + b'b
            objectives.push_back(E::quadratic(a.transpose() * a, -2.0 * a.transpose() * b, b.squaredNorm()));
            break;
        }
    }
    return NamedProblem{
        .id = "random-quadratic:" + std::to_string(seed) + ":" + std::to_string(n) + ":" + std::to_string(m),
        .problem = VectorProblem(std::move(objectives), {}, box),
        .pareto_set_description = "",
        .frontier_residual = {},
        .pareto_point = {},
        .pareto_set_distance = {},
    };
}

std::vector<std::string> builtin_problem_ids()
{
    return {"schaffer", "jahn", "binh", "maxabs"};
}

NamedProblem get_problem(const std::string &id)
{
    if (id == "schaffer") {
        return schaffer();
    }
    if (id == "jahn") {
        return jahn();
    }
    if (id == "binh") {
        return binh();
    }
    if (id == "maxabs") {
        return maxabs();
    }
    const std::string prefix = "random-quadratic:";
    if (id.rfind(prefix, 0) == 0) {
        const std::string rest = id.substr(prefix.size());
        const auto c1 = rest.find(':');
        const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw std::invalid_argument("random-quadratic id must look like random-quadratic:SEED:N:M");
        }
        std::uint64_t seed = 0;
        int n = 0;
        int m = 0;
        try {
            seed = std::stoull(rest.substr(0, c1));
            n = std::stoi(rest.substr(c1 + 1, c2 - c1 - 1));
            m = std::stoi(rest.substr(c2 + 1));
        } catch (const std::logic_error &) {
            throw std::invalid_argument("random-quadratic id must look like random-quadratic:SEED:N:M");
        }
        return random_quadratic(seed, n, m);
    }
    throw std::invalid_argument("unknown problem id '" + id + "'");
}

} // namespace ccpareto
