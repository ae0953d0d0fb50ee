#include <cmath>

#include <gtest/gtest.h>

#include <ccpareto/bench.hpp>
#include <ccpareto/oracle.hpp>

using namespace ccpareto;

namespace {

Vector vec(std::initializer_list<double> v)
{
    Vector out(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double x : v) {
        out[i++] = x;
    }
    return out;
}

} // namespace

TEST(Builtins, SchafferDefinition)
{
    const auto p = get_problem("schaffer").problem;
    EXPECT_EQ(p.box().lo, vec({-10}));
    EXPECT_EQ(p.box().hi, vec({10}));
    EXPECT_EQ(p.num_constraints(), 0);
    EXPECT_EQ(p.objective_values(vec({3})), vec({9, 1}));
}

TEST(Builtins, JahnDefinition)
{
    const auto p = get_problem("jahn").problem;
    EXPECT_EQ(p.num_constraints(), 1);
    EXPECT_EQ(p.objective_values(vec({0.3, -0.4})), vec({0.3, -0.4}));
    EXPECT_DOUBLE_EQ(p.constraints()[0].eval(vec({0.6, 0.8})), 0.0);
}

TEST(Builtins, BinhDefinition)
{
    const auto p = get_problem("binh").problem;
    EXPECT_EQ(p.box().lo, vec({-5, -5}));
    EXPECT_EQ(p.box().hi, vec({10, 10}));
    EXPECT_EQ(p.objective_values(vec({1, 2})), vec({4 * 1 + 4 * 4, 16 + 9}));
}

TEST(Builtins, MaxAbsDefinition)
{
    const auto p = get_problem("maxabs").problem;
    EXPECT_EQ(p.box().lo, vec({-2, -2}));
    EXPECT_EQ(p.box().hi, vec({2, 2}));
    EXPECT_EQ(p.objective_values(vec({1, -1.5})), vec({1, 2.5}));
}

TEST(Builtins, UnknownIdThrows)
{
    EXPECT_THROW(get_problem("zdt1"), std::invalid_argument);
    EXPECT_THROW(get_problem("random-quadratic:1:2"), std::invalid_argument);
    EXPECT_THROW(get_problem("random-quadratic:x:2:2"), std::invalid_argument);
}

TEST(Builtins, ResidualVanishesOnParameterization)
{
    for (const auto &id : builtin_problem_ids()) {
        const auto named = get_problem(id);
        ASSERT_TRUE(named.has_analytic_frontier());
        for (int i = 0; i <= 100; ++i) {
            const Vector x = named.pareto_point(i / 100.0);
            EXPECT_TRUE(named.problem.is_feasible(x, 1e-12)) << id;
            EXPECT_LE(std::abs(named.frontier_residual(named.problem.objective_values(x))), 1e-12) << id;
            EXPECT_LE(named.pareto_set_distance(x), 1e-12) << id;
        }
    }
}

TEST(Builtins, ResidualSmallOnOracleFrontier)
{
    for (const auto &id : builtin_problem_ids()) {
        const auto named = get_problem(id);
        const auto set = grid_pareto(named.problem, 401);
        for (const auto &f : set.values) {
            EXPECT_LE(std::abs(named.frontier_residual(f)), 0.05) << id;
        }
    }
}

TEST(Builtins, MaxAbsFactsEstablishedByOracle)
{
    const auto named = get_problem("maxabs");
    const auto set = grid_pareto(named.problem, 801);
    const double step = grid_step(named.problem.box(), 801).maxCoeff();
    bool lower_end = false;
    bool upper_end = false;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const Vector &x = set.points[i];
        EXPECT_LE(named.pareto_set_distance(x), step + 1e-12);
        EXPECT_LE(std::abs(named.frontier_residual(set.values[i])), 2 * step + 1e-12);
        lower_end = lower_end || (x - vec({-2, -2})).norm() < 1e-12;
        upper_end = upper_end || x.norm() < 1e-12;
    }
    EXPECT_TRUE(lower_end);
    EXPECT_TRUE(upper_end);
}

TEST(Builtins, DistanceFunctionsAgreeWithSampledSets)
{
    for (const auto &id : builtin_problem_ids()) {
        const auto named = get_problem(id);
        const Box &box = named.problem.box();
        for (int k = 0; k < 50; ++k) {
            Vector x = box.lo + (box.hi - box.lo) * ((k * 0.6180339887) - std::floor(k * 0.6180339887));
            if (x.size() == 2) {
                x[1] = box.lo[1] + (box.hi[1] - box.lo[1]) * ((k * 0.41421356) - std::floor(k * 0.41421356));
            }
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 20000; ++i) {
                best = std::min(best, (named.pareto_point(i / 20000.0) - x).cwiseAbs().maxCoeff());
            }
            EXPECT_LE(named.pareto_set_distance(x), best + 1e-12) << id;
            EXPECT_GE(named.pareto_set_distance(x), best - 5e-4) << id;
        }
    }
}

TEST(RandomQuadratic, GoldenSeedZero)
{
    const auto named = random_quadratic(0, 1, 2);
    EXPECT_EQ(named.id, "random-quadratic:0:1:2");
    EXPECT_FALSE(named.has_analytic_frontier());
    const auto &p = named.problem;
    EXPECT_EQ(p.box().lo, vec({-10}));
    const double xs[] = {-1.0, 0.0, 2.5};
    const double f1[] = {17.986410298525797, 24.220690736158804, 43.85731127647874};
    const double f2[] = {0.002925152463208014, 0.9505209253947807, 10.739394226374323};
    for (int i = 0; i < 3; ++i) {
        const Vector f = p.objective_values(vec({xs[i]}));
        EXPECT_NEAR(f[0], f1[i], 1e-12 * f1[i]);
        EXPECT_NEAR(f[1], f2[i], 1e-12 * (1 + f2[i]));
    }
}

TEST(RandomQuadratic, DeterministicAndWellFormed)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (int n : {1, 3, 10}) {
            for (int m : {2, 5}) {
                const auto a = random_quadratic(seed, n, m);
                const auto b = get_problem(a.id);
                ASSERT_EQ(a.problem.num_objectives(), m);
                for (int i = 0; i < m; ++i) {
                    const auto &fa = a.problem.objectives()[i];
                    const auto &fb = b.problem.objectives()[i];
                    EXPECT_EQ(fa.quadratic_matrix(), fb.quadratic_matrix());
                    EXPECT_EQ(fa.linear(), fb.linear());
                    // Strictly convex with its minimizer -Q^{-1} c / 2 inside the box.
                    const Eigen::SelfAdjointEigenSolver<Matrix> eig(fa.quadratic_matrix());
                    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
                    const Vector xmin = fa.quadratic_matrix().ldlt().solve(-0.5 * fa.linear());
                    EXPECT_TRUE(a.problem.box().contains(xmin));
                    EXPECT_NEAR(fa.eval(xmin), 0.0, 1e-8);
                }
            }
        }
    }
}

TEST(RandomQuadratic, RangeChecks)
{
    EXPECT_THROW(random_quadratic(0, 0, 2), std::invalid_argument);
    EXPECT_THROW(random_quadratic(0, 11, 2), std::invalid_argument);
    EXPECT_THROW(random_quadratic(0, 2, 1), std::invalid_argument);
    EXPECT_THROW(random_quadratic(0, 2, 6), std::invalid_argument);
}
