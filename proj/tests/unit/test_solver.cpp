#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <ccpareto/bench.hpp>
#include <ccpareto/scalarize.hpp>
#include <ccpareto/solver.hpp>

#include "test_support.hpp"

using namespace ccpareto;
using ccpareto::testing::random_pl_instance;
using ccpareto::testing::vertex_enumeration_minimum;

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

SolverConfig with_backend(Backend b)
{
    SolverConfig cfg;
    cfg.backend = b;
    return cfg;
}

PiecewiseLinearForm form(const ConvexExpr &e)
{
    return *e.to_piecewise_linear();
}

} // namespace

TEST(SolverConfig, Validation)
{
    SolverConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.feas_tol = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.budget = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.penalty_growth = 1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Solve, LinearOverBox)
{
    const Box box = Box::uniform(2, -1, 1);
    const ScalarSubproblem s{ConvexExpr::affine(vec({1, 1})), {}, box, Provenance::weighted_sum, std::nullopt};
    for (auto b : {Backend::automatic, Backend::lp}) {
        const auto r = solve(s, with_backend(b));
        EXPECT_EQ(r.status, SolveStatus::optimal);
        EXPECT_EQ(r.backend, Backend::lp);
        EXPECT_NEAR(r.x[0], -1.0, 1e-12);
        EXPECT_NEAR(r.x[1], -1.0, 1e-12);
        EXPECT_NEAR(r.objective, -2.0, 1e-12);
    }
    const auto rp = solve(s, with_backend(Backend::penalty_subgradient));
    EXPECT_NEAR(rp.objective, -2.0, 1e-6);
}

TEST(Solve, JahnCharnesCooperPenalty)
{
    const auto p = get_problem("jahn").problem;
    const auto r = solve(charnes_cooper(p, vec({0, 0})), with_backend(Backend::penalty_subgradient), vec({0, 0}));
    EXPECT_EQ(r.backend, Backend::penalty_subgradient);
    EXPECT_NEAR(r.x[0], -std::sqrt(0.5), 1e-3);
    EXPECT_NEAR(r.x[1], -std::sqrt(0.5), 1e-3);
    EXPECT_LE(r.max_violation, 1e-8);
}

TEST(Solve, MaxAbsCharnesCooperLp)
{
    const auto p = get_problem("maxabs").problem;
    const auto r = solve(charnes_cooper(p, vec({-2, -1})), with_backend(Backend::lp), vec({-2, -1}));
    EXPECT_EQ(r.status, SolveStatus::optimal);
    EXPECT_NEAR(r.x[0], -1.0, 1e-12);
    EXPECT_NEAR(r.x[1], -1.0, 1e-12);
    EXPECT_NEAR(r.objective, 1.0, 1e-12);
}

TEST(Solve, ForcingLpOnQuadraticThrows)
{
    const auto p = get_problem("schaffer").problem;
    EXPECT_THROW(solve(charnes_cooper(p, vec({5})), with_backend(Backend::lp)), std::invalid_argument);
}

TEST(Solve, WarmStartOutsideBoxThrows)
{
    const auto p = get_problem("schaffer").problem;
    EXPECT_THROW(solve(charnes_cooper(p, vec({5})), {}, vec({11})), std::invalid_argument);
}

TEST(SolveLp, BoxVertex)
{
    const auto r = solve_lp(form(ConvexExpr::coordinate(2, 0)), {}, Box::uniform(2, -2, 2));
    EXPECT_DOUBLE_EQ(r.x[0], -2.0);
}

TEST(SolveLp, MaxPlusL1)
{
    const auto mx = ConvexExpr::max_of({ConvexExpr::coordinate(2, 0), ConvexExpr::coordinate(2, 1)});
    const auto l1 = ConvexExpr::abs_coordinate(2, 0) + ConvexExpr::abs_coordinate(2, 1);
    const auto r = solve_lp(form(mx + l1), {form(mx.shifted(-1)), form(l1.shifted(-2))}, Box::uniform(2, -2, 2));
    EXPECT_EQ(r.status, SolveStatus::optimal);
    EXPECT_NEAR(r.objective, 0.0, 1e-12);
    EXPECT_NEAR(r.x[0], 0.0, 1e-12);
    EXPECT_NEAR(r.x[1], 0.0, 1e-12);
}

TEST(SolveLp, DegenerateSinglePoint)
{
    const auto x = ConvexExpr::coordinate(1, 0);
    const auto r = solve_lp(form(x), {form(x.shifted(1)), form(ConvexExpr::affine(vec({-1}), -1))},
                            Box::uniform(1, -2, 2));
    EXPECT_EQ(r.status, SolveStatus::optimal);
    EXPECT_NEAR(r.x[0], -1.0, 1e-12);
}

TEST(SolveLp, InfeasibleDetected)
{
    const auto x = ConvexExpr::coordinate(1, 0);
    const auto r = solve_lp(form(x), {form(x.shifted(1)), form(ConvexExpr::affine(vec({-1}), 0.5))},
                            Box::uniform(1, -2, 2));
    EXPECT_EQ(r.status, SolveStatus::infeasible_detected);
}

TEST(Penalty, UnconstrainedSquare)
{
    const ScalarSubproblem s{ConvexExpr::quadratic(Matrix::Identity(1, 1), Vector::Zero(1)), {},
                             Box::uniform(1, -10, 10), Provenance::weighted_sum, std::nullopt};
    SolverConfig cfg;
    cfg.budget = 10000;
    const auto r = solve_penalty_subgradient(s, cfg, vec({5}));
    EXPECT_LE(std::abs(r.x[0]), 1e-3);
}

TEST(Penalty, SchafferCharnesCooperFromFive)
{
    const auto p = get_problem("schaffer").problem;
    const auto r = solve_penalty_subgradient(charnes_cooper(p, vec({5})), {}, vec({5}));
    EXPECT_NEAR(r.x[0], 1.0, 1e-3);
    EXPECT_EQ(r.status, SolveStatus::optimal);
}

TEST(Penalty, BinhOriginIsReturned)
{
    const auto p = get_problem("binh").problem;
    const auto r = solve_penalty_subgradient(charnes_cooper(p, vec({0, 0})), {}, vec({0, 0}));
    EXPECT_EQ(r.x, vec({0, 0}));
    EXPECT_EQ(r.max_violation, 0.0);
}

TEST(Penalty, StartOutsideBoxThrows)
{
    const auto p = get_problem("binh").problem;
    EXPECT_THROW(solve_penalty_subgradient(charnes_cooper(p, vec({0, 0})), {}, vec({20, 0})), std::invalid_argument);
}

TEST(Penalty, InfeasibleDetectedAtCap)
{
    // x >= 1.5 and x <= 1 cannot both hold.
    const auto x = ConvexExpr::coordinate(1, 0);
    const ScalarSubproblem s{x, {x.shifted(-1), ConvexExpr::affine(vec({-1}), 1.5)}, Box::uniform(1, -2, 2),
                             Provenance::charnes_cooper, std::nullopt};
    SolverConfig cfg;
    cfg.penalty_cap = 1e4;
    cfg.penalty_period = 100;
    const auto r = solve_penalty_subgradient(s, cfg, vec({0}));
    EXPECT_EQ(r.status, SolveStatus::infeasible_detected);
    EXPECT_GT(r.max_violation, 1e-8);
}

TEST(SolverProperty, ResultFieldsAreRecomputed)
{
    for (const auto &id : builtin_problem_ids()) {
        const auto named = get_problem(id);
        const auto &p = named.problem;
        const Vector x0 = named.pareto_point(0.3);
        const auto s = charnes_cooper(p, p.box().project(x0 + Vector::Constant(p.dimension(), 0.01)), 1.0);
        const auto r = solve(s, {}, s.anchor);
        EXPECT_NEAR(r.objective, s.objective.eval(r.x), 1e-12 * (1 + std::abs(r.objective)));
        double viol = 0.0;
        for (const auto &g : s.constraints) {
            viol = std::max(viol, g.eval(r.x));
        }
        EXPECT_DOUBLE_EQ(r.max_violation, viol);
    }
}

TEST(SolverProperty, NeverWorseThanFeasibleWarmStart)
{
    std::mt19937_64 rng(12);
    for (const auto &id : builtin_problem_ids()) {
        const auto &p = get_problem(id).problem;
        int tested = 0;
        while (tested < 10) {
            const Vector x0 = ccpareto::testing::uniform_point(rng, p.box());
            if (!p.is_feasible(x0)) {
                continue;
            }
            const auto s = charnes_cooper(p, x0);
            const auto r = solve(s, {}, x0);
            EXPECT_LE(r.objective, s.objective.eval(x0));
            ++tested;
        }
    }
}

TEST(SolverProperty, Deterministic)
{
    const auto p = get_problem("jahn").problem;
    const auto s = charnes_cooper(p, vec({0.2, -0.5}));
    const auto a = solve(s, {}, vec({0.2, -0.5}));
    const auto b = solve(s, {}, vec({0.2, -0.5}));
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(SolverProperty, LpMatchesVertexEnumeration)
{
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 150; ++k) {
        const auto inst = random_pl_instance(rng, k);
        const auto oracle = vertex_enumeration_minimum(inst.objective, inst.constraints, inst.box);
        ASSERT_TRUE(oracle.has_value());
        const auto r = solve(inst.subproblem(), with_backend(Backend::lp));
        ASSERT_EQ(r.status, SolveStatus::optimal);
        EXPECT_NEAR(r.objective, *oracle, 1e-9) << "instance " << k;
    }
}

TEST(SolverProperty, PenaltyMatchesLp)
{
    std::mt19937_64 rng(77);
    for (int k = 0; k < 40; ++k) {
        const auto inst = random_pl_instance(rng, k);
        const auto s = inst.subproblem();
        const auto lp = solve(s, with_backend(Backend::lp));
        const auto pen = solve(s, with_backend(Backend::penalty_subgradient));
        EXPECT_LE(pen.max_violation, 1e-8);
        EXPECT_NEAR(pen.objective, lp.objective, 1e-3) << "instance " << k;
    }
}

TEST(SolverNames, RoundTrip)
{
    for (auto b : {Backend::automatic, Backend::lp, Backend::penalty_subgradient}) {
        EXPECT_EQ(parse_backend(to_string(b)), b);
    }
    EXPECT_THROW(parse_backend("interior-point"), std::invalid_argument);
}
