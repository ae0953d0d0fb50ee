#include <ccpareto/cc1.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace ccpareto {

void CC1Config::validate() const
{
    if (!(eps0 > 0.0)) {
        throw std::invalid_argument("CC1Config: eps0 must be positive");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("CC1Config: gamma must lie in (0, 1)");
    }
    if (!(eps_min >= 0.0)) {
        throw std::invalid_argument("CC1Config: eps_min must be nonnegative");
    }
    if (max_outer < 1) {
        throw std::invalid_argument("CC1Config: max_outer must be at least 1");
    }
    solver.validate();
}

double CC1Config::tolerance(int k) const
{
    return std::max(eps0 * std::pow(gamma, k), eps_min);
}

const char *to_string(CC1Status s)
{
    switch (s) {
    case CC1Status::converged: return "converged";
    case CC1Status::outer_budget_reached: return "outer-budget-reached";
    case CC1Status::inner_failure: return "inner-failure";
    case CC1Status::sampling_failed: return "sampling-failed";
    }
    return "unknown";
}

CC1Trace run_cc1(const VectorProblem &problem, const Vector &x0, const CC1Config &cfg)
{
    cfg.validate();
    require_dimension(x0.size(), problem.dimension(), "run_cc1 start");
    if (!problem.is_feasible(x0, cfg.solver.feas_tol)) {
        throw InfeasiblePointError("run_cc1: start point is not feasible");
    }

    CC1Trace trace;
    trace.start = x0;
    Vector x = x0;
    for (int k = 0; k < cfg.max_outer; ++k) {
        const double eps = cfg.tolerance(k);
        // Anchors are accepted inner solutions, feasible to feas_tol.
        const ScalarSubproblem sub = cfg.proximal
                                         ? proximal_charnes_cooper(problem, x, cfg.proximal_keep_dominance,
                                                                   cfg.solver.feas_tol)
                                         : charnes_cooper(problem, x, cfg.solver.feas_tol);
        const SolveResult res = solve(sub, cfg.solver, x);

        OuterRecord rec;
        rec.k = k;
        rec.x = x;
        rec.f = problem.objective_values(x);
        rec.y = res.x;
        rec.step_norm = (res.x - x).norm();
        rec.eps = eps;
        rec.objective_sum_change = problem.objective_values(res.x).sum() - rec.f.sum();
        rec.inner_status = res.status;
        rec.inner_iterations = res.iterations;
        trace.records.push_back(rec);

        if (res.status == SolveStatus::infeasible_detected || res.max_violation > cfg.solver.feas_tol) {
            trace.status = CC1Status::inner_failure;
            break;
        }
        // A marginally worse sum is solver noise: keep x_k and stop here.
        if (rec.objective_sum_change > 0.0) {
            trace.status = CC1Status::converged;
            break;
        }
        // y_k solves P_k, so it is the Pareto point; x_k is only within eps of it.
        if (rec.step_norm <= eps) {
            x = res.x;
            trace.status = CC1Status::converged;
            break;
        }
        x = res.x;
    }
    trace.final_point = x;
    trace.final_values = problem.objective_values(x);
    return trace;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::optional<Vector> sample_start(const VectorProblem &problem, std::uint64_t seed, int index)
{
    std::mt19937_64 rng(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(index)));
    const Box &box = problem.box();
    Vector x(problem.dimension());
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        for (int d = 0; d < x.size(); ++d) {
            // 53 random bits -> [0, 1); avoids distribution implementation differences.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            x[d] = box.lo[d] + u * (box.hi[d] - box.lo[d]);
        }
        if (problem.is_feasible(x)) {
            return x;
        }
    }
    return std::nullopt;
}

int default_thread_count()
{
    if (const char *env = std::getenv("CC_PARETO_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) {
                return v;
            }
        } catch (const std::exception &) {
            // fall through to hardware concurrency
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<CC1Trace> multi_start(const VectorProblem &problem, int count, std::uint64_t seed, const CC1Config &cfg,
                                  int threads)
{
    if (count < 1) {
        throw std::invalid_argument("multi_start: count must be at least 1");
    }
    cfg.validate();
    std::vector<CC1Trace> traces(static_cast<std::size_t>(count));
    auto run_one = [&](int i) {
        auto start = sample_start(problem, seed, i);
        if (!start) {
            CC1Trace t;
            t.status = CC1Status::sampling_failed;
            traces[i] = std::move(t);
            return;
        }
        traces[i] = run_cc1(problem, *start, cfg);
    };

    const int workers = std::min(count, threads > 0 ? threads : default_thread_count());
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) {
            run_one(i);
        }
        return traces;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    run_one(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return traces;
}

} // namespace ccpareto
