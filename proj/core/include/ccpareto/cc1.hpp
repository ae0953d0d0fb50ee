#pragma once

#include <cstdint>
#include <vector>

#include <ccpareto/solver.hpp>

namespace ccpareto {

/// eps_k = max(eps0 * gamma^k, eps_min), applied from k = 0.
struct CC1Config {
    double eps0 = 1e-3;
    double gamma = 0.5;
    double eps_min = 1e-6;
    int max_outer = 50;
    bool proximal = false;
    bool proximal_keep_dominance = true;
    SolverConfig solver;

    void validate() const;
    [[nodiscard]] double tolerance(int k) const;
};

struct OuterRecord {
    int k = 0;
    Vector x;          // anchor x_k
    Vector f;          // f(x_k)
    Vector y;          // inner solution y_k
    double step_norm = 0.0;
    double eps = 0.0;
    double objective_sum_change = 0.0; // sum f(y_k) - sum f(x_k), logged only
    SolveStatus inner_status = SolveStatus::optimal;
    int inner_iterations = 0;
};

enum class CC1Status { converged, outer_budget_reached, inner_failure, sampling_failed };

struct CC1Trace {
    Vector start;
    std::vector<OuterRecord> records;
    CC1Status status = CC1Status::outer_budget_reached;
    Vector final_point;   // y_k of the stopping iteration; x_k if y_k came back with a worse sum
    Vector final_values;

    [[nodiscard]] int outer_iterations() const { return static_cast<int>(records.size()); }
    [[nodiscard]] bool converged() const { return status == CC1Status::converged; }
};

CC1Trace run_cc1(const VectorProblem &problem, const Vector &x0, const CC1Config &cfg = {});

/// Uniform starts in the box, rejection-sampled into feasibility (at most
/// kMaxRejections draws per start). Start i uses its own RNG stream derived from
/// (seed, i), so the result does not depend on scheduling. Runs execute on up to
/// `threads` workers (0: CC_PARETO_THREADS, else hardware concurrency).
std::vector<CC1Trace> multi_start(const VectorProblem &problem, int count, std::uint64_t seed,
                                  const CC1Config &cfg = {}, int threads = 0);

inline constexpr int kMaxRejections = 10000;

/// Start i of multi_start(problem, ., seed, .), or nullopt when rejection sampling fails.
std::optional<Vector> sample_start(const VectorProblem &problem, std::uint64_t seed, int index);

/// Worker count from CC_PARETO_THREADS, falling back to hardware concurrency.
int default_thread_count();

const char *to_string(CC1Status s);

} // namespace ccpareto
