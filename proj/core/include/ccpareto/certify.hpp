#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <ccpareto/problem.hpp>

namespace ccpareto {

enum class KKTMode { weak, strong };
enum class KKTVerdict { certified, no_multipliers_found };

/// Multipliers and subgradient selections for
///   sum_i lambda_i u_i + sum_j mu_j v_j + (nu_hi - nu_lo) = 0,
/// where nu_lo / nu_hi are multipliers of the active lower / upper box bounds.
struct KKTCertificate {
    KKTMode mode = KKTMode::weak;
    Vector lambda;                        // tau in weak mode
    Vector mu;                            // one per constraint, zero when inactive
    Vector box_lower;                     // one per coordinate, zero when the bound is inactive
    Vector box_upper;
    std::vector<Vector> objective_subgradients;  // u_i in the subdifferential of f_i at x0
    std::vector<Vector> constraint_subgradients; // v_j in the subdifferential of g_j at x0
    double stationarity_residual = 0.0;   // infinity norm
    double complementarity_residual = 0.0;
    KKTVerdict verdict = KKTVerdict::no_multipliers_found;

    [[nodiscard]] bool certified() const { return verdict == KKTVerdict::certified; }
    /// Residual vector recomputed from multipliers and selections.
    [[nodiscard]] Vector residual_vector() const;
};

struct KKTOptions {
    double active_tol = 1e-8;      // constraint and box-bound activity
    double generator_tol = 1e-9;   // piece activity when enumerating subdifferential generators
    double certify_tol = 1e-6;
};

KKTCertificate find_strong_kkt(const VectorProblem &problem, const Vector &x0, const KKTOptions &options = {});
KKTCertificate find_weak_kkt(const VectorProblem &problem, const Vector &x0, const KKTOptions &options = {});
KKTCertificate find_kkt(const VectorProblem &problem, const Vector &x0, KKTMode mode, const KKTOptions &options = {});

enum class AbadieVerdict { holds_on_sample, fails, inconclusive };

struct AbadieDirection {
    Vector h;
    bool feasible = false;      // x0 + t h in the dominance-restricted set for some tested t
    double accepted_step = 0.0; // largest such t, 0 when none
};

struct AbadieReport {
    std::vector<AbadieDirection> directions; // sampled directions that lie in V(x0)
    int sampled = 0;                         // total directions examined
    AbadieVerdict verdict = AbadieVerdict::inconclusive;
    std::optional<Vector> witness;           // a direction of V(x0) outside the tangent cone sample
};

/// Examines the 2n signed axes plus `samples` random unit directions. The verdict is
/// inconclusive only when samples < 1 (axes alone are too coarse to call).
AbadieReport check_strong_abadie(const VectorProblem &problem, const Vector &x0, int samples = 2000,
                                 double tol = 1e-10, std::uint64_t seed = 0);

enum class GeoffrionVerdict { bounded_below_cap, exceeds_cap };

struct GeoffrionReport {
    double m_hat = 0.0;
    double cap = 0.0;
    GeoffrionVerdict verdict = GeoffrionVerdict::bounded_below_cap;
    std::optional<Vector> argmax;   // point attaining m_hat
    long long evaluated = 0;        // feasible points examined
};

/// Sup of trade-off ratios over a feasible grid with `grid` points per axis, plus
/// geometric probes x0 + 2^-k (p - x0), k = 1..30, toward every grid point p.
GeoffrionReport estimate_geoffrion(const VectorProblem &problem, const Vector &x0, int grid, double cap);

const char *to_string(KKTMode m);
const char *to_string(KKTVerdict v);
const char *to_string(AbadieVerdict v);
const char *to_string(GeoffrionVerdict v);

} // namespace ccpareto
