#include <ccpareto/certify.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <ccpareto/simplex.hpp>

namespace ccpareto {

const char *to_string(KKTMode m)
{
    return m == KKTMode::weak ? "weak" : "strong";
}

const char *to_string(KKTVerdict v)
{
    return v == KKTVerdict::certified ? "certified" : "no-multipliers-found";
}

const char *to_string(AbadieVerdict v)
{
    switch (v) {
    case AbadieVerdict::holds_on_sample: return "holds-on-sample";
    case AbadieVerdict::fails: return "fails";
    case AbadieVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

const char *to_string(GeoffrionVerdict v)
{
    return v == GeoffrionVerdict::bounded_below_cap ? "bounded-below-cap" : "exceeds-cap";
}

Vector KKTCertificate::residual_vector() const
{
    Vector r = box_upper - box_lower;
    for (std::size_t i = 0; i < objective_subgradients.size(); ++i) {
        r += lambda[static_cast<Eigen::Index>(i)] * objective_subgradients[i];
    }
    for (std::size_t j = 0; j < constraint_subgradients.size(); ++j) {
        r += mu[static_cast<Eigen::Index>(j)] * constraint_subgradients[j];
    }
    return r;
}

namespace {

void require_feasible(const VectorProblem &problem, const Vector &x0, const char *what)
{
    require_dimension(x0.size(), problem.dimension(), what);
    if (!problem.is_feasible(x0, 1e-8)) {
        throw InfeasiblePointError(std::string(what) + ": point is not feasible");
    }
}

// Weighted average of generators, or the first generator when the weights vanish.
Vector select(const std::vector<Vector> &gens, const Vector &weights, double total)
{
    if (total <= 0.0) {
        return gens.front();
    }
    Vector u = Vector::Zero(gens.front().size());
    for (std::size_t p = 0; p < gens.size(); ++p) {
        u += (weights[static_cast<Eigen::Index>(p)] / total) * gens[p];
    }
    return u;
}

} // namespace

KKTCertificate find_kkt(const VectorProblem &problem, const Vector &x0, KKTMode mode, const KKTOptions &opt)
{
    require_feasible(problem, x0, "find_kkt");
    const int n = problem.dimension();
    const int m = problem.num_objectives();
    const int k = problem.num_constraints();
    const Box &box = problem.box();

    std::vector<std::vector<Vector>> obj_gens(m);
    for (int i = 0; i < m; ++i) {
        obj_gens[i] = problem.objectives()[i].subdifferential_generators(x0, opt.generator_tol);
    }
    std::vector<std::vector<Vector>> con_gens(k);
    std::vector<double> con_values(k);
    for (int j = 0; j < k; ++j) {
        con_values[j] = problem.constraints()[j].eval(x0);
        if (std::abs(con_values[j]) <= opt.active_tol) {
            con_gens[j] = problem.constraints()[j].subdifferential_generators(x0, opt.generator_tol);
        }
    }
    std::vector<int> lower_active;
    std::vector<int> upper_active;
    for (int d = 0; d < n; ++d) {
        if (x0[d] - box.lo[d] <= opt.active_tol) {
            lower_active.push_back(d);
        }
        if (box.hi[d] - x0[d] <= opt.active_tol) {
            upper_active.push_back(d);
        }
    }

    // Column layout: objective generators, constraint generators, box multipliers, s.
    std::vector<int> obj_start(m + 1, 0);
    for (int i = 0; i < m; ++i) {
        obj_start[i + 1] = obj_start[i] + static_cast<int>(obj_gens[i].size());
    }
    std::vector<int> con_start(k + 1, obj_start[m]);
    for (int j = 0; j < k; ++j) {
        con_start[j + 1] = con_start[j] + static_cast<int>(con_gens[j].size());
    }
    const int lo_start = con_start[k];
    const int hi_start = lo_start + static_cast<int>(lower_active.size());
    const int s_col = hi_start + static_cast<int>(upper_active.size());
    const int nv = s_col + 1;

    Matrix g_cols = Matrix::Zero(n, nv); // residual r = g_cols * z
    for (int i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < obj_gens[i].size(); ++p) {
            g_cols.col(obj_start[i] + static_cast<int>(p)) = obj_gens[i][p];
        }
    }
    for (int j = 0; j < k; ++j) {
        for (std::size_t q = 0; q < con_gens[j].size(); ++q) {
            g_cols.col(con_start[j] + static_cast<int>(q)) = con_gens[j][q];
        }
    }
    for (std::size_t a = 0; a < lower_active.size(); ++a) {
        g_cols(lower_active[a], lo_start + static_cast<int>(a)) = -1.0;
    }
    for (std::size_t a = 0; a < upper_active.size(); ++a) {
        g_cols(upper_active[a], hi_start + static_cast<int>(a)) = 1.0;
    }

    LinearProgram lp(nv);
    for (int d = 0; d < n; ++d) {
        Vector row = g_cols.row(d).transpose();
        row[s_col] = -1.0;
        lp.add_less_equal(row, 0.0);
        row = -g_cols.row(d).transpose();
        row[s_col] = -1.0;
        lp.add_less_equal(row, 0.0);
    }
    if (mode == KKTMode::strong) {
        for (int i = 0; i < m; ++i) {
            Vector row = Vector::Zero(nv);
            row.segment(obj_start[i], obj_start[i + 1] - obj_start[i]).setConstant(-1.0);
            lp.add_less_equal(row, -1.0);
        }
    } else {
        Vector row = Vector::Zero(nv);
        row.head(obj_start[m]).setOnes();
        lp.add_equal(row, 1.0);
    }
    lp.cost[s_col] = 1.0;
    LpSolution sol = solve_linear_program(lp);
    if (sol.status != LpStatus::optimal) {
        throw std::logic_error("find_kkt: residual program did not solve to optimality");
    }

    // Among (near-)minimal residuals prefer small box multipliers and, in strong mode,
    // the smallest admissible lambda.
    {
        const double s_star = sol.x[s_col];
        Vector row = Vector::Zero(nv);
        row[s_col] = 1.0;
        lp.add_less_equal(row, s_star + 1e-12 * (1.0 + s_star));
        lp.cost.setZero();
        lp.cost.segment(lo_start, s_col - lo_start).setOnes();
        if (mode == KKTMode::strong) {
            lp.cost.head(obj_start[m]).setOnes();
        }
        const LpSolution refined = solve_linear_program(lp);
        if (refined.status == LpStatus::optimal) {
            sol = refined;
        }
    }

    KKTCertificate cert;
    cert.mode = mode;
    cert.lambda = Vector::Zero(m);
    cert.mu = Vector::Zero(k);
    cert.box_lower = Vector::Zero(n);
    cert.box_upper = Vector::Zero(n);
    for (int i = 0; i < m; ++i) {
        const Vector w = sol.x.segment(obj_start[i], obj_start[i + 1] - obj_start[i]);
        cert.lambda[i] = w.sum();
        cert.objective_subgradients.push_back(select(obj_gens[i], w, cert.lambda[i]));
    }
    for (int j = 0; j < k; ++j) {
        if (con_gens[j].empty()) {
            cert.constraint_subgradients.push_back(problem.constraints()[j].subgradient(x0));
            continue;
        }
        const Vector w = sol.x.segment(con_start[j], con_start[j + 1] - con_start[j]);
        cert.mu[j] = w.sum();
        cert.constraint_subgradients.push_back(select(con_gens[j], w, cert.mu[j]));
    }
    for (std::size_t a = 0; a < lower_active.size(); ++a) {
        cert.box_lower[lower_active[a]] = sol.x[lo_start + static_cast<int>(a)];
    }
    for (std::size_t a = 0; a < upper_active.size(); ++a) {
        cert.box_upper[upper_active[a]] = sol.x[hi_start + static_cast<int>(a)];
    }

    // The simplex holds lambda_i >= 1 only to its feasibility tolerance. Stationarity is
    // homogeneous in the multipliers, so rescaling restores the normalization exactly.
    if (mode == KKTMode::strong && m > 0) {
        const double low = cert.lambda.minCoeff();
        if (low > 0.0 && low < 1.0) {
            cert.lambda /= low;
            cert.mu /= low;
            cert.box_lower /= low;
            cert.box_upper /= low;
            cert.lambda = cert.lambda.cwiseMax(1.0);
        }
    }

    cert.stationarity_residual = cert.residual_vector().lpNorm<Eigen::Infinity>();
    double comp = 0.0;
    for (int j = 0; j < k; ++j) {
        comp = std::max(comp, std::abs(cert.mu[j] * con_values[j]));
    }
    for (int d = 0; d < n; ++d) {
        comp = std::max(comp, std::abs(cert.box_lower[d] * (x0[d] - box.lo[d])));
        comp = std::max(comp, std::abs(cert.box_upper[d] * (box.hi[d] - x0[d])));
    }
    cert.complementarity_residual = comp;
    cert.verdict = cert.stationarity_residual <= opt.certify_tol ? KKTVerdict::certified
                                                                 : KKTVerdict::no_multipliers_found;
    return cert;
}

KKTCertificate find_strong_kkt(const VectorProblem &problem, const Vector &x0, const KKTOptions &options)
{
    return find_kkt(problem, x0, KKTMode::strong, options);
}

KKTCertificate find_weak_kkt(const VectorProblem &problem, const Vector &x0, const KKTOptions &options)
{
    return find_kkt(problem, x0, KKTMode::weak, options);
}

// ---------------------------------------------------------------------------

AbadieReport check_strong_abadie(const VectorProblem &problem, const Vector &x0, int samples, double tol,
                                 std::uint64_t seed)
{
    require_feasible(problem, x0, "check_strong_abadie");
    if (samples < 0 || !(tol >= 0.0)) {
        throw std::invalid_argument("check_strong_abadie: need samples >= 0 and tol >= 0");
    }
    const int n = problem.dimension();
    const Box &box = problem.box();
    const Vector f0 = problem.objective_values(x0);
    std::vector<int> active;
    for (int j = 0; j < problem.num_constraints(); ++j) {
        if (std::abs(problem.constraints()[j].eval(x0)) <= tol) {
            active.push_back(j);
        }
    }

    auto in_cone = [&](const Vector &h) {
        for (int d = 0; d < n; ++d) {
            if (std::abs(x0[d] - box.lo[d]) <= tol && -h[d] > tol) {
                return false;
            }
            if (std::abs(box.hi[d] - x0[d]) <= tol && h[d] > tol) {
                return false;
            }
        }
        for (const auto &f : problem.objectives()) {
            if (f.directional_derivative(x0, h, 1e-12) > tol) {
                return false;
            }
        }
        for (int j : active) {
            if (problem.constraints()[j].directional_derivative(x0, h, 1e-12) > tol) {
                return false;
            }
        }
        return true;
    };
    auto in_restricted_set = [&](const Vector &x) {
        if (!problem.is_feasible(x, 0.0)) {
            return false;
        }
        const Vector f = problem.objective_values(x);
        return (f.array() <= f0.array()).all();
    };

    std::vector<Vector> candidates;
    for (int d = 0; d < n; ++d) {
        Vector e = Vector::Zero(n);
        e[d] = 1.0;
        candidates.push_back(e);
        candidates.push_back(-e);
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int s = 0; s < samples; ++s) {
        Vector h(n);
        do {
            for (int d = 0; d < n; ++d) {
                h[d] = normal(rng);
            }
        } while (h.norm() == 0.0);
        candidates.push_back(h / h.norm());
    }

    AbadieReport report;
    report.sampled = static_cast<int>(candidates.size());
    constexpr double kSteps[] = {1e-2, 1e-4, 1e-6};
    for (const auto &h : candidates) {
        if (!in_cone(h)) {
            continue;
        }
        AbadieDirection dir{h, false, 0.0};
        for (double t : kSteps) {
            if (in_restricted_set(x0 + t * h)) {
                dir.feasible = true;
                dir.accepted_step = t;
                break;
            }
        }
        if (!dir.feasible && !report.witness) {
            report.witness = h;
        }
        report.directions.push_back(std::move(dir));
    }
    if (report.witness) {
        report.verdict = AbadieVerdict::fails;
    } else if (samples < 1) {
        report.verdict = AbadieVerdict::inconclusive;
    } else {
        report.verdict = AbadieVerdict::holds_on_sample;
    }
    return report;
}

// ---------------------------------------------------------------------------

GeoffrionReport estimate_geoffrion(const VectorProblem &problem, const Vector &x0, int grid, double cap)
{
    require_feasible(problem, x0, "estimate_geoffrion");
    if (grid < 2) {
        throw std::invalid_argument("estimate_geoffrion: grid must be at least 2");
    }
    if (!(cap > 0.0)) {
        throw std::invalid_argument("estimate_geoffrion: cap must be positive");
    }
    const int n = problem.dimension();
    double total = 1.0;
    for (int d = 0; d < n; ++d) {
        total *= grid;
    }
    if (total > 1e7) {
        throw std::invalid_argument("estimate_geoffrion: grid too large");
    }
    constexpr double kGap = 1e-12;
    constexpr int kProbes = 30;
    const Box &box = problem.box();
    const Vector f0 = problem.objective_values(x0);
    const int m = problem.num_objectives();

    GeoffrionReport report;
    report.cap = cap;
    auto consider = [&](const Vector &x) {
        if (!problem.is_feasible(x, 0.0)) {
            return;
        }
        ++report.evaluated;
        const Vector f = problem.objective_values(x);
        double worst = 0.0;
        for (int i = 0; i < m; ++i) {
            const double gain = f0[i] - f[i];
            if (gain <= kGap) {
                continue;
            }
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < m; ++j) {
                const double loss = f[j] - f0[j];
                if (loss > kGap) {
                    best = std::min(best, gain / loss);
                }
            }
            worst = std::max(worst, best);
        }
        if (worst > report.m_hat) {
            report.m_hat = worst;
            report.argmax = x;
        }
    };

    std::vector<int> idx(n, 0);
    Vector p(n);
    const auto count = static_cast<long long>(total);
    for (long long c = 0; c < count; ++c) {
        long long rem = c;
        for (int d = 0; d < n; ++d) {
            idx[d] = static_cast<int>(rem % grid);
            rem /= grid;
            p[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * idx[d] / (grid - 1);
        }
        if (!problem.is_feasible(p, 0.0)) {
            continue;
        }
        consider(p);
        double scale = 1.0;
        for (int k = 1; k <= kProbes; ++k) {
            scale *= 0.5;
            consider(x0 + scale * (p - x0));
        }
    }
    report.verdict = report.m_hat > cap ? GeoffrionVerdict::exceeds_cap : GeoffrionVerdict::bounded_below_cap;
    return report;
}

} // namespace ccpareto
