#include <ccpareto/solver.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace ccpareto {

void SolverConfig::validate() const
{
    if (!(feas_tol > 0.0)) {
        throw std::invalid_argument("SolverConfig: feasibility tolerance must be positive");
    }
    if (budget < 1) {
        throw std::invalid_argument("SolverConfig: iteration budget must be at least 1");
    }
    if (!(penalty_growth > 1.0)) {
        throw std::invalid_argument("SolverConfig: penalty growth factor must exceed 1");
    }
    if (!(step_a > 0.0) || !(step_b > 0.0)) {
        throw std::invalid_argument("SolverConfig: step parameters must be positive");
    }
    if (!(initial_penalty > 0.0) || !(penalty_cap >= initial_penalty)) {
        throw std::invalid_argument("SolverConfig: need 0 < initial penalty <= penalty cap");
    }
    if (penalty_period < 1 || restart_period < 1) {
        throw std::invalid_argument("SolverConfig: penalty and restart periods must be at least 1");
    }
    if (!(restart_shrink > 0.0 && restart_shrink < 1.0) || !(min_relative_step > 0.0)) {
        throw std::invalid_argument("SolverConfig: need 0 < restart_shrink < 1 and min_relative_step > 0");
    }
}

const char *to_string(Backend b)
{
    switch (b) {
    case Backend::automatic: return "auto";
    case Backend::lp: return "lp";
    case Backend::penalty_subgradient: return "penalty-subgradient";
    }
    return "unknown";
}

const char *to_string(SolveStatus s)
{
    switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::iteration_budget_reached: return "iteration-budget-reached";
    case SolveStatus::infeasible_detected: return "infeasible-detected";
    }
    return "unknown";
}

Backend parse_backend(const std::string &name)
{
    if (name == "auto") {
        return Backend::automatic;
    }
    if (name == "lp") {
        return Backend::lp;
    }
    if (name == "penalty-subgradient" || name == "penalty") {
        return Backend::penalty_subgradient;
    }
    throw std::invalid_argument("unknown backend '" + name + "'");
}

// ---------------------------------------------------------------------------
// LP path

SolveResult solve_lp(const PiecewiseLinearForm &objective, const std::vector<PiecewiseLinearForm> &constraints,
                     const Box &box, const SimplexOptions &options)
{
    const int n = box.dimension();
    require_dimension(objective.dimension(), n, "solve_lp objective");
    for (const auto &c : constraints) {
        require_dimension(c.dimension(), n, "solve_lp constraint");
    }

    // Variables (x, t); t is free.
    LinearProgram lp(n + 1);
    lp.cost[n] = 1.0;
    lp.lower.head(n) = box.lo;
    lp.upper.head(n) = box.hi;
    lp.lower[n] = -std::numeric_limits<double>::infinity();
    Vector row(n + 1);
    for (const auto &p : objective.pieces()) {
        row.head(n) = p.slope;
        row[n] = -1.0;
        lp.add_less_equal(row, -p.offset);
    }
    for (const auto &c : constraints) {
        for (const auto &p : c.pieces()) {
            row.head(n) = p.slope;
            row[n] = 0.0;
            lp.add_less_equal(row, -p.offset);
        }
    }

    const LpSolution sol = solve_linear_program(lp, options);
    SolveResult r;
    r.backend = Backend::lp;
    r.iterations = sol.iterations;
    switch (sol.status) {
    case LpStatus::optimal: r.status = SolveStatus::optimal; break;
    case LpStatus::infeasible: r.status = SolveStatus::infeasible_detected; break;
    case LpStatus::unbounded:
        throw std::logic_error("solve_lp: box-bounded program reported unbounded");
    case LpStatus::iteration_limit: r.status = SolveStatus::iteration_budget_reached; break;
    }
    r.x = sol.status == LpStatus::optimal ? Vector(sol.x.head(n)) : box.center();
    r.objective = objective.eval(r.x);
    r.max_violation = 0.0;
    for (const auto &c : constraints) {
        r.max_violation = std::max(r.max_violation, c.eval(r.x));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Penalty path

namespace {

struct Incumbent {
    Vector x;
    double objective = 0.0;
    double violation = 0.0;
};

// Feasible-enough points beat infeasible ones; among feasible-enough points the
// objective decides; among infeasible ones the violation does.
bool improves(double obj, double viol, const Incumbent &best, double feas_tol)
{
    const bool feasible = viol <= feas_tol;
    const bool best_feasible = best.violation <= feas_tol;
    if (feasible != best_feasible) {
        return feasible;
    }
    return feasible ? obj < best.objective : viol < best.violation;
}

// Smooth reformulation used by the polish: smooth terms stay as they are,
// piecewise-linear objective terms get an epigraph variable t_l (pieces <= t_l),
// and piecewise-linear constraints split into their affine pieces. Variables are
// z = (x, t).
class SmoothModel {
public:
    static std::optional<SmoothModel> build(const ScalarSubproblem &s)
    {
        SmoothModel m;
        m.n_ = s.dimension();
        std::vector<ConvexExpr> terms;
        if (s.objective.kind() == ExprKind::sum) {
            terms = s.objective.children();
        } else {
            terms = {s.objective};
        }
        Vector lo = s.box.lo;
        Vector hi = s.box.hi;
        for (const auto &e : terms) {
            if (e.is_smooth()) {
                m.smooth_objective_.push_back(e);
                continue;
            }
            auto pl = e.to_piecewise_linear();
            if (!pl) {
                return std::nullopt;
            }
            const int l = static_cast<int>(m.epigraphs_.size());
            double t_lo = -std::numeric_limits<double>::infinity();
            double t_hi = -std::numeric_limits<double>::infinity();
            for (const auto &p : pl->pieces()) {
                // Range of the piece over the box.
                const double mid = p.slope.dot(s.box.center()) + p.offset;
                const double half = 0.5 * p.slope.cwiseAbs().dot(s.box.hi - s.box.lo);
                t_lo = std::max(t_lo, mid - half);
                t_hi = std::max(t_hi, mid + half);
                m.pieces_.push_back({p.slope, p.offset, l});
            }
            m.epigraphs_.push_back(std::move(*pl));
            lo.conservativeResize(lo.size() + 1);
            hi.conservativeResize(hi.size() + 1);
            lo[lo.size() - 1] = t_lo - 1.0;
            hi[hi.size() - 1] = t_hi + 1.0;
        }
        for (const auto &g : s.constraints) {
            if (g.is_smooth()) {
                m.smooth_constraints_.push_back(g);
                continue;
            }
            auto pl = g.to_piecewise_linear();
            if (!pl) {
                return std::nullopt;
            }
            for (const auto &p : pl->pieces()) {
                m.pieces_.push_back({p.slope, p.offset, -1});
            }
        }
        m.box_ = Box(std::move(lo), std::move(hi));
        return m;
    }

    [[nodiscard]] int dim() const { return box_.dimension(); }
    [[nodiscard]] const Box &box() const { return box_; }
    [[nodiscard]] int num_constraints() const
    {
        return static_cast<int>(smooth_constraints_.size() + pieces_.size());
    }

    [[nodiscard]] Vector lift(const Vector &x) const
    {
        Vector z(dim());
        z.head(n_) = x;
        for (std::size_t l = 0; l < epigraphs_.size(); ++l) {
            z[n_ + static_cast<Eigen::Index>(l)] = epigraphs_[l].eval(x);
        }
        return box_.project(z);
    }
    [[nodiscard]] Vector point(const Vector &z) const { return z.head(n_); }

    double objective(const Vector &z, Vector *grad) const
    {
        const Vector x = z.head(n_);
        double v = 0.0;
        if (grad != nullptr) {
            grad->setZero();
        }
        Vector gx = Vector::Zero(n_);
        for (const auto &e : smooth_objective_) {
            v += e.eval(x);
            if (grad != nullptr) {
                e.accumulate_subgradient(x, 1.0, gx);
            }
        }
        for (std::size_t l = 0; l < epigraphs_.size(); ++l) {
            v += z[n_ + static_cast<Eigen::Index>(l)];
        }
        if (grad != nullptr) {
            grad->head(n_) = gx;
            grad->tail(dim() - n_).setOnes();
        }
        return v;
    }

    [[nodiscard]] double constraint(int j, const Vector &z) const
    {
        if (j < static_cast<int>(smooth_constraints_.size())) {
            return smooth_constraints_[j].eval(z.head(n_));
        }
        const auto &p = pieces_[j - smooth_constraints_.size()];
        return p.slope.dot(z.head(n_)) + p.offset - (p.t < 0 ? 0.0 : z[n_ + p.t]);
    }

    void add_constraint_gradient(int j, const Vector &z, double w, Vector &grad) const
    {
        if (j < static_cast<int>(smooth_constraints_.size())) {
            Vector gx = Vector::Zero(n_);
            smooth_constraints_[j].accumulate_subgradient(z.head(n_), w, gx);
            grad.head(n_) += gx;
            return;
        }
        const auto &p = pieces_[j - smooth_constraints_.size()];
        grad.head(n_) += w * p.slope;
        if (p.t >= 0) {
            grad[n_ + p.t] -= w;
        }
    }

    [[nodiscard]] double objective_curvature() const
    {
        double c = 0.0;
        for (const auto &e : smooth_objective_) {
            c += e.curvature_bound();
        }
        return c;
    }

    [[nodiscard]] double constraint_curvature(int j) const
    {
        return j < static_cast<int>(smooth_constraints_.size()) ? smooth_constraints_[j].curvature_bound() : 0.0;
    }

private:
    struct Piece {
        Vector slope;
        double offset;
        int t; // epigraph index, -1 for constraint pieces
    };

    int n_ = 0;
    Box box_;
    std::vector<ConvexExpr> smooth_objective_;
    std::vector<PiecewiseLinearForm> epigraphs_;
    std::vector<ConvexExpr> smooth_constraints_;
    std::vector<Piece> pieces_;
};

// Augmented-Lagrangian refinement on a SmoothModel, with projected-gradient inner
// solves (Barzilai-Borwein steps with Armijo backtracking).
class Polisher {
public:
    explicit Polisher(const SmoothModel &m) : m_(m), k_(m.num_constraints()) {}

    struct Outcome {
        Vector x;
        int iterations = 0;
        bool converged = false;
    };

    Outcome run(const Vector &start, double feas_tol) const
    {
        Outcome out{start, 0, false};
        Vector z = m_.lift(start);
        Vector lam = Vector::Zero(k_);
        double rho = 10.0;
        double prev_viol = std::numeric_limits<double>::infinity();
        const double target = std::min(1e-10, 1e-2 * feas_tol);
        for (int outer = 0; outer < kMaxOuter; ++outer) {
            out.iterations += inner(z, lam, rho);
            double viol = 0.0;
            double comp = 0.0;
            for (int j = 0; j < k_; ++j) {
                const double g = m_.constraint(j, z);
                viol = std::max(viol, g);
                lam[j] = std::max(0.0, lam[j] + rho * g);
                comp = std::max(comp, std::abs(lam[j] * g));
            }
            if (!lam.allFinite() || (k_ > 0 && lam.maxCoeff() > kMaxMultiplier)) {
                break;
            }
            out.x = m_.point(z);
            if (viol <= target && comp <= 1e-9 * (1.0 + lam.lpNorm<Eigen::Infinity>()) && last_stationary_) {
                out.converged = true;
                break;
            }
            if (viol > 0.25 * prev_viol) {
                rho = std::min(rho * 10.0, kMaxRho);
            }
            prev_viol = viol;
        }
        return out;
    }

private:
    static constexpr int kMaxOuter = 40;
    static constexpr int kMaxInner = 3000;
    static constexpr double kMaxMultiplier = 1e10;
    static constexpr double kMaxRho = 1e10;

    double lagrangian(const Vector &z, const Vector &lam, double rho, Vector *grad) const
    {
        double v = m_.objective(z, grad);
        for (int j = 0; j < k_; ++j) {
            const double shifted = lam[j] + rho * m_.constraint(j, z);
            if (shifted > 0.0) {
                v += (shifted * shifted - lam[j] * lam[j]) / (2.0 * rho);
                if (grad != nullptr) {
                    m_.add_constraint_gradient(j, z, shifted, *grad);
                }
            } else {
                v -= lam[j] * lam[j] / (2.0 * rho);
            }
        }
        return v;
    }

    double curvature_estimate(const Vector &z, const Vector &lam, double rho) const
    {
        double l = m_.objective_curvature();
        Vector g(m_.dim());
        for (int j = 0; j < k_; ++j) {
            g.setZero();
            m_.add_constraint_gradient(j, z, 1.0, g);
            const double val = m_.constraint(j, z);
            l += rho * g.squaredNorm() + std::max(0.0, lam[j] + rho * std::max(0.0, val)) * m_.constraint_curvature(j);
        }
        return std::max(l, 1e-12);
    }

    int inner(Vector &z, const Vector &lam, double rho) const
    {
        const int d = m_.dim();
        Vector grad(d), grad_new(d), z_new(d);
        double val = lagrangian(z, lam, rho, &grad);
        double alpha = 1.0 / curvature_estimate(z, lam, rho);
        last_stationary_ = false;
        int it = 0;
        for (; it < kMaxInner; ++it) {
            const Vector pg = z - m_.box().project(z - grad);
            const double scale = 1.0 + grad.lpNorm<Eigen::Infinity>();
            if (pg.lpNorm<Eigen::Infinity>() <= 1e-12 * scale) {
                last_stationary_ = true;
                break;
            }
            bool accepted = false;
            double a = alpha;
            double val_new = val;
            for (int bt = 0; bt < 60; ++bt) {
                z_new = m_.box().project(z - a * grad);
                val_new = lagrangian(z_new, lam, rho, nullptr);
                if (val_new <= val + 1e-4 * grad.dot(z_new - z)) {
                    accepted = true;
                    break;
                }
                a *= 0.5;
            }
            if (!accepted || z_new == z) {
                // No representable progress left.
                last_stationary_ = pg.lpNorm<Eigen::Infinity>() <= 1e-8 * scale;
                break;
            }
            lagrangian(z_new, lam, rho, &grad_new);
            const Vector sz = z_new - z;
            const Vector sg = grad_new - grad;
            const double sy = sz.dot(sg);
            alpha = sy > 0.0 ? std::clamp(sz.squaredNorm() / sy, 1e-14, 1e14) : a * 2.0;
            z = z_new;
            grad = grad_new;
            val = val_new;
        }
        return it + 1;
    }

    const SmoothModel &m_;
    int k_;
    mutable bool last_stationary_ = false;
};

void require_in_box(const Box &box, const Vector &x, const char *what)
{
    require_dimension(x.size(), box.dimension(), what);
    if (!box.contains(x)) {
        throw std::invalid_argument(std::string(what) + ": point lies outside the box");
    }
}

} // namespace

SolveResult solve_penalty_subgradient(const ScalarSubproblem &s, const SolverConfig &cfg, const Vector &start)
{
    cfg.validate();
    require_in_box(s.box, start, "solve_penalty_subgradient start");
    const int n = s.dimension();
    const std::size_t k = s.constraints.size();
    const double diag = s.box.diagonal();

    Vector x = start;
    Vector cons(static_cast<Eigen::Index>(k));
    auto evaluate = [&](const Vector &p, double &obj, double &viol) {
        obj = s.objective.eval(p);
        viol = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            cons[j] = s.constraints[j].eval(p);
            viol = std::max(viol, cons[j]);
        }
    };

    Incumbent best;
    best.x = x;
    evaluate(x, best.objective, best.violation);

    SolveResult r;
    r.backend = Backend::penalty_subgradient;
    r.status = SolveStatus::iteration_budget_reached;

    // Stages of restart_period iterations. Each stage restarts from the incumbent with
    // steps scale * diag * a / (b + t_stage) and the scale shrinks after every stage.
    // A stage that visited infeasible points without improving the incumbent also
    // raises rho, since rho may be below the exact-penalty threshold.
    double rho = cfg.initial_penalty;
    double scale = 1.0;
    int stage_start = 0;
    int stage_infeasible = 0;
    bool stage_improved = false;
    Vector g(n);
    int t = 0;
    bool infeasible = false;
    while (t < cfg.budget) {
        g.setZero();
        s.objective.accumulate_subgradient(x, 1.0, g);
        for (std::size_t j = 0; j < k; ++j) {
            if (cons[j] > 0.0) {
                s.constraints[j].accumulate_subgradient(x, rho, g);
            }
        }
        const double gnorm = g.norm();
        if (gnorm == 0.0) {
            // x minimizes the penalty function; with no violation it is optimal.
            if (best.violation <= cfg.feas_tol) {
                r.status = SolveStatus::optimal;
            }
            break;
        }
        const double step = scale * diag * cfg.step_a / (cfg.step_b + (t - stage_start));
        x = s.box.project(x - (step / gnorm) * g);
        ++t;

        double obj = 0.0;
        double viol = 0.0;
        evaluate(x, obj, viol);
        if (viol > cfg.feas_tol) {
            ++stage_infeasible;
        }
        if (improves(obj, viol, best, cfg.feas_tol)) {
            stage_improved = stage_improved || best.violation > cfg.feas_tol
                             || obj < best.objective - 1e-12 * (1.0 + std::abs(best.objective));
            best = {x, obj, viol};
        }
        if (best.violation > cfg.feas_tol && t % cfg.penalty_period == 0) {
            rho *= cfg.penalty_growth;
            if (rho > cfg.penalty_cap) {
                infeasible = true;
                break;
            }
        }
        if (t - stage_start >= cfg.restart_period) {
            if (best.violation <= cfg.feas_tol) {
                if (!stage_improved && stage_infeasible > 0) {
                    rho = std::min(rho * cfg.penalty_growth, cfg.penalty_cap);
                }
                scale *= cfg.restart_shrink;
                if (scale * cfg.step_a / cfg.step_b < cfg.min_relative_step) {
                    r.status = SolveStatus::optimal;
                    break;
                }
            }
            x = best.x;
            double o = 0.0;
            double v = 0.0;
            evaluate(x, o, v);
            stage_start = t;
            stage_infeasible = 0;
            stage_improved = false;
        }
    }
    r.iterations = t;

    if (infeasible) {
        r.status = SolveStatus::infeasible_detected;
    } else if (const auto model = cfg.polish ? SmoothModel::build(s) : std::nullopt) {
        const Polisher polisher(*model);
        const auto out = polisher.run(best.x, cfg.feas_tol);
        r.iterations += out.iterations;
        double obj = 0.0;
        double viol = 0.0;
        evaluate(out.x, obj, viol);
        // A converged polish is a KKT point at a violation far below feas_tol. It wins even
        // when the incumbent looks better, since that lead can only come from spending the
        // feas_tol allowance.
        if ((out.converged && viol <= cfg.feas_tol) || improves(obj, viol, best, cfg.feas_tol)) {
            best = {out.x, obj, viol};
        }
        if (out.converged && best.violation <= cfg.feas_tol) {
            r.status = SolveStatus::optimal;
        }
    }

    r.x = best.x;
    r.objective = s.objective.eval(r.x);
    r.max_violation = s.max_violation(r.x);
    return r;
}

SolveResult solve(const ScalarSubproblem &s, const SolverConfig &cfg, const std::optional<Vector> &warm_start)
{
    cfg.validate();
    if (warm_start) {
        require_in_box(s.box, *warm_start, "solve warm start");
    }
    Backend backend = cfg.backend;
    std::optional<PiecewiseLinearForm> objective_pl;
    std::vector<PiecewiseLinearForm> constraints_pl;
    if (backend != Backend::penalty_subgradient) {
        objective_pl = s.objective.to_piecewise_linear();
        bool all_pl = objective_pl.has_value();
        for (std::size_t j = 0; all_pl && j < s.constraints.size(); ++j) {
            auto c = s.constraints[j].to_piecewise_linear();
            if (c) {
                constraints_pl.push_back(std::move(*c));
            } else {
                all_pl = false;
            }
        }
        if (backend == Backend::lp && !all_pl) {
            throw std::invalid_argument("solve: LP backend requires a piecewise-linear subproblem");
        }
        backend = all_pl ? Backend::lp : Backend::penalty_subgradient;
    }

    if (backend == Backend::lp) {
        SolveResult r = solve_lp(*objective_pl, constraints_pl, s.box);
        r.objective = s.objective.eval(r.x);
        r.max_violation = s.max_violation(r.x);
        return r;
    }
    return solve_penalty_subgradient(s, cfg, warm_start ? *warm_start : s.box.center());
}

} // namespace ccpareto
