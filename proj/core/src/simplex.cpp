#include <ccpareto/simplex.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace ccpareto {

LinearProgram::LinearProgram(int num_variables)
    : cost(Vector::Zero(num_variables)),
      a_ub(0, num_variables),
      b_ub(0),
      a_eq(0, num_variables),
      b_eq(0),
      lower(Vector::Zero(num_variables)),
      upper(Vector::Constant(num_variables, std::numeric_limits<double>::infinity()))
{
}

void LinearProgram::add_less_equal(const Vector &row, double rhs)
{
    require_dimension(row.size(), num_variables(), "LinearProgram::add_less_equal");
    a_ub.conservativeResize(a_ub.rows() + 1, num_variables());
    a_ub.row(a_ub.rows() - 1) = row.transpose();
    b_ub.conservativeResize(b_ub.size() + 1);
    b_ub[b_ub.size() - 1] = rhs;
}

void LinearProgram::add_equal(const Vector &row, double rhs)
{
    require_dimension(row.size(), num_variables(), "LinearProgram::add_equal");
    a_eq.conservativeResize(a_eq.rows() + 1, num_variables());
    a_eq.row(a_eq.rows() - 1) = row.transpose();
    b_eq.conservativeResize(b_eq.size() + 1);
    b_eq[b_eq.size() - 1] = rhs;
}

const char *to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
    }
    return "unknown";
}

namespace {

// x_j = base + z_col (shifted), base - z_col (mirrored) or z_col - z_col2 (free).
enum class Mapping { shifted, mirrored, free };

struct VariableMap {
    Mapping kind = Mapping::shifted;
    int col = 0;
    int col2 = -1;
    double base = 0.0;
};

struct StandardRow {
    Vector a;
    double rhs = 0.0;
    bool equality = false;
};

class Tableau {
public:
    Tableau(int rows, int cols) : t_(Matrix::Zero(rows + 1, cols + 1)), rows_(rows), cols_(cols), basis_(rows, -1) {}

    double &at(int r, int c) { return t_(r, c); }
    double rhs(int r) const { return t_(r, cols_); }
    double &rhs(int r) { return t_(r, cols_); }
    double cost(int c) const { return t_(rows_, c); }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::vector<int> &basis() { return basis_; }

    void set_objective(const Vector &c)
    {
        t_.row(rows_).setZero();
        t_.row(rows_).head(c.size()) = c.transpose();
        for (int i = 0; i < rows_; ++i) {
            const double cb = t_(rows_, basis_[i]);
            if (cb != 0.0) {
                t_.row(rows_) -= cb * t_.row(i);
            }
        }
    }

    void pivot(int r, int c)
    {
        const double p = t_(r, c);
        t_.row(r) /= p;
        for (int i = 0; i <= rows_; ++i) {
            if (i != r) {
                const double f = t_(i, c);
                if (f != 0.0) {
                    t_.row(i) -= f * t_.row(r);
                    t_(i, c) = 0.0;
                }
            }
        }
        t_(r, c) = 1.0;
        basis_[r] = c;
    }

    // Bland's rule over columns [0, allowed_cols). Returns the terminal status.
    LpStatus run(int allowed_cols, const SimplexOptions &opt, int &iterations)
    {
        while (iterations < opt.max_iterations) {
            int entering = -1;
            for (int j = 0; j < allowed_cols; ++j) {
                if (t_(rows_, j) < -opt.optimality_tol) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) {
                return LpStatus::optimal;
            }
            int leaving = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows_; ++i) {
                const double a = t_(i, entering);
                if (a <= opt.pivot_tol) {
                    continue;
                }
                const double ratio = std::max(0.0, t_(i, cols_)) / a;
                if (leaving < 0) {
                    leaving = i;
                    best = ratio;
                    continue;
                }
                const double tie = 1e-12 * (1.0 + best);
                if (ratio < best - tie) {
                    leaving = i;
                    best = ratio;
                } else if (ratio <= best + tie && basis_[i] < basis_[leaving]) {
                    leaving = i;
                    best = std::min(best, ratio);
                }
            }
            if (leaving < 0) {
                return LpStatus::unbounded;
            }
            pivot(leaving, entering);
            ++iterations;
        }
        return LpStatus::iteration_limit;
    }

private:
    Matrix t_;
    int rows_;
    int cols_;
    std::vector<int> basis_;
};

} // namespace

LpSolution solve_linear_program(const LinearProgram &lp, const SimplexOptions &opt)
{
    const int nv = lp.num_variables();
    require_dimension(lp.lower.size(), nv, "LinearProgram lower bounds");
    require_dimension(lp.upper.size(), nv, "LinearProgram upper bounds");
    require_dimension(lp.a_ub.cols(), nv, "LinearProgram inequality rows");
    require_dimension(lp.a_eq.cols(), nv, "LinearProgram equality rows");
    require_dimension(lp.b_ub.size(), static_cast<int>(lp.a_ub.rows()), "LinearProgram inequality rhs");
    require_dimension(lp.b_eq.size(), static_cast<int>(lp.a_eq.rows()), "LinearProgram equality rhs");

    LpSolution result;
    result.x = Vector::Zero(nv);

    // Variable substitution onto z >= 0.
    std::vector<VariableMap> maps(nv);
    std::vector<int> bounded;
    int nz = 0;
    for (int j = 0; j < nv; ++j) {
        const double l = lp.lower[j];
        const double u = lp.upper[j];
        if (l > u) {
            result.status = LpStatus::infeasible;
            return result;
        }
        if (std::isfinite(l)) {
            maps[j] = {Mapping::shifted, nz++, -1, l};
            if (std::isfinite(u)) {
                bounded.push_back(j);
            }
        } else if (std::isfinite(u)) {
            maps[j] = {Mapping::mirrored, nz++, -1, u};
        } else {
            maps[j] = {Mapping::free, nz, nz + 1, 0.0};
            nz += 2;
        }
    }

    auto substitute = [&](const auto &row, double rhs, bool equality) {
        StandardRow out{Vector::Zero(nz), rhs, equality};
        for (int j = 0; j < nv; ++j) {
            const double a = row[j];
            if (a == 0.0) {
                continue;
            }
            const auto &m = maps[j];
            switch (m.kind) {
            case Mapping::shifted:
                out.a[m.col] += a;
                out.rhs -= a * m.base;
                break;
            case Mapping::mirrored:
                out.a[m.col] -= a;
                out.rhs -= a * m.base;
                break;
            case Mapping::free:
                out.a[m.col] += a;
                out.a[m.col2] -= a;
                break;
            }
        }
        return out;
    };

    std::vector<StandardRow> rows;
    for (Eigen::Index i = 0; i < lp.a_ub.rows(); ++i) {
        rows.push_back(substitute(lp.a_ub.row(i), lp.b_ub[i], false));
    }
    for (Eigen::Index i = 0; i < lp.a_eq.rows(); ++i) {
        rows.push_back(substitute(lp.a_eq.row(i), lp.b_eq[i], true));
    }
    for (int j : bounded) {
        StandardRow r{Vector::Zero(nz), lp.upper[j] - lp.lower[j], false};
        r.a[maps[j].col] = 1.0;
        rows.push_back(std::move(r));
    }

    const int m = static_cast<int>(rows.size());
    int num_slack = 0;
    for (const auto &r : rows) {
        num_slack += r.equality ? 0 : 1;
    }
    std::vector<int> slack_col(m, -1);
    std::vector<double> slack_sign(m, 0.0);
    std::vector<bool> needs_artificial(m, false);
    int s = 0;
    int num_art = 0;
    for (int i = 0; i < m; ++i) {
        auto &r = rows[i];
        double sign = 1.0;
        if (r.rhs < 0.0) {
            r.a = -r.a;
            r.rhs = -r.rhs;
            sign = -1.0;
        }
        if (!r.equality) {
            slack_col[i] = nz + s++;
            slack_sign[i] = sign;
        }
        needs_artificial[i] = r.equality || sign < 0.0;
        num_art += needs_artificial[i] ? 1 : 0;
    }

    const int structural = nz + num_slack;
    const int ncols = structural + num_art;
    Tableau tab(m, ncols);
    int art = structural;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < nz; ++j) {
            tab.at(i, j) = rows[i].a[j];
        }
        if (slack_col[i] >= 0) {
            tab.at(i, slack_col[i]) = slack_sign[i];
        }
        tab.rhs(i) = rows[i].rhs;
        if (needs_artificial[i]) {
            tab.at(i, art) = 1.0;
            tab.basis()[i] = art++;
        } else {
            tab.basis()[i] = slack_col[i];
        }
    }

    int iterations = 0;
    if (num_art > 0) {
        Vector phase1 = Vector::Zero(ncols);
        phase1.tail(num_art).setOnes();
        tab.set_objective(phase1);
        const auto st = tab.run(ncols, opt, iterations);
        if (st == LpStatus::iteration_limit) {
            result.status = st;
            result.iterations = iterations;
            return result;
        }
        double scale = 1.0;
        for (const auto &r : rows) {
            scale = std::max(scale, std::abs(r.rhs));
        }
        if (-tab.rhs(m) > opt.feasibility_tol * scale) {
            result.status = LpStatus::infeasible;
            result.iterations = iterations;
            return result;
        }
        // Pivot remaining (zero-level) artificials out where possible; rows with no
        // structural entry are redundant and stay inert because artificials never re-enter.
        for (int i = 0; i < m; ++i) {
            if (tab.basis()[i] < structural) {
                continue;
            }
            for (int j = 0; j < structural; ++j) {
                if (std::abs(tab.at(i, j)) > opt.pivot_tol) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
    }

    Vector phase2 = Vector::Zero(ncols);
    for (int j = 0; j < nv; ++j) {
        const auto &mp = maps[j];
        const double c = lp.cost[j];
        switch (mp.kind) {
        case Mapping::shifted: phase2[mp.col] += c; break;
        case Mapping::mirrored: phase2[mp.col] -= c; break;
        case Mapping::free:
            phase2[mp.col] += c;
            phase2[mp.col2] -= c;
            break;
        }
    }
    tab.set_objective(phase2);
    const auto st = tab.run(structural, opt, iterations);
    result.iterations = iterations;
    if (st != LpStatus::optimal) {
        result.status = st;
        return result;
    }

    Vector z = Vector::Zero(ncols);
    for (int i = 0; i < m; ++i) {
        z[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
    }
    for (int j = 0; j < nv; ++j) {
        const auto &mp = maps[j];
        switch (mp.kind) {
        case Mapping::shifted: result.x[j] = mp.base + z[mp.col]; break;
        case Mapping::mirrored: result.x[j] = mp.base - z[mp.col]; break;
        case Mapping::free: result.x[j] = z[mp.col] - z[mp.col2]; break;
        }
        if (std::isfinite(lp.lower[j])) {
            result.x[j] = std::max(result.x[j], lp.lower[j]);
        }
        if (std::isfinite(lp.upper[j])) {
            result.x[j] = std::min(result.x[j], lp.upper[j]);
        }
    }
    result.objective = lp.cost.dot(result.x);
    result.status = LpStatus::optimal;
    return result;
}

} // namespace ccpareto
