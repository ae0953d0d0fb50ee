#include <ccpareto/expr.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace ccpareto {

namespace {

constexpr double kPsdFloor = -1e-12;
constexpr double kSymmetryTol = 1e-12;

bool same_vector(const Vector &a, const Vector &b)
{
    return a.size() == b.size() && (a.array() == b.array()).all();
}

void push_unique(std::vector<Vector> &set, Vector v)
{
    for (const auto &u : set) {
        if (same_vector(u, v)) {
            return;
        }
    }
    set.push_back(std::move(v));
}

// Pieces sharing a slope are redundant except for the largest offset.
void push_piece(std::vector<AffinePiece> &pieces, AffinePiece p)
{
    for (auto &q : pieces) {
        if (same_vector(q.slope, p.slope)) {
            q.offset = std::max(q.offset, p.offset);
            return;
        }
    }
    pieces.push_back(std::move(p));
}

} // namespace

struct ConvexExpr::Node {
    ExprKind kind = ExprKind::constant;
    int n = 0;
    double offset = 0.0;
    double alpha = 1.0;
    int index = 0;
    Vector c;
    Matrix q;
    double q_lambda_max = 0.0;
    std::vector<ConvexExpr> args;
    bool smooth = true;
    bool has_quadratic = false;
};

// ---------------------------------------------------------------------------
// PiecewiseLinearForm

PiecewiseLinearForm::PiecewiseLinearForm(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces))
{
    if (pieces_.empty()) {
        throw std::invalid_argument("PiecewiseLinearForm: piece list must not be empty");
    }
    dimension_ = static_cast<int>(pieces_.front().slope.size());
    for (const auto &p : pieces_) {
        require_dimension(p.slope.size(), dimension_, "PiecewiseLinearForm piece");
    }
}

double PiecewiseLinearForm::eval(const Vector &x) const
{
    require_dimension(x.size(), dimension_, "PiecewiseLinearForm::eval");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto &p : pieces_) {
        best = std::max(best, p.slope.dot(x) + p.offset);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Construction

ConvexExpr ConvexExpr::constant(int n, double value)
{
    if (n <= 0) {
        throw std::invalid_argument("ConvexExpr::constant: dimension must be positive");
    }
    if (!std::isfinite(value)) {
        throw std::invalid_argument("ConvexExpr::constant: value must be finite");
    }
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::constant;
    node->n = n;
    node->offset = value;
    return ConvexExpr(std::move(node));
}

ConvexExpr ConvexExpr::affine(Vector slope, double offset)
{
    if (slope.size() == 0) {
        throw std::invalid_argument("ConvexExpr::affine: dimension must be positive");
    }
    if (!slope.allFinite() || !std::isfinite(offset)) {
        throw std::invalid_argument("ConvexExpr::affine: coefficients must be finite");
    }
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::affine;
    node->n = static_cast<int>(slope.size());
    node->c = std::move(slope);
    node->offset = offset;
    return ConvexExpr(std::move(node));
}

ConvexExpr ConvexExpr::quadratic(Matrix q, Vector c, double offset)
{
    const auto n = c.size();
    if (n == 0) {
        throw std::invalid_argument("ConvexExpr::quadratic: dimension must be positive");
    }
    if (q.rows() != n || q.cols() != n) {
        throw DimensionError("ConvexExpr::quadratic: Q must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!q.allFinite() || !c.allFinite() || !std::isfinite(offset)) {
        throw std::invalid_argument("ConvexExpr::quadratic: coefficients must be finite");
    }
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
        throw std::invalid_argument("ConvexExpr::quadratic: Q must be symmetric");
    }
    Matrix sym = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < kPsdFloor) {
        throw std::invalid_argument("ConvexExpr::quadratic: Q is not positive semidefinite (min eigenvalue "
                                    + std::to_string(eig.eigenvalues().minCoeff()) + ")");
    }
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::quadratic;
    node->n = static_cast<int>(n);
    node->q = std::move(sym);
    node->q_lambda_max = std::max(0.0, eig.eigenvalues().maxCoeff());
    node->c = std::move(c);
    node->offset = offset;
    node->has_quadratic = true;
    return ConvexExpr(std::move(node));
}

ConvexExpr ConvexExpr::abs_coordinate(int n, int index)
{
    if (n <= 0) {
        throw std::invalid_argument("ConvexExpr::abs_coordinate: dimension must be positive");
    }
    if (index < 0 || index >= n) {
        throw std::out_of_range("ConvexExpr::abs_coordinate: index " + std::to_string(index) + " outside [0,"
                                + std::to_string(n) + ")");
    }
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::abs;
    node->n = n;
    node->index = index;
    node->smooth = false;
    return ConvexExpr(std::move(node));
}

ConvexExpr ConvexExpr::max_of(std::vector<ConvexExpr> args)
{
    if (args.empty()) {
        throw std::invalid_argument("ConvexExpr::max_of: needs at least one argument");
    }
    const int n = args.front().dimension();
    std::vector<ConvexExpr> flat;
    for (auto &a : args) {
        require_dimension(a.dimension(), n, "ConvexExpr::max_of child");
        if (a.kind() == ExprKind::max) {
            for (const auto &g : a.children()) {
                flat.push_back(g);
            }
        } else {
            flat.push_back(std::move(a));
        }
    }
    if (flat.size() == 1) {
        return flat.front();
    }
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::max;
    node->n = n;
    node->smooth = false;
    for (const auto &a : flat) {
        node->has_quadratic = node->has_quadratic || a.has_quadratic();
    }
    node->args = std::move(flat);
    return ConvexExpr(std::move(node));
}

ConvexExpr ConvexExpr::sum_of(std::vector<ConvexExpr> args)
{
    if (args.empty()) {
        throw std::invalid_argument("ConvexExpr::sum_of: needs at least one argument");
    }
    const int n = args.front().dimension();

    // Flatten nested sums, then fold the polynomial terms.
    std::vector<ConvexExpr> flat;
    for (auto &a : args) {
        require_dimension(a.dimension(), n, "ConvexExpr::sum_of child");
        if (a.kind() == ExprKind::sum) {
            for (const auto &g : a.children()) {
                flat.push_back(g);
            }
        } else {
            flat.push_back(std::move(a));
        }
    }

    bool any_poly = false;
    bool any_quad = false;
    bool any_linear = false;
    Matrix q = Matrix::Zero(n, n);
    Vector c = Vector::Zero(n);
    double b = 0.0;
    std::vector<ConvexExpr> rest;
    for (auto &a : flat) {
        switch (a.kind()) {
        case ExprKind::constant:
            any_poly = true;
            b += a.offset();
            break;
        case ExprKind::affine:
            any_poly = any_linear = true;
            c += a.linear();
            b += a.offset();
            break;
        case ExprKind::quadratic:
            any_poly = any_quad = true;
            q += a.quadratic_matrix();
            c += a.linear();
            b += a.offset();
            break;
        default:
            rest.push_back(std::move(a));
        }
    }

    std::vector<ConvexExpr> terms;
    if (any_poly) {
        if (any_quad) {
            terms.push_back(quadratic(std::move(q), std::move(c), b));
        } else if (any_linear) {
            terms.push_back(affine(std::move(c), b));
        } else {
            terms.push_back(constant(n, b));
        }
    }
    for (auto &r : rest) {
        terms.push_back(std::move(r));
    }
    if (terms.size() == 1) {
        return terms.front();
    }

    auto node = std::make_shared<Node>();
    node->kind = ExprKind::sum;
    node->n = n;
    for (const auto &t : terms) {
        node->smooth = node->smooth && t.is_smooth();
        node->has_quadratic = node->has_quadratic || t.has_quadratic();
    }
    node->args = std::move(terms);
    return ConvexExpr(std::move(node));
}

ConvexExpr ConvexExpr::scaled(double alpha, ConvexExpr arg)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("ConvexExpr::scaled: coefficient must be finite and nonnegative");
    }
    if (alpha == 1.0) {
        return arg;
    }
    switch (arg.kind()) {
    case ExprKind::constant:
        return constant(arg.dimension(), alpha * arg.offset());
    case ExprKind::affine:
        return affine(alpha * arg.linear(), alpha * arg.offset());
    case ExprKind::quadratic:
        return quadratic(alpha * arg.quadratic_matrix(), alpha * arg.linear(), alpha * arg.offset());
    case ExprKind::scale:
        return scaled(alpha * arg.scale_factor(), arg.children().front());
    default:
        break;
    }
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::scale;
    node->n = arg.dimension();
    node->alpha = alpha;
    node->smooth = arg.is_smooth();
    node->has_quadratic = arg.has_quadratic();
    node->args.push_back(std::move(arg));
    return ConvexExpr(std::move(node));
}

ConvexExpr ConvexExpr::coordinate(int n, int index)
{
    if (index < 0 || index >= n) {
        throw std::out_of_range("ConvexExpr::coordinate: index out of range");
    }
    Vector e = Vector::Zero(n);
    e[index] = 1.0;
    return affine(std::move(e), 0.0);
}

ConvexExpr ConvexExpr::squared_distance(const Vector &center)
{
    const auto n = center.size();
    return quadratic(Matrix::Identity(n, n), -2.0 * center, center.squaredNorm());
}

ConvexExpr operator+(const ConvexExpr &a, const ConvexExpr &b)
{
    return ConvexExpr::sum_of({a, b});
}

ConvexExpr operator*(double alpha, const ConvexExpr &e)
{
    return ConvexExpr::scaled(alpha, e);
}

// ---------------------------------------------------------------------------
// Accessors

int ConvexExpr::dimension() const { return node_->n; }
ExprKind ConvexExpr::kind() const { return node_->kind; }
bool ConvexExpr::is_smooth() const { return node_->smooth; }
bool ConvexExpr::has_quadratic() const { return node_->has_quadratic; }

double ConvexExpr::offset() const
{
    const auto k = node_->kind;
    if (k != ExprKind::constant && k != ExprKind::affine && k != ExprKind::quadratic) {
        throw std::logic_error("ConvexExpr::offset: node has no offset");
    }
    return node_->offset;
}

const Vector &ConvexExpr::linear() const
{
    if (node_->kind != ExprKind::affine && node_->kind != ExprKind::quadratic) {
        throw std::logic_error("ConvexExpr::linear: node has no linear part");
    }
    return node_->c;
}

const Matrix &ConvexExpr::quadratic_matrix() const
{
    if (node_->kind != ExprKind::quadratic) {
        throw std::logic_error("ConvexExpr::quadratic_matrix: not a quadratic node");
    }
    return node_->q;
}

int ConvexExpr::index() const
{
    if (node_->kind != ExprKind::abs) {
        throw std::logic_error("ConvexExpr::index: not an abs node");
    }
    return node_->index;
}

double ConvexExpr::scale_factor() const
{
    if (node_->kind != ExprKind::scale) {
        throw std::logic_error("ConvexExpr::scale_factor: not a scale node");
    }
    return node_->alpha;
}

const std::vector<ConvexExpr> &ConvexExpr::children() const
{
    const auto k = node_->kind;
    if (k != ExprKind::max && k != ExprKind::sum && k != ExprKind::scale) {
        throw std::logic_error("ConvexExpr::children: leaf node");
    }
    return node_->args;
}

const char *to_string(ExprKind kind)
{
    switch (kind) {
    case ExprKind::constant: return "constant";
    case ExprKind::affine: return "affine";
    case ExprKind::quadratic: return "quadratic";
    case ExprKind::abs: return "abs";
    case ExprKind::max: return "max";
    case ExprKind::sum: return "sum";
    case ExprKind::scale: return "scale";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using Node = ConvexExpr::Node;

double eval_node(const Node &nd, const Vector &x);

double quad_form(const Node &nd, const Vector &x)
{
    double s = 0.0;
    for (int i = 0; i < nd.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < nd.n; ++j) {
            row += nd.q(i, j) * x[j];
        }
        s += x[i] * row;
    }
    return s;
}

double linear_form(const Vector &c, const Vector &x)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        s += c[i] * x[i];
    }
    return s;
}

} // namespace

double ConvexExpr::eval(const Vector &x) const
{
    require_dimension(x.size(), node_->n, "ConvexExpr::eval");
    return eval_node(*node_, x);
}

namespace {

double eval_node(const Node &nd, const Vector &x)
{
    switch (nd.kind) {
    case ExprKind::constant:
        return nd.offset;
    case ExprKind::affine:
        return linear_form(nd.c, x) + nd.offset;
    case ExprKind::quadratic:
        return quad_form(nd, x) + linear_form(nd.c, x) + nd.offset;
    case ExprKind::abs:
        return std::abs(x[nd.index]);
    case ExprKind::max: {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto &a : nd.args) {
            best = std::max(best, a.eval(x));
        }
        return best;
    }
    case ExprKind::sum: {
        double s = 0.0;
        for (const auto &a : nd.args) {
            s += a.eval(x);
        }
        return s;
    }
    case ExprKind::scale:
        return nd.alpha * nd.args.front().eval(x);
    }
    return 0.0;
}

void add_gradient_of_quadratic(const Node &nd, const Vector &x, double w, Vector &out)
{
    for (int i = 0; i < nd.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < nd.n; ++j) {
            row += nd.q(i, j) * x[j];
        }
        out[i] += w * (2.0 * row + nd.c[i]);
    }
}

} // namespace

Vector ConvexExpr::subgradient(const Vector &x) const
{
    Vector out = Vector::Zero(node_->n);
    accumulate_subgradient(x, 1.0, out);
    return out;
}

void ConvexExpr::accumulate_subgradient(const Vector &x, double weight, Vector &out) const
{
    require_dimension(x.size(), node_->n, "ConvexExpr::subgradient");
    require_dimension(out.size(), node_->n, "ConvexExpr::subgradient output");
    const Node &nd = *node_;
    switch (nd.kind) {
    case ExprKind::constant:
        return;
    case ExprKind::affine:
        out += weight * nd.c;
        return;
    case ExprKind::quadratic:
        add_gradient_of_quadratic(nd, x, weight, out);
        return;
    case ExprKind::abs: {
        const double v = x[nd.index];
        if (v > 0.0) {
            out[nd.index] += weight;
        } else if (v < 0.0) {
            out[nd.index] -= weight;
        }
        return;
    }
    case ExprKind::max: {
        std::size_t arg = 0;
        double best = nd.args.front().eval(x);
        for (std::size_t i = 1; i < nd.args.size(); ++i) {
            const double v = nd.args[i].eval(x);
            if (v > best) {
                best = v;
                arg = i;
            }
        }
        nd.args[arg].accumulate_subgradient(x, weight, out);
        return;
    }
    case ExprKind::sum:
        for (const auto &a : nd.args) {
            a.accumulate_subgradient(x, weight, out);
        }
        return;
    case ExprKind::scale:
        nd.args.front().accumulate_subgradient(x, weight * nd.alpha, out);
        return;
    }
}

double ConvexExpr::directional_derivative(const Vector &x, const Vector &h, double active_tol) const
{
    require_dimension(x.size(), node_->n, "ConvexExpr::directional_derivative point");
    require_dimension(h.size(), node_->n, "ConvexExpr::directional_derivative direction");
    const Node &nd = *node_;
    switch (nd.kind) {
    case ExprKind::constant:
        return 0.0;
    case ExprKind::affine:
        return linear_form(nd.c, h);
    case ExprKind::quadratic: {
        Vector g = Vector::Zero(nd.n);
        add_gradient_of_quadratic(nd, x, 1.0, g);
        return g.dot(h);
    }
    case ExprKind::abs: {
        const double v = x[nd.index];
        if (std::abs(v) <= active_tol) {
            return std::abs(h[nd.index]);
        }
        return v > 0.0 ? h[nd.index] : -h[nd.index];
    }
    case ExprKind::max: {
        std::vector<double> values;
        values.reserve(nd.args.size());
        for (const auto &a : nd.args) {
            values.push_back(a.eval(x));
        }
        const double top = *std::max_element(values.begin(), values.end());
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < nd.args.size(); ++i) {
            if (values[i] >= top - active_tol) {
                best = std::max(best, nd.args[i].directional_derivative(x, h, active_tol));
            }
        }
        return best;
    }
    case ExprKind::sum: {
        double s = 0.0;
        for (const auto &a : nd.args) {
            s += a.directional_derivative(x, h, active_tol);
        }
        return s;
    }
    case ExprKind::scale:
        return nd.alpha * nd.args.front().directional_derivative(x, h, active_tol);
    }
    return 0.0;
}

std::vector<Vector> ConvexExpr::subdifferential_generators(const Vector &x, double active_tol) const
{
    require_dimension(x.size(), node_->n, "ConvexExpr::subdifferential_generators");
    const Node &nd = *node_;
    switch (nd.kind) {
    case ExprKind::constant:
        return {Vector::Zero(nd.n)};
    case ExprKind::affine:
        return {nd.c};
    case ExprKind::quadratic: {
        Vector g = Vector::Zero(nd.n);
        add_gradient_of_quadratic(nd, x, 1.0, g);
        return {g};
    }
    case ExprKind::abs: {
        Vector e = Vector::Zero(nd.n);
        const double v = x[nd.index];
        if (std::abs(v) <= active_tol) {
            e[nd.index] = 1.0;
            return {e, -e};
        }
        e[nd.index] = v > 0.0 ? 1.0 : -1.0;
        return {e};
    }
    case ExprKind::max: {
        std::vector<double> values;
        for (const auto &a : nd.args) {
            values.push_back(a.eval(x));
        }
        const double top = *std::max_element(values.begin(), values.end());
        std::vector<Vector> out;
        for (std::size_t i = 0; i < nd.args.size(); ++i) {
            if (values[i] >= top - active_tol) {
                for (auto &g : nd.args[i].subdifferential_generators(x, active_tol)) {
                    push_unique(out, std::move(g));
                }
            }
        }
        return out;
    }
    case ExprKind::sum: {
        std::vector<Vector> acc{Vector::Zero(nd.n)};
        for (const auto &a : nd.args) {
            const auto part = a.subdifferential_generators(x, active_tol);
            std::vector<Vector> next;
            for (const auto &u : acc) {
                for (const auto &v : part) {
                    push_unique(next, u + v);
                }
            }
            acc = std::move(next);
        }
        return acc;
    }
    case ExprKind::scale: {
        auto gens = nd.args.front().subdifferential_generators(x, active_tol);
        std::vector<Vector> out;
        for (auto &g : gens) {
            push_unique(out, nd.alpha * g);
        }
        return out;
    }
    }
    return {};
}

std::optional<PiecewiseLinearForm> ConvexExpr::to_piecewise_linear() const
{
    if (node_->has_quadratic) {
        return std::nullopt;
    }
    const Node &nd = *node_;
    std::vector<AffinePiece> pieces;
    switch (nd.kind) {
    case ExprKind::quadratic:
        return std::nullopt;
    case ExprKind::constant:
        pieces.push_back({Vector::Zero(nd.n), nd.offset});
        break;
    case ExprKind::affine:
        pieces.push_back({nd.c, nd.offset});
        break;
    case ExprKind::abs: {
        Vector e = Vector::Zero(nd.n);
        e[nd.index] = 1.0;
        pieces.push_back({e, 0.0});
        pieces.push_back({-e, 0.0});
        break;
    }
    case ExprKind::max:
        for (const auto &a : nd.args) {
            const auto part = *a.to_piecewise_linear();
            for (const auto &p : part.pieces()) {
                push_piece(pieces, p);
            }
        }
        break;
    case ExprKind::sum: {
        pieces.push_back({Vector::Zero(nd.n), 0.0});
        for (const auto &a : nd.args) {
            const auto part = *a.to_piecewise_linear();
            std::vector<AffinePiece> next;
            for (const auto &p : pieces) {
                for (const auto &r : part.pieces()) {
                    push_piece(next, {p.slope + r.slope, p.offset + r.offset});
                }
            }
            pieces = std::move(next);
        }
        break;
    }
    case ExprKind::scale: {
        const auto part = *nd.args.front().to_piecewise_linear();
        for (const auto &p : part.pieces()) {
            push_piece(pieces, {nd.alpha * p.slope, nd.alpha * p.offset});
        }
        break;
    }
    }
    return PiecewiseLinearForm(std::move(pieces));
}

double ConvexExpr::curvature_bound() const
{
    const Node &nd = *node_;
    switch (nd.kind) {
    case ExprKind::constant:
    case ExprKind::affine:
    case ExprKind::abs:
        return 0.0;
    case ExprKind::quadratic:
        return 2.0 * nd.q_lambda_max;
    case ExprKind::max: {
        double b = 0.0;
        for (const auto &a : nd.args) {
            b = std::max(b, a.curvature_bound());
        }
        return b;
    }
    case ExprKind::sum: {
        double b = 0.0;
        for (const auto &a : nd.args) {
            b += a.curvature_bound();
        }
        return b;
    }
    case ExprKind::scale:
        return nd.alpha * nd.args.front().curvature_bound();
    }
    return 0.0;
}

// Unfolded on purpose: eval(x) + delta is then computed as one final addition, so
// e.shifted(-e.eval(x0)) vanishes exactly at x0.
ConvexExpr ConvexExpr::shifted(double delta) const
{
    if (delta == 0.0) {
        return *this;
    }
    auto node = std::make_shared<Node>();
    node->kind = ExprKind::sum;
    node->n = node_->n;
    node->smooth = node_->smooth;
    node->has_quadratic = node_->has_quadratic;
    if (node_->kind == ExprKind::sum) {
        node->args = node_->args;
    } else {
        node->args.push_back(*this);
    }
    node->args.push_back(constant(node_->n, delta));
    return ConvexExpr(std::move(node));
}

} // namespace ccpareto
