#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <ccpareto/types.hpp>

namespace ccpareto {

/// One affine piece <slope, x> + offset of a max-of-affine function.
struct AffinePiece {
    Vector slope;
    double offset = 0.0;
};

/// f(x) = max_p (<a_p, x> + b_p). Never empty.
class PiecewiseLinearForm {
public:
    explicit PiecewiseLinearForm(std::vector<AffinePiece> pieces);

    [[nodiscard]] int dimension() const { return dimension_; }
    [[nodiscard]] const std::vector<AffinePiece> &pieces() const { return pieces_; }
    [[nodiscard]] std::size_t size() const { return pieces_.size(); }
    [[nodiscard]] double eval(const Vector &x) const;

private:
    std::vector<AffinePiece> pieces_;
    int dimension_ = 0;
};

enum class ExprKind { constant, affine, quadratic, abs, max, sum, scale };

/// Immutable convex expression tree over R^n.
///
/// The node set is closed under the operations that preserve convexity: nonnegative
/// scaling, sums and pointwise maxima of convex terms built from affine functions,
/// PSD quadratics x'Qx + c'x + b and |x_i|. Copies share structure.
class ConvexExpr {
public:
    static ConvexExpr constant(int n, double value);
    static ConvexExpr affine(Vector slope, double offset = 0.0);
    /// x'Qx + c'x + b. Q must be symmetric PSD up to an eigenvalue floor of -1e-12.
    static ConvexExpr quadratic(Matrix q, Vector c, double offset = 0.0);
    static ConvexExpr abs_coordinate(int n, int index);
    static ConvexExpr max_of(std::vector<ConvexExpr> args);
    /// Affine, quadratic and constant children are folded into a single quadratic node.
    static ConvexExpr sum_of(std::vector<ConvexExpr> args);
    static ConvexExpr scaled(double alpha, ConvexExpr arg);

    static ConvexExpr coordinate(int n, int index);
    /// ||x - center||^2
    static ConvexExpr squared_distance(const Vector &center);

    [[nodiscard]] int dimension() const;
    [[nodiscard]] ExprKind kind() const;

    [[nodiscard]] double eval(const Vector &x) const;

    /// One element of the subdifferential. Gradient at smooth points; at an abs kink the
    /// minimal-norm choice 0; for max ties the lowest-index active child.
    [[nodiscard]] Vector subgradient(const Vector &x) const;
    /// out += weight * subgradient(x), without allocating.
    void accumulate_subgradient(const Vector &x, double weight, Vector &out) const;

    /// One-sided directional derivative f'(x; h). Children of a max whose value is within
    /// `active_tol` of the maximum, and abs coordinates with |x_i| <= active_tol, count as active.
    [[nodiscard]] double directional_derivative(const Vector &x, const Vector &h, double active_tol = 0.0) const;

    /// Finite generator set whose convex hull is the subdifferential at x (with the same
    /// activity tolerance as directional_derivative). Duplicates are removed.
    [[nodiscard]] std::vector<Vector> subdifferential_generators(const Vector &x, double active_tol = 0.0) const;

    /// Equivalent max-of-affine form, or nullopt when the tree contains a quadratic node.
    [[nodiscard]] std::optional<PiecewiseLinearForm> to_piecewise_linear() const;

    /// True when the tree has no abs or max nodes (everywhere differentiable).
    [[nodiscard]] bool is_smooth() const;
    [[nodiscard]] bool has_quadratic() const;
    /// Upper bound on the largest Hessian eigenvalue; only meaningful for smooth trees.
    [[nodiscard]] double curvature_bound() const;

    /// this + delta, folding the constant into affine/quadratic/constant nodes.
    [[nodiscard]] ConvexExpr shifted(double delta) const;

    // Node accessors, used by serialization. Each throws std::logic_error on the wrong kind.
    [[nodiscard]] double offset() const;              // constant, affine, quadratic
    [[nodiscard]] const Vector &linear() const;       // affine, quadratic
    [[nodiscard]] const Matrix &quadratic_matrix() const;
    [[nodiscard]] int index() const;                  // abs
    [[nodiscard]] double scale_factor() const;        // scale
    [[nodiscard]] const std::vector<ConvexExpr> &children() const; // max, sum, scale (one child)

    struct Node;

private:
    explicit ConvexExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

ConvexExpr operator+(const ConvexExpr &a, const ConvexExpr &b);
ConvexExpr operator*(double alpha, const ConvexExpr &e);

const char *to_string(ExprKind kind);

} // namespace ccpareto
