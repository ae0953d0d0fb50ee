#include <ccpareto/serialize.hpp>

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ccpareto {

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

Json vector_to_json(const Vector &v)
{
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        j.push_back(v[i]);
    }
    return j;
}

Vector vector_from_json(const Json &j)
{
    if (!j.is_array()) {
        throw std::invalid_argument("expected a JSON array of numbers");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

namespace {

Json matrix_to_json(const Matrix &m)
{
    Json j = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        j.push_back(vector_to_json(m.row(r).transpose()));
    }
    return j;
}

Matrix matrix_from_json(const Json &j, int n)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n) {
        throw std::invalid_argument("quadratic: Q must be an n x n array");
    }
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        const Vector row = vector_from_json(j[r]);
        require_dimension(row.size(), n, "quadratic matrix row");
        m.row(r) = row.transpose();
    }
    return m;
}

const Json &field(const Json &j, const char *name)
{
    if (!j.is_object() || !j.contains(name)) {
        throw std::invalid_argument(std::string("missing JSON field '") + name + "'");
    }
    return j.at(name);
}

std::vector<ConvexExpr> exprs_from_json(const Json &j, int n)
{
    if (!j.is_array()) {
        throw std::invalid_argument("expected a JSON array of expressions");
    }
    std::vector<ConvexExpr> out;
    for (const auto &e : j) {
        out.push_back(expr_from_json(e, n));
    }
    return out;
}

Json exprs_to_json(const std::vector<ConvexExpr> &es)
{
    Json j = Json::array();
    for (const auto &e : es) {
        j.push_back(expr_to_json(e));
    }
    return j;
}

Json box_to_json(const Box &b)
{
    return {{"lo", vector_to_json(b.lo)}, {"hi", vector_to_json(b.hi)}};
}

} // namespace

Json expr_to_json(const ConvexExpr &e)
{
    switch (e.kind()) {
    case ExprKind::constant: return {{"kind", "constant"}, {"value", e.offset()}};
    case ExprKind::affine:
        return {{"kind", "affine"}, {"coeffs", vector_to_json(e.linear())}, {"offset", e.offset()}};
    case ExprKind::quadratic:
        return {{"kind", "quadratic"},
                {"Q", matrix_to_json(e.quadratic_matrix())},
                {"c", vector_to_json(e.linear())},
                {"offset", e.offset()}};
    case ExprKind::abs: return {{"kind", "abs"}, {"index", e.index()}};
    case ExprKind::max: return {{"kind", "max"}, {"args", exprs_to_json(e.children())}};
    case ExprKind::sum: return {{"kind", "sum"}, {"args", exprs_to_json(e.children())}};
    case ExprKind::scale:
        return {{"kind", "scale"}, {"alpha", e.scale_factor()}, {"arg", expr_to_json(e.children().front())}};
    }
    throw std::logic_error("expr_to_json: unknown node kind");
}

ConvexExpr expr_from_json(const Json &j, int n)
{
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "constant") {
        return ConvexExpr::constant(n, field(j, "value").get<double>());
    }
    if (kind == "affine") {
        Vector a = vector_from_json(field(j, "coeffs"));
        require_dimension(a.size(), n, "affine coefficients");
        return ConvexExpr::affine(std::move(a), j.value("offset", 0.0));
    }
    if (kind == "quadratic") {
        Matrix q = matrix_from_json(field(j, "Q"), n);
        Vector c = j.contains("c") ? vector_from_json(j.at("c")) : Vector::Zero(n);
        require_dimension(c.size(), n, "quadratic linear term");
        return ConvexExpr::quadratic(std::move(q), std::move(c), j.value("offset", 0.0));
    }
    if (kind == "abs") {
        return ConvexExpr::abs_coordinate(n, field(j, "index").get<int>());
    }
    if (kind == "max") {
        return ConvexExpr::max_of(exprs_from_json(field(j, "args"), n));
    }
    if (kind == "sum") {
        return ConvexExpr::sum_of(exprs_from_json(field(j, "args"), n));
    }
    if (kind == "scale") {
        return ConvexExpr::scaled(field(j, "alpha").get<double>(), expr_from_json(field(j, "arg"), n));
    }
    throw std::invalid_argument("unknown expression kind '" + kind + "'");
}

Json problem_to_json(const VectorProblem &p)
{
    return {{"n", p.dimension()},
            {"m", p.num_objectives()},
            {"objectives", exprs_to_json(p.objectives())},
            {"constraints", exprs_to_json(p.constraints())},
            {"box", box_to_json(p.box())}};
}

VectorProblem problem_from_json(const Json &j)
{
    const int n = field(j, "n").get<int>();
    if (n < 1) {
        throw std::invalid_argument("problem: n must be positive");
    }
    const Json &box = field(j, "box");
    Box b(vector_from_json(field(box, "lo")), vector_from_json(field(box, "hi")));
    require_dimension(b.lo.size(), n, "problem box");
    auto objectives = exprs_from_json(field(j, "objectives"), n);
    if (j.contains("m") && j.at("m").get<int>() != static_cast<int>(objectives.size())) {
        throw std::invalid_argument("problem: m does not match the number of objectives");
    }
    auto constraints = j.contains("constraints") ? exprs_from_json(j.at("constraints"), n) : std::vector<ConvexExpr>{};
    return VectorProblem(std::move(objectives), std::move(constraints), std::move(b));
}

Json subproblem_to_json(const ScalarSubproblem &s)
{
    Json j = {{"n", s.dimension()},
              {"provenance", to_string(s.provenance)},
              {"objective", expr_to_json(s.objective)},
              {"constraints", exprs_to_json(s.constraints)},
              {"box", box_to_json(s.box)}};
    if (s.anchor) {
        j["anchor"] = vector_to_json(*s.anchor);
    }
    return j;
}

Json solve_result_to_json(const SolveResult &r)
{
    return {{"x", vector_to_json(r.x)},
            {"objective", r.objective},
            {"max_violation", r.max_violation},
            {"iterations", r.iterations},
            {"status", to_string(r.status)},
            {"backend", to_string(r.backend)}};
}

Json trace_to_json(const CC1Trace &t)
{
    Json records = Json::array();
    for (const auto &r : t.records) {
        records.push_back({{"k", r.k},
                           {"x", vector_to_json(r.x)},
                           {"f", vector_to_json(r.f)},
                           {"y", vector_to_json(r.y)},
                           {"step_norm", r.step_norm},
                           {"eps", r.eps},
                           {"objective_sum_change", r.objective_sum_change},
                           {"inner_status", to_string(r.inner_status)},
                           {"inner_iterations", r.inner_iterations}});
    }
    return {{"start", vector_to_json(t.start)},
            {"status", to_string(t.status)},
            {"final_point", vector_to_json(t.final_point)},
            {"final_values", vector_to_json(t.final_values)},
            {"records", records}};
}

std::string trace_to_csv(const CC1Trace &t)
{
    std::ostringstream out;
    const auto n = t.start.size();
    const auto m = t.final_values.size();
    out << "k";
    for (Eigen::Index i = 0; i < n; ++i) {
        out << ",x_" << i + 1;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        out << ",f_" << i + 1;
    }
    out << ",step_norm,eps,inner_status\n";
    for (const auto &r : t.records) {
        out << r.k;
        for (Eigen::Index i = 0; i < r.x.size(); ++i) {
            out << ',' << format_double(r.x[i]);
        }
        for (Eigen::Index i = 0; i < r.f.size(); ++i) {
            out << ',' << format_double(r.f[i]);
        }
        out << ',' << format_double(r.step_norm) << ',' << format_double(r.eps) << ',' << to_string(r.inner_status)
            << '\n';
    }
    return out.str();
}

Json certificate_to_json(const KKTCertificate &c)
{
    Json u = Json::array();
    for (const auto &v : c.objective_subgradients) {
        u.push_back(vector_to_json(v));
    }
    Json v = Json::array();
    for (const auto &w : c.constraint_subgradients) {
        v.push_back(vector_to_json(w));
    }
    return {{"mode", to_string(c.mode)},
            {"verdict", to_string(c.verdict)},
            {c.mode == KKTMode::weak ? "tau" : "lambda", vector_to_json(c.lambda)},
            {"mu", vector_to_json(c.mu)},
            {"box_lower", vector_to_json(c.box_lower)},
            {"box_upper", vector_to_json(c.box_upper)},
            {"objective_subgradients", u},
            {"constraint_subgradients", v},
            {"stationarity_residual", c.stationarity_residual},
            {"complementarity_residual", c.complementarity_residual}};
}

Json abadie_to_json(const AbadieReport &r)
{
    Json dirs = Json::array();
    for (const auto &d : r.directions) {
        dirs.push_back({{"h", vector_to_json(d.h)}, {"feasible", d.feasible}, {"step", d.accepted_step}});
    }
    Json j = {{"verdict", to_string(r.verdict)}, {"sampled", r.sampled}, {"directions_in_V", dirs}};
    j["witness"] = r.witness ? vector_to_json(*r.witness) : Json(nullptr);
    return j;
}

Json geoffrion_to_json(const GeoffrionReport &r)
{
    Json j = {{"verdict", to_string(r.verdict)}, {"cap", r.cap}, {"evaluated", r.evaluated}};
    // JSON has no infinity; report it as a string.
    j["m_hat"] = std::isfinite(r.m_hat) ? Json(r.m_hat) : Json("inf");
    j["argmax"] = r.argmax ? vector_to_json(*r.argmax) : Json(nullptr);
    return j;
}

std::string frontier_to_csv(const FrontierSet &set, int n, int m)
{
    std::ostringstream out;
    for (int i = 0; i < n; ++i) {
        out << (i ? "," : "") << "x_" << i + 1;
    }
    for (int i = 0; i < m; ++i) {
        out << ",f_" << i + 1;
    }
    out << '\n';
    for (std::size_t p = 0; p < set.size(); ++p) {
        for (int i = 0; i < n; ++i) {
            out << (i ? "," : "") << format_double(set.points[p][i]);
        }
        for (int i = 0; i < m; ++i) {
            out << ',' << format_double(set.values[p][i]);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace ccpareto
