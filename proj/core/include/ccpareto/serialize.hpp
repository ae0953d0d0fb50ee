#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <ccpareto/cc1.hpp>
#include <ccpareto/certify.hpp>
#include <ccpareto/oracle.hpp>
#include <ccpareto/scalarize.hpp>
#include <ccpareto/solver.hpp>

namespace ccpareto {

using Json = nlohmann::json;

Json vector_to_json(const Vector &v);
Vector vector_from_json(const Json &j);

/// Expressions are tagged trees:
///   {"kind": "constant", "value": v}
///   {"kind": "affine", "coeffs": [...], "offset": b}
///   {"kind": "quadratic", "Q": [[...], ...], "c": [...], "offset": b}   (x'Qx + c'x + b)
///   {"kind": "abs", "index": i}
///   {"kind": "max" | "sum", "args": [...]}
///   {"kind": "scale", "alpha": a, "arg": {...}}
Json expr_to_json(const ConvexExpr &e);
ConvexExpr expr_from_json(const Json &j, int n);

/// {"n", "m", "objectives": [...], "constraints": [...], "box": {"lo", "hi"}}
Json problem_to_json(const VectorProblem &p);
VectorProblem problem_from_json(const Json &j);

Json subproblem_to_json(const ScalarSubproblem &s);
Json solve_result_to_json(const SolveResult &r);

Json trace_to_json(const CC1Trace &t);
/// One row per outer iteration: k, x_1..x_n, f_1..f_m, step_norm, eps, inner_status.
std::string trace_to_csv(const CC1Trace &t);

Json certificate_to_json(const KKTCertificate &c);
Json abadie_to_json(const AbadieReport &r);
Json geoffrion_to_json(const GeoffrionReport &r);

/// Columns x_1..x_n, f_1..f_m.
std::string frontier_to_csv(const FrontierSet &set, int n, int m);

/// Shortest round-trip decimal form.
std::string format_double(double v);

} // namespace ccpareto
