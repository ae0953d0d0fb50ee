#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <ccpareto/cc1.hpp>
#include <ccpareto/serialize.hpp>

namespace ccpareto::cli {

/// Exit codes: 0 success / certified, 1 usage or input error, 2 not certified / check fails.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNegative = 2;

/// Summary of a multi-start or oracle run, printed as JSON on stdout.
struct RunReport {
    struct Row {
        Vector start;
        Vector x;
        Vector f;
        int outer_iterations = 0;
        std::string status;
    };

    std::string problem;
    Json config = Json::object();
    std::vector<Row> rows;
    int starts = 0;
    int converged = 0;
    std::optional<double> max_frontier_residual;
    std::vector<std::string> files;
    Json extra = Json::object();

    [[nodiscard]] Json to_json() const;
};

/// Entry point shared by the executable and the tests. args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Parses "1", "0.5,-1" or "0.5 -1".
Vector parse_point(const std::string &text);

/// One row per start: index, start_x_*, start_f_*, x_*, f_*, iters, status.
std::string frontier_csv(const VectorProblem &problem, const std::vector<CC1Trace> &traces);

/// Objective-space scatter: starts as plus marks, finals as circles. m must be 2.
std::string frontier_svg(const std::vector<Vector> &starts, const std::vector<Vector> &finals,
                         const std::string &title);

/// max over a in from of min over b in to of ||a - b||_2.
double one_sided_hausdorff(const std::vector<Vector> &from, const std::vector<Vector> &to);

} // namespace ccpareto::cli
