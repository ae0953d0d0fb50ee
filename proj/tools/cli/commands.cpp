#include <ccpareto_cli/cli.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include <ccpareto/bench.hpp>
#include <ccpareto/certify.hpp>
#include <ccpareto/oracle.hpp>
#include <ccpareto/scalarize.hpp>
#include <ccpareto/solver.hpp>

namespace ccpareto::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProblemFlags {
    std::string id;
    std::string file;
};

struct CC1Flags {
    double tol = SolverConfig{}.feas_tol;
    double eps0 = CC1Config{}.eps0;
    double gamma = CC1Config{}.gamma;
    double eps_min = CC1Config{}.eps_min;
    int max_outer = CC1Config{}.max_outer;
    std::string backend = "auto";
    bool proximal = false;

    [[nodiscard]] CC1Config config() const
    {
        CC1Config cfg;
        cfg.eps0 = eps0;
        cfg.gamma = gamma;
        cfg.eps_min = eps_min;
        cfg.max_outer = max_outer;
        cfg.proximal = proximal;
        cfg.solver.feas_tol = tol;
        cfg.solver.backend = parse_backend(backend);
        cfg.validate();
        return cfg;
    }

    [[nodiscard]] Json to_json() const
    {
        return {{"tol", tol},         {"eps0", eps0},       {"gamma", gamma},      {"eps_min", eps_min},
                {"max_outer", max_outer}, {"backend", backend}, {"proximal", proximal}};
    }
};

void add_problem_flags(CLI::App *app, ProblemFlags &flags)
{
    auto *id = app->add_option("--problem", flags.id, "Builtin problem id (see `list`)");
    auto *file = app->add_option("--problem-file", flags.file, "Problem JSON file");
    id->excludes(file);
}

void add_cc1_flags(CLI::App *app, CC1Flags &flags)
{
    app->add_option("--tol", flags.tol, "Feasibility tolerance of the inner solver");
    app->add_option("--eps0", flags.eps0, "Initial outer tolerance");
    app->add_option("--gamma", flags.gamma, "Tolerance decay factor in (0, 1)");
    app->add_option("--eps-min", flags.eps_min, "Tolerance floor");
    app->add_option("--max-outer", flags.max_outer, "Outer iteration budget");
    app->add_option("--backend", flags.backend, "Inner solver: auto, lp, penalty-subgradient");
    app->add_flag("--proximal", flags.proximal, "Use the proximal subproblem");
}

NamedProblem load_problem(const ProblemFlags &flags)
{
    if (flags.id.empty() && flags.file.empty()) {
        throw UsageError("one of --problem or --problem-file is required");
    }
    if (!flags.id.empty()) {
        return get_problem(flags.id);
    }
    std::ifstream in(flags.file);
    if (!in) {
        throw UsageError("cannot read problem file '" + flags.file + "'");
    }
    Json j;
    try {
        in >> j;
    } catch (const Json::exception &e) {
        throw UsageError("problem file '" + flags.file + "' is not valid JSON: " + e.what());
    }
    return NamedProblem{std::filesystem::path(flags.file).stem().string(), problem_from_json(j), "", {}, {}, {}};
}

Vector point_for(const NamedProblem &named, const std::string &text, const char *flag)
{
    Vector x;
    try {
        x = parse_point(text);
    } catch (const std::invalid_argument &e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
    if (x.size() != named.problem.dimension()) {
        throw UsageError(std::string(flag) + ": expected " + std::to_string(named.problem.dimension()) +
                         " coordinates, got " + std::to_string(x.size()));
    }
    return x;
}

void write_file(const std::string &path, const std::string &content, RunReport *report = nullptr)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    if (report) {
        report->files.push_back(path);
    }
}

int default_oracle_grid(int n)
{
    switch (n) {
    case 1: return 2001;
    case 2: return 401;
    case 3: return 101;
    default: throw UsageError("oracle is limited to n <= 3 (problem has n = " + std::to_string(n) + ")");
    }
}

int default_geoffrion_grid(int n)
{
    switch (n) {
    case 1: return 100000;
    case 2: return 1001;
    case 3: return 101;
    default: return 11;
    }
}

std::vector<Vector> images(const std::vector<CC1Trace> &traces, bool converged_only)
{
    std::vector<Vector> out;
    for (const auto &t : traces) {
        if (t.status == CC1Status::sampling_failed || (converged_only && !t.converged())) {
            continue;
        }
        out.push_back(t.final_values);
    }
    return out;
}

RunReport summarize(const NamedProblem &named, const std::vector<CC1Trace> &traces, Json config)
{
    RunReport report;
    report.problem = named.id;
    report.config = std::move(config);
    report.starts = static_cast<int>(traces.size());
    for (const auto &t : traces) {
        report.rows.push_back({t.start, t.final_point, t.final_values, t.outer_iterations(), to_string(t.status)});
        if (!t.converged()) {
            continue;
        }
        ++report.converged;
        if (named.has_analytic_frontier()) {
            const double r = std::abs(named.frontier_residual(t.final_values));
            report.max_frontier_residual = std::max(report.max_frontier_residual.value_or(0.0), r);
        }
    }
    return report;
}

// Subcommands. Each returns an exit code.

int cmd_list(std::ostream &out)
{
    for (const auto &id : builtin_problem_ids()) {
        const auto named = get_problem(id);
        out << id << "\tn=" << named.problem.dimension() << " m=" << named.problem.num_objectives() << "\t"
            << named.pareto_set_description << '\n';
    }
    out << "random-quadratic:SEED:N:M\tn=N m=M\tstrictly convex quadratics on [-10,10]^N\n";
    return kExitOk;
}

int cmd_solve(const NamedProblem &named, const CC1Flags &flags, const std::string &start, const std::string &csv,
              std::ostream &out)
{
    const Vector x0 = point_for(named, start, "--start");
    const auto trace = run_cc1(named.problem, x0, flags.config());
    Json j = trace_to_json(trace);
    j["problem"] = named.id;
    j["config"] = flags.to_json();
    if (!csv.empty()) {
        write_file(csv, trace_to_csv(trace));
        j["files"] = Json::array({csv});
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_frontier(const NamedProblem &named, const CC1Flags &flags, int starts, std::uint64_t seed,
                 const std::string &csv, const std::string &svg, std::ostream &out)
{
    if (starts < 1) {
        throw UsageError("--starts must be at least 1");
    }
    if (!svg.empty() && named.problem.num_objectives() != 2) {
        throw UsageError("--svg needs a problem with exactly two objectives");
    }
    const auto cfg = flags.config();
    const auto traces = multi_start(named.problem, starts, seed, cfg);

    Json config = flags.to_json();
    config["starts"] = starts;
    config["seed"] = seed;
    RunReport report = summarize(named, traces, config);
    if (!csv.empty()) {
        write_file(csv, frontier_csv(named.problem, traces), &report);
    }
    if (!svg.empty()) {
        std::vector<Vector> start_images;
        for (const auto &t : traces) {
            if (t.status != CC1Status::sampling_failed) {
                start_images.push_back(named.problem.objective_values(t.start));
            }
        }
        write_file(svg, frontier_svg(start_images, images(traces, false), named.id), &report);
    }
    out << report.to_json().dump(2) << '\n';
    return kExitOk;
}

int cmd_certify(const NamedProblem &named, const std::string &point, const std::string &mode, int samples,
                std::uint64_t seed, int grid, double cap, std::ostream &out)
{
    const Vector x0 = point_for(named, point, "--point");
    if (!named.problem.is_feasible(x0, KKTOptions{}.active_tol)) {
        throw InfeasiblePointError("--point is not feasible");
    }
    Json j = {{"problem", named.id}, {"point", vector_to_json(x0)}, {"mode", mode}};
    bool positive = false;
    if (mode == "weak-kkt" || mode == "strong-kkt") {
        const auto cert = find_kkt(named.problem, x0, mode == "weak-kkt" ? KKTMode::weak : KKTMode::strong);
        positive = cert.certified();
        j["result"] = certificate_to_json(cert);
    } else if (mode == "abadie") {
        const auto rep = check_strong_abadie(named.problem, x0, samples, 1e-10, seed);
        positive = rep.verdict == AbadieVerdict::holds_on_sample;
        j["result"] = abadie_to_json(rep);
    } else if (mode == "geoffrion") {
        const int g = grid > 0 ? grid : default_geoffrion_grid(named.problem.dimension());
        const auto rep = estimate_geoffrion(named.problem, x0, g, cap);
        positive = rep.verdict == GeoffrionVerdict::bounded_below_cap;
        j["grid"] = g;
        j["result"] = geoffrion_to_json(rep);
    } else {
        throw UsageError("--mode must be one of weak-kkt, strong-kkt, abadie, geoffrion");
    }
    j["certified"] = positive;
    out << j.dump(2) << '\n';
    return positive ? kExitOk : kExitNegative;
}

int cmd_oracle(const NamedProblem &named, int grid, const std::string &csv, const std::string &svg,
               std::ostream &out)
{
    const int n = named.problem.dimension();
    const int m = named.problem.num_objectives();
    const int res = grid > 0 ? grid : default_oracle_grid(n);
    if (n > 3) {
        throw UsageError("oracle is limited to n <= 3");
    }
    if (!svg.empty() && m != 2) {
        throw UsageError("--svg needs a problem with exactly two objectives");
    }
    const auto set = grid_pareto(named.problem, res, named.id);

    RunReport report;
    report.problem = named.id;
    report.config = {{"grid", res}};
    report.extra["survivors"] = set.size();
    report.extra["grid_step"] = vector_to_json(grid_step(named.problem.box(), res));
    if (named.has_analytic_frontier()) {
        double worst_r = 0.0;
        double worst_d = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i) {
            worst_r = std::max(worst_r, std::abs(named.frontier_residual(set.values[i])));
            worst_d = std::max(worst_d, named.pareto_set_distance(set.points[i]));
        }
        report.max_frontier_residual = worst_r;
        report.extra["max_pareto_set_distance"] = worst_d;
    }
    if (!csv.empty()) {
        write_file(csv, frontier_to_csv(set, n, m), &report);
    }
    if (!svg.empty()) {
        write_file(svg, frontier_svg({}, set.values, named.id + " (grid oracle)"), &report);
    }
    out << report.to_json().dump(2) << '\n';
    return kExitOk;
}

int cmd_compare(const NamedProblem &named, const CC1Flags &flags, int starts, std::uint64_t seed, int tau_grid,
                int grid, const std::string &csv, std::ostream &out)
{
    if (named.problem.num_objectives() != 2) {
        throw UsageError("compare needs a problem with exactly two objectives");
    }
    if (starts < 1 || tau_grid < 1) {
        throw UsageError("--starts and --tau-grid must be at least 1");
    }
    const int res = grid > 0 ? grid : default_oracle_grid(named.problem.dimension());
    const auto cfg = flags.config();
    const auto oracle = grid_pareto(named.problem, res, named.id);
    const auto traces = multi_start(named.problem, starts, seed, cfg);
    const auto cc1_images = images(traces, true);

    std::vector<Vector> ws_images;
    std::vector<double> ws_t;
    int ws_failures = 0;
    for (int i = 0; i < tau_grid; ++i) {
        const double t = static_cast<double>(i + 1) / (tau_grid + 1);
        Vector tau(2);
        tau << t, 1.0 - t;
        const auto r = solve(weighted_sum(named.problem, tau), cfg.solver);
        if (r.status == SolveStatus::infeasible_detected || r.max_violation > cfg.solver.feas_tol) {
            ++ws_failures;
            continue;
        }
        ws_images.push_back(named.problem.objective_values(r.x));
        ws_t.push_back(t);
    }

    Json config = flags.to_json();
    config["starts"] = starts;
    config["seed"] = seed;
    config["tau_grid"] = tau_grid;
    config["grid"] = res;
    RunReport report = summarize(named, traces, config);
    const auto dist = [&](const std::vector<Vector> &from) {
        return from.empty() ? Json(nullptr) : Json(one_sided_hausdorff(from, oracle.values));
    };
    report.extra["oracle_size"] = oracle.size();
    report.extra["cc1_distance_to_oracle"] = dist(cc1_images);
    report.extra["weighted_sum_points"] = ws_images.size();
    report.extra["weighted_sum_failures"] = ws_failures;
    report.extra["weighted_sum_distance_to_oracle"] = dist(ws_images);

    if (!csv.empty()) {
        std::ostringstream s;
        s << "method,index,t,f_1,f_2\n";
        for (std::size_t i = 0; i < traces.size(); ++i) {
            if (traces[i].converged()) {
                s << "cc1," << i << ",," << format_double(traces[i].final_values[0]) << ','
                  << format_double(traces[i].final_values[1]) << '\n';
            }
        }
        for (std::size_t i = 0; i < ws_images.size(); ++i) {
            s << "weighted-sum," << i << ',' << format_double(ws_t[i]) << ',' << format_double(ws_images[i][0])
              << ',' << format_double(ws_images[i][1]) << '\n';
        }
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            s << "oracle," << i << ",," << format_double(oracle.values[i][0]) << ','
              << format_double(oracle.values[i][1]) << '\n';
        }
        write_file(csv, s.str(), &report);
    }
    out << report.to_json().dump(2) << '\n';
    return kExitOk;
}

} // namespace

Json RunReport::to_json() const
{
    Json runs = Json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        runs.push_back({{"index", i},
                        {"start", vector_to_json(r.start)},
                        {"x", vector_to_json(r.x)},
                        {"f", vector_to_json(r.f)},
                        {"outer_iterations", r.outer_iterations},
                        {"status", r.status}});
    }
    Json j = {{"problem", problem},
              {"config", config},
              {"summary",
               {{"starts", starts},
                {"converged", converged},
                {"max_frontier_residual", max_frontier_residual ? Json(*max_frontier_residual) : Json(nullptr)}}},
              {"files", files}};
    if (!rows.empty()) {
        j["runs"] = runs;
    }
    for (const auto &[key, value] : extra.items()) {
        j["summary"][key] = value;
    }
    return j;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Multi-objective convex optimization via Charnes-Cooper scalarization", "ccpareto"};
    app.require_subcommand(1);

    ProblemFlags problem;
    CC1Flags cc1;
    std::string start;
    std::string point;
    std::string mode;
    std::string csv;
    std::string svg;
    int starts = 200;
    std::uint64_t seed = 0;
    int grid = 0;
    int tau_grid = 50;
    int samples = 2000;
    double cap = 1e6;

    auto *list = app.add_subcommand("list", "List builtin problems");

    auto *solve_cmd = app.add_subcommand("solve", "Run the outer loop from one start, print the trace");
    add_problem_flags(solve_cmd, problem);
    add_cc1_flags(solve_cmd, cc1);
    solve_cmd->add_option("--start", start, "Start point, comma separated")->required();
    solve_cmd->add_option("--out", csv, "Trace CSV path");

    auto *frontier = app.add_subcommand("frontier", "Multi-start run, write CSV and SVG artifacts");
    add_problem_flags(frontier, problem);
    add_cc1_flags(frontier, cc1);
    frontier->add_option("--starts", starts, "Number of random starts");
    frontier->add_option("--seed", seed, "RNG seed");
    frontier->add_option("--out", csv, "CSV path");
    frontier->add_option("--svg", svg, "SVG scatter path (m = 2)");

    auto *certify = app.add_subcommand("certify", "Check optimality conditions at a point");
    add_problem_flags(certify, problem);
    certify->add_option("--point", point, "Point, comma separated")->required();
    certify->add_option("--mode", mode, "weak-kkt, strong-kkt, abadie or geoffrion")->required();
    certify->add_option("--samples", samples, "Sampled directions (abadie)");
    certify->add_option("--seed", seed, "RNG seed (abadie)");
    certify->add_option("--grid", grid, "Grid points per axis (geoffrion)");
    certify->add_option("--cap", cap, "Ratio cap (geoffrion)");

    auto *oracle = app.add_subcommand("oracle", "Brute-force grid frontier (n <= 3)");
    add_problem_flags(oracle, problem);
    oracle->add_option("--grid", grid, "Grid points per axis");
    oracle->add_option("--out", csv, "Frontier CSV path");
    oracle->add_option("--svg", svg, "SVG scatter path (m = 2)");

    auto *compare = app.add_subcommand("compare", "Outer loop and weighted-sum sweep against the grid oracle");
    add_problem_flags(compare, problem);
    add_cc1_flags(compare, cc1);
    compare->add_option("--starts", starts, "Number of random starts");
    compare->add_option("--seed", seed, "RNG seed");
    compare->add_option("--tau-grid", tau_grid, "Number of weight vectors");
    compare->add_option("--grid", grid, "Oracle grid points per axis");
    compare->add_option("--out", csv, "CSV path for all images");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (list->parsed()) {
            return cmd_list(out);
        }
        const auto named = load_problem(problem);
        if (solve_cmd->parsed()) {
            return cmd_solve(named, cc1, start, csv, out);
        }
        if (frontier->parsed()) {
            return cmd_frontier(named, cc1, starts, seed, csv, svg, out);
        }
        if (certify->parsed()) {
            return cmd_certify(named, point, mode, samples, seed, grid, cap, out);
        }
        if (oracle->parsed()) {
            return cmd_oracle(named, grid, csv, svg, out);
        }
        if (compare->parsed()) {
            if (!compare->count("--starts")) {
                starts = 50;
            }
            return cmd_compare(named, cc1, starts, seed, tau_grid, grid, csv, out);
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace ccpareto::cli
