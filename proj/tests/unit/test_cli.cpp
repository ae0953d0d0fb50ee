#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include <ccpareto/bench.hpp>
#include <ccpareto/serialize.hpp>
#include <ccpareto_cli/cli.hpp>

using namespace ccpareto;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;

    [[nodiscard]] Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    Outcome o;
    o.code = cli::run(args, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("ccpareto-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    [[nodiscard]] std::string path(const std::string &name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::string slurp(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string &path)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string> &header, const std::string &name)
{
    const auto it = std::find(header.begin(), header.end(), name);
    EXPECT_NE(it, header.end()) << name;
    return static_cast<std::size_t>(it - header.begin());
}

// Minimal well-formedness check: declaration, balanced element nesting, quoted attributes.
bool well_formed_xml(const std::string &doc)
{
    std::vector<std::string> stack;
    std::size_t pos = 0;
    bool root_seen = false;
    const std::regex attributes(R"re((\s+[A-Za-z_:][-A-Za-z0-9_:.]*="[^"<]*")*\s*)re");
    while ((pos = doc.find('<', pos)) != std::string::npos) {
        const auto end = doc.find('>', pos);
        if (end == std::string::npos) {
            return false;
        }
        std::string tag = doc.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.front() == '?') {
            continue;
        }
        if (tag.front() == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) {
                return false;
            }
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        if (self_closing) {
            tag.pop_back();
        }
        const auto name_end = tag.find_first_of(" \t\n");
        const std::string name = tag.substr(0, name_end);
        const std::string rest = name_end == std::string::npos ? "" : tag.substr(name_end);
        if (!std::regex_match(rest, attributes)) {
            return false;
        }
        if (stack.empty()) {
            if (root_seen) {
                return false;
            }
            root_seen = true;
        }
        if (!self_closing) {
            stack.push_back(name);
        }
    }
    return root_seen && stack.empty();
}

std::size_t count(const std::string &s, const std::string &needle)
{
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) {
        ++n;
    }
    return n;
}

} // namespace

TEST(CliParse, Points)
{
    EXPECT_EQ(cli::parse_point("1").size(), 1);
    const Vector p = cli::parse_point("0.5,-1");
    EXPECT_EQ(p[0], 0.5);
    EXPECT_EQ(p[1], -1.0);
    EXPECT_EQ(cli::parse_point("0.5 -1"), p);
    EXPECT_THROW(cli::parse_point(""), std::invalid_argument);
    EXPECT_THROW(cli::parse_point("1,x"), std::invalid_argument);
    EXPECT_THROW(cli::parse_point("1e999"), std::invalid_argument);
}

TEST(CliHausdorff, OneSided)
{
    const std::vector<Vector> a = {cli::parse_point("0,0"), cli::parse_point("3,4")};
    const std::vector<Vector> b = {cli::parse_point("0,0")};
    EXPECT_DOUBLE_EQ(cli::one_sided_hausdorff(a, b), 5.0);
    EXPECT_DOUBLE_EQ(cli::one_sided_hausdorff(b, a), 0.0);
    EXPECT_THROW(cli::one_sided_hausdorff(a, {}), std::invalid_argument);
}

TEST_F(CliTest, ListShowsBuiltins)
{
    const auto o = run({"list"});
    EXPECT_EQ(o.code, 0);
    for (const auto &id : builtin_problem_ids()) {
        EXPECT_NE(o.out.find(id), std::string::npos);
    }
}

TEST_F(CliTest, UsageErrors)
{
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"launch"}).code, 1);
    EXPECT_EQ(run({"frontier"}).code, 1);
    EXPECT_EQ(run({"frontier", "--problem", "nope"}).code, 1);
    EXPECT_EQ(run({"frontier", "--problem", "schaffer", "--starts", "0"}).code, 1);
    EXPECT_EQ(run({"frontier", "--problem", "schaffer", "--gamma", "2"}).code, 1);
    EXPECT_EQ(run({"frontier", "--problem", "schaffer", "--backend", "simplex"}).code, 1);
    EXPECT_EQ(run({"frontier", "--problem", "schaffer", "--problem-file", "x.json"}).code, 1);
    EXPECT_EQ(run({"certify", "--problem", "schaffer", "--point", "1"}).code, 1);
    EXPECT_EQ(run({"certify", "--problem", "schaffer", "--point", "1", "--mode", "fritz-john"}).code, 1);
    EXPECT_EQ(run({"certify", "--problem", "schaffer", "--point", "1,2", "--mode", "weak-kkt"}).code, 1);
    EXPECT_EQ(run({"oracle", "--problem", "random-quadratic:1:4:2"}).code, 1);
    EXPECT_EQ(run({"oracle", "--problem", "binh", "--grid", "5000"}).code, 1);
    EXPECT_EQ(run({"compare", "--problem", "random-quadratic:1:2:3"}).code, 1);
    EXPECT_EQ(run({"solve", "--problem", "jahn"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, FrontierSchafferArtifacts)
{
    const auto csv = path("s.csv");
    const auto svg = path("s.svg");
    const auto o = run({"frontier", "--problem", "schaffer", "--starts", "200", "--seed", "42", "--out", csv, "--svg", svg});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto report = o.json();
    EXPECT_EQ(report.at("summary").at("starts"), 200);
    EXPECT_LE(report.at("summary").at("converged").get<int>(), 200);
    for (const auto &f : report.at("files")) {
        EXPECT_TRUE(fs::exists(f.get<std::string>()));
    }

    const auto rows = read_csv(csv);
    ASSERT_EQ(rows.size(), 201u);
    const auto &h = rows[0];
    EXPECT_EQ(h, (std::vector<std::string>{"index", "start_x_1", "start_f_1", "start_f_2", "x_1", "f_1", "f_2", "iters",
                                           "status"}));
    const auto f1 = column(h, "f_1");
    const auto f2 = column(h, "f_2");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        ASSERT_EQ(rows[r].size(), h.size());
        const double a = std::stod(rows[r][f1]);
        const double b = std::stod(rows[r][f2]);
        EXPECT_LE(std::abs(std::sqrt(a) + std::sqrt(b) - 2.0), 1e-3);
    }

    const auto doc = slurp(svg);
    EXPECT_TRUE(well_formed_xml(doc));
    EXPECT_EQ(count(doc, "class=\"start\""), 200u);
    EXPECT_EQ(count(doc, "class=\"final\""), 200u);
    EXPECT_NE(doc.find("f\xe2\x82\x81"), std::string::npos);
    EXPECT_NE(doc.find("f\xe2\x82\x82"), std::string::npos);
}

TEST_F(CliTest, FrontierIsDeterministic)
{
    const auto a = path("a.csv");
    const auto b = path("b.csv");
    ASSERT_EQ(run({"frontier", "--problem", "jahn", "--starts", "20", "--seed", "3", "--out", a}).code, 0);
    ASSERT_EQ(run({"frontier", "--problem", "jahn", "--starts", "20", "--seed", "3", "--out", b}).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_FALSE(slurp(a).empty());
}

TEST_F(CliTest, FrontierJahnSingleStart)
{
    const auto o = run({"frontier", "--problem", "jahn", "--starts", "1", "--seed", "1"});
    ASSERT_EQ(o.code, 0);
    const auto runs = o.json().at("runs");
    ASSERT_EQ(runs.size(), 1u);
    const Vector f = vector_from_json(runs[0].at("f"));
    EXPECT_LE(std::abs(f.squaredNorm() - 1.0), 1e-3);
    EXPECT_LE(f.maxCoeff(), 1e-4);
}

TEST_F(CliTest, FrontierWriteFailure)
{
    const auto o = run({"frontier", "--problem", "schaffer", "--starts", "2", "--out", path("missing/dir/s.csv")});
    EXPECT_EQ(o.code, 1);
    EXPECT_FALSE(o.err.empty());
}

TEST_F(CliTest, FrontierFromProblemFile)
{
    const auto file = path("custom.json");
    std::ofstream(file) << problem_to_json(get_problem("maxabs").problem).dump(2);
    const auto o = run({"frontier", "--problem-file", file, "--starts", "5", "--backend", "lp"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    EXPECT_EQ(j.at("problem"), "custom");
    EXPECT_TRUE(j.at("summary").at("max_frontier_residual").is_null());
    for (const auto &r : j.at("runs")) {
        const Vector f = vector_from_json(r.at("f"));
        EXPECT_NEAR(f[1] + 2 * f[0], 0.0, 1e-9);
    }
    std::ofstream(path("broken.json")) << "{not json";
    EXPECT_EQ(run({"frontier", "--problem-file", path("broken.json")}).code, 1);
}

TEST_F(CliTest, CertifyContract)
{
    auto o = run({"certify", "--problem", "schaffer", "--point", "1", "--mode", "strong-kkt"});
    EXPECT_EQ(o.code, 0);
    auto lambda = vector_from_json(o.json().at("result").at("lambda"));
    EXPECT_NEAR(lambda[0], 1.0, 1e-9);
    EXPECT_NEAR(lambda[1], 1.0, 1e-9);

    o = run({"certify", "--problem", "schaffer", "--point", "0", "--mode", "strong-kkt"});
    EXPECT_EQ(o.code, 2);
    EXPECT_EQ(o.json().at("result").at("verdict"), "no-multipliers-found");

    o = run({"certify", "--problem", "schaffer", "--point", "0", "--mode", "abadie"});
    EXPECT_EQ(o.code, 2);
    EXPECT_EQ(o.json().at("result").at("verdict"), "fails");
    EXPECT_EQ(o.json().at("result").at("witness")[0], 1.0);

    o = run({"certify", "--problem", "schaffer", "--point", "1", "--mode", "geoffrion"});
    EXPECT_EQ(o.code, 0);
    EXPECT_NEAR(o.json().at("result").at("m_hat").get<double>(), 1.0, 0.1);

    o = run({"certify", "--problem", "schaffer", "--point", "0", "--mode", "geoffrion"});
    EXPECT_EQ(o.code, 2);

    o = run({"certify", "--problem", "schaffer", "--point", "1.5", "--mode", "weak-kkt"});
    EXPECT_EQ(o.code, 0);
    EXPECT_TRUE(o.json().at("result").contains("tau"));

    o = run({"certify", "--problem", "jahn", "--point", "1,1", "--mode", "weak-kkt"});
    EXPECT_EQ(o.code, 1);
    EXPECT_NE(o.err.find("feasible"), std::string::npos);
}

TEST_F(CliTest, OracleBinh)
{
    const auto csv = path("b.csv");
    const auto o = run({"oracle", "--problem", "binh", "--grid", "301", "--out", csv});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto rows = read_csv(csv);
    ASSERT_GT(rows.size(), 1u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"x_1", "x_2", "f_1", "f_2"}));
    EXPECT_EQ(o.json().at("summary").at("survivors").get<std::size_t>(), rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const double x1 = std::stod(rows[r][0]);
        const double x2 = std::stod(rows[r][1]);
        const double t = std::clamp(0.5 * (x1 + x2), 0.0, 5.0);
        EXPECT_LE(std::max(std::abs(x1 - t), std::abs(x2 - t)), 0.05 + 1e-12);
    }
}

TEST_F(CliTest, CompareSchaffer)
{
    const auto o = run({"compare", "--problem", "schaffer", "--starts", "50", "--seed", "7", "--tau-grid", "50"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto s = o.json().at("summary");
    EXPECT_LE(s.at("cc1_distance_to_oracle").get<double>(), 0.05);
    EXPECT_LE(s.at("weighted_sum_distance_to_oracle").get<double>(), 0.05);
    EXPECT_EQ(s.at("weighted_sum_points"), 50);
}

TEST_F(CliTest, CompareMaxAbsWeightedSumStaysOnFrontier)
{
    const auto csv = path("c.csv");
    const auto o = run({"compare", "--problem", "maxabs", "--starts", "30", "--seed", "7", "--tau-grid", "25",
                        "--out", csv});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_LE(o.json().at("summary").at("weighted_sum_distance_to_oracle").get<double>(), 0.05);
    const auto rows = read_csv(csv);
    int ws = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r][0] != "weighted-sum") {
            continue;
        }
        ++ws;
        const double f1 = std::stod(rows[r][3]);
        const double f2 = std::stod(rows[r][4]);
        EXPECT_NEAR(f2 + 2 * f1, 0.0, 1e-9);
        EXPECT_GE(f1, -2.0 - 1e-12);
        EXPECT_LE(f1, 1e-12);
    }
    EXPECT_EQ(ws, 25);
}

TEST_F(CliTest, SolveWritesTrace)
{
    const auto csv = path("t.csv");
    const auto o = run({"solve", "--problem", "schaffer", "--start", "5", "--out", csv});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    EXPECT_EQ(j.at("status"), "converged");
    EXPECT_NEAR(j.at("final_point")[0].get<double>(), 1.0, 1e-4);
    EXPECT_EQ(read_csv(csv)[0][0], "k");
    EXPECT_EQ(run({"solve", "--problem", "jahn", "--start", "1,1"}).code, 1);
}

TEST_F(CliTest, ProximalAndBackendFlags)
{
    const auto o = run({"solve", "--problem", "maxabs", "--start", "1,-1", "--backend", "penalty-subgradient",
                        "--proximal", "--eps0", "1e-2", "--tol", "1e-7", "--max-outer", "20"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    EXPECT_EQ(j.at("config").at("backend"), "penalty-subgradient");
    EXPECT_EQ(j.at("config").at("proximal"), true);
    EXPECT_LE(j.at("records").size(), 20u);
}
