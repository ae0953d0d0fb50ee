#include <ccpareto_cli/cli.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <ccpareto/serialize.hpp>

namespace ccpareto::cli {

Vector parse_point(const std::string &text)
{
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception &) {
            throw std::invalid_argument("cannot parse '" + token + "' as a number");
        }
        if (used != token.size() || !std::isfinite(v)) {
            throw std::invalid_argument("cannot parse '" + token + "' as a number");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw std::invalid_argument("empty point");
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string frontier_csv(const VectorProblem &problem, const std::vector<CC1Trace> &traces)
{
    const int n = problem.dimension();
    const int m = problem.num_objectives();
    std::ostringstream out;
    out << "index";
    for (int i = 1; i <= n; ++i) {
        out << ",start_x_" << i;
    }
    for (int i = 1; i <= m; ++i) {
        out << ",start_f_" << i;
    }
    for (int i = 1; i <= n; ++i) {
        out << ",x_" << i;
    }
    for (int i = 1; i <= m; ++i) {
        out << ",f_" << i;
    }
    out << ",iters,status\n";
    for (std::size_t r = 0; r < traces.size(); ++r) {
        const auto &t = traces[r];
        out << r;
        const bool sampled = t.status != CC1Status::sampling_failed;
        const Vector fs = sampled ? problem.objective_values(t.start) : Vector();
        for (int i = 0; i < n; ++i) {
            out << ',' << (sampled ? format_double(t.start[i]) : "");
        }
        for (int i = 0; i < m; ++i) {
            out << ',' << (sampled ? format_double(fs[i]) : "");
        }
        for (int i = 0; i < n; ++i) {
            out << ',' << (sampled ? format_double(t.final_point[i]) : "");
        }
        for (int i = 0; i < m; ++i) {
            out << ',' << (sampled ? format_double(t.final_values[i]) : "");
        }
        out << ',' << t.outer_iterations() << ',' << to_string(t.status) << '\n';
    }
    return out.str();
}

namespace {

std::string escape_xml(const std::string &s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fixed(double v)
{
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << v;
    return s.str();
}

} // namespace

std::string frontier_svg(const std::vector<Vector> &starts, const std::vector<Vector> &finals,
                         const std::string &title)
{
    constexpr double kWidth = 640.0;
    constexpr double kHeight = 480.0;
    constexpr double kMargin = 60.0;
    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto *set : {&starts, &finals}) {
        for (const auto &p : *set) {
            if (p.size() != 2) {
                throw std::invalid_argument("frontier_svg: scatter needs exactly two objectives");
            }
            for (int d = 0; d < 2; ++d) {
                lo[d] = std::min(lo[d], p[d]);
                hi[d] = std::max(hi[d], p[d]);
            }
        }
    }
    for (int d = 0; d < 2; ++d) {
        if (!(lo[d] <= hi[d])) {
            lo[d] = 0.0;
            hi[d] = 1.0;
        }
        if (hi[d] - lo[d] < 1e-12) {
            lo[d] -= 0.5;
            hi[d] += 0.5;
        }
    }
    auto sx = [&](double v) { return kMargin + (v - lo[0]) / (hi[0] - lo[0]) * (kWidth - 2 * kMargin); };
    auto sy = [&](double v) { return kHeight - kMargin - (v - lo[1]) / (hi[1] - lo[1]) * (kHeight - 2 * kMargin); };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape_xml(title)
        << "</text>\n";
    const double x0 = kMargin;
    const double y0 = kHeight - kMargin;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << kMargin
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">f\xe2\x82\x81</text>\n";
    out << "<text x=\"18\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kHeight / 2 << ")\">f\xe2\x82\x82</text>\n";
    out << "<text x=\"" << x0 << "\" y=\"" << y0 + 18 << "\" font-size=\"11\">" << format_double(lo[0]) << "</text>\n";
    out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << y0 + 18 << "\" font-size=\"11\" text-anchor=\"end\">"
        << format_double(hi[0]) << "</text>\n";
    out << "<text x=\"" << x0 - 6 << "\" y=\"" << y0 << "\" font-size=\"11\" text-anchor=\"end\">"
        << format_double(lo[1]) << "</text>\n";
    out << "<text x=\"" << x0 - 6 << "\" y=\"" << kMargin + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
        << format_double(hi[1]) << "</text>\n";
    out << "<g class=\"starts\" stroke=\"#1f77b4\" stroke-width=\"1\">\n";
    for (const auto &p : starts) {
        const double cx = sx(p[0]);
        const double cy = sy(p[1]);
        out << "<path class=\"start\" d=\"M" << fixed(cx - 4) << ' ' << fixed(cy) << "h8M" << fixed(cx) << ' '
            << fixed(cy - 4) << "v8\"/>\n";
    }
    out << "</g>\n";
    out << "<g class=\"finals\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\">\n";
    for (const auto &p : finals) {
        out << "<circle class=\"final\" cx=\"" << fixed(sx(p[0])) << "\" cy=\"" << fixed(sy(p[1])) << "\" r=\"3\"/>\n";
    }
    out << "</g>\n";
    out << "</svg>\n";
    return out.str();
}

double one_sided_hausdorff(const std::vector<Vector> &from, const std::vector<Vector> &to)
{
    if (to.empty()) {
        throw std::invalid_argument("one_sided_hausdorff: target set is empty");
    }
    double worst = 0.0;
    for (const auto &a : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto &b : to) {
            best = std::min(best, (a - b).squaredNorm());
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

} // namespace ccpareto::cli
