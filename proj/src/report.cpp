#include "projgeo/report.hpp"

#include <fstream>
#include <sstream>

namespace projgeo {

ordered_json run_report(const std::string& command, const std::string& inputs_digest,
                        ordered_json results, double wall_time_seconds) {
    ordered_json j;
    j["command"] = command;
    j["inputsDigest"] = inputs_digest;
    j["results"] = std::move(results);
    j["wallTime"] = wall_time_seconds;
    return j;
}

ordered_json to_json(const Vec& v) {
    ordered_json arr = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

ordered_json to_json(const ProjectionResult& r) {
    ordered_json j;
    j["minimizer"] = to_json(r.minimizer);
    j["distance"] = r.distance;
    j["parameters"] = r.parameters;
    j["variationalResidual"] = r.variational_residual;
    j["uniqueCertified"] = r.unique_certified;
    return j;
}

ordered_json to_json(const DPReport& r) {
    const auto mode_char = [](ProjMode m) { return m == ProjMode::Forward ? "+" : "-"; };
    ordered_json j;
    j["mode"] = std::string(mode_char(r.mode.outer)) + mode_char(r.mode.inner);
    j["query"] = to_json(r.query);
    j["composedPoint"] = to_json(r.composed_point);
    j["fixedPointResidual"] = r.fixed_point_residual;
    j["projDistance"] = r.proj_distance;
    j["oracleBest"] = r.oracle_best;
    j["tolFixedPoint"] = r.tol_fixed_point;
    j["tolOracle"] = r.tol_oracle;
    j["dp1Holds"] = r.dp1_holds;
    j["dp2Holds"] = r.dp2_holds;
    j["equivalenceVerdict"] = r.equivalence_verdict;
    return j;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

namespace {

void bounds_update(double& lo_x, double& lo_y, double& hi_x, double& hi_y, const Vec& p) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
}

}  // namespace

std::string composition_svg(const ConvexSet& s1, const ConvexSet& s2,
                            const std::vector<std::pair<std::string, Vec>>& points) {
    double lo_x = -0.6, lo_y = -0.6, hi_x = 0.9, hi_y = 0.9;
    for (const auto& [label, p] : points) bounds_update(lo_x, lo_y, hi_x, hi_y, p);
    const double pad = 0.25 * std::max(hi_x - lo_x, hi_y - lo_y);
    lo_x -= pad;
    lo_y -= pad;
    hi_x += pad;
    hi_y += pad;

    const double width = 640.0;
    const double scale = width / (hi_x - lo_x);
    const double height = (hi_y - lo_y) * scale;
    const auto px = [&](double x) { return (x - lo_x) * scale; };
    const auto py = [&](double y) { return height - (y - lo_y) * scale; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const auto draw_set = [&](const ConvexSet& set, const char* color) {
        const double reach = 2.0 * std::max(hi_x - lo_x, hi_y - lo_y);
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                Vec a, b;
                if constexpr (std::is_same_v<T, Segment>) {
                    a = s.a;
                    b = s.b;
                } else if constexpr (std::is_same_v<T, HalfLine>) {
                    a = s.origin;
                    b = s.origin + reach * s.direction;
                } else if constexpr (std::is_same_v<T, Line>) {
                    a = s.point - reach * s.direction;
                    b = s.point + reach * s.direction;
                } else {
                    return;  // only 1-d sets appear in the figure
                }
                os << "<line x1=\"" << px(a[0]) << "\" y1=\"" << py(a[1]) << "\" x2=\""
                   << px(b[0]) << "\" y2=\"" << py(b[1]) << "\" stroke=\"" << color
                   << "\" stroke-width=\"2\"/>\n";
            },
            set);
    };
    draw_set(s1, "#888888");
    draw_set(s2, "#cc7722");

    for (const auto& [label, p] : points) {
        os << "<circle cx=\"" << px(p[0]) << "\" cy=\"" << py(p[1])
           << "\" r=\"4\" fill=\"#2255cc\"/>\n";
        os << "<text x=\"" << px(p[0]) + 6 << "\" y=\"" << py(p[1]) - 6
           << "\" font-size=\"12\" font-family=\"sans-serif\">" << label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace projgeo
