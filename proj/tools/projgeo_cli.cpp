#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "projgeo/kernels.hpp"
#include "projgeo/report.hpp"
#include "projgeo/scene.hpp"
#include "projgeo/suites.hpp"

namespace {

using namespace projgeo;

// 0 success, 1 a certified property was violated, 2 invalid input
constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kBadInput = 2;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError({"cannot open scene file \"" + path + "\""});
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ProjMode parse_mode(const std::string& s) {
    if (s == "forward") return ProjMode::Forward;
    if (s == "backward") return ProjMode::Backward;
    throw SceneError({"mode must be \"forward\" or \"backward\""});
}

const ConvexSet& named_set(const Scene& scene, const std::string& name) {
    const auto it = scene.sets.find(name);
    if (it == scene.sets.end()) throw SceneError({"scene has no set named \"" + name + "\""});
    return it->second;
}

const Vec& named_query(const Scene& scene, const std::string& name) {
    const auto it = scene.query_points.find(name);
    if (it == scene.query_points.end())
        throw SceneError({"scene has no query point named \"" + name + "\""});
    return it->second;
}

void emit(const ordered_json& report) { std::cout << report.dump(2) << std::endl; }

std::vector<double> parse_h_list(const std::string& text) {
    std::vector<double> hs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) hs.push_back(std::stod(item));
    }
    return hs;
}

int cmd_project(const std::string& scene_path, const std::string& set_name,
                const std::string& query_name, const std::string& mode) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string bytes = slurp(scene_path);
    const Scene scene = parse_scene(bytes);
    const ProjectionResult pr =
        project(scene.norm, named_set(scene, set_name), named_query(scene, query_name),
                parse_mode(mode));
    ordered_json results;
    results["set"] = set_name;
    results["query"] = query_name;
    results["mode"] = mode;
    results["projection"] = to_json(pr);
    emit(run_report("project", digest_hex(bytes), results, seconds_since(t0)));
    return kOk;
}

int cmd_dp_check(const std::string& scene_path, const std::string& s1_name,
                 const std::string& s2_name, const std::string& query_name,
                 const std::string& dp_case) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string bytes = slurp(scene_path);
    const Scene scene = parse_scene(bytes);
    if (dp_case != "forward" && dp_case != "backward")
        throw SceneError({"case must be \"forward\" or \"backward\""});
    const DPReport rep = dp_report(
        scene.norm, named_set(scene, s1_name), named_set(scene, s2_name),
        named_query(scene, query_name),
        dp_case == "forward" ? DPCase::Forward : DPCase::Backward,
        scene.options.grid_resolution, scene.options.tol_fixed_point,
        scene.options.membership_tol);
    ordered_json results;
    results["s1"] = s1_name;
    results["s2"] = s2_name;
    results["case"] = dp_case;
    results["report"] = to_json(rep);
    emit(run_report("dp-check", digest_hex(bytes), results, seconds_since(t0)));
    return rep.equivalence_verdict ? kOk : kViolation;
}

int cmd_reproduce_figure1(const std::string& out_csv, const std::string& out_svg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pts = suites::matsumoto_demo_compositions();
    ordered_json results;
    for (const auto& lp : pts) results[lp.label] = to_json(lp.point);

    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, Vec>> labeled;
    for (const auto& lp : pts) {
        std::ostringstream x, y;
        x.precision(9);
        y.precision(9);
        x << std::fixed << lp.point[0];
        y << std::fixed << lp.point[1];
        rows.push_back({lp.label, x.str(), y.str()});
        labeled.emplace_back(lp.label, lp.point);
    }
    const std::string csv = csv_table({"mode", "x", "y"}, rows);
    if (!out_csv.empty()) write_file(out_csv, csv);
    const auto [s1, s2] = matsumoto_demo_sets();
    if (!out_svg.empty()) write_file(out_svg, composition_svg(s1, s2, labeled));
    emit(run_report("reproduce-figure1", digest_hex(""), results, seconds_since(t0)));
    return kOk;
}

int cmd_cat_check(double kappa, double kappa_bar, int trials, std::uint64_t seed,
                  int grid_per_side, const std::string& out_csv) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = suites::cat_suite(kappa, kappa_bar, trials, seed, grid_per_side);
    ordered_json results;
    results["kappa"] = kappa;
    results["kappaBar"] = kappa_bar;
    results["trials"] = res.trials;
    results["maxViolation"] = res.worst;
    const bool certifying = kappa <= 0.0 && kappa_bar >= kappa;
    const bool violated = certifying && res.worst > 1e-9;
    results["certified"] = certifying ? ordered_json(!violated) : ordered_json(nullptr);
    if (!out_csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < res.values.size(); ++i)
            rows.push_back({std::to_string(i), std::to_string(res.values[i])});
        write_file(out_csv, csv_table({"trial", "maxViolation"}, rows));
    }
    emit(run_report("cat-check", digest_hex(""), results, seconds_since(t0)));
    return violated ? kViolation : kOk;
}

int cmd_ptolemy(double kappa, int trials, std::uint64_t seed, const std::string& out_csv) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = suites::ptolemy_suite(kappa, trials, seed);
    ordered_json results;
    results["kappa"] = kappa;
    results["trials"] = res.trials;
    results["minResidual"] = res.worst;
    const bool certifying = kappa <= 0.0;
    const bool violated = certifying && res.worst < -1e-9;
    results["certified"] = certifying ? ordered_json(!violated) : ordered_json(nullptr);
    if (!out_csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < res.values.size(); ++i)
            rows.push_back({std::to_string(i), std::to_string(res.values[i])});
        write_file(out_csv, csv_table({"trial", "residual"}, rows));
    }
    emit(run_report("ptolemy", digest_hex(""), results, seconds_since(t0)));
    return violated ? kViolation : kOk;
}

int cmd_nonexpansive(double kappa, int trials, std::uint64_t seed,
                     const std::string& out_csv) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sweep = kernels::nonexpansiveness_sweep(kappa, trials, seed, 1e-9);
    ordered_json results;
    results["kappa"] = kappa;
    results["trials"] = trials;
    results["violations"] = sweep.violations;
    results["worstResidual"] = sweep.worst_residual;
    const bool certifying = kappa <= 0.0;
    const bool violated = certifying && sweep.violations > 0;
    results["certified"] = certifying ? ordered_json(!violated) : ordered_json(nullptr);
    if (!out_csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (int i = 0; i < trials; ++i)
            rows.push_back(
                {std::to_string(i),
                 std::to_string(kernels::nonexpansiveness_trial(kappa, seed, i))});
        write_file(out_csv, csv_table({"trial", "residual"}, rows));
    }
    emit(run_report("nonexpansive", digest_hex(""), results, seconds_since(t0)));
    return violated ? kViolation : kOk;
}

int cmd_curvature(double kappa, const std::string& h_list_text, int trials,
                  std::uint64_t seed, const std::string& out_csv) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> hs = parse_h_list(h_list_text);
    if (hs.size() < 2) throw SceneError({"--h-list needs at least two decreasing steps"});
    const double r = kappa == 0.0 ? 1.0 : 1.0 / std::sqrt(std::abs(kappa));
    const ModelPoint p = kappa == 0.0 ? make_model_point(0.0, Vec::Zero(2))
                                      : ModelPoint{kappa, Vec3(0, 0, r)};
    const CurvatureReport rep =
        curvature_estimate(kappa, p, Vec3(1, 0, 0), Vec3(0, 1, 0), hs);
    const NpcSummary npc = npc_projection_test(kappa, trials, seed);

    ordered_json results;
    results["kappa"] = kappa;
    results["hValues"] = rep.h_values;
    results["estimates"] = rep.estimates;
    results["extrapolated"] = rep.extrapolated;
    results["inequalityViolations"] = rep.inequality_violations;
    ordered_json jnpc;
    jnpc["trials"] = npc.trials;
    jnpc["nonexpansiveViolations"] = npc.nonexpansive_violations;
    jnpc["bestApproxViolations"] = npc.best_approx_violations;
    jnpc["worstNonexpansiveResidual"] = npc.worst_nonexpansive_residual;
    jnpc["worstBestApproxGap"] = npc.worst_best_approx_gap;
    if (kappa > 0) {
        jnpc["directedViolationFound"] = npc.directed_violation_found;
        jnpc["directedResidual"] = npc.directed_residual;
    }
    results["npcProjectionTest"] = jnpc;

    if (!out_csv.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < rep.h_values.size(); ++i)
            rows.push_back(
                {std::to_string(rep.h_values[i]), std::to_string(rep.estimates[i])});
        write_file(out_csv, csv_table({"h", "estimate"}, rows));
    }
    emit(run_report("curvature", digest_hex(""), results, seconds_since(t0)));

    bool violated = rep.inequality_violations > 0;
    if (kappa <= 0)
        violated = violated || npc.nonexpansive_violations > 0 || npc.best_approx_violations > 0;
    else
        violated = violated || !npc.directed_violation_found;
    return violated ? kViolation : kOk;
}

int cmd_selftest(std::uint64_t seed, bool full) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto checks = suites::selftest(seed, !full);
    ordered_json results = ordered_json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        ordered_json j;
        j["name"] = c.name;
        j["pass"] = c.pass;
        j["detail"] = c.detail;
        results.push_back(j);
        all_pass = all_pass && c.pass;
    }
    emit(run_report("selftest", digest_hex(""), results, seconds_since(t0)));
    return all_pass ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric projections on Minkowski norms and model surfaces"};
    app.require_subcommand(1);

    std::string scene_path, set_name, query_name, s1_name, s2_name;
    std::string mode = "forward", dp_case = "forward";
    std::string out_csv, out_svg, h_list = "0.2,0.1,0.05";
    double kappa = 0.0, kappa_bar = 0.0;
    int trials = 500, grid_per_side = 12;
    std::uint64_t seed = 0;

    auto* project_cmd = app.add_subcommand("project", "project a query point onto a set");
    project_cmd->add_option("--scene", scene_path)->required();
    project_cmd->add_option("--set", set_name)->required();
    project_cmd->add_option("--query", query_name)->required();
    project_cmd->add_option("--mode", mode)->check(CLI::IsMember({"forward", "backward"}));

    auto* dp_cmd = app.add_subcommand("dp-check", "double-projection equivalence report");
    dp_cmd->add_option("--scene", scene_path)->required();
    dp_cmd->add_option("--s1", s1_name)->required();
    dp_cmd->add_option("--s2", s2_name)->required();
    dp_cmd->add_option("--query", query_name)->required();
    dp_cmd->add_option("--case", dp_case)->check(CLI::IsMember({"forward", "backward"}));

    auto* fig_cmd =
        app.add_subcommand("reproduce-figure1", "projection compositions of the slope-norm demo");
    fig_cmd->add_option("--out-csv", out_csv);
    fig_cmd->add_option("--out-svg", out_svg);

    auto* cat_cmd = app.add_subcommand("cat-check", "comparison-triangle inequality sweep");
    cat_cmd->add_option("--kappa", kappa)->required();
    cat_cmd->add_option("--kappa-bar", kappa_bar);
    cat_cmd->add_option("--trials", trials);
    cat_cmd->add_option("--seed", seed);
    cat_cmd->add_option("--grid-per-side", grid_per_side);
    cat_cmd->add_option("--out-csv", out_csv);

    auto* pt_cmd = app.add_subcommand("ptolemy", "four-point inequality sweep");
    pt_cmd->add_option("--kappa", kappa)->required();
    pt_cmd->add_option("--trials", trials);
    pt_cmd->add_option("--seed", seed);
    pt_cmd->add_option("--out-csv", out_csv);

    auto* ne_cmd = app.add_subcommand("nonexpansive", "projection non-expansiveness sweep");
    ne_cmd->add_option("--kappa", kappa)->required();
    ne_cmd->add_option("--trials", trials);
    ne_cmd->add_option("--seed", seed);
    ne_cmd->add_option("--out-csv", out_csv);

    auto* cv_cmd = app.add_subcommand("curvature", "parallelogramoid curvature estimate");
    cv_cmd->add_option("--kappa", kappa)->required();
    cv_cmd->add_option("--h-list", h_list);
    cv_cmd->add_option("--trials", trials);
    cv_cmd->add_option("--seed", seed);
    cv_cmd->add_option("--out-csv", out_csv);

    auto* st_cmd = app.add_subcommand("selftest", "run every module's invariant battery");
    st_cmd->add_option("--seed", seed);
    bool full = false;
    st_cmd->add_flag("--full", full);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (project_cmd->parsed()) return cmd_project(scene_path, set_name, query_name, mode);
        if (dp_cmd->parsed()) return cmd_dp_check(scene_path, s1_name, s2_name, query_name, dp_case);
        if (fig_cmd->parsed()) return cmd_reproduce_figure1(out_csv, out_svg);
        if (cat_cmd->parsed())
            return cmd_cat_check(kappa, kappa_bar, trials, seed, grid_per_side, out_csv);
        if (pt_cmd->parsed()) return cmd_ptolemy(kappa, trials, seed, out_csv);
        if (ne_cmd->parsed()) return cmd_nonexpansive(kappa, trials, seed, out_csv);
        if (cv_cmd->parsed()) return cmd_curvature(kappa, h_list, trials, seed, out_csv);
        if (st_cmd->parsed()) return cmd_selftest(seed, full);
    } catch (const SceneError& e) {
        std::cerr << "error: invalid input\n";
        for (const auto& issue : e.issues) std::cerr << "  - " << issue << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
