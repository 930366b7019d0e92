#include "projgeo/scene.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace projgeo {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::ostringstream os;
    for (std::size_t i = 0; i < parts.size(); ++i)
        os << (i ? "; " : "") << parts[i];
    return os.str();
}

struct Collector {
    std::vector<std::string> problems;

    void add(const std::string& where, const std::string& what) {
        problems.push_back(where + ": " + what);
    }
};

bool expect_keys(Collector& c, const json& obj, const std::string& where,
                 const std::vector<std::string>& allowed) {
    bool ok = true;
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            c.add(where, "unknown key \"" + item.key() + "\"");
            ok = false;
        }
    }
    return ok;
}

bool read_vector(Collector& c, const json& j, const std::string& where, Vec& out) {
    if (!j.is_array() || j.empty()) {
        c.add(where, "expected a nonempty array of numbers");
        return false;
    }
    out.resize(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            c.add(where, "component " + std::to_string(i) + " is not a number");
            return false;
        }
        out[static_cast<int>(i)] = j[i].get<double>();
    }
    return true;
}

bool read_norm(Collector& c, const json& j, NormSpec& spec) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        c.add("norm", "expected an object with a string \"kind\"");
        return false;
    }
    const std::string kind = j["kind"].get<std::string>();
    const auto num = [&](const char* key, double& out) {
        if (!j.contains(key) || !j[key].is_number()) {
            c.add("norm", std::string("missing numeric \"") + key + "\"");
            return false;
        }
        out = j[key].get<double>();
        return true;
    };
    if (kind == "euclidean") {
        double n;
        if (!expect_keys(c, j, "norm", {"kind", "n"}) || !num("n", n)) return false;
        spec = EuclideanNorm{static_cast<int>(n)};
    } else if (kind == "pnorm") {
        double n, p;
        if (!expect_keys(c, j, "norm", {"kind", "n", "p"}) || !num("n", n) || !num("p", p))
            return false;
        spec = PNorm{static_cast<int>(n), p};
    } else if (kind == "randers") {
        if (!expect_keys(c, j, "norm", {"kind", "A", "b"})) return false;
        if (!j.contains("A") || !j["A"].is_array() || !j.contains("b")) {
            c.add("norm", "randers needs matrix \"A\" and vector \"b\"");
            return false;
        }
        const auto& ja = j["A"];
        const int n = static_cast<int>(ja.size());
        Mat a(n, n);
        for (int r = 0; r < n; ++r) {
            if (!ja[r].is_array() || static_cast<int>(ja[r].size()) != n) {
                c.add("norm", "\"A\" must be a square matrix");
                return false;
            }
            for (int cix = 0; cix < n; ++cix) a(r, cix) = ja[r][cix].get<double>();
        }
        Vec b;
        if (!read_vector(c, j["b"], "norm.b", b)) return false;
        spec = RandersNorm{a, b};
    } else if (kind == "matsumoto") {
        double v, alpha, gravity;
        if (!expect_keys(c, j, "norm", {"kind", "v", "alpha", "gravity"}) || !num("v", v) ||
            !num("alpha", alpha) || !num("gravity", gravity))
            return false;
        spec = MatsumotoNorm{v, alpha, gravity};
    } else if (kind == "nonsmooth") {
        double n, lambda;
        if (!expect_keys(c, j, "norm", {"kind", "n", "lambda"}) || !num("n", n) ||
            !num("lambda", lambda))
            return false;
        spec = NonSmoothSumNorm{static_cast<int>(n), lambda};
    } else {
        c.add("norm", "unknown kind \"" + kind + "\"");
        return false;
    }
    try {
        validate_spec(spec);
    } catch (const std::exception& e) {
        c.add("norm", e.what());
        return false;
    }
    return true;
}

bool read_set(Collector& c, const json& j, const std::string& where, ConvexSet& out) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        c.add(where, "expected an object with a string \"kind\"");
        return false;
    }
    const std::string kind = j["kind"].get<std::string>();
    const auto vec = [&](const char* key, Vec& v) {
        if (!j.contains(key)) {
            c.add(where, std::string("missing \"") + key + "\"");
            return false;
        }
        return read_vector(c, j[key], where + "." + key, v);
    };
    try {
        if (kind == "segment") {
            Vec a, b;
            if (!expect_keys(c, j, where, {"kind", "a", "b"}) || !vec("a", a) || !vec("b", b))
                return false;
            out = Segment{a, b};
        } else if (kind == "halfline") {
            Vec o, d;
            if (!expect_keys(c, j, where, {"kind", "origin", "direction"}) ||
                !vec("origin", o) || !vec("direction", d))
                return false;
            out = HalfLine{o, d};
        } else if (kind == "line") {
            Vec p, d;
            if (!expect_keys(c, j, where, {"kind", "point", "direction"}) || !vec("point", p) ||
                !vec("direction", d))
                return false;
            out = Line{p, d};
        } else if (kind == "polytope") {
            if (!expect_keys(c, j, where, {"kind", "vertices"}) || !j.contains("vertices") ||
                !j["vertices"].is_array() || j["vertices"].empty()) {
                c.add(where, "polytope needs a nonempty \"vertices\" array");
                return false;
            }
            std::vector<Vec> vs;
            for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
                Vec v;
                if (!read_vector(c, j["vertices"][i], where + ".vertices", v)) return false;
                vs.push_back(v);
            }
            out = Polytope{vs};
        } else if (kind == "slab") {
            if (!expect_keys(c, j, where, {"kind", "base", "span", "constraints"})) return false;
            Vec base;
            if (!vec("base", base)) return false;
            if (!j.contains("span") || !j["span"].is_array() || j["span"].empty()) {
                c.add(where, "slab needs a nonempty \"span\" array");
                return false;
            }
            std::vector<Vec> span;
            for (std::size_t i = 0; i < j["span"].size(); ++i) {
                Vec v;
                if (!read_vector(c, j["span"][i], where + ".span", v)) return false;
                span.push_back(v);
            }
            std::vector<HalfSpace> cons;
            if (j.contains("constraints")) {
                if (!j["constraints"].is_array()) {
                    c.add(where, "\"constraints\" must be an array");
                    return false;
                }
                for (std::size_t i = 0; i < j["constraints"].size(); ++i) {
                    const auto& jc = j["constraints"][i];
                    if (!jc.is_object() || !jc.contains("normal") || !jc.contains("offset") ||
                        !jc["offset"].is_number()) {
                        c.add(where, "constraint " + std::to_string(i) +
                                         " needs \"normal\" and numeric \"offset\"");
                        return false;
                    }
                    Vec nrm;
                    if (!read_vector(c, jc["normal"], where + ".constraints", nrm)) return false;
                    cons.push_back({nrm, jc["offset"].get<double>()});
                }
            }
            out = AffineSlab{base, span, cons};
        } else {
            c.add(where, "unknown kind \"" + kind + "\"");
            return false;
        }
        out = normalized(out);
    } catch (const std::exception& e) {
        c.add(where, e.what());
        return false;
    }
    return true;
}

}  // namespace

SceneError::SceneError(std::vector<std::string> problems)
    : std::runtime_error("invalid scene: " + join(problems)), issues(std::move(problems)) {}

Scene parse_scene(const std::string& json_text) {
    Collector c;
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SceneError({std::string("json: ") + e.what()});
    }
    if (!root.is_object()) throw SceneError({"top level must be an object"});
    expect_keys(c, root, "scene", {"v", "norm", "sets", "queryPoints", "options"});
    if (!root.contains("v") || root["v"] != 1) c.add("scene", "missing schema version \"v\": 1");

    Scene scene;
    if (!root.contains("norm")) {
        c.add("scene", "missing \"norm\"");
    } else {
        read_norm(c, root["norm"], scene.norm);
    }
    if (root.contains("sets")) {
        if (!root["sets"].is_object()) {
            c.add("sets", "must be an object of named sets");
        } else {
            for (const auto& item : root["sets"].items()) {
                ConvexSet set = Segment{Vec::Zero(2), Vec::Zero(2)};
                if (read_set(c, item.value(), "sets." + item.key(), set))
                    scene.sets.emplace(item.key(), std::move(set));
            }
        }
    }
    if (root.contains("queryPoints")) {
        if (!root["queryPoints"].is_object()) {
            c.add("queryPoints", "must be an object of named points");
        } else {
            for (const auto& item : root["queryPoints"].items()) {
                Vec v;
                if (read_vector(c, item.value(), "queryPoints." + item.key(), v))
                    scene.query_points.emplace(item.key(), std::move(v));
            }
        }
    }
    if (root.contains("options")) {
        const auto& jo = root["options"];
        if (!jo.is_object()) {
            c.add("options", "must be an object");
        } else {
            expect_keys(c, jo, "options",
                        {"gridResolution", "clipRadius", "tol_fp", "membershipTol", "seed"});
            const auto opt_num = [&](const char* key, double& out) {
                if (jo.contains(key)) {
                    if (!jo[key].is_number())
                        c.add("options", std::string("\"") + key + "\" must be numeric");
                    else
                        out = jo[key].get<double>();
                }
            };
            double grid = scene.options.grid_resolution;
            double seed = 0.0;
            opt_num("gridResolution", grid);
            opt_num("clipRadius", scene.options.clip_radius);
            opt_num("tol_fp", scene.options.tol_fixed_point);
            opt_num("membershipTol", scene.options.membership_tol);
            opt_num("seed", seed);
            scene.options.grid_resolution = static_cast<int>(grid);
            scene.options.seed = static_cast<std::uint64_t>(seed);
            if (scene.options.grid_resolution < 2)
                c.add("options", "gridResolution must be >= 2");
            if (scene.options.tol_fixed_point <= 0) c.add("options", "tol_fp must be positive");
        }
    }

    // cross-field checks
    if (c.problems.empty()) {
        const int n = dimension(scene.norm);
        for (const auto& [name, set] : scene.sets)
            if (dimension(set) != n)
                c.add("sets." + name, "dimension differs from the norm dimension");
        for (const auto& [name, v] : scene.query_points)
            if (v.size() != n)
                c.add("queryPoints." + name, "dimension differs from the norm dimension");
    }
    if (!c.problems.empty()) throw SceneError(c.problems);
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneError({"cannot open scene file \"" + path + "\""});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str());
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace projgeo
