#pragma once
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "projgeo/convex_sets.hpp"
#include "projgeo/norms.hpp"

namespace projgeo {

struct SceneOptions {
    int grid_resolution = 2001;
    double clip_radius = 0.0;  // 0 = auto
    double tol_fixed_point = 1e-7;
    double membership_tol = 1e-9;
    std::uint64_t seed = 0;
};

struct Scene {
    NormSpec norm = EuclideanNorm{2};
    std::map<std::string, ConvexSet> sets;
    std::map<std::string, Vec> query_points;
    SceneOptions options;
};

// Carries every violation found, not just the first.
struct SceneError : std::runtime_error {
    explicit SceneError(std::vector<std::string> problems);
    std::vector<std::string> issues;
};

// Schema: {"v":1, "norm":{"kind":...}, "sets":{name:{...}},
// "queryPoints":{name:[...]}, "options":{...}}. Unknown keys are
// rejected; directions are normalized on load.
Scene parse_scene(const std::string& json_text);
Scene load_scene(const std::string& path);

// FNV-1a of the scene file bytes, for report provenance.
std::string digest_hex(const std::string& bytes);

}  // namespace projgeo
