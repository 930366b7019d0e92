#pragma once
#include <string>
#include <vector>

#include <json.hpp>

#include "projgeo/convex_sets.hpp"
#include "projgeo/double_projection.hpp"
#include "projgeo/projection.hpp"

namespace projgeo {

using ordered_json = nlohmann::ordered_json;

// {"command":..., "inputsDigest":..., "results":..., "wallTime":...};
// wallTime is the only field excluded from byte-for-byte determinism.
ordered_json run_report(const std::string& command, const std::string& inputs_digest,
                        ordered_json results, double wall_time_seconds);

ordered_json to_json(const Vec& v);
ordered_json to_json(const ProjectionResult& r);
ordered_json to_json(const DPReport& r);

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

// Minimal SVG overlay of the demo sets and labeled points, viewport
// fitted around the data.
std::string composition_svg(const ConvexSet& s1, const ConvexSet& s2,
                            const std::vector<std::pair<std::string, Vec>>& points);

void write_file(const std::string& path, const std::string& content);

}  // namespace projgeo
