#pragma once

#include <string>

#include "json.hpp"

#include "bennett8/isogram.hpp"
#include "bennett8/linkage.hpp"

namespace bennett8::cli {

nlohmann::json scene_json(const EightBarGeometry& geom, const EightBarPose& pose);
nlohmann::json scene_json(const SpatialEightBarGeometry& geom, const SpatialEightBarPose& pose);
nlohmann::json scene_json(const SphericalIsogramSpec& spec, const SphericalIsogramPose& pose);
nlohmann::json scene_json(const BennettIsogramSpec& spec, const BennettIsogramPose& pose);

// Wavefront OBJ polylines: circles sampled at `segments` points, lines
// clipped to the span of their joints plus a margin.
std::string scene_obj(const EightBarPose& pose, int segments);
std::string scene_obj(const SpatialEightBarPose& pose, int segments);
std::string scene_obj(const SphericalIsogramPose& pose, int segments);
std::string scene_obj(const BennettIsogramPose& pose, int segments);

// Worst residual per family, as stored in scene files.
nlohmann::json residual_summary(const Report& report);

}  // namespace bennett8::cli
