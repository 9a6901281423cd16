#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oslk/evalkit.hpp"
#include "oslk/scene.hpp"
#include "oslk/selection.hpp"

namespace oslk {

// JSON-Lines records. Parsing throws InvalidInput naming the missing or
// malformed field; file helpers throw IoError with path and line context.

nlohmann::json box_to_json(const Box3D& box);
/// Reads {x,y,z,w,l,h,r[,class]}; class is an integer id or "unknown".
Box3D box_from_json(const nlohmann::json& j);

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

void write_scenes(const std::filesystem::path& path, const std::vector<Scene>& scenes);
std::vector<Scene> read_scenes(const std::filesystem::path& path);

/// {scene_id, pseudo_labels: [{x..r, s_obj, s_fea, s_jos, source_index}]}
nlohmann::json pseudo_labels_to_json(const PseudoLabelSet& set);
PseudoLabelSet pseudo_labels_from_json(const nlohmann::json& j);

void write_pseudo_labels(const std::filesystem::path& path,
                         const std::vector<PseudoLabelSet>& sets);

/// Per-scene detections: {scene_id, detections: [{x..r, class, score}]}.
struct SceneDetections {
  std::string scene_id;
  std::vector<Detection> detections;
};

nlohmann::json detections_to_json(const SceneDetections& d);

/// Accepts either a detection record or a pseudo-label record; pseudo labels
/// become unknown-class detections with confidence s_jos.
SceneDetections detections_from_json(const nlohmann::json& j);

std::vector<SceneDetections> read_detections(const std::filesystem::path& path);

/// Reads every line of a JSON-Lines file, skipping blank lines.
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);
void write_json_lines(const std::filesystem::path& path,
                      const std::vector<nlohmann::json>& lines);

}  // namespace oslk
