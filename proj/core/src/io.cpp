#include "oslk/io.hpp"

#include <fstream>
#include <string>

#include "oslk/error.hpp"

namespace oslk {

using nlohmann::json;

namespace {

double number_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
  if (!it->is_number()) throw InvalidInput(std::string("field '") + key + "' is not a number");
  return it->get<double>();
}

const json& array_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
  if (!it->is_array()) throw InvalidInput(std::string("field '") + key + "' is not an array");
  return *it;
}

std::string string_field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw InvalidInput(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::optional<int> parse_class(const json& value) {
  if (value.is_null()) return std::nullopt;
  if (value.is_string()) {
    if (value.get<std::string>() == "unknown") return kUnknownClassId;
    throw InvalidInput("class must be an integer id or \"unknown\"");
  }
  if (value.is_number_integer()) {
    const int id = value.get<int>();
    if (id < 0) throw InvalidInput("known class ids must be >= 0");
    return id;
  }
  throw InvalidInput("class must be an integer id or \"unknown\"");
}

json class_to_json(int id) {
  return id == kUnknownClassId ? json("unknown") : json(id);
}

Proposal proposal_from_json(const json& j) {
  Proposal p;
  p.box = box_from_json(j);
  p.box.class_id.reset();
  p.s_obj_pred = number_field(j, "s_obj");
  if (!(p.s_obj_pred >= 0.0 && p.s_obj_pred <= 1.0)) {
    throw InvalidInput("proposal s_obj outside [0, 1]");
  }
  return p;
}

}  // namespace

json box_to_json(const Box3D& box) {
  json j = {{"x", box.x}, {"y", box.y}, {"z", box.z}, {"w", box.w},
            {"l", box.l}, {"h", box.h}, {"r", box.r}};
  if (box.class_id) j["class"] = class_to_json(*box.class_id);
  return j;
}

Box3D box_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("box record must be an object");
  std::optional<int> cls;
  if (const auto it = j.find("class"); it != j.end()) cls = parse_class(*it);
  return Box3D::make(number_field(j, "x"), number_field(j, "y"), number_field(j, "z"),
                     number_field(j, "w"), number_field(j, "l"), number_field(j, "h"),
                     number_field(j, "r"), cls);
}

json scene_to_json(const Scene& scene) {
  json known = json::array();
  for (const Box3D& b : scene.known_gt) known.push_back(box_to_json(b));
  json unknown = json::array();
  for (Box3D b : scene.unknown_gt) {
    b.class_id = kUnknownClassId;
    unknown.push_back(box_to_json(b));
  }
  json proposals = json::array();
  for (const Proposal& p : scene.proposals) {
    Box3D b = p.box;
    b.class_id.reset();
    json rec = box_to_json(b);
    rec["s_obj"] = p.s_obj_pred;
    proposals.push_back(std::move(rec));
  }
  json j = {{"scene_id", scene.scene_id},
            {"known_gt", std::move(known)},
            {"unknown_gt", std::move(unknown)},
            {"proposals", std::move(proposals)},
            {"grid_path", scene.grid_path}};
  if (scene.placement_truncated) j["placement_truncated"] = true;
  return j;
}

Scene scene_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("scene record must be an object");
  Scene s;
  s.scene_id = string_field(j, "scene_id");
  for (const json& b : array_field(j, "known_gt")) {
    Box3D box = box_from_json(b);
    if (!box.class_id || *box.class_id == kUnknownClassId) {
      throw InvalidInput("known_gt entries need an integer class id");
    }
    s.known_gt.push_back(box);
  }
  for (const json& b : array_field(j, "unknown_gt")) {
    Box3D box = box_from_json(b);
    if (box.class_id && *box.class_id != kUnknownClassId) {
      throw InvalidInput("unknown_gt entries must have class \"unknown\"");
    }
    box.class_id = kUnknownClassId;
    s.unknown_gt.push_back(box);
  }
  for (const json& p : array_field(j, "proposals")) s.proposals.push_back(proposal_from_json(p));
  s.grid_path = string_field(j, "grid_path");
  if (const auto it = j.find("placement_truncated"); it != j.end()) {
    s.placement_truncated = it->get<bool>();
  }
  return s;
}

std::vector<json> read_json_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_json_lines(const std::filesystem::path& path, const std::vector<json>& lines) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (const json& j : lines) out << j.dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_scenes(const std::filesystem::path& path, const std::vector<Scene>& scenes) {
  std::vector<json> lines;
  lines.reserve(scenes.size());
  for (const Scene& s : scenes) lines.push_back(scene_to_json(s));
  write_json_lines(path, lines);
}

std::vector<Scene> read_scenes(const std::filesystem::path& path) {
  std::vector<Scene> out;
  std::size_t index = 0;
  for (const json& j : read_json_lines(path)) {
    ++index;
    try {
      out.push_back(scene_from_json(j));
    } catch (const InvalidInput& e) {
      throw InvalidInput(path.string() + ": record " + std::to_string(index) + ": " + e.what());
    }
  }
  return out;
}

json pseudo_labels_to_json(const PseudoLabelSet& set) {
  json entries = json::array();
  for (const PseudoLabel& e : set.entries) {
    Box3D b = e.box;
    b.class_id.reset();
    json rec = box_to_json(b);
    rec["s_obj"] = e.s_obj_pred;
    rec["s_fea"] = e.s_fea;
    rec["s_jos"] = e.s_jos;
    rec["source_index"] = e.source_index;
    entries.push_back(std::move(rec));
  }
  return {{"scene_id", set.scene_id}, {"pseudo_labels", std::move(entries)}};
}

PseudoLabelSet pseudo_labels_from_json(const json& j) {
  PseudoLabelSet set;
  set.scene_id = string_field(j, "scene_id");
  for (const json& rec : array_field(j, "pseudo_labels")) {
    PseudoLabel e;
    e.box = box_from_json(rec);
    e.box.class_id.reset();
    e.s_obj_pred = number_field(rec, "s_obj");
    e.s_fea = number_field(rec, "s_fea");
    e.s_jos = number_field(rec, "s_jos");
    if (const auto it = rec.find("source_index"); it != rec.end()) {
      e.source_index = it->get<std::size_t>();
    }
    set.entries.push_back(e);
  }
  return set;
}

void write_pseudo_labels(const std::filesystem::path& path,
                         const std::vector<PseudoLabelSet>& sets) {
  std::vector<json> lines;
  lines.reserve(sets.size());
  for (const PseudoLabelSet& s : sets) lines.push_back(pseudo_labels_to_json(s));
  write_json_lines(path, lines);
}

json detections_to_json(const SceneDetections& d) {
  json dets = json::array();
  for (const Detection& det : d.detections) {
    Box3D b = det.box;
    b.class_id = det.class_id;
    json rec = box_to_json(b);
    rec["score"] = det.confidence;
    dets.push_back(std::move(rec));
  }
  return {{"scene_id", d.scene_id}, {"detections", std::move(dets)}};
}

SceneDetections detections_from_json(const json& j) {
  SceneDetections out;
  if (j.contains("pseudo_labels")) {
    const PseudoLabelSet set = pseudo_labels_from_json(j);
    out.scene_id = set.scene_id;
    for (const PseudoLabel& e : set.entries) {
      out.detections.push_back({e.box, kUnknownClassId, e.s_jos});
    }
    return out;
  }
  out.scene_id = string_field(j, "scene_id");
  for (const json& rec : array_field(j, "detections")) {
    Detection d;
    d.box = box_from_json(rec);
    if (!d.box.class_id) throw InvalidInput("detection without class");
    d.class_id = *d.box.class_id;
    d.confidence = number_field(rec, "score");
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw InvalidInput("detection score outside [0, 1]");
    }
    out.detections.push_back(d);
  }
  return out;
}

std::vector<SceneDetections> read_detections(const std::filesystem::path& path) {
  std::vector<SceneDetections> out;
  std::size_t index = 0;
  for (const json& j : read_json_lines(path)) {
    ++index;
    try {
      out.push_back(detections_from_json(j));
    } catch (const InvalidInput& e) {
      throw InvalidInput(path.string() + ": record " + std::to_string(index) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace oslk
