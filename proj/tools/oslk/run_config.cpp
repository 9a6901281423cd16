#include "run_config.hpp"

#include <fstream>
#include <string>

#include "oslk/error.hpp"

namespace oslk::cli {

using nlohmann::json;

namespace {

[[noreturn]] void unknown_key(const std::string& key) {
  throw InvalidInput("unknown config key '" + key + "'");
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw InvalidInput("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InvalidInput("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw InvalidInput("config key '" + key + "' must be a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw InvalidInput("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

const json& as_object(const json& v, const std::string& key) {
  if (!v.is_object()) throw InvalidInput("config key '" + key + "' must be an object");
  return v;
}

std::vector<std::size_t> as_counts(const json& v, const std::string& key) {
  if (!v.is_array()) throw InvalidInput("config key '" + key + "' must be an array");
  std::vector<std::size_t> out;
  for (const json& e : v) out.push_back(as_count(e, key));
  return out;
}

Reduction parse_reduction(const std::string& s) {
  if (s == "mean") return Reduction::kMean;
  if (s == "pca") return Reduction::kPca;
  throw InvalidInput("pipeline.reduction must be \"mean\" or \"pca\", got \"" + s + "\"");
}

OverlapMetric parse_overlap(const std::string& s) {
  if (s == "bev") return OverlapMetric::kBevIou;
  if (s == "3d") return OverlapMetric::kIou3d;
  throw InvalidInput("pipeline.overlap must be \"bev\" or \"3d\", got \"" + s + "\"");
}

Interpolation parse_interpolation(const std::string& s) {
  if (s == "r40") return Interpolation::kR40;
  if (s == "r11") return Interpolation::kR11;
  throw InvalidInput("eval.interpolation must be \"r40\" or \"r11\", got \"" + s + "\"");
}

void apply_scoring(ScoringConfig& s, const json& j) {
  for (const auto& [key, v] : as_object(j, "scoring").items()) {
    const std::string full = "scoring." + key;
    if (key == "tau_center") s.tau_center = as_number(v, full);
    else if (key == "tau_scale") s.tau_scale = as_number(v, full);
    else unknown_key(full);
  }
}

void apply_pipeline(PipelineConfig& p, const json& j) {
  for (const auto& [key, v] : as_object(j, "pipeline").items()) {
    const std::string full = "pipeline." + key;
    if (key == "k_o") p.k_o = as_count(v, full);
    else if (key == "k_u") p.k_u = as_count(v, full);
    else if (key == "gt_filter_iou") p.gt_filter_iou = as_number(v, full);
    else if (key == "reduction") p.reduction = parse_reduction(as_string(v, full));
    else if (key == "overlap") p.overlap = parse_overlap(as_string(v, full));
    else if (key == "literal_eq6") p.window.literal_eq6 = as_bool(v, full);
    else if (key == "corner_anchor") p.window.corner_anchor = as_bool(v, full);
    else unknown_key(full);
  }
}

void apply_eval(EvalSettings& e, const json& j) {
  for (const auto& [key, v] : as_object(j, "eval").items()) {
    const std::string full = "eval." + key;
    if (key == "distance_thresholds") {
      if (!v.is_array()) throw InvalidInput("config key '" + full + "' must be an array");
      e.distance.thresholds.clear();
      for (const json& t : v) e.distance.thresholds.push_back(as_number(t, full));
    } else if (key == "iou_thresholds") {
      e.iou.class_thresholds.clear();
      for (const auto& [cls, t] : as_object(v, full).items()) {
        int id = 0;
        try {
          std::size_t used = 0;
          id = std::stoi(cls, &used);
          if (used != cls.size()) throw std::invalid_argument(cls);
        } catch (const std::exception&) {
          throw InvalidInput("config key '" + full + "." + cls + "' is not a class id");
        }
        e.iou.class_thresholds[id] = as_number(t, full + "." + cls);
      }
    } else if (key == "iou_default") {
      e.iou.default_threshold = as_number(v, full);
    } else if (key == "iou_unknown") {
      e.iou.unknown_threshold = as_number(v, full);
    } else if (key == "interpolation") {
      const Interpolation interp = parse_interpolation(as_string(v, full));
      e.distance.interpolation = interp;
      e.iou.interpolation = interp;
    } else if (key == "min_confidence") {
      e.distance.min_confidence = as_number(v, full);
      e.iou.min_confidence = e.distance.min_confidence;
    } else if (key == "match_distance") {
      e.match_distance = as_number(v, full);
    } else if (key == "ko_sweep") {
      e.ko_sweep = as_counts(v, full);
    } else if (key == "k_u_sweep") {
      e.k_u_sweep = as_counts(v, full);
    } else {
      unknown_key(full);
    }
  }
}

void check_ascending(const std::vector<std::size_t>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) throw InvalidInput(std::string(name) + " values must be >= 1");
    if (i > 0 && v[i] <= v[i - 1]) throw InvalidInput(std::string(name) + " must ascend");
  }
}

}  // namespace

void RunConfig::validate() const {
  scoring.validate();
  pipeline.validate();
  sim.validate();
  if (jobs == 0) throw InvalidInput("jobs must be >= 1");
  if (eval.distance.thresholds.empty()) throw InvalidInput("eval.distance_thresholds is empty");
  for (double t : eval.distance.thresholds) {
    if (!(t > 0.0)) throw InvalidInput("eval.distance_thresholds must be > 0");
  }
  const auto check_iou = [](double t, const std::string& key) {
    if (!(t > 0.0 && t <= 1.0)) throw InvalidInput(key + " must lie in (0, 1]");
  };
  for (const auto& [cls, t] : eval.iou.class_thresholds) {
    check_iou(t, "eval.iou_thresholds." + std::to_string(cls));
  }
  check_iou(eval.iou.default_threshold, "eval.iou_default");
  check_iou(eval.iou.unknown_threshold, "eval.iou_unknown");
  if (!(eval.match_distance > 0.0)) throw InvalidInput("eval.match_distance must be > 0");
  if (!(eval.distance.min_confidence >= 0.0 && eval.distance.min_confidence <= 1.0)) {
    throw InvalidInput("eval.min_confidence must lie in [0, 1]");
  }
  check_ascending(eval.ko_sweep, "eval.ko_sweep");
  check_ascending(eval.k_u_sweep, "eval.k_u_sweep");
}

void apply_run_config_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw InvalidInput("config root must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "scoring") {
      apply_scoring(cfg.scoring, v);
    } else if (key == "pipeline") {
      apply_pipeline(cfg.pipeline, v);
    } else if (key == "sim") {
      if (as_object(v, "sim").contains("scoring")) unknown_key("sim.scoring");
      apply_sim_config_json(cfg.sim, v);
    } else if (key == "eval") {
      apply_eval(cfg.eval, v);
    } else if (key == "jobs") {
      cfg.jobs = as_count(v, "jobs");
    } else {
      unknown_key(key);
    }
  }
  cfg.sim.scoring = cfg.scoring;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("config " + path.string() + ": " + e.what());
  }
  apply_run_config_json(cfg, j);
  return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
  json sim = sim_config_to_json(cfg.sim);
  sim.erase("scoring");
  json iou_thresholds = json::object();
  for (const auto& [cls, t] : cfg.eval.iou.class_thresholds) {
    iou_thresholds[std::to_string(cls)] = t;
  }
  return {
      {"scoring", {{"tau_center", cfg.scoring.tau_center}, {"tau_scale", cfg.scoring.tau_scale}}},
      {"pipeline",
       {{"k_o", cfg.pipeline.k_o},
        {"k_u", cfg.pipeline.k_u},
        {"gt_filter_iou", cfg.pipeline.gt_filter_iou},
        {"reduction", cfg.pipeline.reduction == Reduction::kPca ? "pca" : "mean"},
        {"overlap", cfg.pipeline.overlap == OverlapMetric::kIou3d ? "3d" : "bev"},
        {"literal_eq6", cfg.pipeline.window.literal_eq6},
        {"corner_anchor", cfg.pipeline.window.corner_anchor}}},
      {"sim", std::move(sim)},
      {"eval",
       {{"distance_thresholds", cfg.eval.distance.thresholds},
        {"iou_thresholds", std::move(iou_thresholds)},
        {"iou_default", cfg.eval.iou.default_threshold},
        {"iou_unknown", cfg.eval.iou.unknown_threshold},
        {"interpolation", cfg.eval.distance.interpolation == Interpolation::kR11 ? "r11" : "r40"},
        {"min_confidence", cfg.eval.distance.min_confidence},
        {"match_distance", cfg.eval.match_distance},
        {"ko_sweep", cfg.eval.ko_sweep},
        {"k_u_sweep", cfg.eval.k_u_sweep}}},
      {"jobs", cfg.jobs}};
}

}  // namespace oslk::cli
