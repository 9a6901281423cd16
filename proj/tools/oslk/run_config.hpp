#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "oslk/evalkit.hpp"
#include "oslk/objectness.hpp"
#include "oslk/selection.hpp"
#include "oslk/simulator.hpp"

namespace oslk::cli {

struct EvalSettings {
  DistanceProtocol distance{};
  IouProtocol iou{};
  double match_distance = 2.0;
  std::vector<std::size_t> ko_sweep{5, 10, 20, 30, 40};
  std::vector<std::size_t> k_u_sweep{3, 5, 10, 20, 30};
};

/// Everything a run needs. Loaded from JSON with every key checked; the
/// top-level scoring section is what the simulator scores proposals with.
struct RunConfig {
  ScoringConfig scoring{};
  PipelineConfig pipeline{};
  SimConfig sim{};
  EvalSettings eval{};
  std::size_t jobs = 1;

  /// Throws InvalidInput on the first violated constraint.
  void validate() const;
};

/// Applies a JSON document on top of `cfg`. Unknown keys throw InvalidInput
/// naming the full dotted key.
void apply_run_config_json(RunConfig& cfg, const nlohmann::json& j);

/// Defaults overlaid with the file's contents, if a path is given.
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json run_config_to_json(const RunConfig& cfg);

}  // namespace oslk::cli
