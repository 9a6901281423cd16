#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "oslk/bevgrid.hpp"
#include "oslk/objectness.hpp"
#include "oslk/scene.hpp"

namespace oslk {

/// Synthetic-scene generator parameters. Distances are meters, angles
/// radians.
struct SimConfig {
  std::uint64_t seed = 7;
  std::size_t n_known = 8;
  std::size_t n_unknown = 3;
  double area = 40.0;  // objects are placed in [-area, area]^2
  double noise_center_sigma = 0.15;
  double noise_scale_sigma = 0.05;
  double noise_yaw_sigma = 0.01;
  double miss_rate = 0.1;
  /// Number of clutter proposals per scene (rounded to an integer count).
  double clutter_rate = 60.0;
  double bump_amplitude = 1.0;
  double bump_sigma = 2.0;
  double grid_resolution = 0.5;

  std::size_t grid_channels = 4;
  double unknown_bump_amplitude = 0.0;
  double score_noise_sigma = 0.0;
  double clutter_score_lo = 0.0;
  double clutter_score_hi = 0.3;
  /// Fraction of clutter placed beside (never overlapping) a known object.
  double clutter_near_known = 0.0;
  ScoringConfig scoring{};

  /// Throws InvalidInput naming the offending field.
  void validate() const;
};

nlohmann::json sim_config_to_json(const SimConfig& cfg);

/// Overwrites the fields present in `j`; throws InvalidInput on an unknown
/// key (naming it) or a mistyped value.
void apply_sim_config_json(SimConfig& cfg, const nlohmann::json& j);

/// Clutter proposals with high objectness sitting beside known objects,
/// where only the BEV response can tell them apart from unknowns.
SimConfig adversarial_sim_config();

struct SimulatedScene {
  Scene scene;
  BevGrid grid;
};

/// Deterministic in (cfg, scene_index). Proposals list ground-truth-derived
/// entries first (known, then unknown), then clutter.
SimulatedScene generate_scene(const SimConfig& cfg, std::size_t scene_index);

std::string scene_id_for(std::size_t scene_index);

/// Writes `scenes.jsonl`, `grids/<scene_id>.bevg` and `manifest.json` under
/// `out_dir` (created if missing). The manifest echoes `cfg`, embeds
/// `run_config` when given, and lists SHA-256 checksums of every file.
/// Returns the manifest.
nlohmann::json generate_benchmark(const SimConfig& cfg, std::size_t n_scenes,
                                  const std::filesystem::path& out_dir,
                                  std::size_t jobs = 1,
                                  const nlohmann::json& run_config = nullptr);

}  // namespace oslk
