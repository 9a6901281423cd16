#include "oslk/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "oslk/checksum.hpp"
#include "oslk/error.hpp"
#include "oslk/io.hpp"
#include "oslk/parallel.hpp"

namespace oslk {

using nlohmann::json;

namespace {

constexpr int kCarClass = 0;
constexpr int kPedestrianClass = 1;
constexpr double kPlacementGap = 0.5;
constexpr int kPlacementRetries = 200;
constexpr double kGridMargin = 5.0;
// Clutter keeps this far from unknown centers so it never counts as a hit
// under the 2 m matching radius.
constexpr double kClutterUnknownClearance = 3.0;

struct Dims {
  double w, l, h;
};

constexpr Dims kCarDims{1.9, 4.5, 1.7};
constexpr Dims kPedestrianDims{0.8, 0.8, 1.8};
constexpr Dims kTruckDims{2.5, 8.0, 3.0};

class SceneRng {
 public:
  SceneRng(std::uint64_t seed, std::size_t index) {
    const auto idx = static_cast<std::uint64_t>(index);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32),
                      0x05DE7u};
    engine_.seed(seq);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  bool bernoulli(double p) { return uniform(0.0, 1.0) < p; }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

double footprint_radius(const Box3D& b) { return 0.5 * std::hypot(b.l, b.w); }

bool circles_clear(const Box3D& candidate, const std::vector<Box3D>& placed) {
  const double rc = footprint_radius(candidate);
  return std::all_of(placed.begin(), placed.end(), [&](const Box3D& p) {
    return std::hypot(candidate.x - p.x, candidate.y - p.y) >=
           rc + footprint_radius(p) + kPlacementGap;
  });
}

Box3D sized_box(SceneRng& rng, Dims prior, std::optional<int> cls) {
  const double w = prior.w * rng.uniform(0.9, 1.1);
  const double l = prior.l * rng.uniform(0.9, 1.1);
  const double h = prior.h * rng.uniform(0.9, 1.1);
  return Box3D{0.0, 0.0, 0.5 * h, w, l, h, rng.uniform(-kPi, kPi), cls};
}

Box3D perturb(const Box3D& gt, const SimConfig& cfg, SceneRng& rng) {
  constexpr double kMinDim = 0.1;
  Box3D p = gt;
  p.class_id.reset();
  p.x += cfg.noise_center_sigma * rng.normal();
  p.y += cfg.noise_center_sigma * rng.normal();
  p.z += cfg.noise_center_sigma * rng.normal();
  p.w = std::max(kMinDim, p.w + cfg.noise_scale_sigma * rng.normal());
  p.l = std::max(kMinDim, p.l + cfg.noise_scale_sigma * rng.normal());
  p.h = std::max(kMinDim, p.h + cfg.noise_scale_sigma * rng.normal());
  p.r = wrap_angle(p.r + cfg.noise_yaw_sigma * rng.normal());
  return p;
}

BevGrid render_grid(const SimConfig& cfg, const Scene& scene) {
  const double half = cfg.area + kGridMargin;
  const auto n = static_cast<std::size_t>(std::floor(2.0 * half / cfg.grid_resolution)) + 1;
  const GridCalibration calib{-half, -half, cfg.grid_resolution};
  const double two_sigma_sq = 2.0 * cfg.bump_sigma * cfg.bump_sigma;

  std::vector<std::pair<const Box3D*, double>> bumps;
  for (const Box3D& b : scene.known_gt) bumps.emplace_back(&b, cfg.bump_amplitude);
  if (cfg.unknown_bump_amplitude > 0.0) {
    for (const Box3D& b : scene.unknown_gt) bumps.emplace_back(&b, cfg.unknown_bump_amplitude);
  }

  std::vector<double> field(n * n, 0.0);
  for (std::size_t row = 0; row < n; ++row) {
    const double wy = calib.origin_y + static_cast<double>(row) * calib.resolution;
    for (std::size_t col = 0; col < n; ++col) {
      const double wx = calib.origin_x + static_cast<double>(col) * calib.resolution;
      double v = 0.0;
      for (const auto& [box, amp] : bumps) {
        const double dx = wx - box->x;
        const double dy = wy - box->y;
        v += amp * std::exp(-(dx * dx + dy * dy) / two_sigma_sq);
      }
      field[row * n + col] = v;
    }
  }

  // Channels are offset, positively scaled copies of the same field so both
  // reductions recover the bump layout.
  std::vector<float> data;
  data.reserve(cfg.grid_channels * n * n);
  for (std::size_t c = 0; c < cfg.grid_channels; ++c) {
    const double gain = 1.0 + 0.5 * static_cast<double>(c);
    const double offset = 0.1 * static_cast<double>(c);
    for (double v : field) data.push_back(static_cast<float>(offset + gain * v));
  }
  return BevGrid(cfg.grid_channels, n, n, calib, std::move(data));
}

void check_range(const char* name, double v, double lo, double hi) {
  if (!(std::isfinite(v) && v >= lo && v <= hi)) {
    throw InvalidInput(std::string("sim.") + name + " out of range");
  }
}

void check_positive(const char* name, double v) {
  if (!(std::isfinite(v) && v > 0.0)) throw InvalidInput(std::string("sim.") + name + " must be > 0");
}

void check_non_negative(const char* name, double v) {
  if (!(std::isfinite(v) && v >= 0.0)) throw InvalidInput(std::string("sim.") + name + " must be >= 0");
}

using FieldSetter = std::function<void(SimConfig&, const json&)>;

template <typename T>
FieldSetter setter(T SimConfig::*field) {
  return [field](SimConfig& cfg, const json& v) {
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw InvalidInput("expected a number");
    } else {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw InvalidInput("expected a non-negative integer");
      }
    }
    cfg.*field = v.get<T>();
  };
}

const std::map<std::string, FieldSetter>& sim_fields() {
  static const std::map<std::string, FieldSetter> fields = {
      {"seed", setter(&SimConfig::seed)},
      {"n_known", setter(&SimConfig::n_known)},
      {"n_unknown", setter(&SimConfig::n_unknown)},
      {"area", setter(&SimConfig::area)},
      {"noise_center_sigma", setter(&SimConfig::noise_center_sigma)},
      {"noise_scale_sigma", setter(&SimConfig::noise_scale_sigma)},
      {"noise_yaw_sigma", setter(&SimConfig::noise_yaw_sigma)},
      {"miss_rate", setter(&SimConfig::miss_rate)},
      {"clutter_rate", setter(&SimConfig::clutter_rate)},
      {"bump_amplitude", setter(&SimConfig::bump_amplitude)},
      {"bump_sigma", setter(&SimConfig::bump_sigma)},
      {"grid_resolution", setter(&SimConfig::grid_resolution)},
      {"grid_channels", setter(&SimConfig::grid_channels)},
      {"unknown_bump_amplitude", setter(&SimConfig::unknown_bump_amplitude)},
      {"score_noise_sigma", setter(&SimConfig::score_noise_sigma)},
      {"clutter_score_lo", setter(&SimConfig::clutter_score_lo)},
      {"clutter_score_hi", setter(&SimConfig::clutter_score_hi)},
      {"clutter_near_known", setter(&SimConfig::clutter_near_known)},
      {"scoring",
       [](SimConfig& cfg, const json& v) {
         if (!v.is_object()) throw InvalidInput("expected an object");
         for (const auto& [key, value] : v.items()) {
           if (!value.is_number()) throw InvalidInput("scoring." + key + ": expected a number");
           if (key == "tau_center") {
             cfg.scoring.tau_center = value.get<double>();
           } else if (key == "tau_scale") {
             cfg.scoring.tau_scale = value.get<double>();
           } else {
             throw InvalidInput("unknown config key 'sim.scoring." + key + "'");
           }
         }
       }},
  };
  return fields;
}

}  // namespace

void SimConfig::validate() const {
  check_positive("area", area);
  check_non_negative("noise_center_sigma", noise_center_sigma);
  check_non_negative("noise_scale_sigma", noise_scale_sigma);
  check_non_negative("noise_yaw_sigma", noise_yaw_sigma);
  check_non_negative("score_noise_sigma", score_noise_sigma);
  check_range("miss_rate", miss_rate, 0.0, 1.0);
  check_non_negative("clutter_rate", clutter_rate);
  check_range("bump_amplitude", bump_amplitude, 0.0, 1.0);
  check_range("unknown_bump_amplitude", unknown_bump_amplitude, 0.0, 1.0);
  check_positive("bump_sigma", bump_sigma);
  check_positive("grid_resolution", grid_resolution);
  check_range("clutter_score_lo", clutter_score_lo, 0.0, 1.0);
  check_range("clutter_score_hi", clutter_score_hi, clutter_score_lo, 1.0);
  check_range("clutter_near_known", clutter_near_known, 0.0, 1.0);
  if (grid_channels == 0) throw InvalidInput("sim.grid_channels must be >= 1");
  scoring.validate();
}

json sim_config_to_json(const SimConfig& cfg) {
  return {{"seed", cfg.seed},
          {"n_known", cfg.n_known},
          {"n_unknown", cfg.n_unknown},
          {"area", cfg.area},
          {"noise_center_sigma", cfg.noise_center_sigma},
          {"noise_scale_sigma", cfg.noise_scale_sigma},
          {"noise_yaw_sigma", cfg.noise_yaw_sigma},
          {"miss_rate", cfg.miss_rate},
          {"clutter_rate", cfg.clutter_rate},
          {"bump_amplitude", cfg.bump_amplitude},
          {"bump_sigma", cfg.bump_sigma},
          {"grid_resolution", cfg.grid_resolution},
          {"grid_channels", cfg.grid_channels},
          {"unknown_bump_amplitude", cfg.unknown_bump_amplitude},
          {"score_noise_sigma", cfg.score_noise_sigma},
          {"clutter_score_lo", cfg.clutter_score_lo},
          {"clutter_score_hi", cfg.clutter_score_hi},
          {"clutter_near_known", cfg.clutter_near_known},
          {"scoring",
           {{"tau_center", cfg.scoring.tau_center}, {"tau_scale", cfg.scoring.tau_scale}}}};
}

void apply_sim_config_json(SimConfig& cfg, const json& j) {
  if (!j.is_object()) throw InvalidInput("sim config must be a JSON object");
  const auto& fields = sim_fields();
  for (const auto& [key, value] : j.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw InvalidInput("unknown config key 'sim." + key + "'");
    try {
      it->second(cfg, value);
    } catch (const InvalidInput& e) {
      throw InvalidInput("sim." + key + ": " + e.what());
    }
  }
}

SimConfig adversarial_sim_config() {
  SimConfig cfg;
  cfg.clutter_rate = 12.0;
  cfg.clutter_near_known = 1.0;
  cfg.clutter_score_lo = 0.6;
  cfg.clutter_score_hi = 1.0;
  cfg.bump_sigma = 3.0;
  cfg.n_unknown = 5;
  return cfg;
}

std::string scene_id_for(std::size_t scene_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%05zu", scene_index);
  return buf;
}

SimulatedScene generate_scene(const SimConfig& cfg, std::size_t scene_index) {
  cfg.validate();
  SceneRng rng(cfg.seed, scene_index);
  Scene scene;
  scene.scene_id = scene_id_for(scene_index);
  scene.grid_path = "grids/" + scene.scene_id + ".bevg";

  std::vector<Box3D> placed;
  const auto place = [&](Box3D box) -> std::optional<Box3D> {
    for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
      box.x = rng.uniform(-cfg.area, cfg.area);
      box.y = rng.uniform(-cfg.area, cfg.area);
      if (circles_clear(box, placed)) {
        placed.push_back(box);
        return box;
      }
    }
    scene.placement_truncated = true;
    return std::nullopt;
  };

  for (std::size_t i = 0; i < cfg.n_known; ++i) {
    const bool car = rng.bernoulli(0.6);
    const Box3D prior = sized_box(rng, car ? kCarDims : kPedestrianDims,
                                  car ? kCarClass : kPedestrianClass);
    if (auto b = place(prior)) scene.known_gt.push_back(*b);
  }
  for (std::size_t i = 0; i < cfg.n_unknown; ++i) {
    if (auto b = place(sized_box(rng, kTruckDims, kUnknownClassId))) {
      scene.unknown_gt.push_back(*b);
    }
  }

  const auto emit_from = [&](const Box3D& gt) {
    const bool kept = !rng.bernoulli(cfg.miss_rate);
    const Box3D p = perturb(gt, cfg, rng);
    double score = objectness_score(gt, p, cfg.scoring).s_obj;
    score = std::clamp(score + cfg.score_noise_sigma * rng.normal(), 0.0, 1.0);
    if (kept) scene.proposals.push_back({p, score});
  };
  for (const Box3D& gt : scene.known_gt) emit_from(gt);
  for (const Box3D& gt : scene.unknown_gt) emit_from(gt);

  const auto clutter_count = static_cast<std::size_t>(std::llround(cfg.clutter_rate));
  const auto clear_of_unknowns = [&](const Box3D& b) {
    return std::all_of(scene.unknown_gt.begin(), scene.unknown_gt.end(), [&](const Box3D& u) {
      return std::hypot(b.x - u.x, b.y - u.y) >= kClutterUnknownClearance;
    });
  };
  for (std::size_t i = 0; i < clutter_count; ++i) {
    Box3D box{0.0, 0.0, 0.0,
              rng.uniform(0.6, 2.5), rng.uniform(0.6, 5.0), rng.uniform(0.8, 2.5),
              rng.uniform(-kPi, kPi), std::nullopt};
    box.z = 0.5 * box.h;
    const bool beside_known = !scene.known_gt.empty() && rng.bernoulli(cfg.clutter_near_known);
    const double score = rng.uniform(cfg.clutter_score_lo, cfg.clutter_score_hi);
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementRetries && !ok; ++attempt) {
      if (beside_known) {
        const Box3D& anchor = scene.known_gt[rng.index(scene.known_gt.size())];
        const double theta = rng.uniform(-kPi, kPi);
        const double dist = footprint_radius(anchor) + footprint_radius(box) +
                            kPlacementGap + rng.uniform(0.0, 1.0);
        box.x = anchor.x + dist * std::cos(theta);
        box.y = anchor.y + dist * std::sin(theta);
      } else {
        box.x = rng.uniform(-cfg.area, cfg.area);
        box.y = rng.uniform(-cfg.area, cfg.area);
      }
      ok = circles_clear(box, placed) && clear_of_unknowns(box);
    }
    if (ok) scene.proposals.push_back({box, score});
  }

  BevGrid grid = render_grid(cfg, scene);
  return {std::move(scene), std::move(grid)};
}

json generate_benchmark(const SimConfig& cfg, std::size_t n_scenes,
                        const std::filesystem::path& out_dir, std::size_t jobs,
                        const json& run_config) {
  cfg.validate();
  if (n_scenes == 0) throw InvalidInput("generate_benchmark: n_scenes must be >= 1");
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "grids", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "grids").string() + ": " + ec.message());

  std::vector<Scene> scenes(n_scenes);
  std::vector<std::string> grid_sums(n_scenes);
  parallel_for(n_scenes, jobs, [&](std::size_t i) {
    SimulatedScene sim = generate_scene(cfg, i);
    const auto bytes = encode_bevg(sim.grid);
    const std::filesystem::path grid_file = out_dir / sim.scene.grid_path;
    write_bevg(grid_file, sim.grid);
    grid_sums[i] = sha256_hex(bytes);
    scenes[i] = std::move(sim.scene);
  });

  const std::filesystem::path scene_file = out_dir / "scenes.jsonl";
  write_scenes(scene_file, scenes);

  json files = json::array();
  files.push_back({{"path", "scenes.jsonl"}, {"sha256", sha256_file(scene_file)}});
  std::size_t truncated = 0;
  for (std::size_t i = 0; i < n_scenes; ++i) {
    files.push_back({{"path", scenes[i].grid_path}, {"sha256", grid_sums[i]}});
    if (scenes[i].placement_truncated) ++truncated;
  }
  json manifest = {{"kind", "oslk-benchmark"},
                   {"n_scenes", n_scenes},
                   {"sim_config", sim_config_to_json(cfg)},
                   {"truncated_scenes", truncated},
                   {"files", std::move(files)}};
  if (!run_config.is_null()) manifest["run_config"] = run_config;

  const std::filesystem::path manifest_file = out_dir / "manifest.json";
  std::ofstream out(manifest_file, std::ios::trunc);
  if (!out) throw IoError("cannot open " + manifest_file.string() + " for writing");
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + manifest_file.string());
  return manifest;
}

}  // namespace oslk
