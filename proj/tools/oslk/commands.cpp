#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "oslk/cli.hpp"
#include "oslk/checksum.hpp"
#include "oslk/error.hpp"
#include "oslk/evalkit.hpp"
#include "oslk/io.hpp"
#include "oslk/matching.hpp"
#include "oslk/parallel.hpp"
#include "oslk/simulator.hpp"
#include "oslk/run_config.hpp"

namespace oslk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void configure_logging() {
  static const auto logger = [] {
    auto l = spdlog::stderr_color_mt("oslk");
    spdlog::set_default_logger(l);
    return l;
  }();
  const char* env = std::getenv("OSLK_LOG");
  logger->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string optional_number(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(6) << *v;
  return os.str();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string class_name(int id) {
  return id == kUnknownClassId ? "unknown" : std::to_string(id);
}

// Shared flags. Overrides only apply when the flag was given.
struct Common {
  std::string config_path;
  std::size_t jobs = 1;
  CLI::Option* jobs_opt = nullptr;
};

struct SimulateArgs {
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::size_t scenes = 0;
  std::string out;
  std::string preset = "default";
};

struct PipelineArgs {
  std::size_t k_o = 0, k_u = 0;
  CLI::Option* k_o_opt = nullptr;
  CLI::Option* k_u_opt = nullptr;
  std::string reduction, overlap;
  double gt_filter_iou = 0.0;
  CLI::Option* iou_opt = nullptr;
  bool literal_eq6 = false;
  bool corner_anchor = false;
};

struct SelectArgs {
  std::string scenes, out;
  PipelineArgs pipeline;
};

struct EvalArgs {
  std::string scenes, detections, out, pr_csv, protocol = "distance";
  bool include_known_gt = false;
  double min_confidence = 0.0;
  CLI::Option* min_conf_opt = nullptr;
  std::vector<std::size_t> ko_sweep;
  CLI::Option* ko_opt = nullptr;
};

struct AblateArgs {
  std::string scenes, out;
  std::vector<std::size_t> k_u_sweep;
  CLI::Option* sweep_opt = nullptr;
  PipelineArgs pipeline;
};

struct MatchArgs {
  std::string costs, out;
};

void add_pipeline_flags(CLI::App* cmd, PipelineArgs& a) {
  a.k_o_opt = cmd->add_option("--k-o", a.k_o, "Candidates kept after GT filtering");
  a.k_u_opt = cmd->add_option("--k-u", a.k_u, "Pseudo labels selected per scene");
  cmd->add_option("--reduction", a.reduction, "Channel reduction: mean or pca");
  cmd->add_option("--overlap", a.overlap, "GT-filter overlap: bev or 3d");
  a.iou_opt = cmd->add_option("--gt-filter-iou", a.gt_filter_iou, "GT-filter IoU threshold");
  cmd->add_flag("--literal-eq6", a.literal_eq6, "Use the printed window coordinates");
  cmd->add_flag("--corner-anchor", a.corner_anchor, "Anchor the window at the box corner");
}

// Builds the effective configuration: defaults, then the config file, then
// command-line flags. Validation happens before any input is read.
RunConfig effective_config(const Common& common, const SimConfig& base_sim) {
  RunConfig cfg;
  cfg.sim = base_sim;
  if (!common.config_path.empty()) {
    apply_run_config_json(cfg, read_json_file(common.config_path));
  }
  cfg.sim.scoring = cfg.scoring;
  if (common.jobs_opt->count() > 0) cfg.jobs = common.jobs;
  return cfg;
}

void apply_pipeline_flags(RunConfig& cfg, const PipelineArgs& a) {
  if (a.k_o_opt->count() > 0) cfg.pipeline.k_o = a.k_o;
  if (a.k_u_opt->count() > 0) cfg.pipeline.k_u = a.k_u;
  if (a.iou_opt->count() > 0) cfg.pipeline.gt_filter_iou = a.gt_filter_iou;
  json overrides = json::object();
  if (!a.reduction.empty()) overrides["reduction"] = a.reduction;
  if (!a.overlap.empty()) overrides["overlap"] = a.overlap;
  if (!overrides.empty()) apply_run_config_json(cfg, {{"pipeline", overrides}});
  if (a.literal_eq6) cfg.pipeline.window.literal_eq6 = true;
  if (a.corner_anchor) cfg.pipeline.window.corner_anchor = true;
}

SimConfig preset_sim(const std::string& name) {
  if (name == "default") return SimConfig{};
  if (name == "adversarial") return adversarial_sim_config();
  if (name == "noiseless") {
    SimConfig s;
    s.noise_center_sigma = 0.0;
    s.noise_scale_sigma = 0.0;
    s.noise_yaw_sigma = 0.0;
    s.miss_rate = 0.0;
    s.clutter_rate = 0.0;
    return s;
  }
  throw InvalidInput("unknown preset '" + name + "' (default, adversarial, noiseless)");
}

struct LoadedScenes {
  fs::path path;
  std::vector<Scene> scenes;
};

LoadedScenes load_scenes(const fs::path& path) {
  LoadedScenes out{path, read_scenes(path)};
  spdlog::info("read {} scenes from {}", out.scenes.size(), path.string());
  return out;
}

BevGrid load_grid(const LoadedScenes& s, const Scene& scene) {
  return read_bevg(s.path.parent_path() / scene.grid_path);
}

std::vector<ResponseMap> reduce_all(const LoadedScenes& s, Reduction method, std::size_t jobs) {
  std::vector<std::optional<ResponseMap>> maps(s.scenes.size());
  parallel_for(s.scenes.size(), jobs, [&](std::size_t i) {
    maps[i].emplace(reduce(load_grid(s, s.scenes[i]), method));
  });
  std::vector<ResponseMap> out;
  out.reserve(maps.size());
  for (auto& m : maps) out.push_back(std::move(*m));
  return out;
}

std::vector<PseudoLabelSet> run_selection(const LoadedScenes& s,
                                          const std::vector<ResponseMap>& maps,
                                          const PipelineConfig& p, RankingScore ranking,
                                          std::size_t jobs) {
  std::vector<PseudoLabelSet> sets(s.scenes.size());
  parallel_for(s.scenes.size(), jobs, [&](std::size_t i) {
    const Scene& sc = s.scenes[i];
    sets[i] = select_pseudo_labels(sc.scene_id, sc.proposals, sc.known_gt, maps[i], p, ranking);
  });
  return sets;
}

std::vector<EvalFrame> frames_for(const std::vector<Scene>& scenes,
                                  const std::map<std::string, std::vector<Detection>>& dets,
                                  bool include_known_gt) {
  std::vector<EvalFrame> frames;
  frames.reserve(scenes.size());
  for (const Scene& s : scenes) {
    EvalFrame f;
    f.gts = s.known_gt;
    f.gts.insert(f.gts.end(), s.unknown_gt.begin(), s.unknown_gt.end());
    if (include_known_gt) {
      for (const Box3D& b : s.known_gt) f.detections.push_back({b, *b.class_id, 1.0});
    }
    if (auto it = dets.find(s.scene_id); it != dets.end()) {
      f.detections.insert(f.detections.end(), it->second.begin(), it->second.end());
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

json report_to_json(const EvalReport& r) {
  json per_class = json::object();
  json absent = json::array();
  for (const auto& [cls, ap] : r.per_class_ap) {
    per_class[class_name(cls)] = optional_json(ap);
    if (!ap) absent.push_back(class_name(cls));
  }
  json j = {{"protocol", r.protocol},
            {"map_known", optional_json(r.map_known)},
            {"ap_unknown", optional_json(r.ap_unknown)},
            {"per_class_ap", std::move(per_class)},
            {"absent", std::move(absent)},
            {"thresholds_used", r.thresholds_used}};
  j[r.protocol == "iou" ? "recall_unknown" : "ar_unknown"] = optional_json(r.ar_unknown);
  return j;
}

std::string pr_csv(const EvalReport& r) {
  std::ostringstream os;
  os << std::setprecision(10) << "class,threshold,confidence,recall,precision\n";
  for (const ClassCurves& c : r.curves) {
    for (const PrPoint& p : c.points) {
      os << class_name(c.class_id) << ',' << c.threshold << ',' << p.confidence << ','
         << p.recall << ',' << p.precision << '\n';
    }
  }
  return os.str();
}

// --- commands ---------------------------------------------------------------

int cmd_simulate(const Common& common, const SimulateArgs& a, std::ostream& out) {
  RunConfig cfg = effective_config(common, preset_sim(a.preset));
  if (a.seed_opt->count() > 0) cfg.sim.seed = a.seed;
  cfg.validate();
  if (a.scenes == 0) throw InvalidInput("--scenes must be >= 1");
  const json manifest =
      generate_benchmark(cfg.sim, a.scenes, a.out, cfg.jobs, run_config_to_json(cfg));
  out << "wrote " << a.scenes << " scenes to " << a.out << " (scenes.jsonl sha256 "
      << manifest["files"][0]["sha256"].get<std::string>() << ")\n";
  return kExitOk;
}

int cmd_select(const Common& common, const SelectArgs& a, std::ostream& out) {
  RunConfig cfg = effective_config(common, SimConfig{});
  apply_pipeline_flags(cfg, a.pipeline);
  cfg.validate();

  const LoadedScenes scenes = load_scenes(a.scenes);
  const auto maps = reduce_all(scenes, cfg.pipeline.reduction, cfg.jobs);
  std::vector<PseudoLabelSet> sets =
      run_selection(scenes, maps, cfg.pipeline, RankingScore::kJoint, cfg.jobs);
  std::stable_sort(sets.begin(), sets.end(),
                   [](const auto& x, const auto& y) { return x.scene_id < y.scene_id; });

  const fs::path out_path(a.out);
  if (out_path.has_parent_path()) fs::create_directories(out_path.parent_path());
  write_pseudo_labels(out_path, sets);

  std::size_t total = 0;
  for (const auto& s : sets) total += s.entries.size();
  const json manifest = {{"kind", "oslk-pseudo-labels"},
                         {"run_config", run_config_to_json(cfg)},
                         {"inputs", {{"scenes", a.scenes}, {"sha256", sha256_file(a.scenes)}}},
                         {"outputs", {{"path", out_path.filename().string()},
                                      {"sha256", sha256_file(out_path)}}},
                         {"n_scenes", sets.size()},
                         {"n_pseudo_labels", total}};
  write_text(out_path.string() + ".manifest.json", manifest.dump(2) + "\n");
  out << "selected " << total << " pseudo labels over " << sets.size() << " scenes -> "
      << a.out << "\n";
  return kExitOk;
}

int cmd_eval(const Common& common, const EvalArgs& a, std::ostream& out) {
  RunConfig cfg = effective_config(common, SimConfig{});
  if (a.min_conf_opt->count() > 0) {
    cfg.eval.distance.min_confidence = a.min_confidence;
    cfg.eval.iou.min_confidence = a.min_confidence;
  }
  if (a.ko_opt->count() > 0) cfg.eval.ko_sweep = a.ko_sweep;
  if (a.protocol != "distance" && a.protocol != "iou") {
    throw InvalidInput("--protocol must be distance or iou");
  }
  cfg.validate();

  const LoadedScenes scenes = load_scenes(a.scenes);
  std::map<std::string, std::vector<Detection>> dets;
  if (!a.detections.empty()) {
    std::map<std::string, bool> known_ids;
    for (const Scene& s : scenes.scenes) known_ids[s.scene_id] = true;
    for (SceneDetections& d : read_detections(a.detections)) {
      if (!known_ids.count(d.scene_id)) {
        throw InvalidInput("detections reference unknown scene '" + d.scene_id + "'");
      }
      auto& bucket = dets[d.scene_id];
      bucket.insert(bucket.end(), d.detections.begin(), d.detections.end());
    }
  }
  const auto frames = frames_for(scenes.scenes, dets, a.include_known_gt);
  const EvalReport report = a.protocol == "iou" ? evaluate_iou(frames, cfg.eval.iou)
                                                : evaluate_distance(frames, cfg.eval.distance);

  json j = report_to_json(report);
  j["n_scenes"] = scenes.scenes.size();
  if (a.ko_opt->count() > 0) {
    const auto rows = ko_proportion_analysis(scenes.scenes, cfg.eval.ko_sweep,
                                             cfg.pipeline.gt_filter_iou, cfg.pipeline.overlap,
                                             cfg.eval.match_distance);
    json table = json::array();
    out << "k_o  matched/total(%)\n";
    for (const KoRow& r : rows) {
      table.push_back({{"k_o", r.k_o}, {"matched", r.matched}, {"total", r.total},
                       {"percent", r.percent}});
      out << std::setw(3) << r.k_o << "  " << std::fixed << std::setprecision(2) << r.percent
          << std::defaultfloat << "\n";
    }
    j["ko_proportion"] = std::move(table);
  }
  j["run_config"] = run_config_to_json(cfg);

  if (a.out.empty()) {
    out << j.dump(2) << "\n";
  } else {
    write_text(a.out, j.dump(2) + "\n");
    out << "mAP_known=" << optional_number(report.map_known)
        << " AP_unk=" << optional_number(report.ap_unknown)
        << (report.protocol == "iou" ? " Recall_unk=" : " AR_unk=")
        << optional_number(report.ar_unknown) << " -> " << a.out << "\n";
  }
  if (!a.pr_csv.empty()) write_text(a.pr_csv, pr_csv(report));
  return kExitOk;
}

int cmd_ablate(const Common& common, const AblateArgs& a, std::ostream& out) {
  RunConfig cfg = effective_config(common, SimConfig{});
  apply_pipeline_flags(cfg, a.pipeline);
  if (a.sweep_opt->count() > 0) cfg.eval.k_u_sweep = a.k_u_sweep;
  cfg.validate();
  for (std::size_t k : cfg.eval.k_u_sweep) {
    if (k > cfg.pipeline.k_o) {
      throw InvalidInput("k_u sweep value " + std::to_string(k) + " exceeds k_o " +
                         std::to_string(cfg.pipeline.k_o));
    }
  }

  const LoadedScenes scenes = load_scenes(a.scenes);
  std::map<Reduction, std::vector<ResponseMap>> maps;
  maps.emplace(Reduction::kMean, reduce_all(scenes, Reduction::kMean, cfg.jobs));
  maps.emplace(Reduction::kPca, reduce_all(scenes, Reduction::kPca, cfg.jobs));

  struct Row {
    std::string section, variant, reduction;
    std::size_t k_u;
    EvalReport report;
    SelectionPrecision precision;
  };
  std::vector<Row> rows;
  const auto run_variant = [&](const std::string& section, const std::string& variant,
                               RankingScore ranking, Reduction reduction, std::size_t k_u) {
    PipelineConfig p = cfg.pipeline;
    p.k_u = k_u;
    p.reduction = reduction;
    const auto sets = run_selection(scenes, maps.at(reduction), p, ranking, cfg.jobs);
    std::map<std::string, std::vector<Detection>> dets;
    for (const PseudoLabelSet& s : sets) {
      auto& bucket = dets[s.scene_id];
      for (const PseudoLabel& e : s.entries) {
        double conf = e.s_jos;
        if (ranking == RankingScore::kObjectnessOnly) conf = e.s_obj_pred;
        if (ranking == RankingScore::kFeatureOnly) conf = 1.0 - e.s_fea;
        bucket.push_back({e.box, kUnknownClassId, conf});
      }
    }
    const auto frames = frames_for(scenes.scenes, dets, /*include_known_gt=*/true);
    rows.push_back({section, variant, reduction == Reduction::kPca ? "pca" : "mean", k_u,
                    evaluate_distance(frames, cfg.eval.distance),
                    pseudo_label_precision(scenes.scenes, sets, cfg.eval.match_distance)});
  };

  const std::size_t k_u = cfg.pipeline.k_u;
  run_variant("score_design", "s_obj_only", RankingScore::kObjectnessOnly, Reduction::kMean, k_u);
  run_variant("score_design", "s_fea_only", RankingScore::kFeatureOnly, Reduction::kMean, k_u);
  run_variant("score_design", "s_jos", RankingScore::kJoint, Reduction::kMean, k_u);
  run_variant("score_design", "s_jos", RankingScore::kJoint, Reduction::kPca, k_u);
  for (std::size_t k : cfg.eval.k_u_sweep) {
    run_variant("k_u_sweep", "s_jos", RankingScore::kJoint, cfg.pipeline.reduction, k);
  }

  std::ostringstream csv;
  csv << "section,variant,reduction,k_o,k_u,AR_unk,AP_unk,mAP_known,precision_at_ku,"
         "recall_selected,f1\n";
  for (const Row& r : rows) {
    const double p = r.precision.precision();
    const double rec = r.precision.recall();
    const double f1 = p + rec > 0.0 ? 2.0 * p * rec / (p + rec) : 0.0;
    csv << r.section << ',' << r.variant << ',' << r.reduction << ',' << cfg.pipeline.k_o << ','
        << r.k_u << ',' << optional_number(r.report.ar_unknown) << ','
        << optional_number(r.report.ap_unknown) << ',' << optional_number(r.report.map_known)
        << ',' << optional_number(p) << ',' << optional_number(rec) << ','
        << optional_number(f1) << '\n';
  }
  write_text(a.out, csv.str());
  const json manifest = {{"kind", "oslk-ablation"},
                         {"run_config", run_config_to_json(cfg)},
                         {"inputs", {{"scenes", a.scenes}, {"sha256", sha256_file(a.scenes)}}},
                         {"outputs", {{"path", fs::path(a.out).filename().string()},
                                      {"sha256", sha256_file(a.out)}}}};
  write_text(a.out + ".manifest.json", manifest.dump(2) + "\n");
  out << csv.str();
  return kExitOk;
}

CostMatrix read_cost_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> entries;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t n = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
        entries.push_back(v);
      } catch (const std::exception&) {
        throw InvalidInput(path.string() + ":" + std::to_string(lineno) +
                           ": not a number: '" + cell + "'");
      }
      ++n;
    }
    if (rows == 0) cols = n;
    if (n != cols) {
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) + ": expected " +
                         std::to_string(cols) + " columns, got " + std::to_string(n));
    }
    ++rows;
  }
  return CostMatrix(rows, cols, std::move(entries));
}

int cmd_match(const MatchArgs& a, std::ostream& out) {
  const CostMatrix costs = read_cost_csv(a.costs);
  const MatchResult m = solve_assignment(costs);
  const json j = {{"assignment", m.assignment},
                  {"per_pair_cost", m.per_pair_cost},
                  {"total_cost", m.total_cost}};
  if (a.out.empty()) {
    out << j.dump() << "\n";
  } else {
    write_text(a.out, j.dump(2) + "\n");
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"oslk: open-set pseudo-label toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  common.jobs_opt = app.add_option("--jobs", common.jobs, "Worker threads for per-scene work");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic benchmark");
  sim.seed_opt = simulate->add_option("--seed", sim.seed, "Simulator seed");
  simulate->add_option("--scenes", sim.scenes, "Number of scenes")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--preset", sim.preset, "default, adversarial or noiseless");

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "Select pseudo labels for every scene");
  select->add_option("--scenes", sel.scenes, "Scene JSON-Lines file")->required();
  select->add_option("--out", sel.out, "Pseudo-label JSON-Lines output")->required();
  add_pipeline_flags(select, sel.pipeline);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate detections or pseudo labels");
  eval->add_option("--scenes", ev.scenes, "Scene JSON-Lines file")->required();
  eval->add_option("--detections", ev.detections, "Detections or pseudo-label JSON Lines");
  eval->add_option("--protocol", ev.protocol, "distance or iou");
  eval->add_option("--out", ev.out, "Report JSON (stdout if omitted)");
  eval->add_option("--pr-csv", ev.pr_csv, "Write precision-recall curves as CSV");
  eval->add_flag("--include-known-gt", ev.include_known_gt,
                 "Echo known ground truth as confidence-1 detections");
  ev.min_conf_opt = eval->add_option("--min-confidence", ev.min_confidence,
                                     "Operating threshold for recall");
  ev.ko_opt = eval->add_option("--ko-sweep", ev.ko_sweep, "k_o values, e.g. 5,10,20,30,40")
                  ->delimiter(',');

  AblateArgs ab;
  auto* ablate = app.add_subcommand("ablate", "Compare score designs and sweep k_u");
  ablate->add_option("--scenes", ab.scenes, "Scene JSON-Lines file")->required();
  ablate->add_option("--out", ab.out, "CSV output")->required();
  ab.sweep_opt = ablate->add_option("--k-u-sweep", ab.k_u_sweep, "k_u values")->delimiter(',');
  add_pipeline_flags(ablate, ab.pipeline);

  MatchArgs mt;
  auto* match = app.add_subcommand("match", "Solve an assignment from a cost-matrix CSV");
  match->add_option("--costs", mt.costs, "Cost matrix CSV (rows = ground truth)")->required();
  match->add_option("--out", mt.out, "Result JSON (stdout if omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(common, sim, out);
    if (select->parsed()) return cmd_select(common, sel, out);
    if (eval->parsed()) return cmd_eval(common, ev, out);
    if (ablate->parsed()) return cmd_ablate(common, ab, out);
    if (match->parsed()) return cmd_match(mt, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Infeasible& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace oslk::cli
