#include "oslk/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "oslk/error.hpp"

namespace oslk {

void PipelineConfig::validate() const {
  if (k_o == 0) throw InvalidInput("pipeline.k_o must be >= 1");
  if (k_u == 0) throw InvalidInput("pipeline.k_u must be >= 1");
  if (k_u > k_o) throw InvalidInput("pipeline.k_u must not exceed pipeline.k_o");
  if (!(gt_filter_iou >= 0.0 && gt_filter_iou <= 1.0)) {
    throw InvalidInput("pipeline.gt_filter_iou must lie in [0, 1]");
  }
}

std::vector<std::size_t> gt_filter_indices(std::span<const Proposal> proposals,
                                           std::span<const Box3D> known_gt,
                                           double threshold, OverlapMetric metric) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidInput("gt_filter: threshold must lie in [0, 1]");
  }
  std::vector<std::size_t> kept;
  kept.reserve(proposals.size());
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    double worst = 0.0;
    for (const Box3D& gt : known_gt) {
      const double o = metric == OverlapMetric::kIou3d ? iou3d(proposals[i].box, gt)
                                                       : bev_iou(proposals[i].box, gt);
      worst = std::max(worst, o);
      if (worst > threshold) break;
    }
    if (worst <= threshold) kept.push_back(i);
  }
  return kept;
}

std::vector<Proposal> gt_filter(std::span<const Proposal> proposals,
                                std::span<const Box3D> known_gt, double threshold,
                                OverlapMetric metric) {
  std::vector<Proposal> out;
  for (std::size_t i : gt_filter_indices(proposals, known_gt, threshold, metric)) {
    out.push_back(proposals[i]);
  }
  return out;
}

std::vector<std::size_t> top_k_indices(std::span<const Proposal> proposals,
                                       std::size_t k_o) {
  if (k_o == 0) throw InvalidInput("top_k_candidates: k_o must be >= 1");
  std::vector<std::size_t> order(proposals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return proposals[a].s_obj_pred > proposals[b].s_obj_pred;
  });
  order.resize(std::min(k_o, order.size()));
  return order;
}

std::vector<Proposal> top_k_candidates(std::span<const Proposal> proposals,
                                       std::size_t k_o) {
  std::vector<Proposal> out;
  for (std::size_t i : top_k_indices(proposals, k_o)) out.push_back(proposals[i]);
  return out;
}

std::vector<PseudoLabel> rank_candidates(std::span<const Proposal> candidates,
                                         const ResponseMap& map, std::size_t k_u,
                                         RankingScore ranking, WindowOptions window) {
  if (k_u == 0) throw InvalidInput("joint_select: k_u must be >= 1");
  std::vector<PseudoLabel> scored;
  std::vector<double> key;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Proposal& p = candidates[i];
    PseudoLabel label;
    label.box = p.box;
    label.s_obj_pred = p.s_obj_pred;
    label.s_fea = window_response(map, p.box, window);
    label.s_jos = joint_score(p.s_obj_pred, label.s_fea);
    label.source_index = i;
    switch (ranking) {
      case RankingScore::kJoint: key.push_back(label.s_jos); break;
      case RankingScore::kObjectnessOnly: key.push_back(label.s_obj_pred); break;
      case RankingScore::kFeatureOnly: key.push_back(1.0 - label.s_fea); break;
    }
    scored.push_back(label);
  }
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  order.resize(std::min(k_u, order.size()));
  std::vector<PseudoLabel> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(scored[i]);
  return out;
}

PseudoLabelSet joint_select(std::span<const Proposal> candidates,
                            const ResponseMap& map, std::size_t k_u,
                            WindowOptions window) {
  return {"", rank_candidates(candidates, map, k_u, RankingScore::kJoint, window)};
}

PseudoLabelSet select_pseudo_labels(const std::string& scene_id,
                                    std::span<const Proposal> proposals,
                                    std::span<const Box3D> known_gt,
                                    const ResponseMap& map,
                                    const PipelineConfig& cfg,
                                    RankingScore ranking) {
  cfg.validate();
  const auto survivors =
      gt_filter_indices(proposals, known_gt, cfg.gt_filter_iou, cfg.overlap);
  std::vector<Proposal> filtered;
  filtered.reserve(survivors.size());
  for (std::size_t i : survivors) filtered.push_back(proposals[i]);

  const auto top = top_k_indices(filtered, cfg.k_o);
  std::vector<Proposal> candidates;
  candidates.reserve(top.size());
  for (std::size_t i : top) candidates.push_back(filtered[i]);

  PseudoLabelSet out{scene_id, rank_candidates(candidates, map, cfg.k_u, ranking, cfg.window)};
  for (PseudoLabel& e : out.entries) e.source_index = survivors[top[e.source_index]];
  return out;
}

PseudoLabelSet select_pseudo_labels(const std::string& scene_id,
                                    std::span<const Proposal> proposals,
                                    std::span<const Box3D> known_gt,
                                    const BevGrid& grid, const PipelineConfig& cfg) {
  cfg.validate();
  return select_pseudo_labels(scene_id, proposals, known_gt,
                              reduce(grid, cfg.reduction), cfg);
}

std::vector<WeightedLabel> merge_labels(std::span<const Box3D> known_gt,
                                        const PseudoLabelSet& pseudo,
                                        int unknown_class_id) {
  std::vector<WeightedLabel> out;
  out.reserve(known_gt.size() + pseudo.entries.size());
  for (const Box3D& gt : known_gt) {
    if (!gt.class_id) throw InvalidInput("merge_labels: known box without class");
    if (*gt.class_id == unknown_class_id) {
      throw InvalidInput("merge_labels: unknown class id " +
                         std::to_string(unknown_class_id) +
                         " collides with a known class");
    }
    out.push_back({gt, 1.0});
  }
  for (const PseudoLabel& e : pseudo.entries) {
    Box3D box = e.box;
    box.class_id = unknown_class_id;
    out.push_back({box, e.s_obj_pred});
  }
  return out;
}

double focal_loss(double p, int target, FocalParams params) {
  if (target != 0 && target != 1) throw InvalidInput("focal_loss: target must be 0 or 1");
  if (std::isnan(p)) throw InvalidInput("focal_loss: probability is NaN");
  constexpr double kEps = 1e-7;
  p = std::clamp(p, kEps, 1.0 - kEps);
  if (target == 1) return -params.alpha * std::pow(1.0 - p, params.gamma) * std::log(p);
  return -(1.0 - params.alpha) * std::pow(p, params.gamma) * std::log(1.0 - p);
}

double soft_weighted_unknown_loss(const PseudoLabelSet& pseudo,
                                  std::span<const double> pred_probs,
                                  const MatchResult& assignment, FocalParams params) {
  const auto& sigma = assignment.assignment;
  if (sigma.size() != pseudo.entries.size()) {
    throw InvalidInput("soft_weighted_unknown_loss: assignment size " +
                       std::to_string(sigma.size()) + " != pseudo entries " +
                       std::to_string(pseudo.entries.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] >= pred_probs.size()) {
      throw InvalidInput("soft_weighted_unknown_loss: prediction index out of range");
    }
    total += pseudo.entries[i].s_obj_pred * focal_loss(pred_probs[sigma[i]], 1, params);
  }
  return total;
}

MatchResult pseudo_label_assignment(const PseudoLabelSet& pseudo,
                                    std::span<const Box3D> pred_boxes,
                                    std::span<const std::vector<double>> pred_class_probs,
                                    int unknown_index, HungarianCostWeights weights) {
  std::vector<Box3D> gt;
  gt.reserve(pseudo.entries.size());
  for (const PseudoLabel& e : pseudo.entries) {
    Box3D b = e.box;
    b.class_id = unknown_index;
    gt.push_back(b);
  }
  return hungarian_match(gt, pred_boxes, pred_class_probs, weights);
}

}  // namespace oslk
