#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "oslk/bevgrid.hpp"
#include "oslk/geometry3d.hpp"
#include "oslk/matching.hpp"

namespace oslk {

/// Class-agnostic proposal with its predicted objectness.
struct Proposal {
  Box3D box;
  double s_obj_pred = 0.0;

  bool operator==(const Proposal&) const = default;
};

enum class OverlapMetric { kBevIou, kIou3d };

struct PipelineConfig {
  std::size_t k_o = 30;
  std::size_t k_u = 10;
  double gt_filter_iou = 0.1;
  Reduction reduction = Reduction::kMean;
  OverlapMetric overlap = OverlapMetric::kBevIou;
  WindowOptions window{};

  /// Throws InvalidInput on k_o == 0, k_u == 0, k_u > k_o or a threshold
  /// outside [0, 1].
  void validate() const;
};

struct PseudoLabel {
  Box3D box;
  double s_obj_pred = 0.0;
  double s_fea = 0.0;
  double s_jos = 0.0;
  /// Index of the proposal in the caller's original list.
  std::size_t source_index = 0;

  bool operator==(const PseudoLabel&) const = default;
};

/// Selected pseudo ground truth for one scene, sorted by s_jos descending.
struct PseudoLabelSet {
  std::string scene_id;
  std::vector<PseudoLabel> entries;

  bool operator==(const PseudoLabelSet&) const = default;
};

/// Indices of proposals whose largest overlap with any known box is at most
/// `threshold`, in input order.
std::vector<std::size_t> gt_filter_indices(std::span<const Proposal> proposals,
                                           std::span<const Box3D> known_gt,
                                           double threshold,
                                           OverlapMetric metric = OverlapMetric::kBevIou);

std::vector<Proposal> gt_filter(std::span<const Proposal> proposals,
                                std::span<const Box3D> known_gt, double threshold,
                                OverlapMetric metric = OverlapMetric::kBevIou);

/// Indices of the min(k_o, n) highest-scoring proposals, descending by
/// s_obj_pred, ties by index.
std::vector<std::size_t> top_k_indices(std::span<const Proposal> proposals,
                                       std::size_t k_o);

std::vector<Proposal> top_k_candidates(std::span<const Proposal> proposals,
                                       std::size_t k_o);

/// What candidates are ranked by when choosing pseudo labels.
enum class RankingScore {
  kJoint,           // s_obj * (1 - s_fea)
  kObjectnessOnly,  // s_obj
  kFeatureOnly,     // 1 - s_fea
};

/// Scores every candidate against the response map and keeps the best k_u
/// under `ranking` (stable on ties). `source_index` is the candidate's
/// position in `candidates`.
std::vector<PseudoLabel> rank_candidates(std::span<const Proposal> candidates,
                                         const ResponseMap& map, std::size_t k_u,
                                         RankingScore ranking,
                                         WindowOptions window = {});

/// Top-k_u candidates by joint score.
PseudoLabelSet joint_select(std::span<const Proposal> candidates,
                            const ResponseMap& map, std::size_t k_u,
                            WindowOptions window = {});

/// Full per-scene selection: GT filtering, top-k_o, channel reduction and
/// joint selection. `source_index` in the result refers to `proposals`.
PseudoLabelSet select_pseudo_labels(const std::string& scene_id,
                                    std::span<const Proposal> proposals,
                                    std::span<const Box3D> known_gt,
                                    const BevGrid& grid,
                                    const PipelineConfig& cfg);

/// Same, against an already reduced map.
PseudoLabelSet select_pseudo_labels(const std::string& scene_id,
                                    std::span<const Proposal> proposals,
                                    std::span<const Box3D> known_gt,
                                    const ResponseMap& map,
                                    const PipelineConfig& cfg,
                                    RankingScore ranking = RankingScore::kJoint);

struct WeightedLabel {
  Box3D box;  // class_id always set
  double weight = 1.0;
};

/// Known labels (weight 1) followed by pseudo labels tagged with
/// `unknown_class_id` and weighted by their predicted objectness. No
/// deduplication.
std::vector<WeightedLabel> merge_labels(std::span<const Box3D> known_gt,
                                        const PseudoLabelSet& pseudo,
                                        int unknown_class_id);

struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;
};

/// Binary focal loss; p is clamped to [1e-7, 1 - 1e-7].
double focal_loss(double p, int target, FocalParams params = {});

/// Sum over pseudo entries i of s_obj_pred(i) * focal(pred_probs[sigma(i)], 1).
double soft_weighted_unknown_loss(const PseudoLabelSet& pseudo,
                                  std::span<const double> pred_probs,
                                  const MatchResult& assignment,
                                  FocalParams params = {});

/// Class-plus-box assignment of pseudo entries (as class `unknown_index`)
/// to predictions with class probability vectors.
MatchResult pseudo_label_assignment(const PseudoLabelSet& pseudo,
                                    std::span<const Box3D> pred_boxes,
                                    std::span<const std::vector<double>> pred_class_probs,
                                    int unknown_index,
                                    HungarianCostWeights weights = {});

}  // namespace oslk
