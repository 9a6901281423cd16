#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oslk/geometry3d.hpp"
#include "oslk/scene.hpp"
#include "oslk/selection.hpp"

namespace oslk {

struct Detection {
  Box3D box;
  int class_id = 0;
  double confidence = 0.0;
};

/// Outcome of greedy confidence-ordered matching within one frame.
struct GreedyMatch {
  /// Parallel to the detections: the matched ground-truth index, if any.
  std::vector<std::optional<std::size_t>> gt_of_det;
  std::vector<bool> gt_matched;

  std::size_t true_positives() const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  std::vector<std::size_t> unmatched_dets() const;
  std::vector<std::size_t> unmatched_gts() const;
};

/// Detections are visited by descending confidence (ties by index); each
/// takes the nearest unmatched same-class ground truth whose planar center
/// distance is <= d_thresh. Ground-truth boxes must carry class ids.
GreedyMatch match_by_center_distance(std::span<const Detection> dets,
                                     std::span<const Box3D> gts, double d_thresh);

/// As above, taking the same-class ground truth with the highest iou3d
/// >= iou_thresh.
GreedyMatch match_by_iou(std::span<const Detection> dets,
                         std::span<const Box3D> gts, double iou_thresh);

enum class Interpolation { kR40, kR11 };

struct PrPoint {
  double confidence;
  double recall;
  double precision;
};

/// Confidence-tagged TP/FP flags and a ground-truth count, accumulated over
/// frames for a single class and threshold. Merging is order-independent.
class PrAccumulator {
 public:
  void add(std::span<const Detection> dets, const GreedyMatch& match);
  void add_outcome(double confidence, bool true_positive);
  void add_ground_truth(std::size_t count) { num_gt_ += count; }
  void merge(const PrAccumulator& other);

  std::size_t num_gt() const { return num_gt_; }
  std::size_t num_detections() const { return scored_.size(); }

  /// Points along the curve in descending confidence (stable on ties).
  std::vector<PrPoint> curve() const;

 private:
  std::vector<std::pair<double, bool>> scored_;
  std::size_t num_gt_ = 0;
};

/// Area under the interpolated precision-recall curve; nullopt without
/// ground truth.
std::optional<double> average_precision(const PrAccumulator& acc,
                                        Interpolation interp = Interpolation::kR40);

/// TP / (TP + FN) counting detections with confidence >= min_confidence;
/// nullopt without ground truth.
std::optional<double> recall_at(const PrAccumulator& acc, double min_confidence = 0.0);

/// Mean of the present values; nullopt if none are present.
std::optional<double> mean_present(std::span<const std::optional<double>> values);

struct EvalFrame {
  std::vector<Detection> detections;
  std::vector<Box3D> gts;  // class ids set; unknowns use kUnknownClassId
};

struct DistanceProtocol {
  std::vector<double> thresholds{0.5, 1.0, 2.0, 4.0};
  Interpolation interpolation = Interpolation::kR40;
  double min_confidence = 0.0;
};

struct IouProtocol {
  std::map<int, double> class_thresholds{{0, 0.7}, {1, 0.5}};
  double default_threshold = 0.5;
  double unknown_threshold = 0.1;
  Interpolation interpolation = Interpolation::kR40;
  double min_confidence = 0.0;
};

struct ClassCurves {
  int class_id;
  double threshold;
  std::vector<PrPoint> points;
};

struct EvalReport {
  std::string protocol;
  std::optional<double> map_known;
  std::optional<double> ap_unknown;
  /// Distance protocol: recall averaged over thresholds. IoU protocol:
  /// recall at the unknown IoU threshold.
  std::optional<double> ar_unknown;
  std::map<int, std::optional<double>> per_class_ap;
  std::vector<double> thresholds_used;
  std::vector<ClassCurves> curves;
};

EvalReport evaluate_distance(std::span<const EvalFrame> frames,
                             const DistanceProtocol& protocol = {});
EvalReport evaluate_iou(std::span<const EvalFrame> frames,
                        const IouProtocol& protocol = {});

struct KoRow {
  std::size_t k_o;
  std::size_t matched;
  std::size_t total;
  double percent;
};

/// For each k_o: the share of GT-filtered top-k_o candidates lying within
/// `match_distance` (planar) of some unknown ground truth, pooled over scenes.
std::vector<KoRow> ko_proportion_analysis(std::span<const Scene> scenes,
                                          std::span<const std::size_t> k_values,
                                          double gt_filter_iou = 0.1,
                                          OverlapMetric overlap = OverlapMetric::kBevIou,
                                          double match_distance = 2.0);

struct SelectionPrecision {
  std::size_t selected = 0;
  std::size_t matched = 0;
  std::size_t unknown_total = 0;

  double precision() const;
  double recall() const;
};

/// Pooled precision of pseudo labels against unknown ground truth using
/// injective center-distance matching. `sets[i]` belongs to `scenes[i]`.
SelectionPrecision pseudo_label_precision(std::span<const Scene> scenes,
                                          std::span<const PseudoLabelSet> sets,
                                          double match_distance = 2.0);

}  // namespace oslk
