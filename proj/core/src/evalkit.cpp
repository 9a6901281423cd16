#include "oslk/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "oslk/error.hpp"

namespace oslk {

namespace {

// Greedy matching shared by both protocols. `quality` returns a
// larger-is-better score for an admissible (det, gt) pair, or nullopt.
template <typename Quality>
GreedyMatch greedy_match(std::span<const Detection> dets, std::span<const Box3D> gts,
                         Quality&& quality) {
  for (const Box3D& g : gts) {
    if (!g.class_id) throw InvalidInput("evaluation ground truth must carry a class id");
  }
  GreedyMatch m;
  m.gt_of_det.assign(dets.size(), std::nullopt);
  m.gt_matched.assign(gts.size(), false);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });

  for (std::size_t d : order) {
    std::optional<std::size_t> best;
    double best_q = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (m.gt_matched[g] || *gts[g].class_id != dets[d].class_id) continue;
      const std::optional<double> q = quality(dets[d].box, gts[g]);
      if (q && (!best || *q > best_q)) {
        best = g;
        best_q = *q;
      }
    }
    if (best) {
      m.gt_of_det[d] = best;
      m.gt_matched[*best] = true;
    }
  }
  return m;
}

double planar_distance(const Box3D& a, const Box3D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::set<int> classes_of(std::span<const EvalFrame> frames) {
  std::set<int> out;
  for (const EvalFrame& f : frames) {
    for (const Detection& d : f.detections) out.insert(d.class_id);
    for (const Box3D& g : f.gts) {
      if (!g.class_id) throw InvalidInput("evaluation ground truth must carry a class id");
      out.insert(*g.class_id);
    }
  }
  return out;
}

struct ClassSlice {
  std::vector<Detection> dets;
  std::vector<Box3D> gts;
};

ClassSlice slice(const EvalFrame& f, int cls) {
  ClassSlice s;
  for (const Detection& d : f.detections) {
    if (d.class_id == cls) s.dets.push_back(d);
  }
  for (const Box3D& g : f.gts) {
    if (g.class_id == cls) s.gts.push_back(g);
  }
  return s;
}

template <typename Matcher>
PrAccumulator accumulate(std::span<const EvalFrame> frames, int cls, Matcher&& matcher) {
  PrAccumulator acc;
  for (const EvalFrame& f : frames) {
    const ClassSlice s = slice(f, cls);
    acc.add(s.dets, matcher(s.dets, s.gts));
    acc.add_ground_truth(s.gts.size());
  }
  return acc;
}

std::optional<double> mean_known(const std::map<int, std::optional<double>>& per_class) {
  std::vector<std::optional<double>> known;
  for (const auto& [cls, ap] : per_class) {
    if (cls != kUnknownClassId) known.push_back(ap);
  }
  return mean_present(known);
}

}  // namespace

std::size_t GreedyMatch::true_positives() const {
  return static_cast<std::size_t>(
      std::count_if(gt_of_det.begin(), gt_of_det.end(),
                    [](const auto& g) { return g.has_value(); }));
}

std::vector<std::pair<std::size_t, std::size_t>> GreedyMatch::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t d = 0; d < gt_of_det.size(); ++d) {
    if (gt_of_det[d]) out.emplace_back(d, *gt_of_det[d]);
  }
  return out;
}

std::vector<std::size_t> GreedyMatch::unmatched_dets() const {
  std::vector<std::size_t> out;
  for (std::size_t d = 0; d < gt_of_det.size(); ++d) {
    if (!gt_of_det[d]) out.push_back(d);
  }
  return out;
}

std::vector<std::size_t> GreedyMatch::unmatched_gts() const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < gt_matched.size(); ++g) {
    if (!gt_matched[g]) out.push_back(g);
  }
  return out;
}

GreedyMatch match_by_center_distance(std::span<const Detection> dets,
                                     std::span<const Box3D> gts, double d_thresh) {
  if (!(d_thresh > 0.0)) throw InvalidInput("match_by_center_distance: threshold must be > 0");
  return greedy_match(dets, gts, [&](const Box3D& d, const Box3D& g) -> std::optional<double> {
    const double dist = planar_distance(d, g);
    if (dist > d_thresh) return std::nullopt;
    return -dist;
  });
}

GreedyMatch match_by_iou(std::span<const Detection> dets, std::span<const Box3D> gts,
                         double iou_thresh) {
  if (!(iou_thresh > 0.0 && iou_thresh <= 1.0)) {
    throw InvalidInput("match_by_iou: threshold must lie in (0, 1]");
  }
  return greedy_match(dets, gts, [&](const Box3D& d, const Box3D& g) -> std::optional<double> {
    const double iou = iou3d(d, g);
    if (iou < iou_thresh) return std::nullopt;
    return iou;
  });
}

void PrAccumulator::add(std::span<const Detection> dets, const GreedyMatch& match) {
  if (match.gt_of_det.size() != dets.size()) {
    throw InvalidInput("PrAccumulator::add: match does not belong to these detections");
  }
  for (std::size_t d = 0; d < dets.size(); ++d) {
    scored_.emplace_back(dets[d].confidence, match.gt_of_det[d].has_value());
  }
}

void PrAccumulator::add_outcome(double confidence, bool true_positive) {
  scored_.emplace_back(confidence, true_positive);
}

void PrAccumulator::merge(const PrAccumulator& other) {
  scored_.insert(scored_.end(), other.scored_.begin(), other.scored_.end());
  num_gt_ += other.num_gt_;
}

std::vector<PrPoint> PrAccumulator::curve() const {
  auto sorted = scored_;
  // Order-independence under merging: ties are broken TP-first so the
  // curve does not depend on which frame was merged first.
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second && !b.second;
  });
  std::vector<PrPoint> out;
  out.reserve(sorted.size());
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const auto& [conf, is_tp] : sorted) {
    (is_tp ? tp : fp) += 1;
    const double recall =
        num_gt_ == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(num_gt_);
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    out.push_back({conf, recall, precision});
  }
  return out;
}

std::optional<double> average_precision(const PrAccumulator& acc, Interpolation interp) {
  if (acc.num_gt() == 0) return std::nullopt;
  const std::vector<PrPoint> pts = acc.curve();
  // Interpolated precision: best precision at any recall >= r.
  std::vector<double> best_from(pts.size() + 1, 0.0);
  for (std::size_t k = pts.size(); k-- > 0;) {
    best_from[k] = std::max(best_from[k + 1], pts[k].precision);
  }
  const auto interpolated = [&](double r) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (pts[k].recall >= r - 1e-12) return best_from[k];
    }
    return 0.0;
  };
  double sum = 0.0;
  if (interp == Interpolation::kR40) {
    for (int i = 1; i <= 40; ++i) sum += interpolated(i / 40.0);
    return sum / 40.0;
  }
  for (int i = 0; i <= 10; ++i) sum += interpolated(i / 10.0);
  return sum / 11.0;
}

std::optional<double> recall_at(const PrAccumulator& acc, double min_confidence) {
  if (acc.num_gt() == 0) return std::nullopt;
  std::size_t tp = 0;
  for (const PrPoint& p : acc.curve()) {
    if (p.confidence < min_confidence) break;
    tp = static_cast<std::size_t>(std::llround(p.recall * static_cast<double>(acc.num_gt())));
  }
  return static_cast<double>(tp) / static_cast<double>(acc.num_gt());
}

std::optional<double> mean_present(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

EvalReport evaluate_distance(std::span<const EvalFrame> frames,
                             const DistanceProtocol& protocol) {
  if (protocol.thresholds.empty()) throw InvalidInput("distance protocol needs thresholds");
  EvalReport report;
  report.protocol = "distance";
  report.thresholds_used = protocol.thresholds;
  std::vector<std::optional<double>> unknown_recalls;
  for (int cls : classes_of(frames)) {
    std::vector<std::optional<double>> aps;
    for (double t : protocol.thresholds) {
      const PrAccumulator acc = accumulate(frames, cls, [&](const auto& d, const auto& g) {
        return match_by_center_distance(d, g, t);
      });
      aps.push_back(average_precision(acc, protocol.interpolation));
      report.curves.push_back({cls, t, acc.curve()});
      if (cls == kUnknownClassId) {
        unknown_recalls.push_back(recall_at(acc, protocol.min_confidence));
      }
    }
    report.per_class_ap[cls] = mean_present(aps);
  }
  report.map_known = mean_known(report.per_class_ap);
  if (auto it = report.per_class_ap.find(kUnknownClassId); it != report.per_class_ap.end()) {
    report.ap_unknown = it->second;
    report.ar_unknown = mean_present(unknown_recalls);
  }
  return report;
}

EvalReport evaluate_iou(std::span<const EvalFrame> frames, const IouProtocol& protocol) {
  EvalReport report;
  report.protocol = "iou";
  for (int cls : classes_of(frames)) {
    double t = protocol.default_threshold;
    if (cls == kUnknownClassId) {
      t = protocol.unknown_threshold;
    } else if (auto it = protocol.class_thresholds.find(cls);
               it != protocol.class_thresholds.end()) {
      t = it->second;
    }
    report.thresholds_used.push_back(t);
    const PrAccumulator acc = accumulate(frames, cls, [&](const auto& d, const auto& g) {
      return match_by_iou(d, g, t);
    });
    report.per_class_ap[cls] = average_precision(acc, protocol.interpolation);
    report.curves.push_back({cls, t, acc.curve()});
    if (cls == kUnknownClassId) {
      report.ap_unknown = report.per_class_ap[cls];
      report.ar_unknown = recall_at(acc, protocol.min_confidence);
    }
  }
  report.map_known = mean_known(report.per_class_ap);
  return report;
}

std::vector<KoRow> ko_proportion_analysis(std::span<const Scene> scenes,
                                          std::span<const std::size_t> k_values,
                                          double gt_filter_iou, OverlapMetric overlap,
                                          double match_distance) {
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] == 0) throw InvalidInput("ko_proportion_analysis: k_o must be >= 1");
    if (i > 0 && k_values[i] <= k_values[i - 1]) {
      throw InvalidInput("ko_proportion_analysis: k_o values must ascend");
    }
  }
  std::vector<KoRow> rows;
  for (std::size_t k : k_values) rows.push_back({k, 0, 0, 0.0});

  for (const Scene& scene : scenes) {
    const std::vector<Proposal> survivors =
        gt_filter(scene.proposals, scene.known_gt, gt_filter_iou, overlap);
    const auto near_unknown = [&](const Box3D& b) {
      return std::any_of(scene.unknown_gt.begin(), scene.unknown_gt.end(),
                         [&](const Box3D& u) { return planar_distance(b, u) <= match_distance; });
    };
    for (KoRow& row : rows) {
      for (std::size_t i : top_k_indices(survivors, row.k_o)) {
        ++row.total;
        if (near_unknown(survivors[i].box)) ++row.matched;
      }
    }
  }
  for (KoRow& row : rows) {
    row.percent = row.total == 0 ? 0.0
                                 : 100.0 * static_cast<double>(row.matched) /
                                       static_cast<double>(row.total);
  }
  return rows;
}

double SelectionPrecision::precision() const {
  return selected == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(selected);
}

double SelectionPrecision::recall() const {
  return unknown_total == 0 ? 0.0
                            : static_cast<double>(matched) / static_cast<double>(unknown_total);
}

SelectionPrecision pseudo_label_precision(std::span<const Scene> scenes,
                                          std::span<const PseudoLabelSet> sets,
                                          double match_distance) {
  if (scenes.size() != sets.size()) {
    throw InvalidInput("pseudo_label_precision: one label set per scene required");
  }
  SelectionPrecision out;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    const auto& entries = sets[s].entries;
    std::vector<Detection> dets;
    dets.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      // Confidence encodes rank so greedy matching follows list order.
      const double conf = static_cast<double>(entries.size() - i) /
                          static_cast<double>(entries.size());
      dets.push_back({entries[i].box, kUnknownClassId, conf});
    }
    const GreedyMatch m =
        match_by_center_distance(dets, scenes[s].unknown_gt, match_distance);
    out.selected += entries.size();
    out.matched += m.true_positives();
    out.unknown_total += scenes[s].unknown_gt.size();
  }
  return out;
}

}  // namespace oslk
