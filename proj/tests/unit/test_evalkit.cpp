#include <random>

#include <gtest/gtest.h>

#include "oracles/pr_oracle.hpp"
#include "oslk/error.hpp"
#include "oslk/evalkit.hpp"

using namespace oslk;

namespace {

Box3D gt_at(double x, double y, int cls) { return Box3D::make(x, y, 0, 1, 1, 1, 0, cls); }

Detection det_at(double x, double y, int cls, double conf) {
  return {Box3D::make(x, y, 0, 1, 1, 1, 0), cls, conf};
}

}  // namespace

TEST(CenterMatch, Examples) {
  const std::vector<Box3D> gts{gt_at(0, 0, kUnknownClassId)};
  const std::vector<Detection> on{det_at(0, 0, kUnknownClassId, 0.5)};
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    EXPECT_EQ(match_by_center_distance(on, gts, t).true_positives(), 1u);
  }

  const std::vector<Detection> far{det_at(3, 0, kUnknownClassId, 0.9)};
  const auto m = match_by_center_distance(far, gts, 2.0);
  EXPECT_EQ(m.unmatched_dets(), (std::vector<std::size_t>{0}));
  EXPECT_EQ(m.unmatched_gts(), (std::vector<std::size_t>{0}));

  const std::vector<Detection> two{det_at(0.1, 0, kUnknownClassId, 0.4),
                                   det_at(0.3, 0, kUnknownClassId, 0.8)};
  const auto g = match_by_center_distance(two, gts, 2.0);
  EXPECT_FALSE(g.gt_of_det[0].has_value());
  EXPECT_EQ(g.gt_of_det[1], 0u);
}

TEST(CenterMatch, ClassAwareAndNearest) {
  const std::vector<Box3D> gts{gt_at(0, 0, 0), gt_at(1, 0, 1), gt_at(1.5, 0, 0)};
  const std::vector<Detection> dets{det_at(1.2, 0, 0, 0.9)};
  const auto m = match_by_center_distance(dets, gts, 2.0);
  EXPECT_EQ(m.gt_of_det[0], 2u);
  EXPECT_THROW(match_by_center_distance(dets, gts, 0.0), InvalidInput);
}

TEST(CenterMatch, Injective) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5), c(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Box3D> gts;
    std::vector<Detection> dets;
    for (int k = 0; k < 6; ++k) gts.push_back(gt_at(u(rng), u(rng), k % 2));
    for (int k = 0; k < 10; ++k) dets.push_back(det_at(u(rng), u(rng), k % 2, c(rng)));
    const auto m = match_by_center_distance(dets, gts, 2.0);
    std::vector<int> hits(gts.size(), 0);
    for (const auto& g : m.gt_of_det) {
      if (g) ++hits[*g];
    }
    for (std::size_t k = 0; k < gts.size(); ++k) {
      EXPECT_LE(hits[k], 1);
      EXPECT_EQ(hits[k] == 1, static_cast<bool>(m.gt_matched[k]));
    }
  }
}

TEST(IouMatch, Examples) {
  const std::vector<Box3D> gts{gt_at(0, 0, 0)};
  EXPECT_EQ(match_by_iou(std::vector<Detection>{det_at(0, 0, 0, 1)}, gts, 0.7).true_positives(), 1u);
  const std::vector<Detection> third{det_at(0.5, 0, 0, 1)};  // IoU 1/3
  EXPECT_EQ(match_by_iou(third, gts, 0.5).true_positives(), 0u);
  EXPECT_EQ(match_by_iou(third, gts, 0.1).true_positives(), 1u);
  EXPECT_THROW(match_by_iou(third, gts, 0.0), InvalidInput);
}

TEST(AveragePrecision, HandCases) {
  PrAccumulator acc;
  acc.add_ground_truth(1);
  acc.add_outcome(0.9, false);
  acc.add_outcome(0.8, true);
  const auto curve = acc.curve();
  ASSERT_EQ(curve.size(), 2u);
  EXPECT_EQ(curve[0].recall, 0.0);
  EXPECT_EQ(curve[0].precision, 0.0);
  EXPECT_EQ(curve[1].recall, 1.0);
  EXPECT_EQ(curve[1].precision, 0.5);
  EXPECT_DOUBLE_EQ(*average_precision(acc), 0.5);
  EXPECT_DOUBLE_EQ(*average_precision(acc), oracle::traced_ap({{0.9, false}, {0.8, true}}, 1));

  PrAccumulator perfect;
  perfect.add_ground_truth(3);
  for (double c : {0.9, 0.8, 0.7}) perfect.add_outcome(c, true);
  EXPECT_DOUBLE_EQ(*average_precision(perfect), 1.0);
  EXPECT_DOUBLE_EQ(*average_precision(perfect, Interpolation::kR11), 1.0);

  PrAccumulator none;
  none.add_ground_truth(2);
  EXPECT_EQ(*average_precision(none), 0.0);
  EXPECT_EQ(*recall_at(none), 0.0);

  PrAccumulator empty;
  EXPECT_FALSE(average_precision(empty).has_value());
  EXPECT_FALSE(recall_at(empty).has_value());
}

TEST(AveragePrecision, R40SkipsRecallZero) {
  // 2 GT, first hit at rank 1, second never: envelope 1 up to recall 0.5.
  PrAccumulator acc;
  acc.add_ground_truth(2);
  acc.add_outcome(0.9, true);
  acc.add_outcome(0.5, false);
  EXPECT_DOUBLE_EQ(*average_precision(acc), 0.5);
  EXPECT_NEAR(*average_precision(acc, Interpolation::kR11), 6.0 / 11.0, 1e-15);
}

TEST(AveragePrecision, MatchesTracedOracle) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> conf(0, 1);
  std::bernoulli_distribution hit(0.4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 25;
    std::vector<std::pair<double, bool>> outcomes;
    PrAccumulator acc;
    std::size_t tps = 0;
    for (std::size_t k = 0; k < n; ++k) {
      // Coarse confidences so ties occur.
      const double c = std::round(conf(rng) * 8) / 8;
      const bool h = hit(rng);
      tps += h;
      outcomes.emplace_back(c, h);
      acc.add_outcome(c, h);
    }
    const std::size_t num_gt = tps + trial % 3;
    if (num_gt == 0) continue;
    acc.add_ground_truth(num_gt);
    EXPECT_NEAR(*average_precision(acc), oracle::traced_ap(outcomes, num_gt), 1e-12);
    EXPECT_NEAR(*average_precision(acc, Interpolation::kR11),
                oracle::traced_ap(outcomes, num_gt, true), 1e-12);
  }
}

TEST(AveragePrecision, LowConfidenceFalsePositiveNeverHelps) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> conf(0.2, 1);
  std::bernoulli_distribution hit(0.5);
  for (int trial = 0; trial < 200; ++trial) {
    PrAccumulator acc;
    acc.add_ground_truth(5);
    for (int k = 0; k < 6; ++k) acc.add_outcome(conf(rng), hit(rng));
    const double before = *average_precision(acc);
    acc.add_outcome(0.1, false);
    EXPECT_LE(*average_precision(acc), before);
  }
}

TEST(AveragePrecision, MergeIsOrderIndependent) {
  PrAccumulator a, b;
  a.add_ground_truth(2);
  b.add_ground_truth(1);
  a.add_outcome(0.7, false);
  b.add_outcome(0.7, true);
  a.add_outcome(0.5, true);
  PrAccumulator ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  EXPECT_EQ(*average_precision(ab), *average_precision(ba));
}

TEST(Recall, Examples) {
  PrAccumulator half;
  half.add_ground_truth(4);
  half.add_outcome(0.9, true);
  half.add_outcome(0.3, true);
  EXPECT_EQ(*recall_at(half), 0.5);
  EXPECT_EQ(*recall_at(half, 0.5), 0.25);

  const std::vector<std::optional<double>> rs{0.2, 0.4, 0.6, 0.8};
  EXPECT_DOUBLE_EQ(*mean_present(rs), 0.5);
  const std::vector<std::optional<double>> gaps{std::nullopt, 1.0, std::nullopt};
  EXPECT_EQ(*mean_present(gaps), 1.0);
  EXPECT_FALSE(mean_present(std::vector<std::optional<double>>{std::nullopt}).has_value());
}

TEST(EvaluateDistance, PerfectAndEmpty) {
  EvalFrame f;
  f.gts = {gt_at(0, 0, 0), gt_at(5, 0, 1), gt_at(10, 0, kUnknownClassId)};
  for (const auto& g : f.gts) f.detections.push_back({g, *g.class_id, 1.0});
  const std::vector<EvalFrame> frames{f};
  const auto r = evaluate_distance(frames);
  EXPECT_EQ(*r.map_known, 1.0);
  EXPECT_EQ(*r.ap_unknown, 1.0);
  EXPECT_EQ(*r.ar_unknown, 1.0);
  EXPECT_EQ(r.thresholds_used, (std::vector<double>{0.5, 1.0, 2.0, 4.0}));

  EvalFrame empty;
  empty.gts = {gt_at(0, 0, 0), gt_at(3, 0, kUnknownClassId)};
  const std::vector<EvalFrame> none{empty};
  const auto z = evaluate_distance(none);
  EXPECT_EQ(*z.map_known, 0.0);
  EXPECT_EQ(*z.ap_unknown, 0.0);
  EXPECT_EQ(*z.ar_unknown, 0.0);

  // A class with detections but no ground truth is reported absent.
  EvalFrame stray;
  stray.gts = {gt_at(0, 0, 0)};
  stray.detections = {det_at(0, 0, 0, 0.9), det_at(9, 9, 4, 0.9)};
  const std::vector<EvalFrame> s{stray};
  const auto a = evaluate_distance(s);
  EXPECT_FALSE(a.per_class_ap.at(4).has_value());
  EXPECT_EQ(*a.map_known, 1.0);
  EXPECT_FALSE(a.ap_unknown.has_value());
}

TEST(EvaluateDistance, ArIsMeanOfPerThresholdRecalls) {
  // Offsets 0.3, 0.8, 1.5, 3 m from four unknown GTs.
  EvalFrame f;
  const double offs[] = {0.3, 0.8, 1.5, 3.0};
  for (int k = 0; k < 4; ++k) {
    f.gts.push_back(gt_at(20.0 * k, 0, kUnknownClassId));
    f.detections.push_back(det_at(20.0 * k + offs[k], 0, kUnknownClassId, 0.5));
  }
  const std::vector<EvalFrame> frames{f};
  const auto r = evaluate_distance(frames);
  EXPECT_DOUBLE_EQ(*r.ar_unknown, (0.25 + 0.5 + 0.75 + 1.0) / 4.0);
}

TEST(EvaluateIou, PerClassThresholds) {
  EvalFrame f;
  f.gts = {gt_at(0, 0, 0), gt_at(10, 0, kUnknownClassId)};
  f.detections = {det_at(0.5, 0, 0, 0.9), det_at(10.5, 0, kUnknownClassId, 0.9)};
  const std::vector<EvalFrame> frames{f};
  const auto r = evaluate_iou(frames);
  EXPECT_EQ(*r.per_class_ap.at(0), 0.0);  // 1/3 < 0.7
  EXPECT_EQ(*r.ap_unknown, 1.0);         // 1/3 >= 0.1
  EXPECT_EQ(*r.ar_unknown, 1.0);
  IouProtocol strict;
  strict.min_confidence = 0.95;
  EXPECT_EQ(*evaluate_iou(frames, strict).ar_unknown, 0.0);
}

TEST(KoProportion, AllMatchAndValidation) {
  Scene s;
  s.scene_id = "a";
  for (int k = 0; k < 6; ++k) {
    const Box3D u = Box3D::make(10.0 * k, 0, 0, 2, 4, 2, 0, kUnknownClassId);
    s.unknown_gt.push_back(u);
    Box3D p = u;
    p.class_id.reset();
    s.proposals.push_back({p, 0.5});
  }
  const std::vector<Scene> scenes{s};
  const std::vector<std::size_t> ks{1, 3, 6};
  for (const auto& row : ko_proportion_analysis(scenes, ks)) EXPECT_EQ(row.percent, 100.0);
  const std::vector<std::size_t> bad{3, 2};
  EXPECT_THROW(ko_proportion_analysis(scenes, bad), InvalidInput);
}
