#include "oslk/objectness.hpp"

#include <cmath>
#include <string>

#include "oslk/error.hpp"

namespace oslk {

void ScoringConfig::validate() const {
  if (!(std::isfinite(tau_center) && tau_center > 0.0)) {
    throw InvalidInput("ScoringConfig: tau_center must be > 0");
  }
  if (!(std::isfinite(tau_scale) && tau_scale > 0.0)) {
    throw InvalidInput("ScoringConfig: tau_scale must be > 0");
  }
}

double gaussian_kernel(double d, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidInput("gaussian_kernel: tau must be > 0");
  }
  if (!(d >= 0.0)) throw InvalidInput("gaussian_kernel: distance must be >= 0");
  return std::exp(-(d * d) / (2.0 * tau));
}

double centerness_score(const Box3D& gt, const Box3D& pred,
                        const ScoringConfig& cfg) {
  const double d = (gt.center() - pred.center()).cwiseAbs().sum();
  return gaussian_kernel(d, cfg.tau_center);
}

double scale_score(const Box3D& gt, const Box3D& pred, const ScoringConfig& cfg) {
  const double d = ScaleMatrix(gt).l1_distance(ScaleMatrix(pred));
  return gaussian_kernel(d, cfg.tau_scale);
}

ObjectnessScore objectness_score(const Box3D& gt, const Box3D& pred,
                                 const ScoringConfig& cfg) {
  ObjectnessScore s;
  s.s_center = centerness_score(gt, pred, cfg);
  s.s_scale = scale_score(gt, pred, cfg);
  s.s_obj = std::sqrt(s.s_center * s.s_scale);
  return s;
}

double objectness_loss(std::span<const double> targets,
                       std::span<const double> preds,
                       const MatchResult& assignment, LossReduction reduction) {
  const auto& sigma = assignment.assignment;
  if (sigma.size() > targets.size()) {
    throw InvalidInput("objectness_loss: assignment has more rows than targets");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (sigma[j] >= preds.size()) {
      throw InvalidInput("objectness_loss: prediction index " +
                         std::to_string(sigma[j]) + " out of range");
    }
    total += std::fabs(targets[j] - preds[sigma[j]]);
  }
  if (reduction == LossReduction::kMean && !sigma.empty()) {
    total /= static_cast<double>(sigma.size());
  }
  return total;
}

double oln_style_score(const Box3D& gt, const Box3D& pred, const ScoringConfig& cfg) {
  return std::sqrt(centerness_score(gt, pred, cfg) * iou3d(gt, pred));
}

}  // namespace oslk
