#pragma once

#include <span>

#include "oslk/geometry3d.hpp"
#include "oslk/matching.hpp"

namespace oslk {

/// Gaussian-kernel widths for the centerness and scale terms.
struct ScoringConfig {
  double tau_center = 0.5;
  double tau_scale = 0.05;

  /// Throws InvalidInput unless both widths are strictly positive and finite.
  void validate() const;
};

struct ObjectnessScore {
  double s_center = 0.0;
  double s_scale = 0.0;
  double s_obj = 0.0;
};

/// exp(-d^2 / (2 tau)).
double gaussian_kernel(double d, double tau);

/// Kernel over the L1 distance between box centers.
double centerness_score(const Box3D& gt, const Box3D& pred,
                        const ScoringConfig& cfg = {});

/// Kernel over the entrywise L1 distance between the two scale matrices.
/// Square footprints rotated by a quarter turn score near zero even though
/// they describe the same region; that is the literal definition.
double scale_score(const Box3D& gt, const Box3D& pred,
                   const ScoringConfig& cfg = {});

/// Centerness, scale and their geometric mean.
ObjectnessScore objectness_score(const Box3D& gt, const Box3D& pred,
                                 const ScoringConfig& cfg = {});

enum class LossReduction { kSum, kMean };

/// L1 between targets[j] and preds[assignment[j]] over matched pairs.
double objectness_loss(std::span<const double> targets,
                       std::span<const double> preds,
                       const MatchResult& assignment,
                       LossReduction reduction = LossReduction::kSum);

/// Baseline: geometric mean of centerness and 3D IoU.
double oln_style_score(const Box3D& gt, const Box3D& pred,
                       const ScoringConfig& cfg = {});

}  // namespace oslk
