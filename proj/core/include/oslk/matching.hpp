#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oslk/geometry3d.hpp"

namespace oslk {

/// Dense row-major cost matrix: rows are ground-truth items, columns are
/// predictions. Entries are finite and non-negative.
class CostMatrix {
 public:
  /// Throws InvalidInput on empty shape or a non-finite/negative entry.
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  /// Checked write; throws InvalidInput on a non-finite or negative value.
  void set(std::size_t r, std::size_t c, double value);

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// assignment[j] is the column matched to row j. total_cost is the sum of
/// per_pair_cost accumulated in row order.
struct MatchResult {
  std::vector<std::size_t> assignment;
  std::vector<double> per_pair_cost;
  double total_cost = 0.0;
};

/// Minimum-cost assignment of every row to a distinct column (rows <= cols).
/// Among optimal assignments the lexicographically smallest (by row, then
/// column) is returned; costs within `tie_tolerance` of the optimum count as
/// optimal. Throws Infeasible when rows > cols.
MatchResult solve_assignment(const CostMatrix& costs);

inline constexpr double kTieTolerance = 1e-9;

struct GeoCostOptions {
  /// Use |r_a - r_b| instead of the wrapped angular difference.
  bool raw_yaw_l1 = false;
};

/// L1 over (x, y, z, w, l, h, r); the yaw term is wrapped into [0, pi]
/// unless raw_yaw_l1 is set.
double geo_cost(const Box3D& gt, const Box3D& pred, GeoCostOptions opts = {});

struct HungarianCostWeights {
  double cls = 2.0;
  double box = 0.25;
};

/// Class-plus-box matching cost: w.cls * (1 - p[gt.class]) + w.box * geo_cost.
/// `class_probs` must sum to 1 within 1e-6; the gt box must carry a class id
/// indexing into it.
double hungarian_cost(const Box3D& gt, const Box3D& pred,
                      std::span<const double> class_probs,
                      HungarianCostWeights weights = {},
                      GeoCostOptions opts = {});

/// Geometry-only assignment: class ids on either side are ignored.
MatchResult geo_hungarian_match(std::span<const Box3D> gt,
                                std::span<const Box3D> preds,
                                GeoCostOptions opts = {});

/// Standard matcher used when class probabilities are available.
/// `pred_class_probs[i]` is the probability vector of prediction i.
MatchResult hungarian_match(std::span<const Box3D> gt,
                            std::span<const Box3D> preds,
                            std::span<const std::vector<double>> pred_class_probs,
                            HungarianCostWeights weights = {},
                            GeoCostOptions opts = {});

}  // namespace oslk
