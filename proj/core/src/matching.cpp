#include "oslk/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "oslk/error.hpp"

namespace oslk {

namespace {

void check_entry(double v) {
  if (!std::isfinite(v)) throw InvalidInput("CostMatrix: non-finite entry");
  if (v < 0.0) throw InvalidInput("CostMatrix: negative entry");
}

struct Solution {
  std::vector<std::size_t> col_of_row;  // indices into the `cols` view
  std::vector<double> u;                // row potentials
  std::vector<double> v;                // column potentials
};

// Rectangular Kuhn-Munkres with potentials over a sub-view of the matrix,
// rows.size() <= cols.size(). O(n^2 m).
Solution kuhn_munkres(const CostMatrix& c, std::span<const std::size_t> rows,
                      std::span<const std::size_t> cols) {
  const std::size_t n = rows.size();
  const std::size_t m = cols.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<double> minv(m + 1);
  std::vector<char> used(m + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = c(rows[i0 - 1], cols[j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Solution s;
  s.col_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) s.col_of_row[p[j] - 1] = j - 1;
  }
  s.u.assign(u.begin() + 1, u.end());
  s.v.assign(v.begin() + 1, v.end());
  return s;
}

double row_order_sum(const CostMatrix& c, std::span<const std::size_t> assignment) {
  double total = 0.0;
  for (std::size_t j = 0; j < assignment.size(); ++j) total += c(j, assignment[j]);
  return total;
}

}  // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols,
                       std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) throw InvalidInput("CostMatrix: empty shape");
  if (data_.size() != rows_ * cols_) {
    throw InvalidInput("CostMatrix: expected " + std::to_string(rows_ * cols_) +
                       " entries, got " + std::to_string(data_.size()));
  }
  for (double v : data_) check_entry(v);
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double fill)
    : CostMatrix(rows, cols, std::vector<double>(rows * cols, fill)) {}

void CostMatrix::set(std::size_t r, std::size_t c, double value) {
  if (r >= rows_ || c >= cols_) throw InvalidInput("CostMatrix: index out of range");
  check_entry(value);
  data_[r * cols_ + c] = value;
}

MatchResult solve_assignment(const CostMatrix& costs) {
  const std::size_t n_rows = costs.rows();
  const std::size_t n_cols = costs.cols();
  if (n_rows > n_cols) {
    throw Infeasible("solve_assignment: " + std::to_string(n_rows) +
                     " rows cannot be matched into " + std::to_string(n_cols) +
                     " columns");
  }

  std::vector<std::size_t> all_rows(n_rows), all_cols(n_cols);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::iota(all_cols.begin(), all_cols.end(), 0);
  const Solution first = kuhn_munkres(costs, all_rows, all_cols);

  std::vector<std::size_t> current = first.col_of_row;
  const double optimum = row_order_sum(costs, current);
  const double tol = kTieTolerance * std::max(1.0, std::fabs(optimum));

  double max_entry = 0.0;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (double v : costs.row(r)) max_entry = std::max(max_entry, v);
  }
  // Every optimal assignment uses only edges that are tight under an optimal
  // dual, so only tight edges can produce a lexicographically smaller optimum.
  const double slack_tol = 1e-7 * std::max(1.0, max_entry);

  // Lexicographic refinement: fix rows in order, trying smaller columns that
  // still admit an optimal completion.
  std::vector<char> col_used(n_cols, 0);
  double prefix = 0.0;
  for (std::size_t j = 0; j < n_rows; ++j) {
    for (std::size_t p = 0; p < current[j]; ++p) {
      if (col_used[p]) continue;
      const double reduced = costs(j, p) - first.u[j] - first.v[p];
      if (reduced > slack_tol) continue;

      std::vector<std::size_t> rest_rows, rest_cols;
      for (std::size_t k = j + 1; k < n_rows; ++k) rest_rows.push_back(k);
      for (std::size_t q = 0; q < n_cols; ++q) {
        if (!col_used[q] && q != p) rest_cols.push_back(q);
      }
      std::vector<std::size_t> candidate(current.begin(), current.begin() + j);
      candidate.push_back(p);
      if (!rest_rows.empty()) {
        const Solution rest = kuhn_munkres(costs, rest_rows, rest_cols);
        for (std::size_t k = 0; k < rest_rows.size(); ++k) {
          candidate.push_back(rest_cols[rest.col_of_row[k]]);
        }
      }
      if (row_order_sum(costs, candidate) <= optimum + tol) {
        current = std::move(candidate);
        break;
      }
    }
    col_used[current[j]] = 1;
    prefix += costs(j, current[j]);
  }

  MatchResult result;
  result.assignment = std::move(current);
  result.per_pair_cost.reserve(n_rows);
  for (std::size_t j = 0; j < n_rows; ++j) {
    result.per_pair_cost.push_back(costs(j, result.assignment[j]));
  }
  result.total_cost = prefix;
  return result;
}

double geo_cost(const Box3D& gt, const Box3D& pred, GeoCostOptions opts) {
  const double yaw = opts.raw_yaw_l1 ? std::fabs(gt.r - pred.r)
                                     : angular_distance(gt.r, pred.r);
  return std::fabs(gt.x - pred.x) + std::fabs(gt.y - pred.y) +
         std::fabs(gt.z - pred.z) + std::fabs(gt.w - pred.w) +
         std::fabs(gt.l - pred.l) + std::fabs(gt.h - pred.h) + yaw;
}

double hungarian_cost(const Box3D& gt, const Box3D& pred,
                      std::span<const double> class_probs,
                      HungarianCostWeights weights, GeoCostOptions opts) {
  if (!gt.class_id) throw InvalidInput("hungarian_cost: ground truth has no class");
  const int cls = *gt.class_id;
  if (cls < 0 || static_cast<std::size_t>(cls) >= class_probs.size()) {
    throw InvalidInput("hungarian_cost: class index " + std::to_string(cls) +
                       " out of range for " + std::to_string(class_probs.size()) +
                       " probabilities");
  }
  const double sum = std::accumulate(class_probs.begin(), class_probs.end(), 0.0);
  if (std::fabs(sum - 1.0) > 1e-6) {
    throw InvalidInput("hungarian_cost: class probabilities sum to " +
                       std::to_string(sum));
  }
  const double p = class_probs[static_cast<std::size_t>(cls)];
  // Clamp keeps the cost non-negative when p exceeds 1 by rounding.
  return weights.cls * std::max(0.0, 1.0 - p) +
         weights.box * geo_cost(gt, pred, opts);
}

MatchResult geo_hungarian_match(std::span<const Box3D> gt,
                                std::span<const Box3D> preds,
                                GeoCostOptions opts) {
  if (gt.empty()) return {};
  if (preds.size() < gt.size()) {
    throw Infeasible("geo_hungarian_match: fewer predictions than ground truth");
  }
  CostMatrix costs(gt.size(), preds.size());
  for (std::size_t j = 0; j < gt.size(); ++j) {
    for (std::size_t i = 0; i < preds.size(); ++i) {
      costs.set(j, i, geo_cost(gt[j], preds[i], opts));
    }
  }
  return solve_assignment(costs);
}

MatchResult hungarian_match(std::span<const Box3D> gt,
                            std::span<const Box3D> preds,
                            std::span<const std::vector<double>> pred_class_probs,
                            HungarianCostWeights weights, GeoCostOptions opts) {
  if (pred_class_probs.size() != preds.size()) {
    throw InvalidInput("hungarian_match: one probability vector per prediction required");
  }
  if (gt.empty()) return {};
  if (preds.size() < gt.size()) {
    throw Infeasible("hungarian_match: fewer predictions than ground truth");
  }
  CostMatrix costs(gt.size(), preds.size());
  for (std::size_t j = 0; j < gt.size(); ++j) {
    for (std::size_t i = 0; i < preds.size(); ++i) {
      costs.set(j, i, hungarian_cost(gt[j], preds[i], pred_class_probs[i], weights, opts));
    }
  }
  return solve_assignment(costs);
}

}  // namespace oslk
