#pragma once

// Hand-style PR trace: walk detections in descending confidence, record
// (recall, precision), then average the precision envelope at N recall
// positions.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

// outcomes: (confidence, is_tp), any order. R40 uses positions 1/40..1,
// R11 uses 0, 0.1, .., 1.
inline double traced_ap(std::vector<std::pair<double, bool>> outcomes, std::size_t num_gt,
                        bool r11 = false) {
  std::stable_sort(outcomes.begin(), outcomes.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second && !b.second;
  });
  std::vector<std::pair<double, double>> rp;
  double tp = 0, fp = 0;
  for (const auto& [conf, hit] : outcomes) {
    (hit ? tp : fp) += 1;
    rp.emplace_back(tp / num_gt, tp / (tp + fp));
  }
  const int n = r11 ? 11 : 40;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double pos = r11 ? k / 10.0 : (k + 1) / 40.0;
    double best = 0.0;
    for (const auto& [rec, prec] : rp) {
      if (rec >= pos - 1e-12) best = std::max(best, prec);
    }
    sum += best;
  }
  return sum / n;
}

}  // namespace oracle
