#pragma once

// Direct lattice sum for the rotated BEV window, written against a raw
// row-major array with its own bilinear lookup.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct RawMap {
  std::size_t rows, cols;
  double origin_x, origin_y, res;
  std::vector<double> v;

  double cell(long r, long c) const {
    r = std::clamp<long>(r, 0, static_cast<long>(rows) - 1);
    c = std::clamp<long>(c, 0, static_cast<long>(cols) - 1);
    return v[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c)];
  }

  double bilinear(double wx, double wy) const {
    double fr = (wy - origin_y) / res;
    double fc = (wx - origin_x) / res;
    fr = std::clamp(fr, 0.0, static_cast<double>(rows - 1));
    fc = std::clamp(fc, 0.0, static_cast<double>(cols - 1));
    const long r0 = static_cast<long>(std::floor(fr));
    const long c0 = static_cast<long>(std::floor(fc));
    const double tr = fr - r0, tc = fc - c0;
    return (1 - tr) * ((1 - tc) * cell(r0, c0) + tc * cell(r0, c0 + 1)) +
           tr * ((1 - tc) * cell(r0 + 1, c0) + tc * cell(r0 + 1, c0 + 1));
  }
};

// Centered lattice: int(l) samples along the heading, int(w) across,
// one meter apart.
inline double lattice_sum(const RawMap& m, double x, double y, double w, double l,
                          double r) {
  const int na = std::max(1, static_cast<int>(l));
  const int nb = std::max(1, static_cast<int>(w));
  double acc = 0.0;
  for (int a = 0; a < na; ++a) {
    for (int b = 0; b < nb; ++b) {
      const double along = a - (na - 1) / 2.0;
      const double across = b - (nb - 1) / 2.0;
      const double wx = x + along * std::cos(r) - across * std::sin(r);
      const double wy = y + along * std::sin(r) + across * std::cos(r);
      acc += m.bilinear(wx, wy);
    }
  }
  return acc / (na * nb);
}

}  // namespace oracle
