#pragma once

#include <cstdint>
#include <random>

#include "oslk/geometry3d.hpp"

namespace testing_support {

inline oslk::Box3D random_box(std::mt19937_64& rng, double spread = 3.0) {
  std::uniform_real_distribution<double> pos(-spread, spread);
  std::uniform_real_distribution<double> dim(0.3, 5.0);
  std::uniform_real_distribution<double> yaw(-10.0, 10.0);
  return oslk::Box3D::make(pos(rng), pos(rng), 0.5 * pos(rng), dim(rng), dim(rng), dim(rng),
                           yaw(rng));
}

// A box near `anchor` so that random pairs overlap often.
inline oslk::Box3D nearby_box(std::mt19937_64& rng, const oslk::Box3D& anchor) {
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.6, 1.5);
  std::uniform_real_distribution<double> yaw(-3.2, 3.2);
  return oslk::Box3D::make(anchor.x + jitter(rng), anchor.y + jitter(rng),
                           anchor.z + 0.5 * jitter(rng), anchor.w * scale(rng),
                           anchor.l * scale(rng), anchor.h * scale(rng), yaw(rng));
}

}  // namespace testing_support
