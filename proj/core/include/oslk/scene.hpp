#pragma once

#include <string>
#include <vector>

#include "oslk/geometry3d.hpp"
#include "oslk/selection.hpp"

namespace oslk {

/// Class id carried by unknown-category boxes ("unknown" in scene files).
inline constexpr int kUnknownClassId = -1;

/// One frame: labeled known objects, held-out unknown objects, proposals and
/// the path of its BEV grid (relative to the scene file's directory).
struct Scene {
  std::string scene_id;
  std::vector<Box3D> known_gt;    // class_id >= 0
  std::vector<Box3D> unknown_gt;  // class_id == kUnknownClassId
  std::vector<Proposal> proposals;
  std::string grid_path;
  /// Set by the simulator when it could not place every requested object.
  bool placement_truncated = false;

  bool operator==(const Scene&) const = default;
};

}  // namespace oslk
