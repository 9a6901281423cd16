#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "oslk/geometry3d.hpp"

namespace oslk {

/// Maps cell indices to world meters. Cell (row, col) is centered at
/// (origin_x + col * resolution, origin_y + row * resolution).
struct GridCalibration {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double resolution = 1.0;

  bool operator==(const GridCalibration&) const = default;
};

/// C x H x W feature grid stored channel-major, row-major, as float32.
class BevGrid {
 public:
  /// Throws InvalidInput on a zero dimension, non-positive resolution,
  /// size mismatch or non-finite value.
  BevGrid(std::size_t channels, std::size_t height, std::size_t width,
          GridCalibration calib, std::vector<float> data);

  std::size_t channels() const { return channels_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  const GridCalibration& calibration() const { return calib_; }
  std::span<const float> data() const { return data_; }

  float at(std::size_t c, std::size_t row, std::size_t col) const {
    return data_[(c * height_ + row) * width_ + col];
  }

  bool operator==(const BevGrid&) const = default;

 private:
  std::size_t channels_;
  std::size_t height_;
  std::size_t width_;
  GridCalibration calib_;
  std::vector<float> data_;
};

/// Single-channel H x W map with values in [0, 1].
class ResponseMap {
 public:
  /// Throws InvalidInput if a value falls outside [0, 1] or sizes disagree.
  ResponseMap(std::size_t height, std::size_t width, GridCalibration calib,
              std::vector<double> data);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  const GridCalibration& calibration() const { return calib_; }
  std::span<const double> data() const { return data_; }

  double at(std::size_t row, std::size_t col) const {
    return data_[row * width_ + col];
  }

  /// Bilinear sample at fractional cell coordinates, clamped to the border.
  double sample_cell(double row, double col) const;

  /// Bilinear sample at a world position.
  double sample_world(double wx, double wy) const;

 private:
  std::size_t height_;
  std::size_t width_;
  GridCalibration calib_;
  std::vector<double> data_;
};

enum class Reduction { kMean, kPca };

/// Per-cell channel mean, min-max normalized. Constant maps become zeros.
ResponseMap reduce_mean(const BevGrid& grid);

/// Projection of each cell onto the first principal component of the
/// channel covariance, min-max normalized. The component is oriented to
/// correlate positively with the channel mean; if it is orthogonal to it,
/// the cell with the largest channel-mean magnitude projects non-negative.
/// Requires at least two cells.
ResponseMap reduce_pca(const BevGrid& grid);

ResponseMap reduce(const BevGrid& grid, Reduction method);

struct WindowOptions {
  /// Reproduce the printed second coordinate y + i cos r + j sin r, with i
  /// spanning int(w) and j spanning int(l).
  bool literal_eq6 = false;
  /// Offsets run 1..n instead of being centered on the box.
  bool corner_anchor = false;
};

/// Mean bilinear response over a rotated int(l) x int(w) lattice of
/// one-meter spaced offsets around the box center (at least 1 x 1).
double window_response(const ResponseMap& map, const Box3D& box,
                       WindowOptions opts = {});

/// s_obj * (1 - s_fea). Throws InvalidInput if either is outside [0, 1].
double joint_score(double s_obj_pred, double s_fea);

// BEVG binary format: "BEVG", u32 C, H, W, f64 origin_x, origin_y,
// resolution, then C*H*W f32; all little-endian.
std::vector<std::uint8_t> encode_bevg(const BevGrid& grid);
BevGrid decode_bevg(std::span<const std::uint8_t> bytes);

void write_bevg(const std::filesystem::path& path, const BevGrid& grid);
BevGrid read_bevg(const std::filesystem::path& path);

}  // namespace oslk
