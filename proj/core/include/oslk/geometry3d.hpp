#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace oslk {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into [-pi, pi). Values already in range are returned
/// bit-for-bit unchanged.
double wrap_angle(double radians);

/// Smallest absolute angular difference, in [0, pi].
double angular_distance(double a, double b);

/// Oriented 3D box. (x, y, z) is the box center; l is the extent along the
/// heading, w the extent across it, h the vertical extent (z spans z +- h/2).
/// Yaw r is counterclockwise from +x about the vertical axis.
struct Box3D {
  double x = 0, y = 0, z = 0;
  double w = 1, l = 1, h = 1;
  double r = 0;
  std::optional<int> class_id;

  /// Validates dimensions and finiteness and normalizes r to [-pi, pi).
  /// Throws InvalidInput on violation.
  static Box3D make(double x, double y, double z, double w, double l, double h,
                    double r, std::optional<int> class_id = std::nullopt);

  Eigen::Vector3d center() const { return {x, y, z}; }

  bool operator==(const Box3D&) const = default;
};

/// Throws InvalidInput if the box breaks a Box3D invariant.
void validate(const Box3D& box);

/// Rotation about the vertical axis. Throws InvalidInput for non-finite yaw.
Eigen::Matrix3d yaw_rotation_matrix(double r);

/// Rows are the yaw-rotated length vector, the yaw-rotated width vector and
/// the height vector [0, 0, h].
class ScaleMatrix {
 public:
  explicit ScaleMatrix(const Box3D& box);

  const Eigen::Matrix3d& rows() const { return rows_; }
  Eigen::Vector3d length_row() const { return rows_.row(0).transpose(); }
  Eigen::Vector3d width_row() const { return rows_.row(1).transpose(); }
  Eigen::Vector3d height_row() const { return rows_.row(2).transpose(); }

  /// Entrywise L1 distance over all nine entries.
  double l1_distance(const ScaleMatrix& other) const;

 private:
  Eigen::Matrix3d rows_;
};

inline ScaleMatrix scale_matrix(const Box3D& box) { return ScaleMatrix(box); }

using Point2 = Eigen::Vector2d;
using Polygon2 = std::vector<Point2>;

/// Footprint corners in counterclockwise order.
std::array<Point2, 4> bev_corners(const Box3D& box);

/// Signed shoelace area; positive for counterclockwise polygons.
double polygon_area(std::span<const Point2> polygon);

/// Clips `subject` against the convex, counterclockwise `clip` polygon
/// (Sutherland-Hodgman). Returns the possibly empty intersection polygon.
Polygon2 clip_convex(std::span<const Point2> subject,
                     std::span<const Point2> clip);

/// Intersections smaller than this (m^2) are treated as empty.
inline constexpr double kAreaEpsilon = 1e-12;

double bev_intersection_area(const Box3D& a, const Box3D& b);

/// Rotated-footprint IoU in the ground plane.
double bev_iou(const Box3D& a, const Box3D& b);

/// Volume IoU: footprint intersection times vertical overlap over the union.
double iou3d(const Box3D& a, const Box3D& b);

}  // namespace oslk
