#include "oslk/geometry3d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oslk/error.hpp"

namespace oslk {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Signed distance-like test: > 0 when p lies left of the directed edge a->b.
double cross(const Point2& a, const Point2& b, const Point2& p) {
  return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

Point2 line_intersection(const Point2& p1, const Point2& p2, const Point2& a,
                         const Point2& b) {
  const double c1 = cross(a, b, p1);
  const double c2 = cross(a, b, p2);
  const double t = c1 / (c1 - c2);
  return p1 + t * (p2 - p1);
}

double vertical_overlap(const Box3D& a, const Box3D& b) {
  const double lo = std::max(a.z - 0.5 * a.h, b.z - 0.5 * b.h);
  const double hi = std::min(a.z + 0.5 * a.h, b.z + 0.5 * b.h);
  return std::max(0.0, hi - lo);
}

}  // namespace

double wrap_angle(double radians) {
  if (radians >= -kPi && radians < kPi) return radians;
  double out = radians - kTwoPi * std::floor((radians + kPi) / kTwoPi);
  // Rounding in the floor argument can land one period off at the seams.
  if (out < -kPi) out += kTwoPi;
  if (out >= kPi) out -= kTwoPi;
  return out;
}

double angular_distance(double a, double b) {
  const double d = std::fabs(wrap_angle(a - b));
  return std::min(d, kTwoPi - d);
}

Box3D Box3D::make(double x, double y, double z, double w, double l, double h,
                  double r, std::optional<int> class_id) {
  Box3D box{x, y, z, w, l, h, r, class_id};
  if (!std::isfinite(r)) throw InvalidInput("Box3D: yaw is not finite");
  box.r = wrap_angle(r);
  validate(box);
  return box;
}

void validate(const Box3D& box) {
  for (double v : {box.x, box.y, box.z, box.w, box.l, box.h, box.r}) {
    if (!std::isfinite(v)) throw InvalidInput("Box3D: non-finite field");
  }
  if (!(box.w > 0 && box.l > 0 && box.h > 0)) {
    throw InvalidInput("Box3D: dimensions must be positive (w=" +
                       std::to_string(box.w) + ", l=" + std::to_string(box.l) +
                       ", h=" + std::to_string(box.h) + ")");
  }
  if (!(box.r >= -kPi && box.r < kPi)) {
    throw InvalidInput("Box3D: yaw not normalized to [-pi, pi)");
  }
}

Eigen::Matrix3d yaw_rotation_matrix(double r) {
  if (!std::isfinite(r)) throw InvalidInput("yaw_rotation_matrix: yaw is not finite");
  const double c = std::cos(r);
  const double s = std::sin(r);
  Eigen::Matrix3d m;
  m << c, -s, 0.0,
       s,  c, 0.0,
       0.0, 0.0, 1.0;
  return m;
}

ScaleMatrix::ScaleMatrix(const Box3D& box) {
  const Eigen::Matrix3d rz = yaw_rotation_matrix(box.r);
  rows_.row(0) = (rz * Eigen::Vector3d(box.l, 0.0, 0.0)).transpose();
  rows_.row(1) = (rz * Eigen::Vector3d(0.0, box.w, 0.0)).transpose();
  rows_.row(2) = Eigen::RowVector3d(0.0, 0.0, box.h);
}

double ScaleMatrix::l1_distance(const ScaleMatrix& other) const {
  return (rows_ - other.rows_).cwiseAbs().sum();
}

std::array<Point2, 4> bev_corners(const Box3D& box) {
  const double c = std::cos(box.r);
  const double s = std::sin(box.r);
  const double hl = 0.5 * box.l;
  const double hw = 0.5 * box.w;
  // Local frame: +u along heading, +v to the left.
  const std::array<std::array<double, 2>, 4> local{{
      {hl, -hw}, {hl, hw}, {-hl, hw}, {-hl, -hw}}};
  std::array<Point2, 4> out;
  for (std::size_t k = 0; k < 4; ++k) {
    const double u = local[k][0];
    const double v = local[k][1];
    out[k] = Point2(box.x + u * c - v * s, box.y + u * s + v * c);
  }
  return out;
}

double polygon_area(std::span<const Point2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = polygon[i];
    const Point2& q = polygon[(i + 1) % n];
    twice += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * twice;
}

Polygon2 clip_convex(std::span<const Point2> subject,
                     std::span<const Point2> clip) {
  Polygon2 output(subject.begin(), subject.end());
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !output.empty(); ++e) {
    const Point2& a = clip[e];
    const Point2& b = clip[(e + 1) % m];
    Polygon2 input;
    input.swap(output);
    const std::size_t n = input.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& cur = input[i];
      const Point2& prev = input[(i + n - 1) % n];
      const bool cur_in = cross(a, b, cur) >= 0.0;
      const bool prev_in = cross(a, b, prev) >= 0.0;
      if (cur_in) {
        if (!prev_in) output.push_back(line_intersection(prev, cur, a, b));
        output.push_back(cur);
      } else if (prev_in) {
        output.push_back(line_intersection(prev, cur, a, b));
      }
    }
  }
  return output;
}

double bev_intersection_area(const Box3D& a, const Box3D& b) {
  const auto ca = bev_corners(a);
  const auto cb = bev_corners(b);
  // Cheap reject on bounding circles.
  const double ra = 0.5 * std::hypot(a.l, a.w);
  const double rb = 0.5 * std::hypot(b.l, b.w);
  if (std::hypot(a.x - b.x, a.y - b.y) > ra + rb) return 0.0;
  const Polygon2 inter = clip_convex(ca, cb);
  const double area = polygon_area(inter);
  return area > kAreaEpsilon ? area : 0.0;
}

double bev_iou(const Box3D& a, const Box3D& b) {
  const double inter = bev_intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.l * a.w + b.l * b.w - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double iou3d(const Box3D& a, const Box3D& b) {
  const double dz = vertical_overlap(a, b);
  if (dz <= 0.0) return 0.0;
  const double area = bev_intersection_area(a, b);
  if (area <= 0.0) return 0.0;
  const double inter = area * dz;
  const double uni = a.l * a.w * a.h + b.l * b.w * b.h - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace oslk
