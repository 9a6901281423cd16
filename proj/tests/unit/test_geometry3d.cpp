#include <cmath>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "oracles/iou_oracle.hpp"
#include "oslk/error.hpp"
#include "oslk/geometry3d.hpp"
#include "support/random_boxes.hpp"

using namespace oslk;

namespace {

Box3D cube(double x, double y, double z) { return Box3D::make(x, y, z, 1, 1, 1, 0); }

}  // namespace

TEST(WrapAngle, KeepsValuesInRange) {
  EXPECT_EQ(wrap_angle(0.3), 0.3);
  EXPECT_EQ(wrap_angle(-kPi), -kPi);
  EXPECT_NEAR(wrap_angle(kPi), -kPi, 1e-15);
  EXPECT_NEAR(wrap_angle(3 * kPi + 0.1), -kPi + 0.1, 1e-12);
  for (double a = -50.0; a < 50.0; a += 0.37) {
    const double w = wrap_angle(a);
    EXPECT_GE(w, -kPi);
    EXPECT_LT(w, kPi);
  }
}

TEST(AngularDistance, Wraps) {
  EXPECT_NEAR(angular_distance(3.1, -3.1), 2 * kPi - 6.2, 1e-12);
  EXPECT_NEAR(angular_distance(kPi - 1e-9, -kPi), 1e-9, 1e-12);
  EXPECT_DOUBLE_EQ(angular_distance(0.0, kPi / 2), kPi / 2);
}

TEST(Box3D, MakeNormalizesYawAndValidates) {
  const Box3D b = Box3D::make(0, 0, 0, 1, 2, 3, 2 * kPi + 0.5);
  EXPECT_NEAR(b.r, 0.5, 1e-12);
  EXPECT_THROW(Box3D::make(0, 0, 0, 0, 1, 1, 0), InvalidInput);
  EXPECT_THROW(Box3D::make(0, 0, 0, 1, -1, 1, 0), InvalidInput);
  EXPECT_THROW(Box3D::make(NAN, 0, 0, 1, 1, 1, 0), InvalidInput);
  EXPECT_THROW(Box3D::make(0, 0, 0, 1, 1, 1, INFINITY), InvalidInput);
  Box3D raw{0, 0, 0, 1, 1, 1, 4.0, std::nullopt};
  EXPECT_THROW(validate(raw), InvalidInput);
}

TEST(YawRotation, Examples) {
  EXPECT_TRUE(yaw_rotation_matrix(0.0).isApprox(Eigen::Matrix3d::Identity()));
  const Eigen::Vector3d v = yaw_rotation_matrix(kPi / 2) * Eigen::Vector3d(1, 0, 0);
  EXPECT_NEAR(v.x(), 0.0, 1e-15);
  EXPECT_NEAR(v.y(), 1.0, 1e-15);
  const Eigen::Matrix3d r = yaw_rotation_matrix(0.3);
  EXPECT_LT((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  EXPECT_THROW(yaw_rotation_matrix(NAN), InvalidInput);
}

TEST(ScaleMatrix, Examples) {
  const auto unit = scale_matrix(Box3D::make(0, 0, 0, 1, 1, 1, 0));
  EXPECT_TRUE(unit.rows().isApprox(Eigen::Matrix3d::Identity()));

  const auto quarter = scale_matrix(Box3D::make(0, 0, 0, 1, 1, 1, kPi / 2));
  Eigen::Matrix3d expected;
  expected << 0, 1, 0, -1, 0, 0, 0, 0, 1;
  EXPECT_LT((quarter.rows() - expected).cwiseAbs().maxCoeff(), 1e-15);

  const auto dims = scale_matrix(Box3D::make(0, 0, 0, 2, 3, 4, 0));
  EXPECT_DOUBLE_EQ(dims.length_row().norm(), 3.0);
  EXPECT_DOUBLE_EQ(dims.width_row().norm(), 2.0);
  EXPECT_DOUBLE_EQ(dims.height_row().norm(), 4.0);
}

TEST(ScaleMatrix, InvariantsForAnyYaw) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const Box3D b = testing_support::random_box(rng);
    const auto m = scale_matrix(b);
    EXPECT_NEAR(m.length_row().norm(), b.l, 1e-9 * b.l);
    EXPECT_NEAR(m.width_row().norm(), b.w, 1e-9 * b.w);
    EXPECT_EQ(m.height_row(), Eigen::Vector3d(0, 0, b.h));
    EXPECT_EQ(m.length_row().z(), 0.0);
    EXPECT_EQ(m.width_row().z(), 0.0);
    const Box3D spun = Box3D::make(b.x, b.y, b.z, b.w, b.l, b.h, b.r + 2 * kPi);
    EXPECT_LT(m.l1_distance(scale_matrix(spun)), 1e-12);
  }
}

TEST(BevCorners, Examples) {
  const auto sq = bev_corners(Box3D::make(0, 0, 0, 2, 2, 1, 0));
  for (const auto& p : sq) {
    EXPECT_DOUBLE_EQ(std::fabs(p.x()), 1.0);
    EXPECT_DOUBLE_EQ(std::fabs(p.y()), 1.0);
  }
  EXPECT_GT(polygon_area(sq), 0.0);  // counterclockwise

  const auto shifted = bev_corners(Box3D::make(1, 0, 0, 2, 2, 1, 0));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(shifted[i].x(), sq[i].x() + 1);

  // l=4 along the heading, rotated a quarter turn: long side on the y axis.
  const auto rot = bev_corners(Box3D::make(0, 0, 0, 2, 4, 1, kPi / 2));
  for (const auto& p : rot) {
    EXPECT_NEAR(std::fabs(p.x()), 1.0, 1e-12);
    EXPECT_NEAR(std::fabs(p.y()), 2.0, 1e-12);
  }
  EXPECT_NEAR(polygon_area(rot), 8.0, 1e-12);
}

TEST(ClipConvex, SquareOverlap) {
  const auto a = bev_corners(Box3D::make(0, 0, 0, 2, 2, 1, 0));
  const auto b = bev_corners(Box3D::make(1, 1, 0, 2, 2, 1, 0));
  const auto poly = clip_convex(a, b);
  EXPECT_NEAR(polygon_area(poly), 1.0, 1e-12);
}

TEST(Iou3d, Examples) {
  const Box3D a = cube(0, 0, 0);
  EXPECT_DOUBLE_EQ(iou3d(a, a), 1.0);
  EXPECT_EQ(iou3d(a, cube(100, 0, 0)), 0.0);
  EXPECT_NEAR(iou3d(a, cube(0.5, 0, 0)), 1.0 / 3.0, 1e-12);
}

TEST(Iou3d, TouchingAndVerticalSeparation) {
  EXPECT_EQ(iou3d(cube(0, 0, 0), cube(1, 0, 0)), 0.0);
  EXPECT_EQ(iou3d(cube(0, 0, 0), cube(0, 0, 5)), 0.0);
  EXPECT_DOUBLE_EQ(bev_iou(cube(0, 0, 0), cube(0, 0, 5)), 1.0);
  EXPECT_NEAR(iou3d(cube(0, 0, 0), cube(0, 0, 0.5)), 1.0 / 3.0, 1e-12);
}

TEST(Iou3d, RotatedSquareInsideItself) {
  // A unit square rotated 45 degrees inside a 2x2 square.
  const Box3D big = Box3D::make(0, 0, 0, 2, 2, 1, 0);
  const Box3D diamond = Box3D::make(0, 0, 0, 1, 1, 1, kPi / 4);
  EXPECT_NEAR(bev_iou(big, diamond), 0.25, 1e-12);
}

TEST(Iou3d, SymmetricAndRigidInvariant) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> yaw(-kPi, kPi), off(-20, 20);
  for (int k = 0; k < 1000; ++k) {
    const Box3D a = testing_support::random_box(rng);
    const Box3D b = testing_support::nearby_box(rng, a);
    const double v = iou3d(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_NEAR(v, iou3d(b, a), 1e-12);

    const double t = yaw(rng), dx = off(rng), dy = off(rng);
    const auto move = [&](const Box3D& q) {
      const double c = std::cos(t), s = std::sin(t);
      return Box3D::make(c * q.x - s * q.y + dx, s * q.x + c * q.y + dy, q.z, q.w, q.l, q.h,
                         q.r + t);
    };
    EXPECT_NEAR(v, iou3d(move(a), move(b)), 1e-9);
  }
}

TEST(Iou3d, AgreesWithMonteCarloOnSmallSample) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    const Box3D a = testing_support::random_box(rng, 1.0);
    const Box3D b = testing_support::nearby_box(rng, a);
    const double mc = oracle::monte_carlo_iou({a.x, a.y, a.z, a.w, a.l, a.h, a.r},
                                              {b.x, b.y, b.z, b.w, b.l, b.h, b.r}, 200000,
                                              static_cast<std::uint64_t>(k));
    EXPECT_NEAR(iou3d(a, b), mc, 0.02);
  }
}
