#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "zebra/angles.hpp"
#include "zebra/error.hpp"
#include "zebra/geometry.hpp"

using namespace zebra;

namespace {

CrossingLayout axis_north() {
  CrossingLayout l;
  l.orientation = deg_to_rad(90.0);
  return l;
}

}  // namespace

TEST(Geometry, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_NEAR(wrap_angle(-7.0), -7.0 + 2 * kPi, 1e-15);
}

TEST(Geometry, LayoutValidation) {
  CrossingLayout l;
  EXPECT_NO_THROW(l.validate());
  l.stripe_count = 0;
  EXPECT_THROW(l.validate(), InvalidArgument);
  l = {};
  l.stripe_width = 0.0;
  EXPECT_THROW(l.validate(), InvalidArgument);
  l = {};
  l.stripe_length = -1.0;
  EXPECT_THROW(l.validate(), InvalidArgument);
  EXPECT_DOUBLE_EQ(CrossingLayout{}.depth(), 2.5);
}

TEST(Geometry, CentredInFrontFacingAlong) {
  const auto m = compute_relative_measures({0.0, -2.0, deg_to_rad(90.0), 0.0}, axis_north());
  EXPECT_TRUE(m.valid);
  EXPECT_NEAR(m.horizontal_rotation, 0.0, 1e-15);
  EXPECT_NEAR(m.min_frontal, 2.0, 1e-12);
  EXPECT_NEAR(m.max_frontal, 4.5, 1e-12);
  EXPECT_NEAR(m.lateral_left, 1.25, 1e-12);
  EXPECT_NEAR(m.lateral_right, 1.25, 1e-12);
}

TEST(Geometry, RotationSignMeansTurnRight) {
  // Facing 30 deg left of the axis: must rotate right (positive).
  const auto m = compute_relative_measures({0.0, -2.0, deg_to_rad(120.0), 0.0}, axis_north());
  EXPECT_NEAR(m.horizontal_rotation, deg_to_rad(30.0), 1e-12);
}

TEST(Geometry, LateralDistancesAreSignedAndSumToLength) {
  // Axis +y, left border at x = -1.25. Standing at x = -2 is 0.75 m outside it.
  const auto m = compute_relative_measures({-2.0, -1.0, 0.0, 0.0}, axis_north());
  EXPECT_NEAR(m.lateral_left, -0.75, 1e-12);
  EXPECT_NEAR(m.lateral_right, 3.25, 1e-12);
  EXPECT_NEAR(m.lateral_left + m.lateral_right, 2.5, 1e-12);
}

TEST(Geometry, OnAndPastTheCrossing) {
  auto m = compute_relative_measures({0.0, 1.0, kPi / 2, 0.0}, axis_north());
  EXPECT_EQ(m.min_frontal, 0.0);
  EXPECT_NEAR(m.max_frontal, 1.5, 1e-12);
  m = compute_relative_measures({0.0, 3.0, kPi / 2, 0.0}, axis_north());
  EXPECT_EQ(m.min_frontal, 0.0);
  EXPECT_EQ(m.max_frontal, 0.0);
}

TEST(Geometry, CrossingFrameRoundTrip) {
  CrossingLayout l;
  l.origin = {3.0, -1.0};
  l.orientation = 0.7;
  const auto c = to_crossing_frame({3.0 + 2.0 * std::cos(0.7), -1.0 + 2.0 * std::sin(0.7)}, l);
  EXPECT_NEAR(c.along, 2.0, 1e-12);
  EXPECT_NEAR(c.across, 0.0, 1e-12);
}

TEST(Geometry, CornersMatchIndependentConstruction) {
  CrossingLayout l;
  l.origin = {1.0, 2.0};
  l.orientation = -0.4;
  l.stripe_count = 3;
  const auto got = stripe_corners(l);
  const auto want = oracle::layout_corners(1.0, 2.0, -0.4, 3, 0.5, 2.5);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i].x, want[i].x, 1e-12);
    EXPECT_NEAR(got[i].y, want[i].y, 1e-12);
  }
}

TEST(Geometry, OutlinePointsLieOnStripeEdges) {
  const CrossingLayout l = axis_north();
  const auto pts = stripe_outline_points(l, 0.25);
  EXPECT_GT(pts.size(), stripe_corners(l).size());
  for (const auto& p : pts) {
    const auto c = to_crossing_frame(p, l);
    const bool on_long_edge = std::fabs(std::fabs(c.across) - 1.25) < 1e-9 && c.along > -1e-9 && c.along < 2.5 + 1e-9;
    const double k = c.along / 0.5;
    const bool on_short_edge = std::fabs(k - std::round(k)) < 1e-9 && std::fabs(c.across) <= 1.25 + 1e-9;
    EXPECT_TRUE(on_long_edge || on_short_edge) << c.along << "," << c.across;
  }
}

TEST(Geometry, RandomCasesMatchCornerOracle) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> pos(-15.0, 15.0), ang(-kPi, kPi), width(0.3, 0.8), len(1.5, 6.0);
  std::uniform_int_distribution<int> count(1, 8);
  for (int i = 0; i < 200; ++i) {
    CrossingLayout l;
    l.origin = {pos(gen), pos(gen)};
    l.orientation = ang(gen);
    l.stripe_count = count(gen);
    l.stripe_width = width(gen);
    l.stripe_length = len(gen);
    const Pose p{pos(gen), pos(gen), ang(gen), 0.0};
    const auto m = compute_relative_measures(p, l);
    const auto o = oracle::corner_measures(
        p.x, p.y, p.heading,
        oracle::layout_corners(l.origin.x, l.origin.y, l.orientation, l.stripe_count, l.stripe_width, l.stripe_length));
    ASSERT_NEAR(wrap_angle(m.horizontal_rotation - o.rotation), 0.0, 1e-9) << i;
    ASSERT_NEAR(m.min_frontal, o.min_frontal, 1e-9) << i;
    ASSERT_NEAR(m.max_frontal, o.max_frontal, 1e-9) << i;
    ASSERT_NEAR(m.lateral_left, o.left, 1e-9) << i;
    ASSERT_NEAR(m.lateral_right, o.right, 1e-9) << i;
  }
}

TEST(Fusion, TurnTowardCrossingShrinksRotation) {
  // Last recognized rotation 10 deg (turn right needed); the user has since
  // turned 15 deg clockwise, overshooting by 5 deg.
  FusionState f;
  f.on_recognition(deg_to_rad(10.0), 1.0, 0.0);
  EXPECT_NEAR(fuse_heading(f, 1.0 - deg_to_rad(15.0)), deg_to_rad(-5.0), 1e-12);
}

TEST(Fusion, AgreesWithGeometryAfterTurning) {
  const CrossingLayout l = axis_north();
  Pose p{0.0, -3.0, deg_to_rad(100.0), 0.0};
  FusionState f;
  f.on_recognition(compute_relative_measures(p, l).horizontal_rotation, p.heading, 0.0);
  for (double turn : {-0.3, 0.2, 1.7, -2.9}) {
    Pose q = p;
    q.heading = wrap_angle(p.heading + turn);
    EXPECT_NEAR(wrap_angle(fuse_heading(f, q.heading) - compute_relative_measures(q, l).horizontal_rotation), 0.0,
                1e-12);
  }
}

TEST(Fusion, ResetAtRecognitionAndErrors) {
  FusionState f;
  EXPECT_THROW(fuse_heading(f, 0.0), StateError);
  f.on_recognition(0.2, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(fuse_heading(f, 0.5), 0.2);
  f.on_recognition(-0.1, 2.0, 1.1);
  EXPECT_DOUBLE_EQ(fuse_heading(f, 2.0), -0.1);
  EXPECT_THROW(f.on_recognition(0.0, 0.0, 0.5), InvalidArgument);
}

TEST(Pitch, FromGravity) {
  // Held at the ideal angle -> 0.
  EXPECT_NEAR(pitch_from_gravity(gravity_for_pitch(0.0)), 0.0, 1e-12);
  // Upright phone (camera horizontal): gravity along -y.
  EXPECT_NEAR(pitch_from_gravity({0.0, -9.81, 0.0}), -deg_to_rad(30.0), 1e-12);
  // Flat, screen up (camera straight down): gravity along -z.
  EXPECT_NEAR(pitch_from_gravity({0.0, 0.0, -9.81}), deg_to_rad(60.0), 1e-12);
  EXPECT_NEAR(pitch_from_gravity({0.0, 0.0, -9.81}, 0.0), kPi / 2, 1e-12);
  EXPECT_THROW(pitch_from_gravity({0.0, 0.0, 0.0}), InvalidArgument);
  for (double p = -1.0; p <= 1.0; p += 0.125) EXPECT_NEAR(pitch_from_gravity(gravity_for_pitch(p)), p, 1e-12);
}
