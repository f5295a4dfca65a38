#include "zebra/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "zebra/angles.hpp"
#include "zebra/error.hpp"

namespace zebra {

void CrossingLayout::validate() const {
  if (stripe_count < 1) throw InvalidArgument("crossing layout: stripe_count must be >= 1");
  if (!(stripe_width > 0.0)) throw InvalidArgument("crossing layout: stripe_width must be > 0");
  if (!(stripe_length > 0.0)) throw InvalidArgument("crossing layout: stripe_length must be > 0");
}

CrossingCoordinates to_crossing_frame(Vec2 p, const CrossingLayout& layout) {
  const double c = std::cos(layout.orientation);
  const double s = std::sin(layout.orientation);
  const double dx = p.x - layout.origin.x;
  const double dy = p.y - layout.origin.y;
  return {dx * c + dy * s, -dx * s + dy * c};
}

RelativeMeasures compute_relative_measures(const Pose& pose, const CrossingLayout& layout) {
  const CrossingCoordinates at = to_crossing_frame({pose.x, pose.y}, layout);
  const double half = 0.5 * layout.stripe_length;

  RelativeMeasures m;
  m.horizontal_rotation = wrap_angle(pose.heading - layout.orientation);
  m.min_frontal = std::max(0.0, -at.along);
  m.max_frontal = std::max(0.0, layout.depth() - at.along);
  m.lateral_left = half - at.across;
  m.lateral_right = at.across + half;
  m.valid = true;
  return m;
}

namespace {

Vec2 from_crossing_frame(double along, double across, const CrossingLayout& layout) {
  const double c = std::cos(layout.orientation);
  const double s = std::sin(layout.orientation);
  return {layout.origin.x + along * c - across * s, layout.origin.y + along * s + across * c};
}

}  // namespace

std::vector<Vec2> stripe_corners(const CrossingLayout& layout) {
  std::vector<Vec2> corners;
  corners.reserve(4 * static_cast<std::size_t>(layout.stripe_count));
  const double half = 0.5 * layout.stripe_length;
  for (int i = 0; i < layout.stripe_count; ++i) {
    const double near = i * layout.stripe_width;
    const double far = near + layout.stripe_width;
    corners.push_back(from_crossing_frame(near, -half, layout));
    corners.push_back(from_crossing_frame(near, half, layout));
    corners.push_back(from_crossing_frame(far, half, layout));
    corners.push_back(from_crossing_frame(far, -half, layout));
  }
  return corners;
}

std::vector<Vec2> stripe_outline_points(const CrossingLayout& layout, double spacing) {
  std::vector<Vec2> points = stripe_corners(layout);
  if (!(spacing > 0.0)) return points;
  const double half = 0.5 * layout.stripe_length;
  const int across_steps = std::max(1, static_cast<int>(std::ceil(layout.stripe_length / spacing)));
  const int along_steps = std::max(1, static_cast<int>(std::ceil(layout.stripe_width / spacing)));
  for (int i = 0; i <= layout.stripe_count; ++i) {
    const double along = i * layout.stripe_width;
    for (int k = 1; k < across_steps; ++k) {
      points.push_back(from_crossing_frame(along, -half + layout.stripe_length * k / across_steps, layout));
    }
  }
  for (int i = 0; i < layout.stripe_count; ++i) {
    for (int k = 1; k < along_steps; ++k) {
      const double along = (i + static_cast<double>(k) / along_steps) * layout.stripe_width;
      points.push_back(from_crossing_frame(along, -half, layout));
      points.push_back(from_crossing_frame(along, half, layout));
    }
  }
  return points;
}

void FusionState::on_recognition(double rotation, double heading, double time) {
  if (initialized_ && time < last_time_) {
    throw InvalidArgument("fusion: recognition time went backwards");
  }
  initialized_ = true;
  last_angle_ = rotation;
  heading_at_recognition_ = heading;
  last_time_ = time;
}

double fuse_heading(const FusionState& state, double current_heading) {
  if (!state.initialized()) throw StateError("fusion: no recognition yet");
  return wrap_angle(state.last_recognition_angle() +
                    wrap_angle(current_heading - state.heading_at_recognition()));
}

double pitch_from_gravity(const GravityVector& g, double ideal_capture_angle) {
  const double horizontal = std::hypot(g.x, g.y);
  if (horizontal == 0.0 && g.z == 0.0) throw InvalidArgument("pitch: zero gravity vector");
  // Depression of the rear camera axis (-z) below the horizon.
  const double depression = std::atan2(-g.z, horizontal);
  return depression - ideal_capture_angle;
}

GravityVector gravity_for_pitch(double pitch, double ideal_capture_angle) {
  constexpr double kStandardGravity = 9.81;
  const double depression = pitch + ideal_capture_angle;
  return {0.0, -kStandardGravity * std::cos(depression), -kStandardGravity * std::sin(depression)};
}

}  // namespace zebra
