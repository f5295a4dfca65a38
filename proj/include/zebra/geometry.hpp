#pragma once

// World-frame model of the pedestrian and the zebra crossing.
//
// Frame conventions: x/y in metres, angles counterclockwise from world +x.
// The crossing axis points from the near edge of the first stripe toward the
// far side; "left" of the crossing is the +90 degree side of that axis.

#include <array>
#include <optional>
#include <vector>

namespace zebra {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // (-pi, pi]
  double pitch = 0.0;    // device pitch relative to the ideal capture angle, [-pi/2, pi/2]
};

// Stripes are laid back to back along the axis: stripe i covers
// [i * stripe_width, (i + 1) * stripe_width] ahead of `origin`, and
// [-stripe_length / 2, stripe_length / 2] across it.
struct CrossingLayout {
  Vec2 origin{};             // centre of the near edge of the first stripe
  double orientation = 0.0;  // direction of the crossing axis
  int stripe_count = 5;
  double stripe_width = 0.5;
  double stripe_length = 2.5;

  double depth() const { return stripe_count * stripe_width; }
  void validate() const;  // throws InvalidArgument
};

// The five measures a recognizer reports about the crossing.
//
// horizontal_rotation > 0 means the user must rotate right (clockwise) to
// face along the crossing axis. Lateral distances are measured perpendicular
// to the crossing axis and are signed: a negative value means the user stands
// outside that border by that much. lateral_left + lateral_right always equals
// the stripe length for exact geometry.
struct RelativeMeasures {
  double horizontal_rotation = 0.0;
  double min_frontal = 0.0;
  double max_frontal = 0.0;
  double lateral_left = 0.0;
  double lateral_right = 0.0;
  bool valid = false;
};

RelativeMeasures compute_relative_measures(const Pose& pose, const CrossingLayout& layout);

// Position of `p` in crossing coordinates: along = distance past the near
// edge, across = offset toward the left border.
struct CrossingCoordinates {
  double along = 0.0;
  double across = 0.0;
};
CrossingCoordinates to_crossing_frame(Vec2 p, const CrossingLayout& layout);

// Four corners of every stripe, in world coordinates.
std::vector<Vec2> stripe_corners(const CrossingLayout& layout);

// Corners plus points sampled every `spacing` metres along each stripe edge.
std::vector<Vec2> stripe_outline_points(const CrossingLayout& layout, double spacing);

// Heading correction between recognitions: the last recognized rotation is
// updated by how far the gyroscope heading has turned since then.
class FusionState {
 public:
  void on_recognition(double rotation, double heading, double time);
  bool initialized() const { return initialized_; }
  double last_recognition_angle() const { return last_angle_; }
  double heading_at_recognition() const { return heading_at_recognition_; }
  double last_recognition_time() const { return last_time_; }

 private:
  bool initialized_ = false;
  double last_angle_ = 0.0;
  double heading_at_recognition_ = 0.0;
  double last_time_ = 0.0;
};

// Throws StateError when no recognition has been recorded yet.
double fuse_heading(const FusionState& state, double current_heading);

struct GravityVector {
  double x = 0.0;  // device right
  double y = 0.0;  // device up, along the screen
  double z = 0.0;  // out of the screen, toward the user
};

inline constexpr double kDefaultIdealCaptureAngle = 0.5235987755982988;  // 30 degrees

// Pitch of the rear camera relative to the ideal capture angle, computed from
// the gravity vector reported by the accelerometer (pointing toward the
// ground). Positive means the camera points lower than ideal. Throws
// InvalidArgument for a zero vector.
double pitch_from_gravity(const GravityVector& gravity,
                          double ideal_capture_angle = kDefaultIdealCaptureAngle);

// Inverse of pitch_from_gravity for a device held with no roll, |g| = 9.81.
GravityVector gravity_for_pitch(double pitch,
                                double ideal_capture_angle = kDefaultIdealCaptureAngle);

}  // namespace zebra
