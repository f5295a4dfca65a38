#pragma once

// Deterministic pedestrian world: kinematics and a ground-truth recognizer
// with field of view, range, noise and dropouts.

#include <cstdint>

#include "zebra/geometry.hpp"
#include "zebra/random.hpp"

namespace zebra {

struct World {
  CrossingLayout layout;
  Pose agent;
  double time = 0.0;
  std::uint64_t rng_seed = 0;
};

// Body-frame velocities. sidestep_speed > 0 moves to the agent's left;
// turn_rate > 0 turns counterclockwise; pitch_rate > 0 tips the camera down.
struct Control {
  double forward_speed = 0.0;
  double turn_rate = 0.0;
  double sidestep_speed = 0.0;
  double pitch_rate = 0.0;

  friend bool operator==(const Control&, const Control&) = default;
};

// Unicycle-with-strafe integration, exact for constant controls over dt.
// Throws InvalidArgument unless 0 < dt <= 0.1.
World step_world(const World& world, const Control& control, double dt);

struct RecognizerModel {
  double fov_half_angle = 0.5235987755982988;  // 30 deg
  double max_range = 12.0;
  double rate = 10.0;  // Hz
  double angle_noise_sd = 0.0;
  double distance_noise_sd = 0.0;
  double dropout_probability = 0.0;
  double gyro_noise_sd = 0.0;  // rad per sqrt(second), random walk of the gyro heading

  void validate() const;
};

// Spacing of the outline points tested for visibility.
inline constexpr double kOutlineSpacing = 0.25;

// True when some stripe outline point lies inside the view cone and range.
bool crossing_visible(const Pose& pose, const CrossingLayout& layout, const RecognizerModel& model);

// Exact measures plus independent Gaussian noise, or valid == false when the
// crossing is out of view or the frame drops out. Always consumes the same
// number of random draws so streams stay aligned across outcomes.
RelativeMeasures simulated_recognition(const World& world, const RecognizerModel& model, Rng& rng);

// Standing on the crossing area (past the near edge, not past the far edge,
// within the lateral borders).
bool on_crossing(const Pose& pose, const CrossingLayout& layout);

// Past the far edge while within the lateral borders.
bool crossing_complete(const Pose& pose, const CrossingLayout& layout);

}  // namespace zebra
