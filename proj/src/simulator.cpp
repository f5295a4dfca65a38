#include "zebra/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "zebra/angles.hpp"
#include "zebra/error.hpp"

namespace zebra {

World step_world(const World& world, const Control& c, double dt) {
  if (!(dt > 0.0 && dt <= 0.1)) throw InvalidArgument("step_world: dt must be in (0, 0.1]");
  World next = world;
  Pose& p = next.agent;
  const double h0 = world.agent.heading;
  const double dh = c.turn_rate * dt;

  // Integral of the heading-rotated body velocity over the step.
  double int_cos;
  double int_sin;
  if (std::fabs(dh) < 1e-12) {
    int_cos = std::cos(h0) * dt;
    int_sin = std::sin(h0) * dt;
  } else {
    int_cos = (std::sin(h0 + dh) - std::sin(h0)) / c.turn_rate;
    int_sin = (std::cos(h0) - std::cos(h0 + dh)) / c.turn_rate;
  }
  p.x += c.forward_speed * int_cos - c.sidestep_speed * int_sin;
  p.y += c.forward_speed * int_sin + c.sidestep_speed * int_cos;
  p.heading = wrap_angle(h0 + dh);
  p.pitch = std::clamp(p.pitch + c.pitch_rate * dt, -kPi / 2.0, kPi / 2.0);
  next.time += dt;
  return next;
}

void RecognizerModel::validate() const {
  if (!(rate > 0.0)) throw InvalidArgument("recognizer: rate must be > 0");
  if (angle_noise_sd < 0.0 || distance_noise_sd < 0.0 || gyro_noise_sd < 0.0) {
    throw InvalidArgument("recognizer: noise standard deviations must be >= 0");
  }
  if (dropout_probability < 0.0 || dropout_probability > 1.0) {
    throw InvalidArgument("recognizer: dropout_probability must be in [0, 1]");
  }
  if (!(fov_half_angle > 0.0) || !(max_range > 0.0)) {
    throw InvalidArgument("recognizer: field of view and range must be > 0");
  }
}

bool crossing_visible(const Pose& pose, const CrossingLayout& layout, const RecognizerModel& model) {
  for (const Vec2& q : stripe_outline_points(layout, kOutlineSpacing)) {
    const double dx = q.x - pose.x;
    const double dy = q.y - pose.y;
    const double range = std::hypot(dx, dy);
    if (range > model.max_range || range == 0.0) continue;
    if (std::fabs(wrap_angle(std::atan2(dy, dx) - pose.heading)) <= model.fov_half_angle) return true;
  }
  return false;
}

RelativeMeasures simulated_recognition(const World& world, const RecognizerModel& model, Rng& rng) {
  const bool dropped = rng.bernoulli(model.dropout_probability);
  const double n_angle = rng.gaussian(model.angle_noise_sd);
  const double n_min = rng.gaussian(model.distance_noise_sd);
  const double n_max = rng.gaussian(model.distance_noise_sd);
  const double n_left = rng.gaussian(model.distance_noise_sd);
  const double n_right = rng.gaussian(model.distance_noise_sd);

  if (dropped || !crossing_visible(world.agent, world.layout, model)) return {};

  RelativeMeasures m = compute_relative_measures(world.agent, world.layout);
  m.horizontal_rotation = wrap_angle(m.horizontal_rotation + n_angle);
  m.min_frontal = std::max(0.0, m.min_frontal + n_min);
  m.max_frontal = std::max(m.min_frontal, m.max_frontal + n_max);
  m.lateral_left += n_left;
  m.lateral_right += n_right;
  return m;
}

bool on_crossing(const Pose& pose, const CrossingLayout& layout) {
  const CrossingCoordinates c = to_crossing_frame({pose.x, pose.y}, layout);
  return c.along >= 0.0 && c.along <= layout.depth() && std::fabs(c.across) <= 0.5 * layout.stripe_length;
}

bool crossing_complete(const Pose& pose, const CrossingLayout& layout) {
  const CrossingCoordinates c = to_crossing_frame({pose.x, pose.y}, layout);
  return c.along > layout.depth() && std::fabs(c.across) <= 0.5 * layout.stripe_length;
}

}  // namespace zebra
