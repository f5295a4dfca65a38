#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numeric code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

inline double wrap(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

// Power of `x` at frequency f (Hann window), by Goertzel.
inline double goertzel_power(std::span<const float> x, double sample_rate, double f) {
  const double w = 2.0 * kPi * f / sample_rate;
  const double coeff = 2.0 * std::cos(w);
  double s1 = 0.0, s2 = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double win = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
    const double s0 = win * x[i] + coeff * s1 - s2;
    s2 = s1;
    s1 = s0;
  }
  return s1 * s1 + s2 * s2 - coeff * s1 * s2;
}

// Strongest frequency in [lo, hi]: coarse 1 Hz scan, then golden-section
// refinement around the best grid point.
inline double goertzel_peak(std::span<const float> x, double sample_rate, double lo, double hi) {
  double best_f = lo, best_p = -1.0;
  for (double f = lo; f <= hi; f += 1.0) {
    const double p = goertzel_power(x, sample_rate, f);
    if (p > best_p) best_p = p, best_f = f;
  }
  double a = best_f - 1.0, b = best_f + 1.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 40; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (goertzel_power(x, sample_rate, c) > goertzel_power(x, sample_rate, d)) b = d;
    else a = c;
  }
  return 0.5 * (a + b);
}

// Additive synthesis evaluated term by term from the closed form.
struct Partial {
  double f, amp, tau;
};

inline std::vector<double> closed_form_stimulus(const std::vector<Partial>& partials, double duration,
                                                double sample_rate, double attack, double release,
                                                double gain_db) {
  const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double env_attack = std::min(1.0, t / attack);
    double v = 0.0;
    for (const auto& p : partials) v += p.amp * env_attack * std::exp(-t / p.tau) * std::sin(2.0 * kPi * p.f * t);
    y[i] = v;
  }
  const auto r = std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(release * sample_rate)));
  for (std::size_t i = 0; i < r; ++i) y[n - 1 - i] *= static_cast<double>(i) / static_cast<double>(r);
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, std::fabs(v));
  if (peak > 0.0) {
    const double g = std::pow(10.0, gain_db / 20.0) / peak;
    for (double& v : y) v *= g;
  }
  return y;
}

// Indices where sound starts after at least `min_gap` exact zeros (or at the
// start of the buffer).
template <class T>
std::vector<std::size_t> onsets_after_silence(std::span<const T> x, std::size_t min_gap) {
  std::vector<std::size_t> onsets;
  std::size_t zeros = min_gap;  // the buffer start counts as silence
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == T{}) {
      ++zeros;
      continue;
    }
    if (zeros >= min_gap) onsets.push_back(i);
    zeros = 0;
  }
  return onsets;
}

// Relative measures from the stripe corners alone: the axis comes from the
// first stripe's edge midpoints, distances from projecting every corner.
struct Measures {
  double rotation, min_frontal, max_frontal, left, right;
};

struct Pt {
  double x, y;
};

// Corners of stripes laid back to back from the centre of the near edge.
inline std::vector<Pt> layout_corners(double ox, double oy, double theta, int count, double width, double length) {
  std::vector<Pt> out;
  const double c = std::cos(theta), s = std::sin(theta), h = length / 2;
  auto at = [&](double along, double across) { return Pt{ox + along * c - across * s, oy + along * s + across * c}; };
  for (int i = 0; i < count; ++i) {
    out.push_back(at(i * width, -h));
    out.push_back(at(i * width, h));
    out.push_back(at((i + 1) * width, h));
    out.push_back(at((i + 1) * width, -h));
  }
  return out;
}

inline Measures corner_measures(double px, double py, double heading, const std::vector<Pt>& corners) {
  // Corners come four per stripe: near-right, near-left, far-left, far-right.
  const Pt near_mid{(corners[0].x + corners[1].x) / 2, (corners[0].y + corners[1].y) / 2};
  const Pt far_mid{(corners[2].x + corners[3].x) / 2, (corners[2].y + corners[3].y) / 2};
  const double ax = far_mid.x - near_mid.x, ay = far_mid.y - near_mid.y;
  const double alen = std::hypot(ax, ay);
  const double ux = ax / alen, uy = ay / alen;  // along the axis
  const double lx = -uy, ly = ux;               // toward the left border

  double lo = std::numeric_limits<double>::infinity(), hi = -lo, left = -lo, right = lo;
  for (const Pt& c : corners) {
    const double dx = c.x - px, dy = c.y - py;
    const double along = dx * ux + dy * uy;
    const double across = dx * lx + dy * ly;
    lo = std::min(lo, along);
    hi = std::max(hi, along);
    left = std::max(left, across);
    right = std::min(right, across);
  }
  return {wrap(heading - std::atan2(uy, ux)), std::max(0.0, lo), std::max(0.0, hi), left, -right};
}

}  // namespace oracle
