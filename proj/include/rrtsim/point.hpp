#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>

#include "rrtsim/rng.hpp"

namespace rrtsim {

/// Hard cap on the ambient dimension.  Keeps Point a flat value type and the
/// occupancy grids within addressable sizes.
inline constexpr int kMaxDim = 16;

/// A point of the unit cube [0,1]^d with 1 <= d <= kMaxDim.  Fixed-capacity
/// value type so the hot growth loops never allocate.
class Point {
 public:
  Point() : dim_(0) {}

  /// Zero point of dimension d.
  explicit Point(int dim);

  /// From explicit coordinates (validates range and dimension).
  Point(std::initializer_list<double> coords);

  /// From a raw coordinate array (caller guarantees values in [0,1]).
  Point(const double* coords, int dim);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const double* data() const { return c_.data(); }
  [[nodiscard]] double* data() { return c_.data(); }

  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  bool operator==(const Point& other) const;

 private:
  std::array<double, kMaxDim> c_{};
  int dim_;
};

/// Squared Euclidean distance kernel shared by every caller (the accelerated
/// and brute-force nearest-neighbour paths must agree bitwise, so they both
/// run exactly this code).
inline double sq_dist(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

/// Euclidean distance; throws std::invalid_argument on dimension mismatch.
double distance(const Point& a, const Point& b);

/// Uniform draw from [0,1)^d; consumes exactly d doubles from rng in
/// coordinate order (the fixed draw discipline every growth step relies on).
Point uniform_sample(int dim, RngStream& rng);

/// The point at distance epsilon from `from` on the segment toward `toward`:
///   from + epsilon * (toward - from) / dist.
/// `dist` is the precomputed distance(from, toward); requires
/// dist > epsilon > 0, otherwise throws (the caller is expected to adopt
/// `toward` directly when it is within epsilon).  The result is clamped into
/// [0,1]^d (convex combination; clamping only ever trims float roundoff).
Point steer(const Point& from, const Point& toward, double dist, double epsilon);

/// True iff p[axis] >= threshold.
bool in_half_space(const Point& p, int axis, double threshold);

}  // namespace rrtsim
