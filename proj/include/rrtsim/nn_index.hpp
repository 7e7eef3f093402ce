#pragma once

#include <cstdint>
#include <vector>

#include "rrtsim/point.hpp"

namespace rrtsim {

/// Exact nearest-neighbour index over points of [0,1]^d.
///
/// Points live in a flat coordinate array.  For d <= 3 queries run on uniform
/// grid buckets with an expanding ring search; the grid resolution tracks
/// max(1/cell_hint, (n/2)^(1/d)) cells per axis and is rebuilt as the point
/// count doubles.  For d > 3 (or small n) queries fall back to a linear scan.
/// Every path shares one squared-distance kernel and one tie rule (smallest
/// insertion index wins), so the returned index and distance are bitwise
/// identical to the brute-force oracle.  The ring search deliberately scans
/// one ring beyond the tight cutoff so float roundoff in the cell arithmetic
/// can never hide an equal-or-closer candidate.
class NnIndex {
 public:
  struct Hit {
    std::size_t index;
    double dist;  // Euclidean distance
  };

  /// cell_hint > 0 floors the bucket resolution at one cell per hint length
  /// (pass the RRT step epsilon so pre-cover queries stay local); 0 = purely
  /// count-based sizing.
  explicit NnIndex(int dim, double cell_hint = 0.0);

  /// Appends a point, returning its insertion index.  O(1) amortized.
  std::size_t insert(const Point& p);

  /// Exact nearest neighbour of q (ties -> smallest index).  size() >= 1.
  [[nodiscard]] Hit nearest(const Point& q) const;

  /// Reference linear scan over the same storage; also the d > 3 query path.
  [[nodiscard]] Hit nearest_linear(const Point& q) const;

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::int64_t cells_per_axis() const { return grid_enabled_ ? m_ : 0; }

  void reserve(std::size_t n);

 private:
  [[nodiscard]] const double* pt(std::size_t i) const { return coords_.data() + i * static_cast<std::size_t>(dim_); }
  [[nodiscard]] std::int64_t cell_of(const double* p) const;
  [[nodiscard]] std::int64_t target_cells_per_axis(std::size_t n) const;
  void rebuild_grid(std::int64_t m_new);
  void maybe_resize();

  int dim_;
  double cell_hint_;
  bool grid_enabled_;  // d <= 3
  std::size_t n_ = 0;
  std::vector<double> coords_;
  std::int64_t m_ = 1;     // cells per axis
  double side_ = 1.0;      // 1/m
  std::size_t next_resize_ = 64;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

/// Brute-force oracle over an explicit point set (ties -> smallest index).
NnIndex::Hit nearest_bruteforce(const std::vector<Point>& points, const Point& q);

}  // namespace rrtsim
