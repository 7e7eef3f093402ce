#pragma once

#include <cstdint>
#include <vector>

#include "rrtsim/rng.hpp"
#include "rrtsim/tree.hpp"

namespace rrtsim {

/// One per-step row of the growth series.
struct SeriesSample {
  std::int64_t n = 0;       // step / vertex index
  double delta = 0.0;       // edge length of the new vertex
  double delta_scaled = 0.0;  // delta * sqrt(pi * n)
  double cum_length = 0.0;  // total edge length so far
  double root_path = 0.0;   // root-path length of vertex n; NaN off-schedule
  std::int32_t depth = 0;   // depth of vertex n
  std::int32_t height = 0;  // tree height after the step
};

/// Streaming per-step bookkeeping for a growing tree.  Root-path lengths are
/// sampled only at n in {2^k} (they cost a parent-chain walk); other columns
/// are O(1) per step.  Row storage is optional so long runs can aggregate
/// without holding the series.
class SeriesRecorder {
 public:
  explicit SeriesRecorder(bool keep_rows = false) : keep_rows_(keep_rows) {}

  /// Call right after a step; `out.new_vertex` must be the latest vertex.
  SeriesSample record_step(const Tree& t, const StepOutcome& out);

  [[nodiscard]] const std::vector<SeriesSample>& rows() const { return rows_; }
  [[nodiscard]] double cum_length() const { return cum_; }

 private:
  bool keep_rows_;
  double cum_ = 0.0;
  std::vector<SeriesSample> rows_;
};

/// Upper bound on P[nearest-neighbour distance delta_n > x] for n iid uniform
/// points in the unit square: (1 - pi x^2)^(n-1).  Requires d = 2 geometry,
/// n >= 1 and 0 <= x <= 1/sqrt(pi).
double tail_bound_delta(std::int64_t n, double x);

/// Draws from the depth recursion D_n = inf{k : floor(...floor(n U_1)...U_k) = 0}:
/// the index walk v -> floor(v * U) iterated to 0.  Distributed exactly as the
/// depth of vertex n in a tree whose parents are uniform over prior vertices.
std::int32_t depth_model_sample(std::int64_t n, RngStream& rng);

/// Tail bound P[D_n > x] <= (1/n) (e ln n / x)^x, valid for x > ln n, n >= 2
/// (clipped to 1).
double depth_tail_bound(std::int64_t n, double x);

}  // namespace rrtsim
