#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rrtsim/point.hpp"
#include "rrtsim/rng.hpp"
#include "rrtsim/tree.hpp"

namespace rrtsim {

/// Occupancy grid certifying epsilon-coverage of [0,1]^d.
///
/// The grid uses floor(sqrt(d)/epsilon)+1 cells per axis, so each cell's
/// diagonal is strictly below epsilon: once every cell holds a tree vertex,
/// every point of the cube is within epsilon of some vertex.  The first step
/// at which that happens is the grid cover time — a conservative certificate
/// for the true covering time.  The strict inequality is what keeps
/// occupancy_transfer_check exact under floating point (a diagonal of exactly epsilon
/// lets boundary roundoff drop a steered vertex back into an occupied cell).
/// Grids needing more than 2^31 cells are rejected.
class CoverState {
 public:
  CoverState(int dim, double epsilon);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double epsilon() const { return epsilon_; }
  [[nodiscard]] std::int64_t cells_per_axis() const { return m_; }
  [[nodiscard]] std::int64_t cell_count() const { return static_cast<std::int64_t>(occupied_.size()); }

  /// Linear cell id of p: sum_i c_i * m^i with c_i = floor(p_i * m), clamped
  /// so the coordinate 1.0 falls in the top cell.
  [[nodiscard]] std::int64_t cell_of(const Point& p) const;

  [[nodiscard]] bool occupied(std::int64_t cell) const;

  /// Marks p's cell occupied; `step` is the insertion step of the vertex.
  /// Returns true iff a previously empty cell became occupied.  Records the
  /// step that completes full occupancy (queryable via cover_step()).
  bool register_vertex(const Point& p, std::int64_t step);

  [[nodiscard]] std::int64_t occupied_cells() const { return occupied_count_; }
  [[nodiscard]] bool covered() const { return occupied_count_ == cell_count(); }
  /// Step at which the grid became fully occupied, if it has.
  [[nodiscard]] std::optional<std::int64_t> cover_step() const { return cover_step_; }

 private:
  int dim_;
  double epsilon_;
  std::int64_t m_;
  std::vector<bool> occupied_;
  std::int64_t occupied_count_ = 0;
  std::optional<std::int64_t> cover_step_;
};

/// Occupancy-transfer check: with `state` reflecting occupancy BEFORE the
/// step, the new vertex lies in an unoccupied cell iff the step's uniform
/// draw does.  (For adopted draws the two points coincide; for steered steps
/// the property is what makes grid cover times coupon-like.)  Returns true
/// when the step conforms.
bool occupancy_transfer_check(const CoverState& state, const StepOutcome& outcome, const Point& new_position);

/// Random search for a point farther than epsilon from every vertex; returns
/// the first witness among `probes` uniform draws, or nullopt.  Brute force —
/// meant for validating cover certificates at test scale.
std::optional<Point> uncovered_witness(const std::vector<Point>& vertices, double epsilon,
                                       int probes, RngStream& rng);

/// Volume of the d-ball of radius r: pi^(d/2) r^d / Gamma(d/2 + 1).
double ball_volume(int d, double r);

/// Inverse epsilon-ball volume: Gamma(d/2+1) / (epsilon^d pi^(d/2)).
/// beta_const(d, eps) * ball_volume(d, eps) == 1.
double beta_const(int d, double epsilon);

/// Inverse ideal-cell volume d^(d/2) / epsilon^d (cells of side epsilon/sqrt(d)).
double alpha_const(int d, double epsilon);

/// Harmonic number H_n, summed from the small end for accuracy.  H_0 = 0.
double harmonic(std::int64_t n);

/// Expected coupon-collector time over n equally likely classes: n * H_n.
double coupon_expected(std::int64_t n);

/// Draws uniformly over n classes until every class has appeared; returns the
/// number of draws.
std::int64_t coupon_simulate(std::int64_t n, RngStream& rng);

}  // namespace rrtsim
