#include "rrtsim/cover.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rrtsim {

namespace {
constexpr std::int64_t kMaxCells = std::int64_t{1} << 31;
}

CoverState::CoverState(int dim, double epsilon) : dim_(dim), epsilon_(epsilon) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("CoverState: dimension out of range");
  if (!(epsilon > 0.0)) throw std::invalid_argument("CoverState: epsilon must be > 0");
  // smallest m with sqrt(d)/m strictly below epsilon.  Strictness matters:
  // with the cell diagonal exactly epsilon, a vertex sitting on a cell edge
  // lets a steered step of length epsilon land back in its parent's cell
  // under roundoff, breaking the occupancy-transfer property that makes grid
  // cover times coupon-like.  floor+1 keeps a real margin for any epsilon
  // whose cell count is not within an ulp of an integer.
  m_ = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(dim)) / epsilon)) + 1;
  if (m_ < 1) m_ = 1;
  std::int64_t cells = 1;
  for (int i = 0; i < dim_; ++i) {
    if (cells > kMaxCells / m_) {
      throw std::invalid_argument("CoverState: grid of " + std::to_string(m_) + "^" +
                                  std::to_string(dim_) + " cells exceeds the 2^31 memory guard");
    }
    cells *= m_;
  }
  if (cells > kMaxCells) {
    throw std::invalid_argument("CoverState: grid exceeds the 2^31 memory guard");
  }
  occupied_.assign(static_cast<std::size_t>(cells), false);
}

std::int64_t CoverState::cell_of(const Point& p) const {
  if (p.dim() != dim_) throw std::invalid_argument("CoverState::cell_of: dimension mismatch");
  std::int64_t id = 0;
  for (int i = dim_ - 1; i >= 0; --i) {
    auto c = static_cast<std::int64_t>(p[i] * static_cast<double>(m_));
    if (c >= m_) c = m_ - 1;  // coordinate 1.0 clamps into the top cell
    if (c < 0) c = 0;
    id = id * m_ + c;
  }
  return id;
}

bool CoverState::occupied(std::int64_t cell) const {
  if (cell < 0 || cell >= cell_count()) throw std::out_of_range("CoverState::occupied: bad cell");
  return occupied_[static_cast<std::size_t>(cell)];
}

bool CoverState::register_vertex(const Point& p, std::int64_t step) {
  const std::int64_t cell = cell_of(p);
  if (occupied_[static_cast<std::size_t>(cell)]) return false;
  occupied_[static_cast<std::size_t>(cell)] = true;
  ++occupied_count_;
  if (occupied_count_ == cell_count() && !cover_step_) cover_step_ = step;
  return true;
}

bool occupancy_transfer_check(const CoverState& state, const StepOutcome& outcome,
                  const Point& new_position) {
  const bool draw_unoccupied = !state.occupied(state.cell_of(outcome.target));
  const bool vertex_unoccupied = !state.occupied(state.cell_of(new_position));
  return draw_unoccupied == vertex_unoccupied;
}

std::optional<Point> uncovered_witness(const std::vector<Point>& vertices, double epsilon,
                                       int probes, RngStream& rng) {
  if (vertices.empty()) throw std::invalid_argument("uncovered_witness: no vertices");
  const int dim = vertices[0].dim();
  const double eps2 = epsilon * epsilon;
  for (int i = 0; i < probes; ++i) {
    const Point probe = uniform_sample(dim, rng);
    bool covered = false;
    for (const Point& v : vertices) {
      if (sq_dist(v.data(), probe.data(), dim) <= eps2) {
        covered = true;
        break;
      }
    }
    if (!covered) return probe;
  }
  return std::nullopt;
}

double ball_volume(int d, double r) {
  if (d < 1) throw std::invalid_argument("ball_volume: dimension must be >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("ball_volume: radius must be > 0");
  const double half = static_cast<double>(d) / 2.0;
  return std::pow(std::numbers::pi, half) * std::pow(r, d) / std::tgamma(half + 1.0);
}

double beta_const(int d, double epsilon) {
  if (d < 1) throw std::invalid_argument("beta_const: dimension must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("beta_const: epsilon must be > 0");
  const double half = static_cast<double>(d) / 2.0;
  return std::tgamma(half + 1.0) / (std::pow(epsilon, d) * std::pow(std::numbers::pi, half));
}

double alpha_const(int d, double epsilon) {
  if (d < 1) throw std::invalid_argument("alpha_const: dimension must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("alpha_const: epsilon must be > 0");
  return std::pow(static_cast<double>(d), static_cast<double>(d) / 2.0) / std::pow(epsilon, d);
}

double harmonic(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("harmonic: n must be >= 0");
  double h = 0.0;
  for (std::int64_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

double coupon_expected(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("coupon_expected: n must be >= 1");
  return static_cast<double>(n) * harmonic(n);
}

std::int64_t coupon_simulate(std::int64_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("coupon_simulate: n must be >= 1");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::int64_t missing = n;
  std::int64_t draws = 0;
  while (missing > 0) {
    const auto k = static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(n)));
    ++draws;
    if (!seen[k]) {
      seen[k] = true;
      --missing;
    }
  }
  return draws;
}

}  // namespace rrtsim
