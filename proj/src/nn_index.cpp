#include "rrtsim/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace rrtsim {

namespace {

constexpr std::int64_t kMaxCellsTotal = std::int64_t{1} << 21;
constexpr std::size_t kLinearCutoff = 32;  // below this a scan beats the grid
constexpr double kTargetPointsPerCell = 2.0;

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// largest m with m^d <= kMaxCellsTotal
std::int64_t cells_cap_for_dim(int d) {
  auto m = static_cast<std::int64_t>(
      std::floor(std::pow(static_cast<double>(kMaxCellsTotal), 1.0 / d)));
  while (ipow(m + 1, d) <= kMaxCellsTotal) ++m;  // fix float roundoff
  while (m > 1 && ipow(m, d) > kMaxCellsTotal) --m;
  return m;
}

inline int cell_coord(double x, std::int64_t m) {
  auto c = static_cast<std::int64_t>(x * static_cast<double>(m));
  if (c >= m) c = m - 1;  // x == 1.0 lands in the top cell
  if (c < 0) c = 0;
  return static_cast<int>(c);
}

}  // namespace

NnIndex::NnIndex(int dim, double cell_hint) : dim_(dim), cell_hint_(cell_hint) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("NnIndex: dimension out of range");
  if (cell_hint < 0.0) throw std::invalid_argument("NnIndex: cell_hint must be >= 0");
  grid_enabled_ = dim <= 3;
  if (grid_enabled_) {
    m_ = target_cells_per_axis(0);
    side_ = 1.0 / static_cast<double>(m_);
    std::size_t cells = 1;
    for (int i = 0; i < dim_; ++i) cells *= static_cast<std::size_t>(m_);
    buckets_.assign(cells, {});
  }
}

void NnIndex::reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }

std::int64_t NnIndex::target_cells_per_axis(std::size_t n) const {
  std::int64_t m = 1;
  if (cell_hint_ > 0.0) {
    const double floor_m = std::ceil(1.0 / cell_hint_);
    if (floor_m > 1.0) m = static_cast<std::int64_t>(floor_m);
  }
  const double by_count =
      std::floor(std::pow(static_cast<double>(n) / kTargetPointsPerCell, 1.0 / dim_));
  if (by_count > static_cast<double>(m)) m = static_cast<std::int64_t>(by_count);
  const std::int64_t cap = cells_cap_for_dim(dim_);
  return std::clamp<std::int64_t>(m, 1, cap);
}

std::int64_t NnIndex::cell_of(const double* p) const {
  std::int64_t id = 0;
  for (int i = dim_ - 1; i >= 0; --i) id = id * m_ + cell_coord(p[i], m_);
  return id;
}

void NnIndex::rebuild_grid(std::int64_t m_new) {
  m_ = m_new;
  side_ = 1.0 / static_cast<double>(m_);
  std::size_t cells = 1;
  for (int i = 0; i < dim_; ++i) cells *= static_cast<std::size_t>(m_);
  buckets_.assign(cells, {});
  for (std::size_t i = 0; i < n_; ++i) {
    buckets_[static_cast<std::size_t>(cell_of(pt(i)))].push_back(static_cast<std::uint32_t>(i));
  }
}

void NnIndex::maybe_resize() {
  if (!grid_enabled_ || n_ < next_resize_) return;
  while (next_resize_ <= n_) next_resize_ *= 2;
  const std::int64_t m_new = target_cells_per_axis(n_);
  if (m_new != m_) rebuild_grid(m_new);
}

std::size_t NnIndex::insert(const Point& p) {
  if (p.dim() != dim_) throw std::invalid_argument("NnIndex::insert: dimension mismatch");
  if (n_ >= std::numeric_limits<std::uint32_t>::max()) throw std::length_error("NnIndex: full");
  const std::size_t idx = n_;
  coords_.insert(coords_.end(), p.data(), p.data() + dim_);
  ++n_;
  if (grid_enabled_) {
    buckets_[static_cast<std::size_t>(cell_of(pt(idx)))].push_back(static_cast<std::uint32_t>(idx));
    maybe_resize();
  }
  return idx;
}

NnIndex::Hit NnIndex::nearest_linear(const Point& q) const {
  if (q.dim() != dim_) throw std::invalid_argument("NnIndex::nearest: dimension mismatch");
  if (n_ == 0) throw std::logic_error("NnIndex::nearest: empty index");
  const double* qp = q.data();
  std::size_t best_idx = 0;
  double best_d2 = sq_dist(pt(0), qp, dim_);
  for (std::size_t i = 1; i < n_; ++i) {
    const double d2 = sq_dist(pt(i), qp, dim_);
    if (d2 < best_d2) {  // ascending scan with strict < keeps the smallest index on ties
      best_d2 = d2;
      best_idx = i;
    }
  }
  return {best_idx, std::sqrt(best_d2)};
}

NnIndex::Hit NnIndex::nearest(const Point& q) const {
  if (!grid_enabled_ || n_ <= kLinearCutoff) return nearest_linear(q);
  if (q.dim() != dim_) throw std::invalid_argument("NnIndex::nearest: dimension mismatch");
  const double* qp = q.data();

  std::size_t best_idx = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  auto consider = [&](std::size_t i) {
    const double d2 = sq_dist(pt(i), qp, dim_);
    if (d2 < best_d2 || (d2 == best_d2 && i < best_idx)) {
      best_d2 = d2;
      best_idx = i;
    }
  };

  // Anchor probes bound the search radius up front; pre-cover trees cluster
  // around the root, so index 0 is a deliberately good anchor.
  consider(0);
  consider(n_ - 1);
  consider(n_ / 2);
  consider(n_ / 4);
  consider(n_ / 4 * 3);

  int base[3] = {0, 0, 0};
  for (int i = 0; i < dim_; ++i) base[i] = cell_coord(qp[i], m_);
  const int m = static_cast<int>(m_);
  int max_ring = 0;
  for (int i = 0; i < dim_; ++i) max_ring = std::max(max_ring, std::max(base[i], m - 1 - base[i]));

  for (int r = 0; r <= max_ring; ++r) {
    if (r >= 1) {
      // cells at ring >= r hold points farther than (r-1)*side; the extra
      // ring of slack makes the cutoff immune to cell-boundary roundoff
      const double cut = static_cast<double>(r - 1) * side_;
      if (best_d2 <= cut * cut) break;
    }
    // visit in-bounds cells at Chebyshev cell distance exactly r
    int lo[3], hi[3], off[3];
    bool empty = false;
    for (int i = 0; i < dim_; ++i) {
      lo[i] = std::max(base[i] - r, 0) - base[i];
      hi[i] = std::min(base[i] + r, m - 1) - base[i];
      off[i] = lo[i];
      if (lo[i] > hi[i]) empty = true;
    }
    if (empty) continue;
    for (;;) {
      int linf = 0;
      for (int i = 0; i < dim_; ++i) linf = std::max(linf, std::abs(off[i]));
      if (linf == r) {
        std::int64_t id = 0;
        for (int i = dim_ - 1; i >= 0; --i) id = id * m_ + (base[i] + off[i]);
        for (std::uint32_t pi : buckets_[static_cast<std::size_t>(id)]) consider(pi);
      }
      int k = 0;
      while (k < dim_ && off[k] == hi[k]) {
        off[k] = lo[k];
        ++k;
      }
      if (k == dim_) break;
      ++off[k];
    }
  }
  return {best_idx, std::sqrt(best_d2)};
}

NnIndex::Hit nearest_bruteforce(const std::vector<Point>& points, const Point& q) {
  if (points.empty()) throw std::logic_error("nearest_bruteforce: empty point set");
  for (const Point& p : points) {
    if (p.dim() != q.dim()) throw std::invalid_argument("nearest_bruteforce: dimension mismatch");
  }
  std::size_t best_idx = 0;
  double best_d2 = sq_dist(points[0].data(), q.data(), q.dim());
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d2 = sq_dist(points[i].data(), q.data(), q.dim());
    if (d2 < best_d2) {
      best_d2 = d2;
      best_idx = i;
    }
  }
  return {best_idx, std::sqrt(best_d2)};
}

}  // namespace rrtsim
