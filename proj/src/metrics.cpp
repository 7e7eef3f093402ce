#include "rrtsim/metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rrtsim {

namespace {

bool power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

SeriesSample SeriesRecorder::record_step(const Tree& t, const StepOutcome& out) {
  if (out.new_vertex + 1 != t.size() || out.new_vertex == 0) {
    throw std::invalid_argument("record_step: outcome is not the tree's latest step");
  }
  SeriesSample s;
  s.n = static_cast<std::int64_t>(out.new_vertex);
  s.delta = t.edge_length(out.new_vertex);
  s.delta_scaled = s.delta * std::sqrt(std::numbers::pi * static_cast<double>(s.n));
  cum_ += s.delta;
  s.cum_length = cum_;
  s.root_path = power_of_two(s.n) ? t.root_path_length(out.new_vertex)
                                  : std::numeric_limits<double>::quiet_NaN();
  s.depth = t.depth(out.new_vertex);
  s.height = t.height();
  if (keep_rows_) rows_.push_back(s);
  return s;
}

double tail_bound_delta(std::int64_t n, double x) {
  if (n < 1) throw std::invalid_argument("tail_bound_delta: n must be >= 1");
  const double pix2 = std::numbers::pi * x * x;
  if (!(x >= 0.0) || pix2 > 1.0) {
    throw std::domain_error("tail_bound_delta: requires 0 <= x <= 1/sqrt(pi)");
  }
  return std::pow(1.0 - pix2, static_cast<double>(n - 1));
}

std::int32_t depth_model_sample(std::int64_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("depth_model_sample: n must be >= 1");
  std::int32_t k = 0;
  std::int64_t v = n;
  while (v > 0) {
    v = static_cast<std::int64_t>(static_cast<double>(v) * rng.next_double());
    ++k;
  }
  return k;
}

double depth_tail_bound(std::int64_t n, double x) {
  if (n < 2) throw std::invalid_argument("depth_tail_bound: n must be >= 2");
  const double ln_n = std::log(static_cast<double>(n));
  if (!(x > ln_n)) throw std::domain_error("depth_tail_bound: requires x > ln n");
  const double bound = std::pow(std::numbers::e * ln_n / x, x) / static_cast<double>(n);
  return bound > 1.0 ? 1.0 : bound;
}

}  // namespace rrtsim
