#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rrtsim/cover.hpp"
#include "rrtsim/metrics.hpp"
#include "rrtsim/nn_index.hpp"
#include "rrtsim/point.hpp"
#include "rrtsim/rng.hpp"
#include "rrtsim/stats.hpp"
#include "rrtsim/tree.hpp"

using namespace rrtsim;

namespace {

bool is_pow2(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

/// Recomputes vertex v's root-path length by walking parents.
double root_path_of(const Tree& t, std::size_t v) {
  double sum = 0.0;
  for (std::size_t u = v; t.parent(u) >= 0; u = static_cast<std::size_t>(t.parent(u))) {
    sum += t.edge_length(u);
  }
  return sum;
}

}  // namespace

TEST_CASE("series recorder mirrors the tree's own accessors") {
  RngStream rng(606, 0);
  Tree t = Tree::nnt(uniform_sample(2, rng));
  NnIndex idx = make_index(t);
  SeriesRecorder rec(true);

  double cum = 0.0;
  std::int32_t max_depth = 0;
  for (int i = 0; i < 600; ++i) {
    const StepOutcome out = nnt_step(t, idx, rng);
    const SeriesSample row = rec.record_step(t, out);
    const std::size_t v = out.new_vertex;
    REQUIRE(row.n == static_cast<std::int64_t>(v));
    REQUIRE(row.delta == t.edge_length(v));
    REQUIRE(row.delta_scaled ==
            row.delta * std::sqrt(3.14159265358979324 * static_cast<double>(row.n)));
    cum += row.delta;
    REQUIRE(row.cum_length == doctest::Approx(cum).epsilon(1e-12));
    REQUIRE(row.depth == t.depth(v));
    max_depth = std::max(max_depth, t.depth(v));
    REQUIRE(row.height == max_depth);
    REQUIRE(row.height == t.height());
    if (is_pow2(row.n)) {
      REQUIRE(row.root_path == doctest::Approx(root_path_of(t, v)).epsilon(1e-12));
      // the root path includes the newest edge and never exceeds total length
      REQUIRE(row.root_path >= row.delta - 1e-15);
      REQUIRE(row.root_path <= row.cum_length + 1e-12);
    } else {
      REQUIRE(std::isnan(row.root_path));
    }
  }
  CHECK(rec.cum_length() == doctest::Approx(cum).epsilon(1e-12));
  CHECK(rec.rows().size() == 600);

  // rows disabled: aggregation still runs, storage stays empty
  RngStream rng2(606, 0);
  Tree t2 = Tree::nnt(uniform_sample(2, rng2));
  NnIndex idx2 = make_index(t2);
  SeriesRecorder lean;
  for (int i = 0; i < 600; ++i) lean.record_step(t2, nnt_step(t2, idx2, rng2));
  CHECK(lean.rows().empty());
  CHECK(lean.cum_length() == rec.cum_length());
}

TEST_CASE("series recorder rejects stale step outcomes") {
  RngStream rng(607, 0);
  Tree t = Tree::rrt(Point(2), 0.2);
  NnIndex idx = make_index(t);
  SeriesRecorder rec;
  const StepOutcome first = rrt_step(t, idx, rng);
  rec.record_step(t, first);
  (void)rrt_step(t, idx, rng);
  CHECK_THROWS_AS((void)rec.record_step(t, first), std::invalid_argument);
}

TEST_CASE("nearest-distance tail bound formula") {
  // (1 - pi x^2)^(n-1); n=1 has no competitors, so the tail is 1
  CHECK(tail_bound_delta(1, 0.1) == 1.0);
  CHECK(tail_bound_delta(2, 0.1) == doctest::Approx(0.968584073464102).epsilon(1e-14));
  CHECK(tail_bound_delta(101, 0.1) == doctest::Approx(0.04108964240172121).epsilon(1e-13));
  CHECK(tail_bound_delta(101, 0.05) == doctest::Approx(0.45452668255188705).epsilon(1e-13));
  // at x = 1/sqrt(pi) the ball fills the unit volume and the tail vanishes
  CHECK(tail_bound_delta(2, 1.0 / std::sqrt(3.14159265358979324)) ==
        doctest::Approx(0.0).scale(1).epsilon(1e-14));
  CHECK(tail_bound_delta(50, 0.0) == 1.0);

  CHECK_THROWS_AS((void)tail_bound_delta(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS((void)tail_bound_delta(10, -0.01), std::domain_error);
  CHECK_THROWS_AS((void)tail_bound_delta(10, 0.6), std::domain_error);

  // decreasing in x and in n
  CHECK(tail_bound_delta(100, 0.02) > tail_bound_delta(100, 0.05));
  CHECK(tail_bound_delta(1000, 0.05) < tail_bound_delta(100, 0.05));
}

TEST_CASE("depth-model sampler: support, first value, mean near H_n") {
  RngStream rng(808, 0);
  for (int i = 0; i < 100; ++i) CHECK(depth_model_sample(1, rng) == 1);

  std::vector<double> ds;
  for (int i = 0; i < 4000; ++i) {
    const std::int32_t d = depth_model_sample(1000, rng);
    REQUIRE(d >= 1);
    REQUIRE(d <= 1000);
    ds.push_back(static_cast<double>(d));
  }
  // E[D_n] = H_n = 7.48547...; sd ~ 2.4 so 4000 draws pin the mean to +-0.2
  const Summary s = summarize(ds);
  CHECK(s.mean == doctest::Approx(harmonic(1000)).epsilon(0.027));
  CHECK_THROWS_AS((void)depth_model_sample(0, rng), std::invalid_argument);
}

TEST_CASE("attachment depths match the index-walk model in distribution") {
  // for iid uniform points the nearest prior index is uniform by
  // exchangeability, so vertex n's depth follows the index walk exactly
  RngStream model_rng(71, 0);
  const std::int64_t n = 300;
  const int reps = 3000;
  std::vector<double> model, grown;
  for (int r = 0; r < reps; ++r) {
    model.push_back(static_cast<double>(depth_model_sample(n, model_rng)));
  }
  for (int r = 0; r < reps; ++r) {
    RngStream rng(9000, static_cast<std::uint64_t>(r));
    Tree t = Tree::nnt(uniform_sample(2, rng));
    NnIndex idx = make_index(t);
    StepOutcome out;
    for (std::int64_t i = 0; i < n; ++i) out = nnt_step(t, idx, rng);
    grown.push_back(static_cast<double>(t.depth(out.new_vertex)));
  }
  const double ks = ks_statistic(model, grown);
  CHECK(ks < ks_critical_value(model.size(), grown.size(), 0.001));
}

TEST_CASE("depth tail bound formula, clip, and domain") {
  CHECK(depth_tail_bound(2, 2.0) == doctest::Approx(0.4437617840927373).epsilon(1e-13));
  CHECK(depth_tail_bound(100, 10.0) == doctest::Approx(0.09449344066446477).epsilon(1e-13));
  // the bound maximises at x ~ ln n where it touches 1; it must stay clipped
  for (double x : {0.70, 0.75, 1.0, 3.0}) CHECK(depth_tail_bound(2, x) <= 1.0);
  // decreasing for x past ln n
  double prev = 2.0;
  for (double x : {5.0, 8.0, 12.0, 20.0}) {
    const double b = depth_tail_bound(100, x);
    CHECK(b < prev);
    prev = b;
  }
  CHECK_THROWS_AS((void)depth_tail_bound(1, 5.0), std::invalid_argument);
  CHECK_THROWS_AS((void)depth_tail_bound(100, std::log(100.0)), std::domain_error);
  CHECK_THROWS_AS((void)depth_tail_bound(100, 1.0), std::domain_error);
}
