#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rrtsim/cover.hpp"
#include "rrtsim/nn_index.hpp"
#include "rrtsim/point.hpp"
#include "rrtsim/rng.hpp"
#include "rrtsim/tree.hpp"

using namespace rrtsim;

TEST_CASE("cover grid: geometry, cell ids, clamping") {
  // d=2, eps=0.15 -> m = floor(sqrt(2)/0.15) + 1 = 10, 100 cells
  CoverState st(2, 0.15);
  CHECK(st.cells_per_axis() == 10);
  CHECK(st.cell_count() == 100);
  CHECK(st.dim() == 2);
  CHECK(st.epsilon() == 0.15);
  // axis 0 is the least significant digit of the cell id
  CHECK(st.cell_of(Point{0.35, 0.71}) == 3 + 7 * 10);
  CHECK(st.cell_of(Point{0.0, 0.0}) == 0);
  CHECK(st.cell_of(Point{0.05, 0.95}) == 90);
  // the coordinate 1.0 clamps into the top cell instead of overflowing
  CHECK(st.cell_of(Point{1.0, 1.0}) == 99);
  CHECK_THROWS_AS((void)st.cell_of(Point{0.5}), std::invalid_argument);
  CHECK_THROWS_AS((void)st.occupied(-1), std::out_of_range);
  CHECK_THROWS_AS((void)st.occupied(100), std::out_of_range);

  // cell diagonal is strictly below epsilon for every m the ctor picks, even
  // when sqrt(d)/eps is an exact integer (d=1, eps=0.5 -> 3 cells, not 2)
  for (int d = 1; d <= 4; ++d) {
    for (double eps : {0.5, 0.21, 0.09}) {
      CoverState s(d, eps);
      const double side = 1.0 / static_cast<double>(s.cells_per_axis());
      CHECK(side * std::sqrt(static_cast<double>(d)) < eps);
    }
  }
  CHECK(CoverState(1, 0.5).cells_per_axis() == 3);
}

TEST_CASE("cover grid: ctor rejects bad arguments and oversized grids") {
  CHECK_THROWS_AS(CoverState(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(CoverState(17, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(CoverState(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CoverState(2, -0.5), std::invalid_argument);
  // d=9, eps=0.1 -> m=31, 31^9 ~ 2.6e13 cells: over the 2^31 guard
  CHECK_THROWS_AS(CoverState(9, 0.1), std::invalid_argument);
}

TEST_CASE("cover grid: registration is idempotent and records the cover step") {
  CoverState st(2, 0.15);
  CHECK(st.register_vertex(Point{0.35, 0.71}, 0));
  CHECK_FALSE(st.register_vertex(Point{0.36, 0.72}, 1));  // same cell
  CHECK(st.occupied_cells() == 1);
  CHECK(st.occupied(73));
  CHECK_FALSE(st.occupied(0));
  CHECK_FALSE(st.covered());
  CHECK_FALSE(st.cover_step().has_value());

  // sweep all cell centres; coverage must complete exactly on the last one
  std::int64_t step = 2;
  for (int cy = 0; cy < 10; ++cy) {
    for (int cx = 0; cx < 10; ++cx) {
      CHECK_FALSE((st.covered() && !(cy == 9 && cx == 9)));
      st.register_vertex(Point{(cx + 0.5) / 10.0, (cy + 0.5) / 10.0}, step++);
    }
  }
  CHECK(st.covered());
  CHECK(st.occupied_cells() == 100);
  REQUIRE(st.cover_step().has_value());
  CHECK(*st.cover_step() == 101);  // the sweep's final registration
  // further registrations never move the recorded cover step
  st.register_vertex(Point{0.5, 0.5}, 9999);
  CHECK(*st.cover_step() == 101);
}

TEST_CASE("occupancy transfer check flags synthetic violations") {
  // d=1, eps=0.5 -> 3 cells: [0,1/3), [1/3,2/3), [2/3,1]
  CoverState st(1, 0.5);
  REQUIRE(st.cells_per_axis() == 3);
  st.register_vertex(Point{0.25}, 0);  // occupies cell 0 only

  StepOutcome out;
  out.target = Point{0.9};

  // conforming: draw in an empty cell, vertex in an empty cell
  CHECK(occupancy_transfer_check(st, out, Point{0.75}));
  out.target = Point{0.5};
  CHECK(occupancy_transfer_check(st, out, Point{0.4}));  // both in the empty middle cell
  // conforming: draw occupied, vertex occupied
  out.target = Point{0.1};
  CHECK(occupancy_transfer_check(st, out, Point{0.3}));
  // violation: draw lands in the occupied cell but the vertex claims a new one
  CHECK_FALSE(occupancy_transfer_check(st, out, Point{0.9}));
  // violation: draw would open a new cell but the vertex stays in an old one
  out.target = Point{0.9};
  CHECK_FALSE(occupancy_transfer_check(st, out, Point{0.1}));
}

TEST_CASE("occupancy transfer holds along a real growth run") {
  RngStream rng(424242, 3);
  Tree t = Tree::rrt(Point(2), 0.15);
  NnIndex idx = make_index(t);
  CoverState st(2, 0.15);
  st.register_vertex(t.point(0), 0);
  int violations = 0;
  for (int i = 0; i < 5000; ++i) {
    const StepOutcome out = rrt_step(t, idx, rng);
    if (!occupancy_transfer_check(st, out, t.point(out.new_vertex))) ++violations;
    st.register_vertex(t.point(out.new_vertex), static_cast<std::int64_t>(out.new_vertex));
  }
  CHECK(violations == 0);
  CHECK(st.covered());
}

TEST_CASE("uncovered witness search") {
  RngStream rng(7, 0);
  // centre vertex with eps=1: the farthest corner is sqrt(0.5) < 1 away
  const std::vector<Point> centre{Point{0.5, 0.5}};
  CHECK_FALSE(uncovered_witness(centre, 1.0, 5000, rng).has_value());
  // origin vertex with a small ball leaves almost everything uncovered
  const std::vector<Point> corner{Point{0.0, 0.0}};
  const auto w = uncovered_witness(corner, 0.1, 5000, rng);
  REQUIRE(w.has_value());
  CHECK(distance(*w, corner[0]) > 0.1);
  CHECK_THROWS_AS((void)uncovered_witness({}, 0.1, 10, rng), std::invalid_argument);

  // a grid-certified cover really is an epsilon-cover
  RngStream grow(11, 0);
  Tree t = Tree::rrt(Point(2), 0.3);
  NnIndex idx = make_index(t);
  CoverState st(2, 0.3);
  st.register_vertex(t.point(0), 0);
  while (!st.covered()) {
    const StepOutcome out = rrt_step(t, idx, grow);
    st.register_vertex(t.point(out.new_vertex), static_cast<std::int64_t>(out.new_vertex));
  }
  std::vector<Point> pts;
  for (std::size_t i = 0; i < t.size(); ++i) pts.push_back(t.point(i));
  CHECK_FALSE(uncovered_witness(pts, 0.3, 20000, rng).has_value());
}

TEST_CASE("ball volume and packing constants") {
  CHECK(ball_volume(1, 0.3) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(ball_volume(2, 1.0) == doctest::Approx(3.14159265358979324).epsilon(1e-12));
  CHECK(ball_volume(3, 1.0) == doctest::Approx(4.18879020478639098).epsilon(1e-12));
  CHECK(ball_volume(2, 0.5) == doctest::Approx(3.14159265358979324 * 0.25).epsilon(1e-12));

  CHECK(beta_const(2, 0.1) == doctest::Approx(100.0 / 3.14159265358979324).epsilon(1e-12));
  // beta is defined as the inverse epsilon-ball volume
  for (int d = 1; d <= 16; ++d) {
    for (double eps : {0.7, 0.2, 0.05}) {
      CHECK(beta_const(d, eps) * ball_volume(d, eps) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  CHECK(alpha_const(2, 0.1) == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(alpha_const(1, 0.25) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(alpha_const(3, 0.5) == doctest::Approx(41.5692193816530556).epsilon(1e-12));
  // alpha (ideal cells, side eps/sqrt(d)) dominates beta (disjoint balls fit inside cells)
  for (int d = 1; d <= 8; ++d) CHECK(alpha_const(d, 0.1) >= beta_const(d, 0.1));

  CHECK_THROWS_AS((void)ball_volume(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)ball_volume(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)beta_const(0, 0.1), std::invalid_argument);
}

TEST_CASE("harmonic numbers and coupon-collector expectation") {
  CHECK(harmonic(0) == 0.0);
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(2) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(harmonic(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
  // Euler-Maclaurin: H_n = ln n + gamma + 1/(2n) - 1/(12 n^2) + O(n^-4)
  const double n = 1e6;
  const double em = std::log(n) + 0.57721566490153286 + 1.0 / (2 * n) - 1.0 / (12 * n * n);
  CHECK(harmonic(1000000) == doctest::Approx(em).epsilon(1e-12));

  CHECK(coupon_expected(1) == 1.0);
  CHECK(coupon_expected(2) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(coupon_expected(100) == doctest::Approx(518.737751763962).epsilon(1e-12));
}

TEST_CASE("coupon-collector simulation matches its expectation") {
  RngStream rng(2024, 0);
  for (int i = 0; i < 50; ++i) CHECK(coupon_simulate(1, rng) == 1);

  double sum = 0.0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) sum += static_cast<double>(coupon_simulate(2, rng));
  // sd(T)=sqrt(2), so the mean of 2000 trials sits within 0.2 of 3 (>6 sigma)
  CHECK(sum / trials == doctest::Approx(3.0).epsilon(0.07));
}

TEST_CASE("grid cover times of uniform draws follow the coupon collector") {
  // d=1, eps=0.26 -> 4 cells; feeding raw uniform draws makes the grid cover
  // time exactly a coupon-collector time on 4 classes
  RngStream rng(5151, 0);
  const int trials = 3000;
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    CoverState st(1, 0.26);
    REQUIRE(st.cell_count() == 4);
    std::int64_t step = 0;
    while (!st.covered()) {
      ++step;
      st.register_vertex(uniform_sample(1, rng), step);
    }
    sum += static_cast<double>(*st.cover_step());
  }
  const double mean = sum / trials;
  // E = 4*H_4 = 25/3, sd ~ 3.8 -> mean of 3000 within +-0.4 (>5 sigma)
  CHECK(mean == doctest::Approx(coupon_expected(4)).epsilon(0.05));
}
