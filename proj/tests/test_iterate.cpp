#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "setpair/generators.hpp"
#include "setpair/iterate.hpp"

using namespace setpair;

namespace {

Domain square() { return Domain::box(Point{-1.0, -1.0}, Point{1.0, 1.0}); }

Domain segment() { return Domain::box(Point{-1.0}, Point{1.0}); }

MapExpr scale1d(double k, double b = 0.0) {
  return MapExpr::affine(Matrix::scaled_identity(1, k), Point{b});
}

}  // namespace

TEST_CASE("constant pair converges in one step") {
  Domain d = square();
  const Point c{0.25, -0.5};
  PairMap p{MapExpr::constant(c), MapExpr::constant(c)};
  IterationParams params;
  TrajectoryReport t = iterate(p, d, NormKind::L2, Point{1.0, 1.0}, params);
  CHECK(t.converged);
  CHECK(t.steps.size() == 1);
  CHECK(t.last == c);
  REQUIRE(t.limit.has_value());
  CHECK(*t.limit == c);
  CHECK(t.regular);

  // CSV: header plus one step row plus the limit row.
  std::istringstream csv(trajectory_csv(t));
  std::string line;
  int rows = 0;
  std::getline(csv, line);
  CHECK(line == "index,x0,x1,chosen,gap,step_len");
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("nearest branch is chosen at every step") {
  // f = 0.5x, g = 0.9x on [-1,1] from x0 = 1: |x - 0.9x| < |x - 0.5x| for
  // x > 0, so the second branch wins every step and the limit is 0.
  Domain d = segment();
  PairMap p{scale1d(0.5), scale1d(0.9)};
  IterationParams params;
  params.max_steps = 500;
  TrajectoryReport t = iterate(p, d, NormKind::L2, Point{1.0}, params);
  CHECK(t.converged);
  for (const StepRecord& s : t.steps) {
    CHECK(s.taken == Branch::Second);
    CHECK(!s.tie);
  }
  CHECK(std::abs(t.last[0]) <= 1e-9);
}

TEST_CASE("coincident branches reproduce the single-map Banach iteration") {
  Domain d = square();
  std::mt19937_64 rng(51);
  MapExpr f = random_affine_contraction(d, NormKind::L2, rng);
  PairMap p{f, f};
  IterationParams params;
  TrajectoryReport t = iterate(p, d, NormKind::L2, Point{0.9, -0.9}, params);
  CHECK(t.regular);  // singleton projections throughout
  Point x{0.9, -0.9};
  for (const StepRecord& s : t.steps) {
    CHECK(s.point == x);
    x = evaluate(f, x);
  }
  CHECK(t.last == x);
}

TEST_CASE("driver agrees with an independent step-by-step simulation") {
  Domain d = square();
  std::mt19937_64 rng(52);
  for (int i = 0; i < 50; ++i) {
    PairMap p = random_contraction_pair(d, NormKind::L2, rng);
    const Point x0 = d.sample(rng);
    IterationParams params;
    params.max_steps = 60;
    params.stop_on_converge = false;
    TrajectoryReport t = iterate(p, d, NormKind::L2, x0, params);
    const std::vector<Point> want = oracles::simulate(p, NormKind::L2, x0, 60);
    const std::vector<Point> got = t.points();
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(got[k] == want[k]);
  }
}

TEST_CASE("tie handling follows the branch rule") {
  // Symmetric pair about x0: the first step is an exact tie.
  Domain d = square();
  std::mt19937_64 rng(53);
  const Point x0{0.1, 0.2};
  PairMap p = symmetric_tie_pair(d, NormKind::L2, x0, rng);

  IterationParams params;
  TrajectoryReport t1 = iterate(p, d, NormKind::L2, x0, params);
  CHECK(!t1.regular);
  CHECK(t1.steps.front().tie);
  CHECK(t1.steps.front().taken == Branch::First);

  params.branch_rule = BranchRule::SecondListed;
  TrajectoryReport t2 = iterate(p, d, NormKind::L2, x0, params);
  CHECK(t2.steps.front().taken == Branch::Second);

  params.branch_rule = BranchRule::Fail;
  CHECK_THROWS_AS(iterate(p, d, NormKind::L2, x0, params), TieError);
}

TEST_CASE("regular trajectories are branch-rule independent") {
  Domain d = square();
  std::mt19937_64 rng(54);
  for (int i = 0; i < 20; ++i) {
    PairMap p = random_contraction_pair(d, NormKind::L2, rng);
    const Point x0 = d.sample(rng);
    IterationParams a, b;
    b.branch_rule = BranchRule::SecondListed;
    TrajectoryReport ta = iterate(p, d, NormKind::L2, x0, a);
    if (!ta.regular) continue;
    TrajectoryReport tb = iterate(p, d, NormKind::L2, x0, b);
    REQUIRE(ta.steps.size() == tb.steps.size());
    for (std::size_t k = 0; k < ta.steps.size(); ++k) {
      CHECK(ta.steps[k].point == tb.steps[k].point);
    }
  }
}

TEST_CASE("banach bound on a single 1-d contraction matches the geometric series") {
  // L = 0.5 from x0 = 1: ||x_{n+k} - x_n|| <= 0.5 * 0.5^n / 0.5 = 0.5^n.
  Domain d = segment();
  PairMap p{scale1d(0.5), scale1d(0.5)};
  IterationParams params;
  TrajectoryReport t = iterate(p, d, NormKind::L2, Point{1.0}, params);
  CHECK(check_banach_bound(t, NormKind::L2, 0.5));
  const std::vector<Point> pts = t.points();
  for (std::size_t n = 0; n < pts.size(); ++n) {
    for (std::size_t k = n + 1; k < pts.size(); ++k) {
      CHECK(std::abs(pts[k][0] - pts[n][0]) <= std::pow(0.5, double(n)) + 1e-12);
    }
  }
  CHECK_THROWS_AS(check_banach_bound(t, NormKind::L2, 1.0), ContractViolation);
}

TEST_CASE("banach bound rejects a fabricated non-contractive record") {
  TrajectoryReport t;
  StepRecord s0, s1;
  s0.index = 0;
  s0.point = Point{0.0};
  s0.step_len = 0.1;
  s1.index = 1;
  s1.point = Point{0.1};
  s1.step_len = 0.9;  // grows: violates stepwise contraction for L = 0.5
  t.steps = {s0, s1};
  t.last = Point{1.0};
  CHECK(!check_banach_bound(t, NormKind::L2, 0.5));
}

TEST_CASE("cycle detection: constant tail and strictly moving trajectories") {
  Domain d = segment();
  PairMap p{MapExpr::constant(Point{0.5}), MapExpr::constant(Point{0.5})};
  IterationParams params;
  params.stop_on_converge = false;
  params.max_steps = 10;
  TrajectoryReport t = iterate(p, d, NormKind::L2, Point{-1.0}, params);
  auto cyc = detect_cycle(t, NormKind::L2, 1e-12);
  REQUIRE(cyc.has_value());
  CHECK(cyc->start == 1);
  CHECK(cyc->period == 1);
  CHECK(cyc->fixed_point_tail);

  // A geometric approach recorded far from convergence has no near-repeat.
  PairMap q{scale1d(0.5), scale1d(0.5)};
  params.max_steps = 20;
  TrajectoryReport t2 = iterate(q, d, NormKind::L2, Point{1.0}, params);
  CHECK(!detect_cycle(t2, NormKind::L2, 1e-12).has_value());
}

TEST_CASE("cycle detection finds the smallest start and period") {
  // Hand-built record visiting a, b, a, b: smallest near-repeat is (0, 2).
  TrajectoryReport t;
  const Point a{0.0}, b{0.6};
  for (int i = 0; i < 4; ++i) {
    StepRecord s;
    s.index = i;
    s.point = i % 2 == 0 ? a : b;
    s.step_len = 0.6;
    t.steps.push_back(s);
  }
  t.last = a;
  auto cyc = detect_cycle(t, NormKind::L2, 1e-12);
  REQUIRE(cyc.has_value());
  CHECK(cyc->start == 0);
  CHECK(cyc->period == 2);
  CHECK(!cyc->fixed_point_tail);  // flagged: a genuine-looking cycle
}

TEST_CASE("tail lock-in against a brute-force scan") {
  Domain d = Domain::box(Point{0.0}, Point{1.0});
  // f = 0.5x (fixed point 0), g = 0.5x + 0.4 (fixed point 0.8).
  PairMap p{scale1d(0.5), scale1d(0.5, 0.4)};
  IterationParams params;
  TrajectoryReport t = iterate(p, d, NormKind::L2, Point{1.0}, params);
  LockInDescriptor lock = tail_lock_in(t, p, d, NormKind::L2);

  // Brute-force: the last index whose step chose a different branch (or
  // tied) determines N; radius is the max tail distance to the fixed point.
  long expect_n = 0;
  for (std::size_t n = 0; n < t.steps.size(); ++n) {
    if (t.steps[n].taken != lock.branch || t.steps[n].tie) expect_n = long(n) + 1;
  }
  CHECK(lock.index == expect_n);
  const std::vector<Point> pts = t.points();
  double expect_r = 0.0;
  for (std::size_t n = std::size_t(expect_n); n < pts.size(); ++n) {
    expect_r = std::max(expect_r, distance(pts[n], lock.fixed_point, NormKind::L2));
  }
  CHECK(lock.radius == doctest::Approx(expect_r));
  CHECK(distance(t.last, lock.fixed_point, NormKind::L2) <= lock.radius + 1e-15);

  // Coincident fixed points are a precondition violation.
  PairMap bad{scale1d(0.5), scale1d(0.25)};
  TrajectoryReport tb = iterate(bad, d, NormKind::L2, Point{1.0}, params);
  CHECK_THROWS_AS(tail_lock_in(tb, bad, d, NormKind::L2), PreconditionError);
}

TEST_CASE("x0 already at the locked-in fixed point gives index 0") {
  Domain d = Domain::box(Point{0.0}, Point{1.0});
  PairMap p{scale1d(0.5), scale1d(0.5, 0.4)};
  IterationParams params;
  TrajectoryReport t = iterate(p, d, NormKind::L2, Point{0.0}, params);
  LockInDescriptor lock = tail_lock_in(t, p, d, NormKind::L2);
  CHECK(lock.index == 0);
  CHECK(lock.radius <= 1e-12);
}

TEST_CASE("trajectory CSV rows parse back to the exact doubles") {
  Domain d = square();
  std::mt19937_64 rng(55);
  PairMap p = random_contraction_pair(d, NormKind::L2, rng);
  IterationParams params;
  params.max_steps = 20;
  params.stop_on_converge = false;
  TrajectoryReport t = iterate(p, d, NormKind::L2, d.sample(rng), params);
  std::istringstream csv(trajectory_csv(t));
  std::string line;
  std::getline(csv, line);  // header
  for (const StepRecord& s : t.steps) {
    REQUIRE(std::getline(csv, line));
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    CHECK(std::stol(cell) == s.index);
    for (std::size_t i = 0; i < 2; ++i) {
      std::getline(row, cell, ',');
      CHECK(std::stod(cell) == s.point[i]);  // 17 significant digits round-trip
    }
    std::getline(row, cell, ',');
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == s.gap);
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == s.step_len);
  }
}

TEST_CASE("iteration input validation") {
  Domain d = square();
  PairMap p{MapExpr::identity(2), MapExpr::identity(2)};
  IterationParams params;
  CHECK_THROWS_AS(iterate(p, d, NormKind::L2, Point{2.0, 0.0}, params), DomainError);
  params.max_steps = 0;
  CHECK_THROWS_AS(iterate(p, d, NormKind::L2, Point{0.0, 0.0}, params), InputError);
  params.max_steps = 10;
  params.conv_tol = 0.0;
  CHECK_THROWS_AS(iterate(p, d, NormKind::L2, Point{0.0, 0.0}, params), InputError);
}
