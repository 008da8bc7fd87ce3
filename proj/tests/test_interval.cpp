#include <doctest.h>

#include <cmath>
#include <random>

#include "setpair/branch_bound.hpp"
#include "setpair/interval.hpp"

using namespace setpair;

namespace {

double pick(std::mt19937_64& rng, const Iv& iv) {
  std::uniform_real_distribution<double> u(iv.lo, iv.hi);
  return u(rng);
}

Iv random_iv(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double a = u(rng), b = u(rng);
  if (a > b) std::swap(a, b);
  return Iv{a, b};
}

}  // namespace

TEST_CASE("interval arithmetic encloses sampled values") {
  std::mt19937_64 rng(5);
  const double slack = 1e-12;
  for (int i = 0; i < 2000; ++i) {
    const Iv a = random_iv(rng), b = random_iv(rng);
    const double x = pick(rng, a), y = pick(rng, b);
    const double s = pick(rng, Iv{-3.0, 3.0});

    auto inside = [slack](double v, const Iv& iv) {
      return v >= iv.lo - slack && v <= iv.hi + slack;
    };
    CHECK(inside(x + y, a + b));
    CHECK(inside(x - y, a - b));
    CHECK(inside(x * y, a * b));
    CHECK(inside(s * x, s * a));
    CHECK(inside(x, hull(a, b)));
    CHECK(inside(y, hull(a, b)));
    CHECK(inside(std::max(0.0, x), iv_max0(a)));
    CHECK(inside(std::abs(x), Iv{a.mig(), a.mag()}));
  }
}

TEST_CASE("interval norm and distance enclose pointwise values") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 1 + i % 4;
    IvVec bx(dim), by(dim);
    std::vector<double> px(dim), py(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      bx[k] = random_iv(rng);
      by[k] = random_iv(rng);
      px[k] = pick(rng, bx[k]);
      py[k] = pick(rng, by[k]);
    }
    const Point x(px), y(py);
    for (NormKind kind : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
      const Iv n = iv_norm(bx, kind);
      const Iv d = iv_distance(bx, by, kind);
      CHECK(norm(x, kind) >= n.lo - 1e-12);
      CHECK(norm(x, kind) <= n.hi + 1e-12);
      CHECK(distance(x, y, kind) >= d.lo - 1e-12);
      CHECK(distance(x, y, kind) <= d.hi + 1e-12);
      CHECK(n.lo >= 0.0);
    }
  }
}

TEST_CASE("interval conversion round trips") {
  const Point p{1.0, -2.0};
  IvVec v = to_ivec(p);
  CHECK(v.size() == 2);
  CHECK(v[0].lo == 1.0);
  CHECK(v[0].hi == 1.0);

  IvVec b = to_ivec(Box{Point{0.0, -1.0}, Point{2.0, 1.0}});
  CHECK(b[0].lo == 0.0);
  CHECK(b[0].hi == 2.0);
  CHECK(b[1].lo == -1.0);
  CHECK(b[1].hi == 1.0);
}

TEST_CASE("branch and bound certifies the sup of a smooth function") {
  // sup over [-1,1]^2 of -(x-0.3)^2 - 2 (y+0.4)^2 + 5 is 5 at (0.3, -0.4).
  Box box{Point{-1.0, -1.0}, Point{1.0, 1.0}};
  auto f = [](double x, double y) {
    return -(x - 0.3) * (x - 0.3) - 2.0 * (y + 0.4) * (y + 0.4) + 5.0;
  };
  auto value_at = [&](const Point& p) { return f(p[0], p[1]); };
  auto upper_on = [&](const IvVec& b) {
    const Iv dx = b[0] + (-0.3), dy = b[1] + 0.4;
    const Iv v = Iv::point(5.0) - dx * dx - 2.0 * (dy * dy);
    return v.hi;
  };
  BbResult r = bb_sup(box, value_at, upper_on, 1e-9, 200000);
  CHECK(r.converged);
  CHECK(r.lo <= 5.0);
  CHECK(r.hi >= 5.0);
  CHECK(r.hi - r.lo <= 1e-9);
  CHECK(r.hi == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("branch and bound does not split inactive coordinates away from convergence") {
  // A function of x alone on a 3-d box: the budget stays small because only
  // the active axis is refined.
  Box box{Point{-1.0, -1.0, -1.0}, Point{1.0, 1.0, 1.0}};
  auto value_at = [](const Point& p) { return -(p[0] - 0.5) * (p[0] - 0.5); };
  auto upper_on = [](const IvVec& b) {
    const Iv dx = b[0] + (-0.5);
    return (Iv::point(0.0) - dx * dx).hi;
  };
  BbResult r = bb_sup(box, value_at, upper_on, 1e-10, 5000);
  CHECK(r.converged);
  CHECK(r.boxes < 1000);
  CHECK(r.hi == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("branch and bound reports non-convergence inside a tiny budget") {
  Box box{Point{-1.0}, Point{1.0}};
  auto value_at = [](const Point& p) { return std::sin(50.0 * p[0]); };
  auto upper_on = [](const IvVec&) { return 1.0; };  // uninformative bound
  BbResult r = bb_sup(box, value_at, upper_on, 1e-12, 8);
  CHECK(!r.converged);
  CHECK(r.hi == 1.0);
  CHECK(r.lo <= r.hi);
}
