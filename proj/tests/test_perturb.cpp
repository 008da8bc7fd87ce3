#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "setpair/generators.hpp"
#include "setpair/perturb.hpp"

using namespace setpair;

namespace {

Domain square() { return Domain::box(Point{-1.0, -1.0}, Point{1.0, 1.0}); }

double sampled_dev(const MapExpr& a, const MapExpr& b, const Domain& d, NormKind kind,
                   std::mt19937_64& rng, int n = 2000) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point x = d.sample(rng);
    worst = std::max(worst, distance(evaluate(a, x), evaluate(b, x), kind));
  }
  return worst;
}

}  // namespace

TEST_CASE("shift keeps the map close and shrinks the modulus") {
  Domain d = square();
  std::mt19937_64 rng(61);
  for (double eps : {0.01, 0.1}) {
    for (int i = 0; i < 20; ++i) {
      MapExpr f = random_affine_contraction(d, NormKind::L2, rng, 0.2, 0.8);
      MapExpr phi = shift_toward(f, eps, d, NormKind::L2, rng());

      const auto& node = phi.as_shifted_node();
      const double diam = d.diameter(NormKind::L2).hi;
      CHECK(node.delta < eps / diam + 1e-15);
      CHECK(lipschitz_bound(phi, NormKind::L2) ==
            doctest::Approx((1.0 - node.delta) * lipschitz_bound(f, NormKind::L2))
                .epsilon(1e-14));

      // phi(x) - f(x) = delta (y - f(x)), so the uniform distance stays
      // below delta * diam < eps; the certified value agrees.
      CHECK(d_infty(f, phi, d, NormKind::L2, 1).hi < eps);
      CHECK(sampled_dev(f, phi, d, NormKind::L2, rng, 500) < eps);

      // The shifted map has a different fixed point.
      const Point xi = fixed_point(f, d, NormKind::L2, 1e-12);
      const Point eta = fixed_point(phi, d, NormKind::L2, 1e-12);
      CHECK(distance(xi, eta, NormKind::L2) > 0.0);
    }
  }
  MapExpr f = random_affine_contraction(d, NormKind::L2, rng);
  CHECK_THROWS_AS(shift_toward(f, 0.0, d, NormKind::L2, 1), InputError);
  CHECK_THROWS_AS(shift_toward(MapExpr::constant(Point{0.0, 0.0}), 0.1, d, NormKind::L2, 1),
                  PreconditionError);
  CHECK_THROWS_AS(shift_toward(MapExpr::identity(2), 0.1, d, NormKind::L2, 1),
                  ContractViolation);
}

TEST_CASE("identity averaging: pointwise formula, margin, and closeness") {
  Domain d = square();
  std::mt19937_64 rng(62);
  MapExpr f = random_affine_contraction(d, NormKind::L2, rng, 0.2, 0.8);
  const double eps = 0.2;
  auto [phi, theta] = average_identity(f, eps, d, NormKind::L2);

  const double t = phi.as_averaged_node().t;
  CHECK(theta == 1.0 / t);
  CHECK(theta > 1.0);
  const double diam = d.diameter(NormKind::L2).hi;
  CHECK((1.0 - t) * diam < eps);

  for (int i = 0; i < 200; ++i) {
    const Point x = d.sample(rng);
    const Point want = (1.0 - t) * x + t * evaluate(f, x);
    CHECK(distance(evaluate(phi, x), want, NormKind::L2) <= 1e-15);
  }
  // ||phi - f|| = (1-t) ||x - f(x)|| <= (1-t) diam < eps.
  CHECK(sampled_dev(f, phi, d, NormKind::L2, rng) < eps);
  CHECK_THROWS_AS(average_identity(f, 0.0, d, NormKind::L2), InputError);
}

TEST_CASE("bump push: coefficient formula and certificates") {
  Domain d = square();
  std::mt19937_64 rng(63);
  for (int i = 0; i < 20; ++i) {
    MapExpr f = random_affine_contraction(d, NormKind::L2, rng, 0.2, 0.6);
    const double lip = lipschitz_bound(f, NormKind::L2);
    const Point eta = d.sample(rng);
    const double sigma = 0.15;
    const double eps = 0.05;
    const double theta0 = extension_margin(f, d, NormKind::L2);
    if (!(theta0 > 1.0)) continue;

    MapExpr b = bump_push(f, eta, sigma, eps, theta0, NormKind::L2);
    const auto& node = b.as_bump_node();
    const double alpha =
        std::min({(1.0 - lip) / 4.0, eps / (2.0 * sigma), (theta0 - 1.0) / (2.0 * sigma)});
    CHECK(node.alpha == alpha);
    CHECK(node.sigma == sigma);

    // Still a strict contraction, identity off the support, and within
    // sigma * alpha of the base everywhere.
    CHECK(lipschitz_bound(b, NormKind::L2) <= lip + 3.0 * alpha);
    CHECK(lip + 3.0 * alpha < 1.0);
    const double dev = sampled_dev(f, b, d, NormKind::L2, rng, 500);
    CHECK(dev <= sigma * alpha + 1e-15);
    for (int k = 0; k < 100; ++k) {
      const Point x = d.sample(rng);
      if (distance(x, eta, NormKind::L2) >= sigma) {
        CHECK(evaluate(b, x) == evaluate(f, x));
      }
    }
  }
  MapExpr f = random_affine_contraction(d, NormKind::L2, rng, 0.2, 0.6);
  CHECK_THROWS_AS(bump_push(f, Point{0.0, 0.0}, 0.1, 0.05, 1.0, NormKind::L2),
                  PreconditionError);
  CHECK_THROWS_AS(bump_push(f, Point{0.0, 0.0}, 0.0, 0.05, 2.0, NormKind::L2), InputError);
}

TEST_CASE("fixed point distance bound covers the measured displacement") {
  Domain d = square();
  std::mt19937_64 rng(64);
  for (int i = 0; i < 30; ++i) {
    MapExpr f = random_affine_contraction(d, NormKind::L2, rng, 0.2, 0.8);
    MapExpr g = shift_toward(f, 0.1, d, NormKind::L2, rng());
    const double eps = d_infty(f, g, d, NormKind::L2, 1).hi + 1e-15;
    const double bound = fixed_point_distance_bound(f, g, NormKind::L2, eps);

    const double lf = lipschitz_bound(f, NormKind::L2);
    const double lg = lipschitz_bound(g, NormKind::L2);
    CHECK(bound == std::min(eps / (1.0 - lf), eps / (1.0 - lg)));

    const Point xi = fixed_point(f, d, NormKind::L2, 1e-13);
    const Point eta = fixed_point(g, d, NormKind::L2, 1e-13);
    CHECK(distance(xi, eta, NormKind::L2) <= bound + 1e-10);
  }
  CHECK_THROWS_AS(fixed_point_distance_bound(MapExpr::identity(2), MapExpr::identity(2),
                                             NormKind::L2, 0.1),
                  ContractViolation);
}

TEST_CASE("layered perturbation bound adds per-layer contributions") {
  Domain d = square();
  std::mt19937_64 rng(65);
  MapExpr f = random_affine_contraction(d, NormKind::L2, rng, 0.2, 0.6);
  CHECK(perturbation_sup_bound(f, d, NormKind::L2) == 0.0);

  MapExpr shifted = MapExpr::shifted(f, Point{0.1, -0.2}, 0.01);
  const double diam = d.diameter(NormKind::L2).hi;
  CHECK(perturbation_sup_bound(shifted, d, NormKind::L2) == doctest::Approx(0.01 * diam));

  const double theta0 = extension_margin(f, d, NormKind::L2);
  REQUIRE(theta0 > 1.0);
  MapExpr layered = bump_push(shifted, Point{0.3, 0.3}, 0.1, 0.02, theta0, NormKind::L2);
  const auto& node = layered.as_bump_node();
  const double want = node.sigma * node.alpha + 0.01 * diam;
  CHECK(perturbation_sup_bound(layered, d, NormKind::L2) == doctest::Approx(want));

  // The bound dominates the sampled uniform deviation from the base.
  CHECK(sampled_dev(f, layered, d, NormKind::L2, rng) <= want + 1e-12);
}

TEST_CASE("regularization resolves an engineered tie and replays the trajectory") {
  Domain d = square();
  std::mt19937_64 rng(66);
  const Point x0{0.15, -0.2};
  for (int i = 0; i < 10; ++i) {
    PairMap p = symmetric_tie_pair(d, NormKind::L2, x0, rng);
    IterationParams params;
    TrajectoryReport t = iterate(p, d, NormKind::L2, x0, params);
    REQUIRE(t.converged);
    REQUIRE(!t.regular);

    RegularizationResult r =
        regularize_pair(p.first, p.second, d, NormKind::L2, t, 0.05, params);
    CHECK(!r.touched_indices.empty());
    CHECK(r.margin > 0.0);
    CHECK(r.distance_bound > 0.0);
    CHECK(r.distance_bound < 0.05);

    TrajectoryReport rt = iterate(PairMap{r.phi, r.psi}, d, NormKind::L2, x0, params);
    CHECK(rt.regular);
    const std::vector<Point> orig = t.points();
    const std::vector<Point> replay = rt.points();
    for (std::size_t n = 0; n < std::min(orig.size(), replay.size()); ++n) {
      CHECK(distance(orig[n], replay[n], NormKind::L2) <= 1e-12);
    }
  }
}

TEST_CASE("regularization is the identity on an already regular trajectory") {
  Domain d = square();
  std::mt19937_64 rng(67);
  PairMap p = random_contraction_pair(d, NormKind::L2, rng, 0.2, 0.7);
  IterationParams params;
  TrajectoryReport t = iterate(p, d, NormKind::L2, Point{0.5, 0.5}, params);
  REQUIRE(t.regular);
  REQUIRE(t.converged);
  RegularizationResult r =
      regularize_pair(p.first, p.second, d, NormKind::L2, t, 0.05, params);
  CHECK(r.touched_indices.empty());
  CHECK(r.distance_bound == 0.0);
  CHECK(r.margin > 0.0);
  CHECK(r.phi == p.first);
  CHECK(r.psi == p.second);
  CHECK_THROWS_AS(regularize_pair(p.first, p.second, d, NormKind::L2, t, 0.0, params),
                  InputError);
}

TEST_CASE("stability constants are positive and consistent with the trajectory") {
  Domain d = square();
  std::mt19937_64 rng(68);
  int done = 0;
  while (done < 10) {
    PairMap p = random_contraction_pair(d, NormKind::L2, rng, 0.2, 0.8);
    IterationParams params;
    TrajectoryReport t = iterate(p, d, NormKind::L2, d.sample(rng), params);
    if (!t.regular || !t.converged) continue;
    LockInDescriptor lock;
    try {
      lock = tail_lock_in(t, p, d, NormKind::L2);
    } catch (const PreconditionError&) {
      continue;
    }
    ++done;

    const double eps_ref = 0.1;
    StabilityConstants c =
        stability_constants(p.first, p.second, d, NormKind::L2, t, StabilityMetric::H, eps_ref);
    CHECK(c.eps0 > 0.0);
    CHECK(c.eps0 <= 0.5);
    CHECK(c.alpha > 0.0);
    CHECK(c.sigma > 0.0);
    CHECK(c.limit_branch == lock.branch);
    CHECK(c.xi == lock.fixed_point);

    // eps0 never exceeds a third of the other branch's displacement at xi.
    const MapExpr& other = c.limit_branch == Branch::First ? p.second : p.first;
    CHECK(c.eps0 <= distance(evaluate(other, c.xi), c.xi, NormKind::L2) / 3.0 + 1e-15);

    // Past N the tail sits inside B(xi, eps_ref / 4).
    const std::vector<Point> pts = t.points();
    for (std::size_t n = std::size_t(c.n_lock); n < pts.size(); ++n) {
      CHECK(distance(pts[n], c.xi, NormKind::L2) <= eps_ref / 4.0);
    }
    if (c.n_lock > 0) {
      CHECK(distance(pts[std::size_t(c.n_lock) - 1], c.xi, NormKind::L2) > eps_ref / 4.0);
    }

    // alpha respects both caps.
    const double lf = lipschitz_bound(p.first, NormKind::L2);
    const double lg = lipschitz_bound(p.second, NormKind::L2);
    CHECK(c.alpha <= (1.0 - std::max(lf, lg)) / 2.0);
    CHECK(c.alpha <= c.sigma / (4.0 * double(std::max<long>(c.n_lock, 1))) + 1e-18);
  }
}

TEST_CASE("stability constants reject non-regular and non-converged inputs") {
  Domain d = square();
  std::mt19937_64 rng(69);
  const Point x0{0.15, -0.2};
  PairMap tie = symmetric_tie_pair(d, NormKind::L2, x0, rng);
  IterationParams params;
  TrajectoryReport t = iterate(tie, d, NormKind::L2, x0, params);
  CHECK_THROWS_AS(
      stability_constants(tie.first, tie.second, d, NormKind::L2, t, StabilityMetric::H, 0.1),
      PreconditionError);

  PairMap p = random_contraction_pair(d, NormKind::L2, rng, 0.2, 0.7);
  params.max_steps = 2;
  TrajectoryReport t2 = iterate(p, d, NormKind::L2, Point{0.9, 0.9}, params);
  REQUIRE(!t2.converged);
  CHECK_THROWS_AS(
      stability_constants(p.first, p.second, d, NormKind::L2, t2, StabilityMetric::H, 0.1),
      PreconditionError);
}

TEST_CASE("perturbed samples honor their certified distance") {
  Domain d = square();
  std::mt19937_64 rng(70);
  PairMap base = random_contraction_pair(d, NormKind::L2, rng, 0.2, 0.7);
  for (int i = 0; i < 30; ++i) {
    PerturbedSample s = sample_perturbed_pair(base, d, NormKind::L2, 0.05, rng);
    CHECK(s.distance_bound > 0.0);
    CHECK(s.distance_bound <= 0.05);
    const double dev = std::max(sampled_dev(base.first, s.pair.first, d, NormKind::L2, rng, 300),
                                sampled_dev(base.second, s.pair.second, d, NormKind::L2, rng, 300));
    CHECK(dev <= s.distance_bound + 1e-12);
  }
  CHECK_THROWS_AS(sample_perturbed_pair(base, d, NormKind::L2, 0.0, rng), InputError);
}

TEST_CASE("shadowing trial stays within the perturbation budget") {
  Domain d = square();
  std::mt19937_64 rng(71);
  int done = 0;
  while (done < 5) {
    PairMap p = random_contraction_pair(d, NormKind::L2, rng, 0.2, 0.8);
    IterationParams params;
    TrajectoryReport t = iterate(p, d, NormKind::L2, d.sample(rng), params);
    if (!t.regular || !t.converged) continue;
    StabilityConstants c;
    try {
      c = stability_constants(p.first, p.second, d, NormKind::L2, t, StabilityMetric::HInf, 0.1);
    } catch (const PreconditionError&) {
      continue;
    }
    ++done;
    const double eps = c.eps0 / 2.0;
    for (int k = 0; k < 10; ++k) {
      ShadowingOutcome out = shadowing_trial(p, d, NormKind::L2, t, eps, c.alpha, rng);
      CHECK(out.distance_bound <= c.alpha * eps);
      CHECK(out.distance_bound > 0.0);
      CHECK(out.perturbed_regular);
      CHECK(out.sup_deviation <= eps);
    }
  }
}
