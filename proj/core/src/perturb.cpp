#include "setpair/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace setpair {

const char* to_string(StabilityMetric m) {
  return m == StabilityMetric::H ? "H" : "h-inf";
}

namespace {

bool is_constant_map(const MapExpr& f) {
  if (f.kind() == MapExpr::Kind::Constant) return true;
  if (auto aff = as_affine(f)) {
    for (std::size_t i = 0; i < aff->a.rows(); ++i) {
      for (std::size_t j = 0; j < aff->a.cols(); ++j) {
        if (aff->a(i, j) != 0.0) return false;
      }
    }
    return true;
  }
  return false;
}

double require_contraction(const MapExpr& f, NormKind kind, const char* what) {
  const double lip = lipschitz_bound(f, kind);
  if (lip >= 1.0) {
    throw ContractViolation(std::string(what) + ": map is not a strict contraction");
  }
  return lip;
}

}  // namespace

MapExpr shift_toward(const MapExpr& f, double eps, const Domain& d, NormKind kind,
                     std::uint64_t seed) {
  if (!(eps > 0.0)) throw InputError("shift_toward: eps must be positive");
  require_contraction(f, kind, "shift_toward");
  if (is_constant_map(f)) {
    throw PreconditionError("shift_toward: map must be non-constant");
  }
  const double diam = d.diameter(kind).hi;
  const Point xi = fixed_point(f, d, kind, 1e-13 * std::max(1.0, diam));

  // y on the segment from xi toward the domain center (convexity keeps it in
  // D), falling back to a random in-domain direction when xi is the center.
  std::mt19937_64 rng(seed);
  Point toward = d.center();
  double dist = distance(xi, toward, kind);
  for (int attempt = 0; dist <= 1e-12 * diam && attempt < 100; ++attempt) {
    toward = d.sample(rng);
    dist = distance(xi, toward, kind);
  }
  if (dist <= 0.0) throw NumericError("shift_toward: could not find a shift target", 0.0);
  const double step = 0.5 * std::min(eps, dist);
  Point y = xi + (step / dist) * (toward - xi);

  const double delta = 0.5 * std::min(1.0, eps / diam);
  return MapExpr::shifted(f, std::move(y), delta);
}

std::pair<MapExpr, double> average_identity(const MapExpr& f, double eps, const Domain& d,
                                            NormKind kind) {
  if (!(eps > 0.0)) throw InputError("average_identity: eps must be positive");
  const double diam = d.diameter(kind).hi;
  const double t = 1.0 - 0.5 * std::min(1.0, eps / diam);
  return {MapExpr::averaged(f, t), 1.0 / t};
}

MapExpr bump_push(const MapExpr& f, const Point& eta, double sigma, double eps, double theta0,
                  NormKind kind) {
  if (!(eps > 0.0)) throw InputError("bump_push: eps must be positive");
  if (!(sigma > 0.0)) throw InputError("bump_push: sigma must be positive");
  if (!(theta0 > 1.0)) {
    throw PreconditionError("bump_push: extension margin theta0 > 1 is required");
  }
  const double lip = require_contraction(f, kind, "bump_push");
  const double alpha =
      std::min({(1.0 - lip) / 4.0, eps / (2.0 * sigma), (theta0 - 1.0) / (2.0 * sigma)});
  return MapExpr::bump(f, eta, sigma, alpha, kind);
}

double fixed_point_distance_bound(const MapExpr& f, const MapExpr& g, NormKind kind,
                                  double eps) {
  if (!(eps > 0.0)) throw InputError("fixed_point_distance_bound: eps must be positive");
  const double lf = require_contraction(f, kind, "fixed_point_distance_bound");
  const double lg = require_contraction(g, kind, "fixed_point_distance_bound");
  return std::min(eps / (1.0 - lf), eps / (1.0 - lg));
}

double perturbation_sup_bound(const MapExpr& m, const Domain& d, NormKind kind) {
  switch (m.kind()) {
    case MapExpr::Kind::Shifted: {
      const auto& n = m.as_shifted_node();
      return n.delta * d.diameter(kind).hi +
             perturbation_sup_bound(n.base, d, kind);
    }
    case MapExpr::Kind::Bump: {
      const auto& n = m.as_bump_node();
      return n.sigma * n.alpha + perturbation_sup_bound(n.base, d, kind);
    }
    case MapExpr::Kind::Averaged: {
      const auto& n = m.as_averaged_node();
      return (1.0 - n.t) * d.diameter(kind).hi + perturbation_sup_bound(n.base, d, kind);
    }
    default:
      return 0.0;
  }
}

RegularizationResult regularize_pair(const MapExpr& f, const MapExpr& g, const Domain& d,
                                     NormKind kind, const TrajectoryReport& traj, double eps,
                                     const IterationParams& params) {
  if (!(eps > 0.0)) throw InputError("regularize_pair: eps must be positive");
  require_contraction(f, kind, "regularize_pair");
  require_contraction(g, kind, "regularize_pair");
  if (!traj.converged) {
    throw PreconditionError("regularize_pair: trajectory must be converged");
  }

  const PairMap original{f, g};
  const LockInDescriptor lock = tail_lock_in(traj, original, d, kind);
  const std::vector<Point> pts = traj.points();

  std::vector<long> tie_indices;
  for (const StepRecord& s : traj.steps) {
    if (s.tie) tie_indices.push_back(s.index);
  }

  RegularizationResult out{f, g, {}, 0.0, 0.0};
  if (tie_indices.empty()) {
    double margin = std::numeric_limits<double>::infinity();
    for (const StepRecord& s : traj.steps) margin = std::min(margin, s.gap);
    out.margin = traj.steps.empty() ? 0.0 : margin;
    return out;
  }

  // Support radius keeping the bump balls pairwise disjoint and away from
  // the lock-in ball around the limit.
  const long n_lock = std::max<long>(lock.index, 1);
  double sigma = 1.0;
  for (long i = 0; i < n_lock; ++i) {
    for (long j = i + 1; j < n_lock; ++j) {
      sigma = std::min(sigma, 0.5 * distance(pts[static_cast<std::size_t>(i)],
                                             pts[static_cast<std::size_t>(j)], kind));
    }
    sigma = std::min(sigma, distance(pts[static_cast<std::size_t>(i)], lock.fixed_point, kind) -
                                lock.radius);
  }
  if (!(sigma > 0.0)) {
    throw InternalConsistencyError(
        "regularize_pair: coincident pre-lock-in points (excluded by the no-repeat property)");
  }

  const double eps_step = eps / (2.0 * static_cast<double>(n_lock));
  for (long n : tie_indices) {
    const StepRecord& s = traj.steps[static_cast<std::size_t>(n)];
    MapExpr& other = s.taken == Branch::First ? out.psi : out.phi;
    const double theta0 = extension_margin(other, d, kind);
    if (!(theta0 > 1.0)) {
      throw PreconditionError("regularize_pair: no extension margin certificate for a branch");
    }
    other = bump_push(other, s.point, sigma, eps_step, theta0, kind);
    out.touched_indices.push_back(n);
  }

  out.distance_bound = std::max(perturbation_sup_bound(out.phi, d, kind),
                                perturbation_sup_bound(out.psi, d, kind));

  // The recorded points must satisfy the iteration for the perturbed pair,
  // now with strictly unique projections.
  const PairMap perturbed{out.phi, out.psi};
  const double tie_tol = params.tie_tol.value_or(d.tie_tolerance(kind));
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < traj.steps.size(); ++n) {
    const Point& x = pts[n];
    const Point a = evaluate(out.phi, x);
    const Point b = evaluate(out.psi, x);
    const ProjectionResult proj = metric_projection_two(x, a, b, kind, tie_tol);
    if (proj.tie) {
      throw ConstructionError("regularize_pair: projection still tied after perturbation");
    }
    margin = std::min(margin, proj.gap);
    const Point& nearest = proj.nearest == Branch::First ? a : b;
    if (distance(nearest, pts[n + 1], kind) > 1e-12 * std::max(1.0, d.diameter(kind).hi)) {
      throw ConstructionError("regularize_pair: trajectory not reproduced");
    }
  }
  out.margin = margin;

  // Cross-check by re-running the iteration from the original start.
  IterationParams rerun = params;
  rerun.branch_rule = BranchRule::FirstListed;
  TrajectoryReport replay = iterate(perturbed, d, kind, pts.front(), rerun);
  const std::vector<Point> replay_pts = replay.points();
  const std::size_t common = std::min(replay_pts.size(), pts.size());
  for (std::size_t n = 0; n < common; ++n) {
    if (distance(replay_pts[n], pts[n], kind) > 1e-12 * std::max(1.0, d.diameter(kind).hi)) {
      throw ConstructionError("regularize_pair: replay diverges from the original trajectory");
    }
  }
  return out;
}

StabilityConstants stability_constants(const MapExpr& f, const MapExpr& g, const Domain& d,
                                       NormKind kind, const TrajectoryReport& traj,
                                       StabilityMetric metric, double eps_ref) {
  if (!(eps_ref > 0.0)) throw InputError("stability_constants: eps_ref must be positive");
  if (!traj.regular) {
    throw PreconditionError("stability_constants: trajectory must be regular");
  }
  if (!traj.converged) {
    throw PreconditionError("stability_constants: trajectory must be converged");
  }
  const double lf = require_contraction(f, kind, "stability_constants");
  const double lg = require_contraction(g, kind, "stability_constants");

  const PairMap pair{f, g};
  const LockInDescriptor lock = tail_lock_in(traj, pair, d, kind);
  const MapExpr& other = lock.branch == Branch::First ? g : f;

  StabilityConstants out;
  out.metric = metric;
  out.limit_branch = lock.branch;
  out.xi = lock.fixed_point;

  const double other_gap = distance(evaluate(other, out.xi), out.xi, kind);
  const double dist_lo = d_infty(f, g, d, kind, 4096).lo;
  out.eps0 = std::min({other_gap / 3.0, 0.5, dist_lo});

  // N for the reference eps: tail inside B(xi, eps/4).
  const std::vector<Point> pts = traj.points();
  long n_lock = 0;
  for (std::size_t n = 0; n < pts.size(); ++n) {
    if (distance(pts[n], out.xi, kind) > eps_ref / 4.0) n_lock = static_cast<long>(n) + 1;
  }
  out.n_lock = n_lock;

  double sigma = 1.0;
  for (long k = 0; k <= n_lock && k < static_cast<long>(pts.size()); ++k) {
    const Point& x = pts[static_cast<std::size_t>(k)];
    const double gap = std::abs(distance(evaluate(f, x), x, kind) -
                                distance(evaluate(g, x), x, kind));
    sigma = std::min(sigma, gap);
  }
  out.sigma = sigma;
  if (!(out.sigma > 0.0)) {
    throw PreconditionError("stability_constants: zero projection gap on a regular trajectory");
  }

  out.alpha = std::min((1.0 - std::max(lf, lg)) / 2.0,
                       out.sigma / (4.0 * static_cast<double>(std::max<long>(n_lock, 1))));
  return out;
}

namespace {

MapExpr perturb_one(const MapExpr& base, const Domain& d, NormKind kind, double magnitude,
                    std::mt19937_64& rng, double* bound_out) {
  const double diam = d.diameter(kind).hi;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double theta0 = extension_margin(base, d, kind);
  const bool use_bump = theta0 > 1.0 && unit(rng) < 0.5;
  if (use_bump) {
    const double sigma = std::min(1.0, 0.25 * diam);
    MapExpr out = bump_push(base, d.sample(rng), sigma, magnitude, theta0, kind);
    *bound_out = out.as_bump_node().sigma * out.as_bump_node().alpha;
    return out;
  }
  const double delta = std::min(0.5, magnitude / diam);
  if (!(delta > 0.0)) throw InputError("perturb_one: magnitude too small");
  MapExpr out = MapExpr::shifted(base, d.sample(rng), delta);
  *bound_out = delta * diam;
  return out;
}

}  // namespace

PerturbedSample sample_perturbed_pair(const PairMap& base, const Domain& d, NormKind kind,
                                      double max_distance, std::mt19937_64& rng) {
  if (!(max_distance > 0.0)) {
    throw InputError("sample_perturbed_pair: max_distance must be positive");
  }
  std::uniform_real_distribution<double> mag(0.1 * max_distance, 0.9 * max_distance);
  double bound_first = 0.0, bound_second = 0.0;
  MapExpr phi = perturb_one(base.first, d, kind, mag(rng), rng, &bound_first);
  MapExpr psi = perturb_one(base.second, d, kind, mag(rng), rng, &bound_second);
  // H({f,g},{phi,psi}) <= max of the componentwise uniform distances, and
  // h_infty <= H, so one bound certifies the sample in both metrics.
  return PerturbedSample{PairMap{std::move(phi), std::move(psi)},
                         std::max(bound_first, bound_second)};
}

ShadowingOutcome shadowing_trial(const PairMap& base, const Domain& d, NormKind kind,
                                 const TrajectoryReport& base_traj, double eps, double alpha,
                                 std::mt19937_64& rng) {
  PerturbedSample sample = sample_perturbed_pair(base, d, kind, alpha * eps, rng);

  IterationParams params;
  params.max_steps = std::max<long>(1, static_cast<long>(base_traj.steps.size()));
  params.stop_on_converge = false;
  params.conv_tol = 1e-14;
  TrajectoryReport perturbed = iterate(sample.pair, d, kind, base_traj.steps.empty()
                                                                 ? base_traj.last
                                                                 : base_traj.steps.front().point,
                                       params);

  const std::vector<Point> xs = base_traj.points();
  const std::vector<Point> ys = perturbed.points();
  double sup_dev = 0.0;
  for (std::size_t n = 0; n < std::min(xs.size(), ys.size()); ++n) {
    sup_dev = std::max(sup_dev, distance(xs[n], ys[n], kind));
  }
  return ShadowingOutcome{perturbed.regular, sup_dev, sample.distance_bound};
}

}  // namespace setpair
