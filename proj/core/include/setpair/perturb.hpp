#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "setpair/iterate.hpp"

namespace setpair {

/// Strict contraction eps-close to f with a different fixed point:
/// x |-> delta y + (1-delta) f(x) with 0 < ||xi - y|| < eps and
/// delta < eps / diam(D).  Requires f to be a non-constant strict contraction.
MapExpr shift_toward(const MapExpr& f, double eps, const Domain& d, NormKind kind,
                     std::uint64_t seed);

/// Identity averaging x |-> (1-t) x + t f(x) with (1-t) diam(D) < eps.
/// Returns the averaged map and its extension margin theta0 = 1/t.
std::pair<MapExpr, double> average_identity(const MapExpr& f, double eps, const Domain& d,
                                            NormKind kind);

/// Localized push at eta with support radius sigma:
/// alpha = min{(1-lip f)/4, eps/(2 sigma), (theta0-1)/(2 sigma)}.
/// Identity off B(eta, sigma); moves f(eta) away from eta along f(eta)-eta.
MapExpr bump_push(const MapExpr& f, const Point& eta, double sigma, double eps, double theta0,
                  NormKind kind);

/// min{eps/(1-lip f), eps/(1-lip g)}; bounds the fixed-point distance of two
/// strict contractions with d_infty(f, g) < eps.
double fixed_point_distance_bound(const MapExpr& f, const MapExpr& g, NormKind kind, double eps);

/// Certified upper bound on d_infty(base, m) when m wraps its base in
/// Shifted or Bump layers (delta * diam per shift, sigma * alpha per bump).
double perturbation_sup_bound(const MapExpr& m, const Domain& d, NormKind kind);

struct RegularizationResult {
  MapExpr phi;
  MapExpr psi;
  std::vector<long> touched_indices;
  double margin = 0.0;        // minimum projection gap along the trajectory
  double distance_bound = 0.0;  // certified H({f,g},{phi,psi}) upper bound
};

/// Perturbs one branch at each recorded tie so all projections along the
/// trajectory become unique, while the original points still satisfy the
/// successive-approximation relation for the perturbed pair.
/// Requires extension margins > 1 for both branches.
RegularizationResult regularize_pair(const MapExpr& f, const MapExpr& g, const Domain& d,
                                     NormKind kind, const TrajectoryReport& traj, double eps,
                                     const IterationParams& params);

enum class StabilityMetric { H, HInf };

const char* to_string(StabilityMetric m);

struct StabilityConstants {
  double eps0 = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  long n_lock = 0;  // N for the reference eps: tail inside B(xi, eps/4)
  Branch limit_branch = Branch::First;
  Point xi;  // limit fixed point
  StabilityMetric metric = StabilityMetric::H;
};

/// The (eps0, alpha, sigma, N) bundle for a regular converged trajectory of a
/// strict-contraction pair with distinct fixed points.  N, sigma and alpha
/// are computed for the supplied reference eps.
StabilityConstants stability_constants(const MapExpr& f, const MapExpr& g, const Domain& d,
                                       NormKind kind, const TrajectoryReport& traj,
                                       StabilityMetric metric, double eps_ref);

/// A pair within the given certified distance of `base` (in both metrics,
/// since h_infty <= H), built from shift and bump layers.
struct PerturbedSample {
  PairMap pair;
  double distance_bound = 0.0;
};

PerturbedSample sample_perturbed_pair(const PairMap& base, const Domain& d, NormKind kind,
                                      double max_distance, std::mt19937_64& rng);

struct ShadowingOutcome {
  bool perturbed_regular = false;
  double sup_deviation = 0.0;
  double distance_bound = 0.0;
};

/// One shadowing trial: draws a perturbed pair within alpha*eps, iterates it
/// from x0 for the same number of steps as the base trajectory, and reports
/// regularity plus the pointwise supremum deviation.
ShadowingOutcome shadowing_trial(const PairMap& base, const Domain& d, NormKind kind,
                                 const TrajectoryReport& base_traj, double eps, double alpha,
                                 std::mt19937_64& rng);

}  // namespace setpair
