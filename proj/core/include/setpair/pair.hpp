#pragma once

#include <optional>
#include <string>
#include <vector>

#include "setpair/map.hpp"

namespace setpair {

/// Unordered pair {f, g} acting as the set-valued map x |-> {f(x), g(x)}.
/// Storage is ordered (the iteration needs stable branch labels) but every
/// metric operation is invariant under swapping the components.
struct PairMap {
  MapExpr first;
  MapExpr second;

  PairMap swapped() const { return PairMap{second, first}; }
};

/// Image set {f(x), g(x)}, collapsed to a singleton when the two values
/// coincide within collapse_tol.  Rejects x outside the domain.
std::vector<Point> evaluate_pair(const PairMap& f, const Domain& d, NormKind kind,
                                 const Point& x, double collapse_tol);

/// Hausdorff metric between unordered pairs via the min-max formula over the
/// four component uniform distances.
Bound pair_H(const PairMap& f, const PairMap& g, const Domain& d, NormKind kind, long budget);

/// Uniform metric sup_x h(F(x), G(x)).  Branch-and-bound refinement on boxes
/// with interval-evaluable components; sampling plus Lipschitz covering slack
/// otherwise.
Bound pair_h_infty(const PairMap& f, const PairMap& g, const Domain& d, NormKind kind,
                   long budget);

enum class Pairing { Direct, Crossed, Both, Inconclusive };

const char* to_string(Pairing p);

/// Which pairing of components realizes all uniform distances < eps.
/// Under the precondition pair_H < eps at least one pairing must work; a
/// certified "neither" raises InternalConsistencyError.
Pairing selection_match(const PairMap& f, const PairMap& g, const Domain& d, NormKind kind,
                        double eps, long budget);

struct PairDistanceReport {
  Bound h;       // pair Hausdorff metric
  Bound h_inf;   // pair uniform metric
  Pairing pairing = Pairing::Inconclusive;
};

PairDistanceReport pair_distance_report(const PairMap& f, const PairMap& g, const Domain& d,
                                        NormKind kind, double eps, long budget);

/// The two pairs on [-1,1]^3 whose uniform-metric closeness does not yield a
/// componentwise selection: {(x,0,eps/2), (-x,0,-eps/2)} versus the two
/// absolute-value folds of the first coordinate.
struct RemarkInstance {
  PairMap first_pair;
  PairMap second_pair;
  Domain domain;
  NormKind norm;
  double eps;
};

RemarkInstance remark_counterexample(double eps);

/// Builtin named custom maps (the piecewise folds above), reconstructible by
/// name for serialization round trips.
std::optional<MapExpr> make_builtin_custom(const std::string& name);

}  // namespace setpair
