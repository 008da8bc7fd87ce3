#pragma once

#include <random>

#include "setpair/pair.hpp"

namespace setpair {

/// Random affine strict contraction that is a certified self-map of a box:
/// entries uniform in [-1,1] rescaled so the certified norm is uniform in
/// [lip_lo, lip_hi], the fixed point a uniform point of the inner 80% of the
/// box, rejecting candidates whose self-map check fails.
MapExpr random_affine_contraction(const Domain& d, NormKind kind, std::mt19937_64& rng,
                                  double lip_lo = 0.1, double lip_hi = 0.95);

PairMap random_contraction_pair(const Domain& d, NormKind kind, std::mt19937_64& rng,
                                double lip_lo = 0.1, double lip_hi = 0.95);

/// Strict-contraction pair engineered to tie exactly at x0:
/// g(x) = -A (x - x0) + (2 x0 - f(x0)), so ||g(x0)-x0|| = ||f(x0)-x0||.
/// Both branches carry extension-margin certificates and have distinct fixed
/// points, so the pair is regularizable.
PairMap symmetric_tie_pair(const Domain& d, NormKind kind, const Point& x0,
                           std::mt19937_64& rng);

}  // namespace setpair
