#pragma once

#include <cstddef>
#include <functional>

#include "setpair/geometry.hpp"
#include "setpair/interval.hpp"

namespace setpair {

struct BbResult {
  double lo = 0.0;       // best sampled value (valid lower bound on the sup)
  double hi = 0.0;       // certified upper bound on the sup
  std::size_t boxes = 0;
  bool converged = false;  // hi - lo <= tol reached within the box budget
};

/// Certified supremum of a scalar function over a box by branch and bound.
/// `value_at` evaluates the function at a point, `upper_on` returns an upper
/// bound over an interval sub-box.  Boxes are split along the axis whose
/// bisection most reduces the bound, so coordinates the function ignores are
/// never refined.
BbResult bb_sup(const Box& domain, const std::function<double(const Point&)>& value_at,
                const std::function<double(const IvVec&)>& upper_on, double tol,
                std::size_t max_boxes);

}  // namespace setpair
