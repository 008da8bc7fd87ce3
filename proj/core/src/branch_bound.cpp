#include "setpair/branch_bound.hpp"

#include <algorithm>
#include <queue>
#include <vector>

namespace setpair {

namespace {

struct WorkBox {
  IvVec box;
  double upper;
};

struct ByUpper {
  bool operator()(const WorkBox& a, const WorkBox& b) const { return a.upper < b.upper; }
};

Point midpoint(const IvVec& box) {
  std::vector<double> c(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) c[i] = box[i].mid();
  return Point(std::move(c));
}

std::pair<IvVec, IvVec> bisect(const IvVec& box, std::size_t axis) {
  IvVec left = box, right = box;
  const double m = box[axis].mid();
  left[axis].hi = m;
  right[axis].lo = m;
  return {std::move(left), std::move(right)};
}

}  // namespace

BbResult bb_sup(const Box& domain, const std::function<double(const Point&)>& value_at,
                const std::function<double(const IvVec&)>& upper_on, double tol,
                std::size_t max_boxes) {
  BbResult res;
  IvVec root = to_ivec(domain);
  const std::size_t d = root.size();

  std::priority_queue<WorkBox, std::vector<WorkBox>, ByUpper> heap;
  heap.push({root, upper_on(root)});
  res.lo = value_at(midpoint(root));
  res.boxes = 1;

  while (!heap.empty()) {
    WorkBox top = heap.top();
    if (top.upper <= res.lo + tol) {
      res.hi = top.upper;
      res.converged = true;
      return res;
    }
    if (res.boxes >= max_boxes) break;
    heap.pop();

    // Pick the split axis whose bisection most reduces the bound.
    std::size_t best_axis = 0;
    double best_score = top.upper;
    std::pair<IvVec, IvVec> best_children;
    bool have = false;
    for (std::size_t k = 0; k < d; ++k) {
      if (top.box[k].width() < 1e-15) continue;
      auto children = bisect(top.box, k);
      double score = std::max(upper_on(children.first), upper_on(children.second));
      if (!have || score < best_score) {
        best_axis = k;
        best_score = score;
        best_children = std::move(children);
        have = true;
      }
    }
    if (!have) {
      // Degenerate box: its upper bound cannot improve further.
      res.hi = top.upper;
      res.converged = top.upper <= res.lo + tol;
      return res;
    }
    (void)best_axis;

    for (IvVec* child : {&best_children.first, &best_children.second}) {
      double up = upper_on(*child);
      res.lo = std::max(res.lo, value_at(midpoint(*child)));
      heap.push({std::move(*child), up});
      ++res.boxes;
    }
  }

  res.hi = heap.empty() ? res.lo : heap.top().upper;
  res.converged = res.hi <= res.lo + tol;
  return res;
}

}  // namespace setpair
