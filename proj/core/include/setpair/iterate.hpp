#pragma once

#include <optional>
#include <string>
#include <vector>

#include "setpair/pair.hpp"

namespace setpair {

enum class BranchRule { FirstListed, SecondListed, Fail };

const char* to_string(BranchRule r);

struct IterationParams {
  long max_steps = 10000;
  /// Tie tolerance; when absent, 1e-12 * diameter(D) is used.
  std::optional<double> tie_tol;
  double conv_tol = 1e-10;
  BranchRule branch_rule = BranchRule::FirstListed;
  /// When false, iteration always runs max_steps (used by shadowing trials
  /// that compare trajectories pointwise at matching lengths).
  bool stop_on_converge = true;
};

/// One transition x_n -> x_{n+1}.
struct StepRecord {
  long index = 0;
  Point point;            // x_n
  Branch taken = Branch::First;
  bool tie = false;       // projection gap at x_n within tolerance
  double gap = 0.0;       // | ||x_n - f(x_n)|| - ||x_n - g(x_n)|| |
  double step_len = 0.0;  // ||x_{n+1} - x_n||
};

struct CycleDescriptor {
  long start = 0;       // k
  long period = 0;      // p >= 1
  bool fixed_point_tail = false;  // tail constant within tolerance after k
};

struct LockInDescriptor {
  Branch branch = Branch::First;
  long index = 0;    // first N with a constant branch inside the ball
  double radius = 0.0;  // max_{n >= N} ||x_n - z||
  Point fixed_point;    // z, the locked-in branch's fixed point
};

struct TrajectoryReport {
  std::vector<StepRecord> steps;
  Point last;           // final iterate
  bool converged = false;
  std::optional<Point> limit;
  bool regular = false;  // no tie along the recorded trajectory
  std::optional<LockInDescriptor> lock_in;
  std::optional<CycleDescriptor> cycle;

  /// All visited points x_0 ... x_n (steps.size() + 1 of them).
  std::vector<Point> points() const;
};

/// Successive approximations x_{n+1} in P_{F(x_n)}(x_n), ties resolved by
/// the branch rule.  Stops when d(x_n, F(x_n)) <= conv_tol or after
/// max_steps transitions.
TrajectoryReport iterate(const PairMap& f, const Domain& d, NormKind kind, const Point& x0,
                         const IterationParams& params);

/// Checks the a-priori Banach bound ||x_{n+k} - x_n|| <= ||x_1 - x_0|| L^n/(1-L)
/// for all recorded n, k, and the stepwise contraction
/// step_len(n+1) <= L step_len(n), each up to slack.
bool check_banach_bound(const TrajectoryReport& t, NormKind kind, double lip, double slack = 1e-9);

/// Smallest (k, p) with ||x_{k+p} - x_k|| <= tol, found by hashing
/// tolerance-quantized points and confirming with exact distances.
std::optional<CycleDescriptor> detect_cycle(const TrajectoryReport& t, NormKind kind, double tol);

/// First index after which every step takes the same branch and all iterates
/// stay inside a ball around that branch's fixed point; verifies all ties
/// occur before it.  Requires distinct fixed points.
LockInDescriptor tail_lock_in(const TrajectoryReport& t, const PairMap& f, const Domain& d,
                              NormKind kind);

/// Trajectory CSV: index, coords..., chosen, gap, step_len.  Deterministic
/// formatting at 17 significant digits; final point closes the table with a
/// "limit" marker row.
std::string trajectory_csv(const TrajectoryReport& t);

}  // namespace setpair
