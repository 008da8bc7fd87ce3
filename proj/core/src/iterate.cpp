#include "setpair/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace setpair {

const char* to_string(BranchRule r) {
  switch (r) {
    case BranchRule::FirstListed: return "first";
    case BranchRule::SecondListed: return "second";
    case BranchRule::Fail: return "fail";
  }
  return "?";
}

std::vector<Point> TrajectoryReport::points() const {
  std::vector<Point> out;
  out.reserve(steps.size() + 1);
  for (const StepRecord& s : steps) out.push_back(s.point);
  out.push_back(last);
  return out;
}

TrajectoryReport iterate(const PairMap& f, const Domain& d, NormKind kind, const Point& x0,
                         const IterationParams& params) {
  if (params.max_steps <= 0) throw InputError("iterate: max_steps must be positive");
  if (!(params.conv_tol > 0.0)) throw InputError("iterate: conv_tol must be positive");
  const double tie_tol = params.tie_tol.value_or(d.tie_tolerance(kind));
  if (tie_tol < 0.0) throw InputError("iterate: tie_tol must be >= 0");
  if (!d.contains(x0, tie_tol)) throw DomainError("iterate: x0 lies outside the domain");

  TrajectoryReport report;
  Point x = x0;
  for (long n = 0; n < params.max_steps; ++n) {
    Point fx = evaluate(f.first, x);
    Point gx = evaluate(f.second, x);
    ProjectionResult proj = metric_projection_two(x, fx, gx, kind, tie_tol);
    // Coincident branch values form a singleton image: the projection is
    // unique, so an equal-distance reading is not a tie.
    if (proj.tie && distance(fx, gx, kind) <= tie_tol) proj.tie = false;

    const double residual = std::min(proj.dist_first, proj.dist_second);
    if (params.stop_on_converge && residual <= params.conv_tol) {
      report.converged = true;
      break;
    }

    Branch taken = proj.nearest;
    if (proj.tie) {
      switch (params.branch_rule) {
        case BranchRule::FirstListed: taken = Branch::First; break;
        case BranchRule::SecondListed: taken = Branch::Second; break;
        case BranchRule::Fail:
          throw TieError("iterate: projection tie encountered", static_cast<std::size_t>(n));
      }
    }

    Point next = taken == Branch::First ? std::move(fx) : std::move(gx);
    StepRecord rec;
    rec.index = n;
    rec.point = x;
    rec.taken = taken;
    rec.tie = proj.tie;
    rec.gap = proj.gap;
    rec.step_len = distance(next, x, kind);
    report.steps.push_back(std::move(rec));
    x = std::move(next);
  }
  if (!params.stop_on_converge) {
    // Converged iff the final residual clears the tolerance.
    const double residual =
        std::min(distance(x, evaluate(f.first, x), kind), distance(x, evaluate(f.second, x), kind));
    report.converged = residual <= params.conv_tol;
  }
  report.last = std::move(x);
  if (report.converged) report.limit = report.last;
  report.regular = std::none_of(report.steps.begin(), report.steps.end(),
                                [](const StepRecord& s) { return s.tie; });
  return report;
}

bool check_banach_bound(const TrajectoryReport& t, NormKind kind, double lip, double slack) {
  if (!(lip >= 0.0 && lip < 1.0)) {
    throw ContractViolation("check_banach_bound: lip must lie in [0,1)");
  }
  const std::vector<Point> pts = t.points();
  if (pts.size() < 2) return true;

  // Stepwise contraction.
  for (std::size_t n = 1; n < t.steps.size(); ++n) {
    if (t.steps[n].step_len > lip * t.steps[n - 1].step_len + slack) return false;
  }

  // Tail bound, all recorded (n, k).
  const double first_step = t.steps.front().step_len;
  double lip_pow = 1.0;  // lip^n
  for (std::size_t n = 0; n < pts.size(); ++n) {
    const double bound = first_step * lip_pow / (1.0 - lip) + slack;
    for (std::size_t k = n + 1; k < pts.size(); ++k) {
      if (distance(pts[k], pts[n], kind) > bound) return false;
    }
    lip_pow *= lip;
  }
  return true;
}

namespace {

struct QuantizedKey {
  std::vector<long long> cells;
  bool operator==(const QuantizedKey&) const = default;
};

struct QuantizedKeyHash {
  std::size_t operator()(const QuantizedKey& k) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (long long c : k.cells) {
      h ^= static_cast<std::size_t>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }
};

QuantizedKey quantize(const Point& p, double cell) {
  QuantizedKey k;
  k.cells.reserve(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    k.cells.push_back(static_cast<long long>(std::floor(p[i] / cell)));
  }
  return k;
}

}  // namespace

std::optional<CycleDescriptor> detect_cycle(const TrajectoryReport& t, NormKind kind,
                                            double tol) {
  if (tol < 0.0) throw InputError("detect_cycle: tol must be >= 0");
  const std::vector<Point> pts = t.points();
  if (pts.size() < 2) return std::nullopt;
  const double cell = std::max(tol, 1e-300) * 2.0;
  const std::size_t dim = pts.front().dim();

  std::unordered_map<QuantizedKey, std::vector<std::size_t>, QuantizedKeyHash> buckets;
  std::optional<CycleDescriptor> best;

  for (std::size_t j = 0; j < pts.size(); ++j) {
    // Probe the point's cell and all neighbor cells so near-boundary
    // repeats are not missed.
    QuantizedKey base = quantize(pts[j], cell);
    std::vector<long long> offset(dim, -1);
    for (;;) {
      QuantizedKey probe = base;
      for (std::size_t i = 0; i < dim; ++i) probe.cells[i] += offset[i];
      if (auto it = buckets.find(probe); it != buckets.end()) {
        for (std::size_t k : it->second) {
          if (distance(pts[j], pts[k], kind) <= tol) {
            const auto start = static_cast<long>(k);
            const auto period = static_cast<long>(j - k);
            if (!best || start < best->start ||
                (start == best->start && period < best->period)) {
              best = CycleDescriptor{start, period, false};
            }
          }
        }
      }
      std::size_t axis = 0;
      while (axis < dim && ++offset[axis] > 1) offset[axis++] = -1;
      if (axis == dim) break;
    }
    buckets[std::move(base)].push_back(j);
  }

  if (best) {
    best->fixed_point_tail = true;
    for (std::size_t j = static_cast<std::size_t>(best->start); j + 1 < pts.size(); ++j) {
      if (distance(pts[j + 1], pts[j], kind) > tol) {
        best->fixed_point_tail = false;
        break;
      }
    }
  }
  return best;
}

LockInDescriptor tail_lock_in(const TrajectoryReport& t, const PairMap& f, const Domain& d,
                              NormKind kind) {
  const double fp_tol = 1e-12 * std::max(1.0, d.diameter(kind).hi);
  Point xi = fixed_point(f.first, d, kind, fp_tol);
  Point eta = fixed_point(f.second, d, kind, fp_tol);
  const double separation = distance(xi, eta, kind);
  if (separation <= 10.0 * fp_tol) {
    throw PreconditionError("tail_lock_in: component fixed points are not distinct");
  }

  const Branch branch = distance(t.last, xi, kind) <= distance(t.last, eta, kind)
                            ? Branch::First
                            : Branch::Second;
  const Point& z = branch == Branch::First ? xi : eta;

  long n_lock = 0;
  for (std::size_t n = 0; n < t.steps.size(); ++n) {
    if (t.steps[n].taken != branch || t.steps[n].tie) {
      n_lock = static_cast<long>(n) + 1;
    }
  }
  const std::vector<Point> pts = t.points();
  double radius = 0.0;
  for (std::size_t n = static_cast<std::size_t>(n_lock); n < pts.size(); ++n) {
    radius = std::max(radius, distance(pts[n], z, kind));
  }

  // All ties must lie before the lock-in index.
  for (std::size_t n = static_cast<std::size_t>(n_lock); n < t.steps.size(); ++n) {
    if (t.steps[n].tie) {
      throw InternalConsistencyError("tail_lock_in: tie after the lock-in index");
    }
  }

  LockInDescriptor out;
  out.branch = branch;
  out.index = n_lock;
  out.radius = radius;
  out.fixed_point = z;
  return out;
}

std::string trajectory_csv(const TrajectoryReport& t) {
  const std::size_t dim = t.last.dim();
  std::string out = "index";
  for (std::size_t i = 0; i < dim; ++i) out += ",x" + std::to_string(i);
  out += ",chosen,gap,step_len\n";

  char buf[64];
  auto append_num = [&out, &buf](double v) {
    std::snprintf(buf, sizeof(buf), ",%.17g", v);
    out += buf;
  };
  auto append_row = [&](long index, const Point& p, const char* chosen, double gap,
                        double step_len) {
    out += std::to_string(index);
    for (std::size_t i = 0; i < dim; ++i) append_num(p[i]);
    out += ",";
    out += chosen;
    append_num(gap);
    append_num(step_len);
    out += "\n";
  };

  for (const StepRecord& s : t.steps) {
    append_row(s.index, s.point, s.tie ? "tie" : to_string(s.taken), s.gap, s.step_len);
  }
  append_row(static_cast<long>(t.steps.size()), t.last, "limit", 0.0, 0.0);
  return out;
}

}  // namespace setpair
