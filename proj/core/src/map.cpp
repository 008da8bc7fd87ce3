#include "setpair/map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "setpair/branch_bound.hpp"

namespace setpair {

namespace {

void require_unit_open(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw InputError(std::string(what) + " must lie in (0,1)");
  }
}

}  // namespace

MapExpr MapExpr::affine(Matrix a, Point b) {
  if (a.rows() != b.dim() || a.cols() != b.dim()) {
    throw InputError("affine map: matrix shape must match offset dimension");
  }
  return MapExpr(Node{AffineNode{std::move(a), std::move(b)}});
}

MapExpr MapExpr::constant(Point c) {
  return MapExpr(Node{ConstantNode{std::move(c)}});
}

MapExpr MapExpr::identity(std::size_t dim) {
  return affine(Matrix::identity(dim), Point::zeros(dim));
}

MapExpr MapExpr::averaged(MapExpr base, double t) {
  require_unit_open(t, "averaging weight t");
  return MapExpr(Node{AveragedNode{std::move(base), t}});
}

MapExpr MapExpr::shifted(MapExpr base, Point y, double delta) {
  require_unit_open(delta, "shift weight delta");
  return MapExpr(Node{ShiftedNode{std::move(base), std::move(y), delta}});
}

MapExpr MapExpr::bump(MapExpr base, Point eta, double sigma, double alpha, NormKind kind) {
  if (!(sigma > 0.0)) throw InputError("bump: sigma must be positive");
  if (!(alpha > 0.0)) throw InputError("bump: alpha must be positive");
  if (lipschitz_bound(base, kind) >= 1.0) {
    throw ContractViolation("bump: base map must be a strict contraction");
  }
  const double fix_gap = distance(evaluate(base, eta), eta, kind);
  const double coeff = std::min(alpha, alpha / (fix_gap + 2.0 * sigma));
  const double gamma_sup = sigma * alpha * std::min(1.0, 1.0 / (fix_gap + 2.0 * sigma));
  return MapExpr(Node{BumpNode{std::move(base), std::move(eta), sigma, alpha, kind, coeff,
                               gamma_sup}});
}

MapExpr MapExpr::custom(std::string name, std::function<Point(const Point&)> eval,
                        std::function<IvVec(const IvVec&)> iv_eval, double lip) {
  if (!eval) throw InputError("custom map: evaluator is required");
  if (!(lip >= 0.0)) throw InputError("custom map: lip must be >= 0");
  return MapExpr(Node{CustomNode{std::move(name), std::move(eval), std::move(iv_eval), lip}});
}

MapExpr::Kind MapExpr::kind() const {
  return static_cast<Kind>(node_->index());
}

bool operator==(const MapExpr& a, const MapExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case MapExpr::Kind::Affine: {
      const auto &x = a.as_affine_node(), &y = b.as_affine_node();
      return x.a == y.a && x.b == y.b;
    }
    case MapExpr::Kind::Constant:
      return a.as_constant_node().c == b.as_constant_node().c;
    case MapExpr::Kind::Averaged: {
      const auto &x = a.as_averaged_node(), &y = b.as_averaged_node();
      return x.t == y.t && x.base == y.base;
    }
    case MapExpr::Kind::Shifted: {
      const auto &x = a.as_shifted_node(), &y = b.as_shifted_node();
      return x.delta == y.delta && x.y == y.y && x.base == y.base;
    }
    case MapExpr::Kind::Bump: {
      const auto &x = a.as_bump_node(), &y = b.as_bump_node();
      return x.sigma == y.sigma && x.alpha == y.alpha && x.kind == y.kind && x.eta == y.eta &&
             x.base == y.base;
    }
    case MapExpr::Kind::Custom:
      return a.as_custom_node().name == b.as_custom_node().name;
  }
  return false;
}

Point evaluate(const MapExpr& m, const Point& x) {
  switch (m.kind()) {
    case MapExpr::Kind::Affine: {
      const auto& n = m.as_affine_node();
      return n.a.apply(x) + n.b;
    }
    case MapExpr::Kind::Constant:
      return m.as_constant_node().c;
    case MapExpr::Kind::Averaged: {
      const auto& n = m.as_averaged_node();
      return (1.0 - n.t) * x + n.t * evaluate(n.base, x);
    }
    case MapExpr::Kind::Shifted: {
      const auto& n = m.as_shifted_node();
      return n.delta * n.y + (1.0 - n.delta) * evaluate(n.base, x);
    }
    case MapExpr::Kind::Bump: {
      const auto& n = m.as_bump_node();
      Point fx = evaluate(n.base, x);
      const double gamma = std::max(0.0, n.sigma - distance(x, n.eta, n.kind)) * n.coeff;
      return fx + gamma * (fx - x);
    }
    case MapExpr::Kind::Custom:
      return m.as_custom_node().eval(x);
  }
  throw InternalConsistencyError("evaluate: unknown node kind");
}

Point evaluate_in(const MapExpr& m, const Domain& d, const Point& x, double tol) {
  if (!d.contains(x, tol)) throw DomainError("evaluate: point lies outside the domain");
  return evaluate(m, x);
}

bool iv_supported(const MapExpr& m) {
  switch (m.kind()) {
    case MapExpr::Kind::Affine:
    case MapExpr::Kind::Constant:
      return true;
    case MapExpr::Kind::Averaged:
      return iv_supported(m.as_averaged_node().base);
    case MapExpr::Kind::Shifted:
      return iv_supported(m.as_shifted_node().base);
    case MapExpr::Kind::Bump:
      return iv_supported(m.as_bump_node().base);
    case MapExpr::Kind::Custom:
      return static_cast<bool>(m.as_custom_node().iv_eval);
  }
  return false;
}

IvVec iv_evaluate(const MapExpr& m, const IvVec& x) {
  switch (m.kind()) {
    case MapExpr::Kind::Affine: {
      const auto& n = m.as_affine_node();
      IvVec out(n.a.rows());
      for (std::size_t i = 0; i < n.a.rows(); ++i) {
        Iv acc = Iv::point(n.b[i]);
        for (std::size_t j = 0; j < n.a.cols(); ++j) acc = acc + n.a(i, j) * x[j];
        out[i] = acc;
      }
      return out;
    }
    case MapExpr::Kind::Constant:
      return to_ivec(m.as_constant_node().c);
    case MapExpr::Kind::Averaged: {
      const auto& n = m.as_averaged_node();
      IvVec base = iv_evaluate(n.base, x);
      IvVec out(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = (1.0 - n.t) * x[i] + n.t * base[i];
      }
      return out;
    }
    case MapExpr::Kind::Shifted: {
      const auto& n = m.as_shifted_node();
      IvVec base = iv_evaluate(n.base, x);
      IvVec out(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = Iv::point(n.delta * n.y[i]) + (1.0 - n.delta) * base[i];
      }
      return out;
    }
    case MapExpr::Kind::Bump: {
      const auto& n = m.as_bump_node();
      IvVec base = iv_evaluate(n.base, x);
      Iv dist = iv_distance(x, to_ivec(n.eta), n.kind);
      Iv gamma = n.coeff * iv_max0(Iv::point(n.sigma) - dist);
      IvVec out(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = base[i] + gamma * (base[i] - x[i]);
      }
      return out;
    }
    case MapExpr::Kind::Custom: {
      const auto& n = m.as_custom_node();
      if (!n.iv_eval) throw InputError("custom map has no interval evaluator");
      return n.iv_eval(x);
    }
  }
  throw InternalConsistencyError("iv_evaluate: unknown node kind");
}

std::optional<AffineForm> as_affine(const MapExpr& m) {
  switch (m.kind()) {
    case MapExpr::Kind::Affine: {
      const auto& n = m.as_affine_node();
      return AffineForm{n.a, n.b};
    }
    case MapExpr::Kind::Constant: {
      const Point& c = m.as_constant_node().c;
      return AffineForm{Matrix(c.dim(), c.dim()), c};
    }
    case MapExpr::Kind::Averaged: {
      const auto& n = m.as_averaged_node();
      auto base = as_affine(n.base);
      if (!base) return std::nullopt;
      // (1-t) x + t (A x + b)
      Matrix a = 1.0 * base->a;
      for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = n.t * base->a(i, j);
        a(i, i) += 1.0 - n.t;
      }
      return AffineForm{std::move(a), n.t * base->b};
    }
    case MapExpr::Kind::Shifted: {
      const auto& n = m.as_shifted_node();
      auto base = as_affine(n.base);
      if (!base) return std::nullopt;
      return AffineForm{(1.0 - n.delta) * base->a,
                        n.delta * n.y + (1.0 - n.delta) * base->b};
    }
    default:
      return std::nullopt;
  }
}

double spectral_norm_power(const Matrix& a, int iters) {
  const std::size_t n = a.cols();
  Matrix m = a.transpose_times_self();
  // Deterministic pseudo-random start; independent of caller seeds.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& c : v) c = unit(rng);

  auto nrm2 = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
  };
  auto apply = [&m, n](const std::vector<double>& x) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * x[j];
      out[i] = acc;
    }
    return out;
  };

  double s0 = nrm2(v);
  if (s0 == 0.0) v[0] = 1.0, s0 = 1.0;
  for (double& c : v) c /= s0;

  double lambda = 0.0;
  double residual = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> w = apply(v);
    lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += v[i] * w[i];
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ri = w[i] - lambda * v[i];
      r2 += ri * ri;
    }
    residual = std::sqrt(r2);
    if (residual <= 1e-11 * std::max(lambda, 1e-300)) break;
    double s = nrm2(w);
    if (s == 0.0) return 0.0;  // a = 0
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / s;
  }

  const double bound = std::sqrt(std::max(0.0, lambda + residual));
  if (residual > 1e-9 * std::max(lambda, 1e-12)) {
    throw NumericError("spectral norm: power iteration residual did not settle", bound);
  }
  return bound;
}

double lipschitz_bound(const MapExpr& m, NormKind kind) {
  switch (m.kind()) {
    case MapExpr::Kind::Affine: {
      const Matrix& a = m.as_affine_node().a;
      switch (kind) {
        case NormKind::Linf: return a.max_abs_row_sum();
        case NormKind::L1: return a.max_abs_col_sum();
        case NormKind::L2: return spectral_norm_power(a);
      }
      return 0.0;
    }
    case MapExpr::Kind::Constant:
      return 0.0;
    case MapExpr::Kind::Averaged: {
      const auto& n = m.as_averaged_node();
      return (1.0 - n.t) + n.t * lipschitz_bound(n.base, kind);
    }
    case MapExpr::Kind::Shifted: {
      const auto& n = m.as_shifted_node();
      return (1.0 - n.delta) * lipschitz_bound(n.base, kind);
    }
    case MapExpr::Kind::Bump: {
      const auto& n = m.as_bump_node();
      return lipschitz_bound(n.base, kind) + 3.0 * n.alpha;
    }
    case MapExpr::Kind::Custom:
      return m.as_custom_node().lip;
  }
  throw InternalConsistencyError("lipschitz_bound: unknown node kind");
}

namespace {

// Distance of p to the domain, measured per-coordinate for boxes and in the
// defining norm for balls.
double violation_distance(const Domain& d, const Point& p) {
  if (d.is_box()) {
    const Box& b = d.as_box();
    double worst = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) {
      worst = std::max(worst, b.lower[i] - p[i]);
      worst = std::max(worst, p[i] - b.upper[i]);
    }
    return std::max(0.0, worst);
  }
  const Ball& b = d.as_ball();
  return std::max(0.0, distance(p, b.center, b.norm) - b.radius);
}

}  // namespace

SelfMapCert verify_self_map(const MapExpr& m, const Domain& d, NormKind kind, long budget,
                            std::uint64_t seed) {
  const double tol = 1e-12 * d.diameter(kind).hi;
  if (d.is_box()) {
    if (auto aff = as_affine(m)) {
      // Exact interval image of the box under the affine map.
      const Box& b = d.as_box();
      IvVec image = iv_evaluate(MapExpr::affine(aff->a, aff->b), to_ivec(b));
      double worst = 0.0;
      for (std::size_t i = 0; i < image.size(); ++i) {
        worst = std::max(worst, b.lower[i] - image[i].lo);
        worst = std::max(worst, image[i].hi - b.upper[i]);
      }
      SelfMapCert cert;
      cert.method = worst <= tol ? SelfMapCert::Method::Exact : SelfMapCert::Method::Failed;
      cert.max_violation = std::max(0.0, worst);
      return cert;
    }
  }
  if (budget <= 0) throw InputError("verify_self_map: sampling budget must be positive");
  std::mt19937_64 rng(seed);
  SelfMapCert cert;
  cert.method = SelfMapCert::Method::MonteCarlo;
  cert.samples = budget;
  for (long i = 0; i < budget; ++i) {
    Point x = d.sample(rng);
    cert.max_violation = std::max(cert.max_violation, violation_distance(d, evaluate(m, x)));
  }
  if (cert.max_violation > tol) cert.method = SelfMapCert::Method::Failed;
  return cert;
}

namespace {

// Certified margin for affine-representable maps on boxes by probing a
// fixed grid of candidate theta values with the exact interval image check.
double probe_affine_margin(const MapExpr& m, const Domain& d, NormKind kind) {
  if (!d.is_box()) return 1.0;
  auto aff = as_affine(m);
  if (!aff) return 1.0;
  static constexpr double kCandidates[] = {4.0, 3.0, 2.0, 1.5, 1.25, 1.1, 1.05, 1.02, 1.01};
  for (double theta : kCandidates) {
    // Extension map x |-> theta m(x) + (1-theta) x, still affine.
    Matrix a = theta * aff->a;
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += 1.0 - theta;
    MapExpr ext = MapExpr::affine(std::move(a), theta * aff->b);
    if (verify_self_map(ext, d, kind, 1).ok()) return theta;
  }
  return 1.0;
}

}  // namespace

double extension_margin(const MapExpr& m, const Domain& d, NormKind kind) {
  switch (m.kind()) {
    case MapExpr::Kind::Bump: {
      const auto& n = m.as_bump_node();
      const double base_margin = extension_margin(n.base, d, kind);
      return std::max(1.0, base_margin / (1.0 + n.gamma_sup));
    }
    case MapExpr::Kind::Averaged: {
      // The averaging construction guarantees the margin 1/t.
      const auto& n = m.as_averaged_node();
      return std::max(1.0 / n.t, probe_affine_margin(m, d, kind));
    }
    default:
      return probe_affine_margin(m, d, kind);
  }
}

MapCertificate certify(const MapExpr& m, const Domain& d, NormKind kind, long budget) {
  MapCertificate cert;
  cert.lip_bound = lipschitz_bound(m, kind);
  cert.self_map = verify_self_map(m, d, kind, budget);
  const double theta0 = extension_margin(m, d, kind);
  if (theta0 > 1.0) cert.theta0 = theta0;
  return cert;
}

namespace {

std::vector<Point> box_vertices(const Box& b) {
  const std::size_t d = b.lower.dim();
  if (d > 20) throw InputError("box vertex enumeration: dimension too large");
  std::vector<Point> out;
  out.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Point v = b.lower;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (std::size_t{1} << i)) v[i] = b.upper[i];
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Grid covering radius for a box sampled with `per_axis` points per axis.
double grid_covering_radius(const Box& b, std::size_t per_axis, NormKind kind) {
  Point half_steps = b.upper - b.lower;
  for (std::size_t i = 0; i < half_steps.dim(); ++i) {
    half_steps[i] = 0.5 * half_steps[i] / static_cast<double>(per_axis - 1);
  }
  return norm(half_steps, kind);
}

}  // namespace

Bound d_infty(const MapExpr& f, const MapExpr& g, const Domain& d, NormKind kind, long budget) {
  if (budget <= 0) throw InputError("d_infty: budget must be positive");

  auto value_at = [&](const Point& x) { return distance(evaluate(f, x), evaluate(g, x), kind); };

  if (d.is_box()) {
    auto fa = as_affine(f), ga = as_affine(g);
    if (fa && ga) {
      // ||(A_f - A_g) x + (b_f - b_g)|| is convex in x, so the sup over the
      // box is attained at a vertex.
      MapExpr diff = MapExpr::affine(fa->a - ga->a, fa->b - ga->b);
      double best = 0.0;
      for (const Point& v : box_vertices(d.as_box())) {
        best = std::max(best, norm(evaluate(diff, v), kind));
      }
      return Bound{best, best, Cert::Exact};
    }
    if (iv_supported(f) && iv_supported(g)) {
      auto upper_on = [&](const IvVec& box) {
        return iv_distance(iv_evaluate(f, box), iv_evaluate(g, box), kind).hi;
      };
      const double tol = 1e-9 * std::max(1.0, d.diameter(kind).hi);
      BbResult r = bb_sup(d.as_box(), value_at, upper_on, tol,
                          static_cast<std::size_t>(std::max<long>(budget, 10000)));
      return Bound{r.lo, r.hi, Cert::Certified};
    }
  }

  // Sampling fallback with a Lipschitz covering slack.
  const double lip_sum = lipschitz_bound(f, kind) + lipschitz_bound(g, kind);
  const std::size_t dim = d.dim();
  if (d.is_box()) {
    const Box& b = d.as_box();
    std::size_t per_axis = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(budget),
                                                        1.0 / static_cast<double>(dim)))));
    std::vector<std::size_t> idx(dim, 0);
    double lo = 0.0;
    bool done = false;
    while (!done) {
      Point x = b.lower;
      for (std::size_t i = 0; i < dim; ++i) {
        x[i] += (b.upper[i] - b.lower[i]) * static_cast<double>(idx[i]) /
                static_cast<double>(per_axis - 1);
      }
      lo = std::max(lo, value_at(x));
      done = true;
      for (std::size_t i = 0; i < dim; ++i) {
        if (++idx[i] < per_axis) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
    }
    return Bound{lo, lo + lip_sum * grid_covering_radius(b, per_axis, kind), Cert::Certified};
  }

  // Ball: Monte-Carlo samples; the covering radius estimate is heuristic.
  std::mt19937_64 rng(0xb10cba11u);
  double lo = 0.0;
  for (long i = 0; i < budget; ++i) lo = std::max(lo, value_at(d.sample(rng)));
  const double diam = d.diameter(kind).hi;
  const double cover = diam * std::pow(1.0 / static_cast<double>(budget),
                                       1.0 / static_cast<double>(dim));
  return Bound{lo, lo + lip_sum * cover, Cert::Heuristic};
}

Point fixed_point(const MapExpr& m, const Domain& d, NormKind kind, double tol) {
  if (!(tol > 0.0)) throw InputError("fixed_point: tolerance must be positive");
  const double lip = lipschitz_bound(m, kind);
  if (lip >= 1.0) throw ContractViolation("fixed_point: map is not a strict contraction");
  Point x = d.center();
  const long max_iters = 1000000;
  for (long it = 0; it < max_iters; ++it) {
    Point next = evaluate(m, x);
    const double step = distance(next, x, kind);
    const double factor = lip > 0.0 ? lip / (1.0 - lip) : 0.0;
    x = std::move(next);
    if (step * factor <= tol && step <= tol) return x;
  }
  throw NumericError("fixed_point: iteration budget exhausted", 0.0);
}

}  // namespace setpair
