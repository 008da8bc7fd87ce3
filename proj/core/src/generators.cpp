#include "setpair/generators.hpp"

#include <cmath>

namespace setpair {

namespace {

Point inner_box_point(const Box& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  Point p = b.lower;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    p[i] += unit(rng) * (b.upper[i] - b.lower[i]);
  }
  return p;
}

}  // namespace

MapExpr random_affine_contraction(const Domain& d, NormKind kind, std::mt19937_64& rng,
                                  double lip_lo, double lip_hi) {
  if (!d.is_box()) throw InputError("random_affine_contraction: box domains only");
  const Box& box = d.as_box();
  const std::size_t dim = d.dim();
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> target(lip_lo, lip_hi);

  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix a(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) a(i, j) = entry(rng);
    }
    MapExpr raw = MapExpr::affine(a, Point::zeros(dim));
    double lip = 0.0;
    try {
      lip = lipschitz_bound(raw, kind);
    } catch (const NumericError&) {
      continue;  // near-degenerate spectrum; draw another matrix
    }
    if (lip <= 0.0) continue;
    a = (target(rng) / lip) * a;

    const Point xi = inner_box_point(box, rng);
    const Point b = xi - a.apply(xi);
    MapExpr m = MapExpr::affine(std::move(a), b);
    if (lipschitz_bound(m, kind) >= 1.0) continue;
    if (verify_self_map(m, d, kind, 1).ok()) return m;
  }
  throw NumericError("random_affine_contraction: rejection budget exhausted", 0.0);
}

PairMap random_contraction_pair(const Domain& d, NormKind kind, std::mt19937_64& rng,
                                double lip_lo, double lip_hi) {
  MapExpr f = random_affine_contraction(d, kind, rng, lip_lo, lip_hi);
  MapExpr g = random_affine_contraction(d, kind, rng, lip_lo, lip_hi);
  return PairMap{std::move(f), std::move(g)};
}

PairMap symmetric_tie_pair(const Domain& d, NormKind kind, const Point& x0,
                           std::mt19937_64& rng) {
  if (!d.is_box()) throw InputError("symmetric_tie_pair: box domains only");
  const double sep_tol = 1e-6 * d.diameter(kind).hi;

  for (int attempt = 0; attempt < 2000; ++attempt) {
    // Moderate contraction factors leave room for the reflected branch and
    // the extension-margin certificate.
    MapExpr f = random_affine_contraction(d, kind, rng, 0.2, 0.6);
    const auto& fn = f.as_affine_node();
    const Point fx0 = evaluate(f, x0);
    if (distance(fx0, x0, kind) <= sep_tol) continue;

    // g(x) = -A (x - x0) + (2 x0 - f(x0)) reflects f's action about x0.
    Matrix ag = -1.0 * fn.a;
    Point bg = fn.a.apply(x0) + 2.0 * x0 - fx0;
    MapExpr g = MapExpr::affine(std::move(ag), std::move(bg));

    if (lipschitz_bound(g, kind) >= 1.0) continue;
    if (!verify_self_map(g, d, kind, 1).ok()) continue;
    if (extension_margin(f, d, kind) <= 1.0) continue;
    if (extension_margin(g, d, kind) <= 1.0) continue;

    const double fp_tol = 1e-13 * std::max(1.0, d.diameter(kind).hi);
    Point xi = fixed_point(f, d, kind, fp_tol);
    Point eta = fixed_point(g, d, kind, fp_tol);
    if (distance(xi, eta, kind) <= sep_tol) continue;

    return PairMap{std::move(f), std::move(g)};
  }
  throw NumericError("symmetric_tie_pair: rejection budget exhausted", 0.0);
}

}  // namespace setpair
