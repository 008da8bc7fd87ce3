#pragma once

// Independent reference implementations used only by the tests.  These
// deliberately take different algorithmic routes from the library (dense
// Jacobi eigensolver vs power iteration, Gaussian elimination vs Banach
// iteration, exhaustive sampling vs certified enclosures) so that agreement
// is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "setpair/pair.hpp"

namespace oracles {

using setpair::Matrix;
using setpair::NormKind;
using setpair::Point;

/// Largest eigenvalue of a symmetric matrix via cyclic Jacobi rotations.
inline double jacobi_eigen_max(Matrix m) {
  const std::size_t n = m.rows();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    }
    if (off < 1e-28) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = m(k, p), akq = m(k, q);
          m(k, p) = c * akp - s * akq;
          m(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = m(p, k), aqk = m(q, k);
          m(p, k) = c * apk - s * aqk;
          m(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  double best = m(0, 0);
  for (std::size_t i = 1; i < n; ++i) best = std::max(best, m(i, i));
  return best;
}

inline double spectral_norm(const Matrix& a) {
  return std::sqrt(std::max(0.0, jacobi_eigen_max(a.transpose_times_self())));
}

/// Solves (I - a) x = b by Gaussian elimination with partial pivoting:
/// the fixed point of x |-> a x + b.
inline Point affine_fixed_point(const Matrix& a, const Point& b) {
  const std::size_t n = b.dim();
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = (i == j ? 1.0 : 0.0) - a(i, j);
    m[i][n] = b[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    std::swap(m[c], m[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double k = m[r][c] / m[c][c];
      for (std::size_t j = c; j <= n; ++j) m[r][j] -= k * m[c][j];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = m[i][n];
    for (std::size_t j = i + 1; j < n; ++j) acc -= m[i][j] * x[j];
    x[i] = acc / m[i][i];
  }
  return Point(std::move(x));
}

/// Hausdorff distance between finite sets by the direct sup-inf formula.
inline double hausdorff(const std::vector<Point>& s, const std::vector<Point>& t,
                        NormKind kind) {
  auto directed = [kind](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const Point& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& q : to) best = std::min(best, setpair::distance(p, q, kind));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(s, t), directed(t, s));
}

/// Sampled lower bound on sup_x ||f(x) - g(x)||.
inline double sampled_sup_gap(const setpair::MapExpr& f, const setpair::MapExpr& g,
                              const setpair::Domain& d, NormKind kind, long samples,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double lo = 0.0;
  for (long i = 0; i < samples; ++i) {
    const Point x = d.sample(rng);
    lo = std::max(lo, setpair::distance(setpair::evaluate(f, x), setpair::evaluate(g, x), kind));
  }
  return lo;
}

/// Step-by-step successive-approximation simulation, written independently
/// of the library driver (no tie bookkeeping, FirstListed policy).
inline std::vector<Point> simulate(const setpair::PairMap& f, NormKind kind, const Point& x0,
                                   long steps) {
  std::vector<Point> out{x0};
  Point x = x0;
  for (long n = 0; n < steps; ++n) {
    const Point a = setpair::evaluate(f.first, x);
    const Point b = setpair::evaluate(f.second, x);
    x = setpair::distance(x, b, kind) < setpair::distance(x, a, kind) ? b : a;
    out.push_back(x);
  }
  return out;
}

}  // namespace oracles
