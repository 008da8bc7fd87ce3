#include "setpair/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace setpair {

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Linf: return "linf";
  }
  return "?";
}

const char* to_string(Branch b) {
  return b == Branch::First ? "first" : "second";
}

namespace {

void require_finite(const std::vector<double>& coords) {
  for (double c : coords) {
    if (!std::isfinite(c)) throw InputError("point coordinate is not finite");
  }
}

void require_same_dim(const Point& a, const Point& b, const char* what) {
  if (a.dim() != b.dim()) throw InputError(std::string(what) + ": dimension mismatch");
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InputError("point must have dimension >= 1");
  require_finite(coords_);
}

Point::Point(std::initializer_list<double> coords)
    : Point(std::vector<double>(coords)) {}

Point Point::zeros(std::size_t dim) {
  return Point(std::vector<double>(dim, 0.0));
}

Point& Point::operator+=(const Point& rhs) {
  require_same_dim(*this, rhs, "point addition");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += rhs.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& rhs) {
  require_same_dim(*this, rhs, "point subtraction");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= rhs.coords_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (double& c : coords_) c *= s;
  return *this;
}

double norm(const Point& p, NormKind kind) {
  require_finite(p.coords());
  double acc = 0.0;
  switch (kind) {
    case NormKind::L1:
      for (double c : p.coords()) acc += std::abs(c);
      return acc;
    case NormKind::L2:
      for (double c : p.coords()) acc += c * c;
      return std::sqrt(acc);
    case NormKind::Linf:
      for (double c : p.coords()) acc = std::max(acc, std::abs(c));
      return acc;
  }
  return 0.0;
}

double distance(const Point& a, const Point& b, NormKind kind) {
  require_same_dim(a, b, "distance");
  return norm(a - b, kind);
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

Matrix Matrix::identity(std::size_t n) {
  return scaled_identity(n, 1.0);
}

Matrix Matrix::scaled_identity(std::size_t n, double s) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

Point Matrix::apply(const Point& x) const {
  if (x.dim() != cols_) throw InputError("matrix apply: dimension mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
    out[i] = acc;
  }
  return Point(std::move(out));
}

Matrix Matrix::transpose_times_self() const {
  Matrix m(cols_, cols_);
  for (std::size_t i = 0; i < cols_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < rows_; ++k) acc += (*this)(k, i) * (*this)(k, j);
      m(i, j) = acc;
    }
  }
  return m;
}

Matrix operator*(double s, Matrix m) {
  for (double& v : m.a_) v *= s;
  return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw InputError("matrix subtraction: shape mismatch");
  }
  Matrix out = a;
  for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= b.a_[i];
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

double Matrix::max_abs_row_sum() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += std::abs((*this)(i, j));
    best = std::max(best, acc);
  }
  return best;
}

double Matrix::max_abs_col_sum() const {
  double best = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) acc += std::abs((*this)(i, j));
    best = std::max(best, acc);
  }
  return best;
}

Cert weaker(Cert a, Cert b) {
  return static_cast<Cert>(std::max(static_cast<int>(a), static_cast<int>(b)));
}

Domain Domain::box(Point lower, Point upper) {
  if (lower.dim() != upper.dim()) throw InputError("box: dimension mismatch");
  for (std::size_t i = 0; i < lower.dim(); ++i) {
    if (!(lower[i] < upper[i])) throw InputError("box: lower must be < upper componentwise");
  }
  return Domain(Box{std::move(lower), std::move(upper)});
}

Domain Domain::ball(Point center, double radius, NormKind kind) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InputError("ball: radius must be positive");
  return Domain(Ball{std::move(center), radius, kind});
}

std::size_t Domain::dim() const {
  if (is_box()) return as_box().lower.dim();
  return as_ball().center.dim();
}

bool Domain::contains(const Point& p, double tol) const {
  if (p.dim() != dim()) throw InputError("contains: dimension mismatch");
  if (is_box()) {
    const Box& b = as_box();
    for (std::size_t i = 0; i < p.dim(); ++i) {
      if (p[i] < b.lower[i] - tol || p[i] > b.upper[i] + tol) return false;
    }
    return true;
  }
  const Ball& b = as_ball();
  return distance(p, b.center, b.norm) <= b.radius + tol;
}

namespace {

// sup of ||u||_to over the unit ball of ||.||_from in R^d.  These are the
// standard tight norm-equivalence constants.
double unit_ball_norm_sup(NormKind from, NormKind to, std::size_t d) {
  if (from == to) return 1.0;
  const double sd = std::sqrt(static_cast<double>(d));
  switch (from) {
    case NormKind::L2:
      return to == NormKind::L1 ? sd : 1.0;
    case NormKind::L1:
      return 1.0;
    case NormKind::Linf:
      return to == NormKind::L1 ? static_cast<double>(d) : sd;
  }
  return 1.0;
}

}  // namespace

Bound Domain::diameter(NormKind kind) const {
  if (is_box()) {
    const Box& b = as_box();
    Point widths = b.upper - b.lower;
    double v = norm(widths, kind);
    return Bound{v, v, Cert::Exact};
  }
  const Ball& b = as_ball();
  // For a symmetric convex body the diameter is twice the farthest distance
  // from the center, so the equivalence constant is attained.
  double c = unit_ball_norm_sup(b.norm, kind, dim());
  double v = 2.0 * b.radius * c;
  return Bound{v, v, b.norm == kind ? Cert::Exact : Cert::Certified};
}

Point Domain::center() const {
  if (is_box()) {
    const Box& b = as_box();
    return 0.5 * (b.lower + b.upper);
  }
  return as_ball().center;
}

Box Domain::bounding_box() const {
  if (is_box()) return as_box();
  const Ball& b = as_ball();
  // The bounding box uses the Linf enclosure of the defining ball.
  double r = b.radius * unit_ball_norm_sup(b.norm, NormKind::Linf, dim());
  Point lo = b.center, hi = b.center;
  for (std::size_t i = 0; i < dim(); ++i) {
    lo[i] -= r;
    hi[i] += r;
  }
  return Box{lo, hi};
}

Point Domain::sample(std::mt19937_64& rng) const {
  const Box bb = bounding_box();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Point p = bb.lower;
    for (std::size_t i = 0; i < dim(); ++i) {
      p[i] += unit(rng) * (bb.upper[i] - bb.lower[i]);
    }
    if (contains(p, 0.0)) return p;
  }
  throw NumericError("domain sampling: rejection budget exhausted", 0.0);
}

double Domain::tie_tolerance(NormKind kind) const {
  return 1e-12 * diameter(kind).hi;
}

ProjectionResult metric_projection_two(const Point& x, const Point& a, const Point& b,
                                       NormKind kind, double tie_tol) {
  if (tie_tol < 0.0) throw InputError("metric projection: tie tolerance must be >= 0");
  ProjectionResult r;
  r.dist_first = distance(x, a, kind);
  r.dist_second = distance(x, b, kind);
  r.gap = std::abs(r.dist_first - r.dist_second);
  r.tie = r.gap <= tie_tol;
  r.nearest = r.dist_second < r.dist_first ? Branch::Second : Branch::First;
  return r;
}

double hausdorff_finite(const std::vector<Point>& s, const std::vector<Point>& t,
                        NormKind kind) {
  if (s.empty() || t.empty()) throw InputError("hausdorff: sets must be nonempty");
  auto directed = [kind](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const Point& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& q : to) best = std::min(best, distance(p, q, kind));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(s, t), directed(t, s));
}

}  // namespace setpair
