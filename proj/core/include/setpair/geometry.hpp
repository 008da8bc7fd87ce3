#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <variant>
#include <vector>

#include "setpair/errors.hpp"

namespace setpair {

enum class NormKind { L1, L2, Linf };

const char* to_string(NormKind kind);

/// A point of R^d. Coordinates are validated to be finite on construction.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);
  static Point zeros(std::size_t dim);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  Point& operator+=(const Point& rhs);
  Point& operator-=(const Point& rhs);
  Point& operator*=(double s);

  friend Point operator+(Point lhs, const Point& rhs) { return lhs += rhs; }
  friend Point operator-(Point lhs, const Point& rhs) { return lhs -= rhs; }
  friend Point operator*(double s, Point p) { return p *= s; }
  friend Point operator*(Point p, double s) { return p *= s; }
  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }

 private:
  std::vector<double> coords_;
};

double norm(const Point& p, NormKind kind);
double distance(const Point& a, const Point& b, NormKind kind);

/// Dense row-major matrix; desk scale (d <= 6), no sparsity.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  static Matrix identity(std::size_t n);
  static Matrix scaled_identity(std::size_t n, double s);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  Point apply(const Point& x) const;
  Matrix transpose_times_self() const;  // A^T A
  friend Matrix operator*(double s, Matrix m);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

  double max_abs_row_sum() const;  // operator norm for Linf
  double max_abs_col_sum() const;  // operator norm for L1

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// Closed interval [lo, hi] with a record of how it was certified.
enum class Cert { Exact, Certified, Heuristic };

struct Bound {
  double lo = 0.0;
  double hi = 0.0;
  Cert cert = Cert::Exact;
};

Cert weaker(Cert a, Cert b);

struct Box {
  Point lower;
  Point upper;
};

struct Ball {
  Point center;
  double radius;
  NormKind norm;
};

/// Bounded closed convex domain: an axis-aligned box or a norm ball.
class Domain {
 public:
  static Domain box(Point lower, Point upper);
  static Domain ball(Point center, double radius, NormKind kind);

  std::size_t dim() const;
  bool is_box() const { return std::holds_alternative<Box>(shape_); }
  const Box& as_box() const { return std::get<Box>(shape_); }
  const Ball& as_ball() const { return std::get<Ball>(shape_); }

  bool contains(const Point& p, double tol) const;
  Bound diameter(NormKind kind) const;
  Point center() const;
  Box bounding_box() const;
  /// Uniform sample; rejection from the bounding box for balls.
  Point sample(std::mt19937_64& rng) const;
  /// Default tie tolerance, scaled by the domain diameter.
  double tie_tolerance(NormKind kind) const;

 private:
  explicit Domain(std::variant<Box, Ball> shape) : shape_(std::move(shape)) {}
  std::variant<Box, Ball> shape_;
};

enum class Branch { First, Second };

const char* to_string(Branch b);

/// Result of projecting x onto a two-point set {a, b}.
struct ProjectionResult {
  double dist_first = 0.0;
  double dist_second = 0.0;
  double gap = 0.0;   // | dist_first - dist_second |
  bool tie = false;   // gap <= tie_tol
  Branch nearest = Branch::First;  // strictly nearest branch; First on an exact tie

  bool selected(Branch b) const {
    return tie || b == nearest;
  }
};

ProjectionResult metric_projection_two(const Point& x, const Point& a, const Point& b,
                                       NormKind kind, double tie_tol);

/// Hausdorff distance between nonempty finite point sets (images have <= 2 points).
double hausdorff_finite(const std::vector<Point>& s, const std::vector<Point>& t,
                        NormKind kind);

}  // namespace setpair
