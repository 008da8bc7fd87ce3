#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "setpair/geometry.hpp"
#include "setpair/interval.hpp"

namespace setpair {

/// Composable nonexpansive self-map of a domain D.  Immutable expression
/// tree with shared subexpressions; values are cheap to copy.
///
/// The compositional family is closed under the perturbation constructions
/// used throughout: affine maps, constants, identity averaging, fixed-point
/// shifting and localized bump pushes.  Custom nodes admit arbitrary
/// evaluators with a caller-declared Lipschitz constant; they can only be
/// certified by sampling.
class MapExpr {
 public:
  enum class Kind { Affine, Constant, Averaged, Shifted, Bump, Custom };

  struct AffineNode;
  struct ConstantNode;
  struct AveragedNode;
  struct ShiftedNode;
  struct BumpNode;
  struct CustomNode;

  static MapExpr affine(Matrix a, Point b);
  static MapExpr constant(Point c);
  static MapExpr identity(std::size_t dim);
  static MapExpr averaged(MapExpr base, double t);
  static MapExpr shifted(MapExpr base, Point y, double delta);
  /// Requires lipschitz_bound(base, kind) < 1 (the bump construction only
  /// applies to strict contractions).
  static MapExpr bump(MapExpr base, Point eta, double sigma, double alpha, NormKind kind);
  static MapExpr custom(std::string name, std::function<Point(const Point&)> eval,
                        std::function<IvVec(const IvVec&)> iv_eval, double lip);

  Kind kind() const;
  const AffineNode& as_affine_node() const;
  const ConstantNode& as_constant_node() const;
  const AveragedNode& as_averaged_node() const;
  const ShiftedNode& as_shifted_node() const;
  const BumpNode& as_bump_node() const;
  const CustomNode& as_custom_node() const;

  /// Structural equality (shared nodes compare fast; Custom nodes by name).
  friend bool operator==(const MapExpr& a, const MapExpr& b);

 private:
  using Node =
      std::variant<AffineNode, ConstantNode, AveragedNode, ShiftedNode, BumpNode, CustomNode>;
  explicit MapExpr(Node node);
  std::shared_ptr<const Node> node_;
};

struct MapExpr::AffineNode {
  Matrix a;
  Point b;
};
struct MapExpr::ConstantNode {
  Point c;
};
struct MapExpr::AveragedNode {
  MapExpr base;
  double t;  // in (0,1); x |-> (1-t) x + t base(x)
};
struct MapExpr::ShiftedNode {
  MapExpr base;
  Point y;
  double delta;  // in (0,1); x |-> delta y + (1-delta) base(x)
};
struct MapExpr::BumpNode {
  MapExpr base;  // must be a strict contraction under `kind`
  Point eta;
  double sigma;
  double alpha;
  NormKind kind;      // norm used by the bump profile
  double coeff;       // min{alpha, alpha / (||base(eta)-eta|| + 2 sigma)}
  double gamma_sup;   // sigma * alpha * min{1, 1/(||base(eta)-eta|| + 2 sigma)}
};
struct MapExpr::CustomNode {
  std::string name;
  std::function<Point(const Point&)> eval;
  std::function<IvVec(const IvVec&)> iv_eval;  // optional enclosure evaluator
  double lip;
};

inline MapExpr::MapExpr(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

inline const MapExpr::AffineNode& MapExpr::as_affine_node() const {
  return std::get<AffineNode>(*node_);
}
inline const MapExpr::ConstantNode& MapExpr::as_constant_node() const {
  return std::get<ConstantNode>(*node_);
}
inline const MapExpr::AveragedNode& MapExpr::as_averaged_node() const {
  return std::get<AveragedNode>(*node_);
}
inline const MapExpr::ShiftedNode& MapExpr::as_shifted_node() const {
  return std::get<ShiftedNode>(*node_);
}
inline const MapExpr::BumpNode& MapExpr::as_bump_node() const {
  return std::get<BumpNode>(*node_);
}
inline const MapExpr::CustomNode& MapExpr::as_custom_node() const {
  return std::get<CustomNode>(*node_);
}

Point evaluate(const MapExpr& m, const Point& x);
/// As evaluate, but rejects x outside the domain beyond tol.
Point evaluate_in(const MapExpr& m, const Domain& d, const Point& x, double tol);

/// True when the expression supports interval enclosure evaluation.
bool iv_supported(const MapExpr& m);
IvVec iv_evaluate(const MapExpr& m, const IvVec& x);

/// Flattened affine representation, when the tree is affine-representable.
struct AffineForm {
  Matrix a;
  Point b;
};
std::optional<AffineForm> as_affine(const MapExpr& m);

/// Certified upper bound on the Lipschitz constant under the given norm.
double lipschitz_bound(const MapExpr& m, NormKind kind);

/// Largest singular value of a, estimated by power iteration on a^T a with
/// the residual added as margin.  Throws NumericError (carrying the partial
/// bound) when the residual fails to settle.
double spectral_norm_power(const Matrix& a, int iters = 200000);

struct SelfMapCert {
  enum class Method { Exact, MonteCarlo, Failed };
  Method method = Method::Failed;
  long samples = 0;
  double max_violation = 0.0;

  bool ok() const { return method != Method::Failed; }
};

SelfMapCert verify_self_map(const MapExpr& m, const Domain& d, NormKind kind, long budget,
                            std::uint64_t seed = 0x5e7f'a1d0);

/// Extension margin theta0 >= 1: the largest certified value such that
/// theta m(x) + (1-theta) x stays in d for every theta < theta0.
/// Returns 1 when no margin could be certified.
double extension_margin(const MapExpr& m, const Domain& d, NormKind kind);

struct MapCertificate {
  double lip_bound = 0.0;
  SelfMapCert self_map;
  std::optional<double> theta0;  // present when an extension margin > 1 is certified
};

MapCertificate certify(const MapExpr& m, const Domain& d, NormKind kind, long budget);

/// Certified enclosure of sup_{x in D} ||f(x) - g(x)||.
/// Exact for affine-representable maps on boxes (vertex maximization);
/// branch-and-bound refinement on boxes otherwise; sampling with a
/// Lipschitz covering slack as the fallback (heuristic on balls).
Bound d_infty(const MapExpr& f, const MapExpr& g, const Domain& d, NormKind kind, long budget);

/// Banach iteration from the domain center with the a-priori stopping rule
/// ||x_{n+1} - x_n|| L / (1-L) <= tol.  Requires lipschitz_bound(m) < 1.
Point fixed_point(const MapExpr& m, const Domain& d, NormKind kind, double tol);

}  // namespace setpair
