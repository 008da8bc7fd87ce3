#include "setpair/interval.hpp"

namespace setpair {

IvVec to_ivec(const Box& b) {
  IvVec v(b.lower.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {b.lower[i], b.upper[i]};
  return v;
}

IvVec to_ivec(const Point& p) {
  IvVec v(p.dim());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Iv::point(p[i]);
  return v;
}

Iv iv_norm(const IvVec& x, NormKind kind) {
  Iv out{0.0, 0.0};
  switch (kind) {
    case NormKind::L1:
      for (const Iv& c : x) {
        out.lo += c.mig();
        out.hi += c.mag();
      }
      return out;
    case NormKind::L2:
      for (const Iv& c : x) {
        out.lo += c.mig() * c.mig();
        out.hi += c.mag() * c.mag();
      }
      return {std::sqrt(out.lo), std::sqrt(out.hi)};
    case NormKind::Linf:
      for (const Iv& c : x) {
        out.lo = std::max(out.lo, c.mig());
        out.hi = std::max(out.hi, c.mag());
      }
      return out;
  }
  return out;
}

Iv iv_distance(const IvVec& x, const IvVec& y, NormKind kind) {
  IvVec diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
  return iv_norm(diff, kind);
}

}  // namespace setpair
