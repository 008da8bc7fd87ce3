#include "setpair/serialize.hpp"

#include <nlohmann/json.hpp>

namespace setpair {

namespace {

const json& require(const json& j, const char* key, const char* ctx) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string(ctx) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double require_number(const json& j, const char* key, const char* ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number()) throw InputError(std::string(ctx) + ": '" + key + "' must be a number");
  return v.get<double>();
}

std::string require_string(const json& j, const char* key, const char* ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_string()) throw InputError(std::string(ctx) + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

json to_json(NormKind kind) { return json(to_string(kind)); }

NormKind norm_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "l1") return NormKind::L1;
    if (s == "l2") return NormKind::L2;
    if (s == "linf") return NormKind::Linf;
  }
  throw InputError("norm: expected \"l1\", \"l2\" or \"linf\"");
}

json to_json(const Point& p) { return json(p.coords()); }

Point point_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("point: expected a non-empty array");
  std::vector<double> c;
  c.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError("point: coordinates must be numbers");
    c.push_back(v.get<double>());
  }
  return Point(std::move(c));
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix: expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw InputError("matrix: rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) {
      throw InputError("matrix: ragged rows");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) throw InputError("matrix: entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

json to_json(const Domain& d) {
  if (d.is_box()) {
    const Box& b = d.as_box();
    return json{{"shape", "box"}, {"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}};
  }
  const Ball& b = d.as_ball();
  return json{{"shape", "ball"},
              {"center", to_json(b.center)},
              {"radius", b.radius},
              {"norm", to_json(b.norm)}};
}

Domain domain_from_json(const json& j) {
  const std::string shape = require_string(j, "shape", "domain");
  if (shape == "box") {
    return Domain::box(point_from_json(require(j, "lower", "domain")),
                       point_from_json(require(j, "upper", "domain")));
  }
  if (shape == "ball") {
    return Domain::ball(point_from_json(require(j, "center", "domain")),
                        require_number(j, "radius", "domain"),
                        norm_from_json(require(j, "norm", "domain")));
  }
  throw InputError("domain: shape must be \"box\" or \"ball\"");
}

json to_json(const MapExpr& m) {
  switch (m.kind()) {
    case MapExpr::Kind::Affine: {
      const auto& n = m.as_affine_node();
      return json{{"variant", "affine"}, {"a", to_json(n.a)}, {"b", to_json(n.b)}};
    }
    case MapExpr::Kind::Constant:
      return json{{"variant", "constant"}, {"c", to_json(m.as_constant_node().c)}};
    case MapExpr::Kind::Averaged: {
      const auto& n = m.as_averaged_node();
      return json{{"variant", "averaged"}, {"t", n.t}, {"base", to_json(n.base)}};
    }
    case MapExpr::Kind::Shifted: {
      const auto& n = m.as_shifted_node();
      return json{{"variant", "shifted"},
                  {"delta", n.delta},
                  {"y", to_json(n.y)},
                  {"base", to_json(n.base)}};
    }
    case MapExpr::Kind::Bump: {
      const auto& n = m.as_bump_node();
      return json{{"variant", "bump"},    {"base", to_json(n.base)}, {"eta", to_json(n.eta)},
                  {"sigma", n.sigma},     {"alpha", n.alpha},        {"norm", to_json(n.kind)}};
    }
    case MapExpr::Kind::Custom:
      return json{{"variant", "custom"}, {"name", m.as_custom_node().name}};
  }
  throw InternalConsistencyError("to_json(MapExpr): unhandled node kind");
}

MapExpr map_from_json(const json& j) {
  const std::string variant = require_string(j, "variant", "map");
  if (variant == "affine") {
    return MapExpr::affine(matrix_from_json(require(j, "a", "map")),
                           point_from_json(require(j, "b", "map")));
  }
  if (variant == "constant") {
    return MapExpr::constant(point_from_json(require(j, "c", "map")));
  }
  if (variant == "averaged") {
    return MapExpr::averaged(map_from_json(require(j, "base", "map")),
                             require_number(j, "t", "map"));
  }
  if (variant == "shifted") {
    return MapExpr::shifted(map_from_json(require(j, "base", "map")),
                            point_from_json(require(j, "y", "map")),
                            require_number(j, "delta", "map"));
  }
  if (variant == "bump") {
    return MapExpr::bump(map_from_json(require(j, "base", "map")),
                         point_from_json(require(j, "eta", "map")),
                         require_number(j, "sigma", "map"), require_number(j, "alpha", "map"),
                         norm_from_json(require(j, "norm", "map")));
  }
  if (variant == "custom") {
    const std::string name = require_string(j, "name", "map");
    if (auto m = make_builtin_custom(name)) return *m;
    throw InputError("map: unknown custom map \"" + name + "\"");
  }
  throw InputError("map: unknown variant \"" + variant + "\"");
}

json to_json(const PairMap& p) {
  return json{{"first", to_json(p.first)}, {"second", to_json(p.second)}};
}

PairMap pair_from_json(const json& j) {
  return PairMap{map_from_json(require(j, "first", "pair")),
                 map_from_json(require(j, "second", "pair"))};
}

json to_json(const IterationParams& p) {
  json j{{"max_steps", p.max_steps},
         {"conv_tol", p.conv_tol},
         {"branch_rule", to_string(p.branch_rule)},
         {"stop_on_converge", p.stop_on_converge}};
  j["tie_tol"] = p.tie_tol ? json(*p.tie_tol) : json(nullptr);
  return j;
}

IterationParams iteration_params_from_json(const json& j) {
  IterationParams p;
  if (!j.is_object()) throw InputError("iteration: expected an object");
  if (j.contains("max_steps")) {
    if (!j.at("max_steps").is_number_integer()) {
      throw InputError("iteration: 'max_steps' must be an integer");
    }
    p.max_steps = j.at("max_steps").get<long>();
    if (p.max_steps <= 0) throw InputError("iteration: 'max_steps' must be positive");
  }
  if (j.contains("tie_tol") && !j.at("tie_tol").is_null()) {
    if (!j.at("tie_tol").is_number()) throw InputError("iteration: 'tie_tol' must be a number");
    p.tie_tol = j.at("tie_tol").get<double>();
  }
  if (j.contains("conv_tol")) {
    if (!j.at("conv_tol").is_number()) throw InputError("iteration: 'conv_tol' must be a number");
    p.conv_tol = j.at("conv_tol").get<double>();
  }
  if (j.contains("branch_rule")) {
    const std::string s = require_string(j, "branch_rule", "iteration");
    if (s == "first") {
      p.branch_rule = BranchRule::FirstListed;
    } else if (s == "second") {
      p.branch_rule = BranchRule::SecondListed;
    } else if (s == "fail") {
      p.branch_rule = BranchRule::Fail;
    } else {
      throw InputError("iteration: branch_rule must be \"first\", \"second\" or \"fail\"");
    }
  }
  if (j.contains("stop_on_converge")) {
    if (!j.at("stop_on_converge").is_boolean()) {
      throw InputError("iteration: 'stop_on_converge' must be a boolean");
    }
    p.stop_on_converge = j.at("stop_on_converge").get<bool>();
  }
  return p;
}

json to_json(const Bound& b) {
  const char* cert = b.cert == Cert::Exact ? "exact"
                     : b.cert == Cert::Certified ? "certified"
                                                 : "heuristic";
  return json{{"lo", b.lo}, {"hi", b.hi}, {"cert", cert}};
}

json to_json(const StepRecord& s) {
  return json{{"index", s.index},         {"point", to_json(s.point)},
              {"taken", to_string(s.taken)}, {"tie", s.tie},
              {"gap", s.gap},             {"step_len", s.step_len}};
}

json to_json(const TrajectoryReport& t) {
  json steps = json::array();
  for (const auto& s : t.steps) steps.push_back(to_json(s));
  json j{{"steps", std::move(steps)},
         {"last", to_json(t.last)},
         {"converged", t.converged},
         {"regular", t.regular}};
  j["limit"] = t.limit ? to_json(*t.limit) : json(nullptr);
  if (t.lock_in) {
    j["lock_in"] = json{{"branch", to_string(t.lock_in->branch)},
                        {"index", t.lock_in->index},
                        {"radius", t.lock_in->radius},
                        {"fixed_point", to_json(t.lock_in->fixed_point)}};
  } else {
    j["lock_in"] = nullptr;
  }
  if (t.cycle) {
    j["cycle"] = json{{"start", t.cycle->start},
                      {"period", t.cycle->period},
                      {"fixed_point_tail", t.cycle->fixed_point_tail}};
  } else {
    j["cycle"] = nullptr;
  }
  return j;
}

}  // namespace setpair
