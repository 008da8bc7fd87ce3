#pragma once

#include <nlohmann/json.hpp>

#include "setpair/iterate.hpp"

namespace setpair {

using nlohmann::json;

/// JSON encodings.  Numbers are emitted as JSON doubles (lossless for binary
/// round trips through nlohmann::json, which stores doubles natively).
/// All from_json readers validate shape and throw InputError on malformed
/// input rather than asserting.

json to_json(NormKind kind);
NormKind norm_from_json(const json& j);

json to_json(const Point& p);
Point point_from_json(const json& j);

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json to_json(const Domain& d);
Domain domain_from_json(const json& j);

/// Expression trees serialize structurally; Custom nodes serialize by name
/// and are rebuilt via make_builtin_custom (unknown names are rejected).
json to_json(const MapExpr& m);
MapExpr map_from_json(const json& j);

json to_json(const PairMap& p);
PairMap pair_from_json(const json& j);

json to_json(const IterationParams& p);
IterationParams iteration_params_from_json(const json& j);

json to_json(const Bound& b);
json to_json(const StepRecord& s);
json to_json(const TrajectoryReport& t);

}  // namespace setpair
