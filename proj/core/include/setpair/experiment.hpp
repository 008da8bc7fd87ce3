#pragma once

#include <cstdint>
#include <variant>

#include "setpair/generators.hpp"
#include "setpair/perturb.hpp"
#include "setpair/serialize.hpp"

namespace setpair {

struct RunSpec {};
struct RegularizeSpec {
  double eps = 0.05;
};
struct StabilitySpec {
  StabilityMetric metric = StabilityMetric::H;
  long trials = 20;
  std::vector<double> eps_grid;  // empty: {eps0/2, eps0/10}
};
struct ProbeSpec {
  long samples = 200;
};
struct VerifySpec {
  std::vector<std::string> suites;  // empty: all
};

using ExperimentSpec = std::variant<RunSpec, RegularizeSpec, StabilitySpec, ProbeSpec, VerifySpec>;

/// One experiment per config.  Verify needs only `experiment` and `seed`;
/// Probe additionally needs domain and norm; the rest need everything.
struct ExperimentConfig {
  std::optional<Domain> domain;
  NormKind norm = NormKind::L2;
  std::optional<PairMap> pair;
  std::optional<Point> x0;
  IterationParams params;
  std::uint64_t seed = 0;
  ExperimentSpec experiment;
};

ExperimentConfig config_from_json(const json& j);

struct ProbeReport {
  long samples = 0;
  double fraction_regular = 0.0;
  double fraction_converged = 0.0;
  double fraction_regular_after_regularization = 0.0;
  std::uint64_t seed = 0;
};

/// Samples random strict-contraction pairs, iterates each from u (default:
/// domain center) and reports the fractions of regular and convergent
/// trajectories, plus the regular fraction after regularizing the non-regular
/// instances.  Deterministic given the seed.
ProbeReport genericity_probe(const Domain& d, NormKind kind, long samples, std::uint64_t seed,
                             const std::optional<Point>& u = std::nullopt);

struct SuiteResult {
  std::string name;
  bool passed = false;
  long checks = 0;      // individual assertions evaluated
  long failures = 0;
  std::string detail;   // first failure description, or a summary line
};

/// Names of the batch verification suites, in canonical order.
const std::vector<std::string>& suite_names();

/// Runs one suite; throws InputError for unknown names.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

struct RunOutputs {
  json report;
  std::optional<std::string> trajectory_csv;
  std::optional<std::string> plot_svg;
  bool all_passed = true;  // false when a Verify suite failed
};

RunOutputs run_experiment(const ExperimentConfig& cfg);

/// Writes report.json (plus trajectory.csv / plot.svg when present) into dir,
/// creating it if needed.  A plot emission failure is recorded in the report
/// but never raises.
void write_outputs(const RunOutputs& out, const std::string& dir);

}  // namespace setpair
