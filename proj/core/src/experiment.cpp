#include "setpair/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace setpair {

namespace {

const json& require(const json& j, const char* key, const char* ctx) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string(ctx) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  ExperimentConfig cfg;

  const json& ej = require(j, "experiment", "config");
  const std::string kind = require(ej, "kind", "experiment").get<std::string>();

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer()) {
      throw InputError("config: 'seed' must be a non-negative integer");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
  } else if (kind == "stability" || kind == "probe") {
    throw InputError("config: randomized experiments require an explicit 'seed'");
  }

  if (j.contains("norm")) cfg.norm = norm_from_json(j.at("norm"));
  if (j.contains("domain")) cfg.domain = domain_from_json(j.at("domain"));
  if (j.contains("pair")) cfg.pair = pair_from_json(j.at("pair"));
  if (j.contains("x0")) cfg.x0 = point_from_json(j.at("x0"));
  if (j.contains("iteration")) cfg.params = iteration_params_from_json(j.at("iteration"));

  auto need_full = [&](const char* what) {
    if (!cfg.domain) throw InputError(std::string("config: ") + what + " requires 'domain'");
    if (!cfg.pair) throw InputError(std::string("config: ") + what + " requires 'pair'");
    if (!cfg.x0) throw InputError(std::string("config: ") + what + " requires 'x0'");
    if (!cfg.domain->contains(*cfg.x0, cfg.domain->tie_tolerance(cfg.norm))) {
      throw InputError("config: x0 lies outside the domain");
    }
  };

  if (kind == "run") {
    need_full("run");
    cfg.experiment = RunSpec{};
  } else if (kind == "regularize") {
    need_full("regularize");
    RegularizeSpec s;
    s.eps = require(ej, "eps", "experiment").get<double>();
    if (!(s.eps > 0.0)) throw InputError("experiment: regularize eps must be positive");
    cfg.experiment = s;
  } else if (kind == "stability") {
    need_full("stability");
    StabilitySpec s;
    const std::string m = require(ej, "metric", "experiment").get<std::string>();
    if (m == "H") {
      s.metric = StabilityMetric::H;
    } else if (m == "h_inf") {
      s.metric = StabilityMetric::HInf;
    } else {
      throw InputError("experiment: stability metric must be \"H\" or \"h_inf\"");
    }
    s.trials = require(ej, "trials", "experiment").get<long>();
    if (s.trials < 1) throw InputError("experiment: stability trials must be >= 1");
    if (ej.contains("eps_grid")) {
      for (const auto& v : ej.at("eps_grid")) {
        const double e = v.get<double>();
        if (!(e > 0.0)) throw InputError("experiment: eps_grid entries must be positive");
        s.eps_grid.push_back(e);
      }
    }
    cfg.experiment = s;
  } else if (kind == "probe") {
    if (!cfg.domain) throw InputError("config: probe requires 'domain'");
    ProbeSpec s;
    s.samples = require(ej, "samples", "experiment").get<long>();
    if (s.samples < 1) throw InputError("experiment: probe samples must be >= 1");
    cfg.experiment = s;
  } else if (kind == "verify") {
    VerifySpec s;
    if (ej.contains("suites")) {
      for (const auto& v : ej.at("suites")) s.suites.push_back(v.get<std::string>());
    }
    const auto& known = suite_names();
    for (const auto& name : s.suites) {
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw InputError("experiment: unknown verify suite \"" + name + "\"");
      }
    }
    cfg.experiment = s;
  } else {
    throw InputError("experiment: unknown kind \"" + kind + "\"");
  }
  return cfg;
}

// --- genericity probe --------------------------------------------------------

ProbeReport genericity_probe(const Domain& d, NormKind kind, long samples, std::uint64_t seed,
                             const std::optional<Point>& u) {
  if (samples < 1) throw InputError("genericity_probe: samples must be >= 1");
  const Point start = u ? *u : d.center();
  std::mt19937_64 rng(seed);
  IterationParams params;
  params.max_steps = 5000;

  long regular = 0, converged = 0, regular_after = 0;
  for (long i = 0; i < samples; ++i) {
    PairMap p = random_contraction_pair(d, kind, rng);
    TrajectoryReport t = iterate(p, d, kind, start, params);
    if (t.converged) ++converged;
    if (t.regular) {
      ++regular;
      ++regular_after;
      continue;
    }
    try {
      RegularizationResult r =
          regularize_pair(p.first, p.second, d, kind, t, 0.05, params);
      TrajectoryReport rt = iterate(PairMap{r.phi, r.psi}, d, kind, start, params);
      if (rt.regular) ++regular_after;
    } catch (const std::exception&) {
      // counted as not regular after regularization
    }
  }

  ProbeReport r;
  r.samples = samples;
  r.fraction_regular = static_cast<double>(regular) / static_cast<double>(samples);
  r.fraction_converged = static_cast<double>(converged) / static_cast<double>(samples);
  r.fraction_regular_after_regularization =
      static_cast<double>(regular_after) / static_cast<double>(samples);
  r.seed = seed;
  return r;
}

// --- verification suites -----------------------------------------------------

namespace {

struct Checker {
  SuiteResult r;

  explicit Checker(std::string name) { r.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++r.checks;
    if (!ok) {
      ++r.failures;
      if (r.detail.empty()) r.detail = what;
    }
  }

  SuiteResult finish() {
    r.passed = r.failures == 0;
    if (r.passed) {
      std::ostringstream os;
      os << r.checks << " checks passed";
      r.detail = os.str();
    }
    return r;
  }
};

Domain unit_box(std::size_t dim) {
  Point lo = Point::zeros(dim), hi = Point::zeros(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    lo[i] = -1.0;
    hi[i] = 1.0;
  }
  return Domain::box(std::move(lo), std::move(hi));
}

struct CorpusItem {
  Domain domain;
  NormKind kind;
  PairMap pair;
  Point x0;
  double lip;  // certified bound for both components
};

/// 100 pairs for each (dimension, norm) in {2,4} x {L1,L2,Linf}.
std::vector<CorpusItem> banach_corpus(std::uint64_t seed) {
  std::vector<CorpusItem> out;
  const NormKind kinds[] = {NormKind::L1, NormKind::L2, NormKind::Linf};
  for (std::size_t dim : {std::size_t{2}, std::size_t{4}}) {
    for (NormKind kind : kinds) {
      Domain d = unit_box(dim);
      std::mt19937_64 rng(seed ^ (dim * 1315423911u) ^ static_cast<int>(kind));
      for (int i = 0; i < 100; ++i) {
        PairMap p = random_contraction_pair(d, kind, rng);
        const double lip =
            std::max(lipschitz_bound(p.first, kind), lipschitz_bound(p.second, kind));
        out.push_back(CorpusItem{d, kind, std::move(p), d.sample(rng), lip});
      }
    }
  }
  return out;
}

IterationParams corpus_params() {
  IterationParams p;
  p.max_steps = 5000;
  p.conv_tol = 1e-10;
  return p;
}

SuiteResult suite_banach_bound(std::uint64_t seed) {
  Checker c("banach-bound");
  for (const CorpusItem& item : banach_corpus(seed)) {
    TrajectoryReport t = iterate(item.pair, item.domain, item.kind, item.x0, corpus_params());
    c.check(check_banach_bound(t, item.kind, item.lip, 1e-9),
            "a-priori contraction bound violated on a random pair");
  }
  return c.finish();
}

SuiteResult suite_stepwise_contraction(std::uint64_t seed) {
  Checker c("stepwise-contraction");
  for (const CorpusItem& item : banach_corpus(seed)) {
    TrajectoryReport t = iterate(item.pair, item.domain, item.kind, item.x0, corpus_params());
    bool ok = true;
    for (std::size_t i = 1; i < t.steps.size(); ++i) {
      if (t.steps[i].step_len > item.lip * t.steps[i - 1].step_len + 1e-10) ok = false;
    }
    c.check(ok, "step length failed the one-step contraction estimate");
  }
  return c.finish();
}

SuiteResult suite_no_nontrivial_cycles(std::uint64_t seed) {
  Checker c("no-nontrivial-cycles");
  const NormKind kinds[] = {NormKind::L1, NormKind::L2, NormKind::Linf};
  Domain d = unit_box(2);
  std::mt19937_64 rng(seed ^ 0xc0ffeeull);
  // Stop the runs two orders of magnitude above the repeat tolerance.  While
  // a trajectory is still moving (residual > 1e-8) a 1e-10 near-repeat is
  // impossible for plain convergence: ||x_{k+p} - x_k|| >= 0.05 * step length
  // for contraction factors up to 0.95, so any detection is a genuine cycle.
  IterationParams params = corpus_params();
  params.conv_tol = 1e-8;
  for (int i = 0; i < 1000; ++i) {
    const NormKind kind = kinds[i % 3];
    PairMap p = random_contraction_pair(d, kind, rng);
    TrajectoryReport t = iterate(p, d, kind, d.sample(rng), params);
    auto cyc = detect_cycle(t, kind, 1e-10);
    c.check(!cyc || cyc->fixed_point_tail,
            "near-repeat detected whose tail is not constant");
  }
  return c.finish();
}

SuiteResult suite_fixed_point_distance(std::uint64_t seed) {
  Checker c("fixed-point-distance");
  const NormKind kinds[] = {NormKind::L1, NormKind::L2, NormKind::Linf};
  for (double eps : {0.01, 0.1}) {
    std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(eps * 1e6));
    for (int i = 0; i < 100; ++i) {
      const NormKind kind = kinds[i % 3];
      Domain d = unit_box(2 + (i % 2));
      MapExpr f = random_affine_contraction(d, kind, rng, 0.1, 0.9);
      MapExpr phi = shift_toward(f, eps, d, kind, rng());
      const double tol = 1e-13;
      const Point xi = fixed_point(f, d, kind, tol);
      const Point eta = fixed_point(phi, d, kind, tol);
      const double bound = fixed_point_distance_bound(f, phi, kind, eps);
      c.check(distance(xi, eta, kind) < bound,
              "fixed points of f and its shift exceed the eps/(1-L) bound");
    }
  }
  return c.finish();
}

SuiteResult suite_perturbation_certificates(std::uint64_t seed) {
  Checker c("perturbation-certificates");
  const double eps = 0.05;
  const NormKind kinds[] = {NormKind::L1, NormKind::L2, NormKind::Linf};
  std::mt19937_64 rng(seed ^ 0x5eedull);
  int built = 0;
  for (int attempt = 0; built < 50 && attempt < 500; ++attempt) {
    const NormKind kind = kinds[attempt % 3];
    Domain d = unit_box(2 + (attempt % 2));
    MapExpr f = random_affine_contraction(d, kind, rng, 0.2, 0.85);
    const double theta0 = extension_margin(f, d, kind);
    if (theta0 <= 1.0) continue;
    ++built;
    const double lip_f = lipschitz_bound(f, kind);

    // Fixed-point shift: closeness and the exact Lipschitz factor.
    MapExpr phi = shift_toward(f, eps, d, kind, rng());
    const double delta = phi.as_shifted_node().delta;
    c.check(d_infty(f, phi, d, kind, 1).hi < eps, "shifted map is not eps-close");
    c.check(std::abs(lipschitz_bound(phi, kind) - (1.0 - delta) * lip_f) <=
                1e-12 * std::max(1.0, lip_f),
            "shifted map Lipschitz factor is not (1-delta) lip f");

    // Identity averaging: closeness and the declared extension margin.
    auto [avg, theta_avg] = average_identity(f, eps, d, kind);
    const double t = avg.as_averaged_node().t;
    c.check(d_infty(f, avg, d, kind, 1).hi < eps, "averaged map is not eps-close");
    c.check(std::abs(theta_avg - 1.0 / t) <= 1e-12, "averaged margin is not 1/t");

    // Localized push: contraction budget, exact identity off the support
    // ball, and the sup-distance certificate.
    const double sigma = 0.1 * d.diameter(kind).hi;
    const Point eta = d.sample(rng);
    MapExpr bumped = bump_push(f, eta, sigma, eps, theta0, kind);
    const double alpha = bumped.as_bump_node().alpha;
    c.check(lipschitz_bound(bumped, kind) <= 1.0 - alpha,
            "bumped map exceeds the 1-alpha Lipschitz budget");
    c.check(perturbation_sup_bound(bumped, d, kind) < eps,
            "bump sup-distance certificate is not below eps");
    bool identity_ok = true;
    for (int s = 0; s < 1000; ++s) {
      Point x = d.sample(rng);
      if (distance(x, eta, kind) < sigma) continue;
      if (!(evaluate(bumped, x) == evaluate(f, x))) identity_ok = false;
    }
    c.check(identity_ok, "bump is not exactly the identity off its support ball");
  }
  c.check(built == 50, "could not build 50 base maps with extension margins");
  return c.finish();
}

SuiteResult suite_regularization(std::uint64_t seed) {
  Checker c("regularization");
  const double eps = 0.05;
  Domain d = unit_box(2);
  const NormKind kind = NormKind::L2;
  std::mt19937_64 rng(seed ^ 0x7e9ull);
  IterationParams params = corpus_params();
  for (int i = 0; i < 50; ++i) {
    Point x0 = 0.5 * d.sample(rng);
    PairMap p = symmetric_tie_pair(d, kind, x0, rng);
    TrajectoryReport t = iterate(p, d, kind, x0, params);
    bool has_tie = false;
    for (const auto& s : t.steps) has_tie |= s.tie;
    c.check(has_tie, "symmetric construction failed to produce a tie");
    try {
      RegularizationResult r = regularize_pair(p.first, p.second, d, kind, t, eps, params);
      c.check(r.margin > 0.0, "regularized trajectory has no projection margin");
      c.check(r.distance_bound < eps, "regularized pair is not certified eps-close");
      TrajectoryReport rt = iterate(PairMap{r.phi, r.psi}, d, kind, x0, params);
      bool reproduced = rt.steps.size() >= t.steps.size();
      const std::size_t n = std::min(rt.steps.size(), t.steps.size());
      for (std::size_t s = 0; s < n; ++s) {
        if (distance(rt.steps[s].point, t.steps[s].point, kind) > 1e-12) reproduced = false;
      }
      c.check(reproduced, "regularized pair does not reproduce the trajectory");
      c.check(rt.regular, "regularized pair still has a tie along the trajectory");
    } catch (const std::exception& e) {
      c.check(false, std::string("regularize_pair raised: ") + e.what());
    }
  }
  return c.finish();
}

SuiteResult suite_shadowing(std::uint64_t seed) {
  Checker c("shadowing");
  Domain d = unit_box(2);
  const NormKind kind = NormKind::L2;
  std::mt19937_64 rng(seed ^ 0x5adull);
  IterationParams params = corpus_params();
  int built = 0;
  for (int attempt = 0; built < 50 && attempt < 500; ++attempt) {
    PairMap p = random_contraction_pair(d, kind, rng, 0.2, 0.8);
    Point x0 = d.sample(rng);
    TrajectoryReport t = iterate(p, d, kind, x0, params);
    if (!t.regular || !t.converged) continue;
    StabilityConstants probe;
    try {
      probe = stability_constants(p.first, p.second, d, kind, t, StabilityMetric::H, 0.01);
    } catch (const std::exception&) {
      continue;  // coincident fixed points or similar degeneracies
    }
    ++built;
    for (StabilityMetric metric : {StabilityMetric::H, StabilityMetric::HInf}) {
      for (double frac : {0.5, 0.1}) {
        const double eps = probe.eps0 * frac;
        StabilityConstants k =
            stability_constants(p.first, p.second, d, kind, t, metric, eps);
        for (int trial = 0; trial < 20; ++trial) {
          ShadowingOutcome o = shadowing_trial(p, d, kind, t, eps, k.alpha, rng);
          c.check(o.distance_bound < k.alpha * eps,
                  "perturbed pair exceeds the allowed certified distance");
          c.check(o.perturbed_regular, "perturbed trajectory is not regular");
          c.check(o.sup_deviation <= eps, "perturbed trajectory escapes the eps tube");
        }
      }
    }
  }
  c.check(built == 50, "could not build 50 regular convergent base trajectories");
  return c.finish();
}

SuiteResult suite_metric_structure(std::uint64_t seed) {
  Checker c("metric-structure");
  Domain d = unit_box(2);
  const NormKind kind = NormKind::L2;
  std::mt19937_64 rng(seed ^ 0x3e7ull);
  for (int i = 0; i < 200; ++i) {
    PairMap f = random_contraction_pair(d, kind, rng);
    PairMap g = random_contraction_pair(d, kind, rng);
    PairMap k = random_contraction_pair(d, kind, rng);
    const Bound hfg = pair_H(f, g, d, kind, 1);
    const Bound hgf = pair_H(g, f, d, kind, 1);
    const Bound hgk = pair_H(g, k, d, kind, 1);
    const Bound hfk = pair_H(f, k, d, kind, 1);
    c.check(hfg.lo >= 0.0, "H is negative");
    c.check(pair_H(f, f, d, kind, 1).hi <= 1e-12, "H(F,F) is not zero");
    c.check(pair_H(f, f.swapped(), d, kind, 1).hi <= 1e-12,
            "H is not invariant under component swap");
    c.check(std::abs(hfg.hi - hgf.hi) <= 1e-12, "H is not symmetric");
    c.check(hfk.lo <= hfg.hi + hgk.hi + 1e-12, "H violates the triangle inequality");
    if (i % 20 == 0) {
      const Bound hu = pair_h_infty(f, g, d, kind, 50000);
      c.check(hu.lo <= hfg.hi + 1e-9, "uniform pair metric exceeds H");
    }
  }
  return c.finish();
}

SuiteResult suite_remark_counterexample(std::uint64_t) {
  Checker c("remark-counterexample");
  RemarkInstance r = remark_counterexample(0.1);
  const Bound h =
      pair_h_infty(r.first_pair, r.second_pair, r.domain, r.norm, 2'000'000);
  c.check(h.hi <= 0.05 + 1e-6, "uniform pair distance upper bound exceeds eps/2");
  c.check(h.lo >= 0.05 - 1e-6, "uniform pair distance lower bound is below eps/2");

  const long budget = 1'000'000;
  const Bound d11 = d_infty(r.first_pair.first, r.second_pair.first, r.domain, r.norm, budget);
  const Bound d22 = d_infty(r.first_pair.second, r.second_pair.second, r.domain, r.norm, budget);
  const Bound d12 = d_infty(r.first_pair.first, r.second_pair.second, r.domain, r.norm, budget);
  const Bound d21 = d_infty(r.first_pair.second, r.second_pair.first, r.domain, r.norm, budget);
  c.check(std::max(d11.lo, d22.lo) >= 2.0 - 1e-6, "direct pairing distance is not near 2");
  c.check(std::max(d12.lo, d21.lo) >= 2.0 - 1e-6, "crossed pairing distance is not near 2");
  return c.finish();
}

SuiteResult suite_probe_smoke(std::uint64_t seed) {
  Checker c("probe-smoke");
  ProbeReport r = genericity_probe(unit_box(2), NormKind::L2, 200, seed ^ 0x9ull);
  c.check(r.fraction_converged == 1.0, "a probe trajectory failed to converge");
  c.check(r.fraction_regular_after_regularization == 1.0,
          "a probe trajectory stayed non-regular after regularization");
  c.check(r.fraction_regular >= 0.0 && r.fraction_regular <= 1.0,
          "raw regular fraction out of range");
  return c.finish();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "banach-bound",        "stepwise-contraction",      "no-nontrivial-cycles",
      "fixed-point-distance", "perturbation-certificates", "regularization",
      "shadowing",           "metric-structure",          "remark-counterexample",
      "probe-smoke",
  };
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "banach-bound") return suite_banach_bound(seed);
  if (name == "stepwise-contraction") return suite_stepwise_contraction(seed);
  if (name == "no-nontrivial-cycles") return suite_no_nontrivial_cycles(seed);
  if (name == "fixed-point-distance") return suite_fixed_point_distance(seed);
  if (name == "perturbation-certificates") return suite_perturbation_certificates(seed);
  if (name == "regularization") return suite_regularization(seed);
  if (name == "shadowing") return suite_shadowing(seed);
  if (name == "metric-structure") return suite_metric_structure(seed);
  if (name == "remark-counterexample") return suite_remark_counterexample(seed);
  if (name == "probe-smoke") return suite_probe_smoke(seed);
  throw InputError("run_suite: unknown suite \"" + name + "\"");
}

// --- experiment dispatch -----------------------------------------------------

namespace {

json config_echo(const ExperimentConfig& cfg) {
  json j;
  j["norm"] = to_json(cfg.norm);
  j["seed"] = cfg.seed;
  if (cfg.domain) j["domain"] = to_json(*cfg.domain);
  if (cfg.pair) j["pair"] = to_json(*cfg.pair);
  if (cfg.x0) j["x0"] = to_json(*cfg.x0);
  j["iteration"] = to_json(cfg.params);
  return j;
}

/// Step lengths and distance to the limit against the iteration index, on a
/// log10 vertical axis.  Pure geometry, no dependencies.
std::string step_plot_svg(const TrajectoryReport& t, NormKind kind) {
  const double w = 640.0, h = 400.0, ml = 60.0, mr = 20.0, mt = 20.0, mb = 40.0;
  std::vector<double> steps, dists;
  const Point ref = t.limit ? *t.limit : t.last;
  for (const auto& s : t.steps) {
    steps.push_back(std::max(s.step_len, 1e-18));
    dists.push_back(std::max(distance(s.point, ref, kind), 1e-18));
  }
  if (steps.empty()) throw InputError("plot: empty trajectory");
  double lo = 0.0, hi = -18.0;
  for (double v : steps) {
    lo = std::min(lo, std::log10(v));
    hi = std::max(hi, std::log10(v));
  }
  for (double v : dists) {
    lo = std::min(lo, std::log10(v));
    hi = std::max(hi, std::log10(v));
  }
  if (hi <= lo) hi = lo + 1.0;
  const double n = static_cast<double>(steps.size());

  auto px = [&](double i) { return ml + (w - ml - mr) * (n <= 1 ? 0.0 : i / (n - 1)); };
  auto py = [&](double v) {
    return mt + (h - mt - mb) * (1.0 - (std::log10(v) - lo) / (hi - lo));
  };
  auto polyline = [&](const std::vector<double>& ys, const char* color) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i) {
      os << px(static_cast<double>(i)) << ',' << py(ys[i]) << ' ';
    }
    os << "\"/>\n";
    return os.str();
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
     << h - mb << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
     << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << (w / 2) << "\" y=\"" << h - 8 << "\" text-anchor=\"middle\" "
     << "font-size=\"13\">iteration</text>\n"
     << "<text x=\"14\" y=\"" << (h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
     << "transform=\"rotate(-90 14 " << (h / 2) << ")\">log10 value</text>\n"
     << polyline(steps, "#1f77b4") << polyline(dists, "#d62728")
     << "<text x=\"" << w - mr - 160 << "\" y=\"" << mt + 14
     << "\" font-size=\"12\" fill=\"#1f77b4\">step length</text>\n"
     << "<text x=\"" << w - mr - 160 << "\" y=\"" << mt + 30
     << "\" font-size=\"12\" fill=\"#d62728\">distance to limit</text>\n"
     << "</svg>\n";
  return os.str();
}

json to_json(const ProbeReport& r) {
  return json{{"samples", r.samples},
              {"fraction_regular", r.fraction_regular},
              {"fraction_converged", r.fraction_converged},
              {"fraction_regular_after_regularization", r.fraction_regular_after_regularization},
              {"seed", r.seed}};
}

json to_json(const SuiteResult& s) {
  return json{{"name", s.name},
              {"passed", s.passed},
              {"checks", s.checks},
              {"failures", s.failures},
              {"detail", s.detail}};
}

}  // namespace

RunOutputs run_experiment(const ExperimentConfig& cfg) {
  RunOutputs out;
  out.report["config"] = config_echo(cfg);

  if (std::holds_alternative<RunSpec>(cfg.experiment)) {
    out.report["experiment"] = "run";
    TrajectoryReport t = iterate(*cfg.pair, *cfg.domain, cfg.norm, *cfg.x0, cfg.params);
    const double lip = std::max(lipschitz_bound(cfg.pair->first, cfg.norm),
                                lipschitz_bound(cfg.pair->second, cfg.norm));
    out.report["lipschitz_bound"] = lip;
    out.report["banach_bound_ok"] =
        lip < 1.0 ? json(check_banach_bound(t, cfg.norm, lip)) : json(nullptr);
    out.report["trajectory"] = to_json(t);
    out.trajectory_csv = trajectory_csv(t);
    try {
      out.plot_svg = step_plot_svg(t, cfg.norm);
      out.report["plot"] = "plot.svg";
    } catch (const std::exception& e) {
      out.report["plot"] = json{{"error", e.what()}};
    }
  } else if (const auto* reg = std::get_if<RegularizeSpec>(&cfg.experiment)) {
    out.report["experiment"] = "regularize";
    TrajectoryReport t = iterate(*cfg.pair, *cfg.domain, cfg.norm, *cfg.x0, cfg.params);
    RegularizationResult r = regularize_pair(cfg.pair->first, cfg.pair->second, *cfg.domain,
                                             cfg.norm, t, reg->eps, cfg.params);
    out.report["eps"] = reg->eps;
    out.report["touched_indices"] = r.touched_indices;
    out.report["margin"] = r.margin;
    out.report["distance_bound"] = r.distance_bound;
    out.report["regularized_pair"] = to_json(PairMap{r.phi, r.psi});
  } else if (const auto* st = std::get_if<StabilitySpec>(&cfg.experiment)) {
    out.report["experiment"] = "stability";
    out.report["metric"] = to_string(st->metric);
    TrajectoryReport t = iterate(*cfg.pair, *cfg.domain, cfg.norm, *cfg.x0, cfg.params);
    if (!t.regular || !t.converged) {
      throw PreconditionError("stability: the base trajectory must be regular and convergent");
    }
    StabilityConstants base = stability_constants(cfg.pair->first, cfg.pair->second,
                                                  *cfg.domain, cfg.norm, t, st->metric, 0.01);
    out.report["eps0"] = base.eps0;
    std::vector<double> grid = st->eps_grid;
    if (grid.empty()) grid = {base.eps0 / 2.0, base.eps0 / 10.0};
    json levels = json::array();
    bool all_ok = true;
    std::mt19937_64 rng(cfg.seed);
    for (double eps : grid) {
      StabilityConstants k = stability_constants(cfg.pair->first, cfg.pair->second,
                                                 *cfg.domain, cfg.norm, t, st->metric, eps);
      json trials = json::array();
      for (long i = 0; i < st->trials; ++i) {
        ShadowingOutcome o = shadowing_trial(*cfg.pair, *cfg.domain, cfg.norm, t, eps,
                                             k.alpha, rng);
        const bool ok = o.perturbed_regular && o.sup_deviation <= eps;
        all_ok = all_ok && ok;
        trials.push_back(json{{"index", i},
                              {"regular", o.perturbed_regular},
                              {"sup_deviation", o.sup_deviation},
                              {"distance_bound", o.distance_bound},
                              {"within_eps", ok}});
      }
      levels.push_back(json{{"eps", eps},
                            {"alpha", k.alpha},
                            {"sigma", k.sigma},
                            {"lock_index", k.n_lock},
                            {"trials", std::move(trials)}});
    }
    out.report["levels"] = std::move(levels);
    out.report["all_within_eps"] = all_ok;
    out.all_passed = all_ok;
  } else if (const auto* pr = std::get_if<ProbeSpec>(&cfg.experiment)) {
    out.report["experiment"] = "probe";
    ProbeReport r = genericity_probe(*cfg.domain, cfg.norm, pr->samples, cfg.seed, cfg.x0);
    out.report["probe"] = to_json(r);
  } else {
    const auto& v = std::get<VerifySpec>(cfg.experiment);
    out.report["experiment"] = "verify";
    const std::vector<std::string>& names = v.suites.empty() ? suite_names() : v.suites;
    json suites = json::array();
    std::vector<std::string> failed;
    for (const auto& name : names) {
      SuiteResult r = run_suite(name, cfg.seed);
      if (!r.passed) failed.push_back(r.name);
      suites.push_back(to_json(r));
    }
    out.report["suites"] = std::move(suites);
    out.report["failed"] = failed;
    out.all_passed = failed.empty();
  }
  return out;
}

void write_outputs(const RunOutputs& out, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / "report.json");
    f << out.report.dump(2) << '\n';
    if (!f) throw InputError("write_outputs: cannot write report.json");
  }
  if (out.trajectory_csv) {
    std::ofstream f(fs::path(dir) / "trajectory.csv");
    f << *out.trajectory_csv;
    if (!f) throw InputError("write_outputs: cannot write trajectory.csv");
  }
  if (out.plot_svg) {
    std::ofstream f(fs::path(dir) / "plot.svg");
    f << *out.plot_svg;  // best-effort; stream errors are ignored by design
  }
}

}  // namespace setpair
