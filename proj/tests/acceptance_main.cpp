// Batch acceptance runner: executes every verification suite with a fixed
// seed and prints one pass/fail line per suite.  Exits non-zero if any suite
// fails or a time budget is exceeded.
#include <chrono>
#include <cstdio>
#include <exception>

#include "setpair/experiment.hpp"

int main() {
  using clock = std::chrono::steady_clock;
  const std::uint64_t seed = 42;
  bool all_ok = true;

  for (const std::string& name : setpair::suite_names()) {
    // banach-bound carries a 10 s budget; shadowing a 120 s budget.
    double budget = 600.0;
    if (name == "banach-bound") budget = 10.0;
    if (name == "shadowing") budget = 120.0;

    const auto start = clock::now();
    setpair::SuiteResult r;
    try {
      r = setpair::run_suite(name, seed);
    } catch (const std::exception& e) {
      std::printf("FAIL  %-28s (exception: %s)\n", name.c_str(), e.what());
      all_ok = false;
      continue;
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();

    const bool in_budget = secs <= budget;
    const bool ok = r.passed && in_budget;
    all_ok = all_ok && ok;
    std::printf("%s  %-28s %6ld checks, %ld failures, %.2fs%s\n", ok ? "PASS" : "FAIL",
                name.c_str(), r.checks, r.failures, secs,
                in_budget ? "" : " (over time budget)");
    if (!r.passed && !r.detail.empty()) {
      std::printf("      detail: %s\n", r.detail.c_str());
    }
  }
  return all_ok ? 0 : 1;
}
