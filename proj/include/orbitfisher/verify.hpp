#pragma once

#include <cstdint>
#include <vector>

#include "orbitfisher/report.hpp"

// Randomized verification suites over a deterministic seed. Each suite samples
// orbits across a range of dimensions (pure, generic mixed, degenerate mixed)
// and aggregates per-check worst residuals into CheckReports.
namespace orbitfisher::verify {

struct SuiteConfig {
  std::uint64_t seed = 42;
  int samples = 20;       // per-check sample budget
  int n_min = 2;
  int n_max = 5;
  double tol_override = 0.0;  // when > 0, replaces every residual pass threshold
};

struct SuiteResult {
  std::vector<CheckReport> checks;
  bool pass = false;
};

SuiteResult run_kks_suite(const SuiteConfig& cfg = {});
SuiteResult run_fisher_suite(const SuiteConfig& cfg = {});
SuiteResult run_fibration_suite(const SuiteConfig& cfg = {});
SuiteResult run_linfisher_suite(const SuiteConfig& cfg = {});
SuiteResult run_all(const SuiteConfig& cfg = {});

}  // namespace orbitfisher::verify
