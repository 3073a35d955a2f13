#pragma once

#include <string>
#include <vector>

namespace orbitfisher {

// Result of one named verification check.
struct CheckReport {
  std::string check;
  double max_residual = 0.0;
  long samples = 0;
  bool pass = false;
};

inline CheckReport make_report(std::string name, double max_residual, long samples, double tol) {
  CheckReport r;
  r.check = std::move(name);
  r.max_residual = max_residual;
  r.samples = samples;
  r.pass = max_residual <= tol;
  return r;
}

inline bool all_pass(const std::vector<CheckReport>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

}  // namespace orbitfisher
