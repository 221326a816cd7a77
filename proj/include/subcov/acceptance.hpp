#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace subcov::acceptance {

struct Tolerances {
  double baseline = 1e-10;
  double zero_cost = 1e-8;
  double plateau = 1e-6;
  double transition = 1e-7;
  double continuous_bound = 1e-8;
  double dpss_quadrature = 1e-6;
  double palindrome = 1e-8;
  double symmetrization = 1e-10;
  double sdp_oracle = 1e-4;
  double flat_curve = 1e-8;
  double holevo = 1e-6;
  double mi_envelope = 1e-3;
  double gap_low = 1.0;
  double gap_high = 1.5;
};

struct CheckResult {
  bool passed = false;
  std::string detail;
};

struct Check {
  int id;
  std::string name;
  bool slow;
  std::function<CheckResult()> run;
};

std::vector<Check> acceptance_checks(const Tolerances& tol = {});

/// Runs the checks selected by `filter` (substring of the name; empty selects
/// all) and prints one line each. Slow checks need include_slow or a filter
/// that names them. Returns 0 when every selected check passed, else 1.
int run_checks(const std::vector<Check>& checks, const std::string& filter, bool include_slow,
               std::ostream& out);

}  // namespace subcov::acceptance
