#pragma once

// Analytical-vs-Monte-Carlo acceptance suite shared by `sgnet validate`
// and the acceptance test.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sgnet::validation {

struct Options {
  std::uint64_t seed = 1;
  int jobs = 1;
  /// Criterion ids to run; empty runs all.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(const Options& opt, std::ostream* progress = nullptr);

/// "PASS  3  coverage overlap  ...  (0.41 s / 5 s)"
std::string format_line(const CriterionResult& r);

}  // namespace sgnet::validation
