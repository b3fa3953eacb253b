#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace seqmeas::cli {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  /// Worst observed discrepancy (or the checked quantity).
  double value = 0.0;
  double tolerance = 0.0;
  std::size_t trials = 1;
  std::string detail;
};

struct ValidateOptions {
  std::uint64_t seed = 0;
  std::size_t mc_samples = 1'000'000;
  double quad_tol = 1e-10;
  std::size_t trials = 1000;
};

const std::vector<std::string>& suite_names();

/// Runs one named suite ("all" runs every suite). Throws Error(InvalidArgument)
/// for an unknown name. Failures are reported, never thrown.
std::vector<CheckResult> run_suite(const std::string& suite, const ValidateOptions& opts);

/// check suite=<s> name=<n> status=pass|fail value=<v> tol=<t> trials=<k> [detail="..."]
void print_check(std::ostream& os, const CheckResult& r);

}  // namespace seqmeas::cli
