#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"

namespace seqmeas::cli {

struct CommonOptions {
  std::string out;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 1'000'000;
  double quad_tol = 1e-10;
  bool with_oracles = false;
  std::string command_line;
};

/// "min:max:steps" (linear), "min:max:steps:log" (geometric) or "v1,v2,...".
/// Throws Error(InvalidRange) for empty, reversed or too-short ranges and
/// Error(ConfigParse) for malformed text.
std::vector<double> parse_grid(const std::string& spec, const std::string& name);

struct TableResult {
  CsvTable table;
  /// Rows where two columns that must agree did not.
  std::size_t mismatches = 0;
  double max_discrepancy = 0.0;
};

/// Tolerance between closed-form and generic-engine columns, relative to
/// max(1, |value|).
inline constexpr double kColumnAgreementTol = 1e-10;
inline constexpr double kFig4DisplayCap = 0.5;

TableResult fig2_table(const std::vector<double>& sigma1, const CommonOptions& opts);
TableResult fig3_table(const std::vector<double>& x1, const std::vector<double>& sigma1,
                       const CommonOptions& opts);
TableResult fig4_table(const std::vector<double>& x2, const std::vector<double>& sigma2, double sigma1,
                       const CommonOptions& opts);
TableResult chain_table(const ChainConfig& cfg, const CommonOptions& opts);

/// Writes to opts.out, or stdout when it is empty.
void emit(const CsvTable& table, const CommonOptions& opts);

}  // namespace seqmeas::cli
