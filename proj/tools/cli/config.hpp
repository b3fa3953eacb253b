#pragma once

// Chain configuration files (JSON).
//
//   {
//     "dimension": 2,
//     "initial_state": "plus",
//     "stages": [ {"observable": "Sz", "sigma": 0.5, "label": "A"}, ... ],
//     "query": {"free_index": 2, "fixed_outcomes": [0.3, null, 0.1, -0.4]},
//     "sweep": {"parameter": "/stages/0/sigma", "min": 0.1, "max": 2, "steps": 20}
//   }
//
// initial_state is a preset ("plus", "minus", "up", "down") or a density
// matrix; observable is a preset ("Sx", "Sy", "Sz") or a Hermitian matrix.
// Matrix entries are numbers or [re, im] pairs. free_index is one-based.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "seqmeas/chain.hpp"

namespace seqmeas::cli {

struct SweepSpec {
  std::string parameter;  // JSON pointer into the document
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 0;

  double value(std::size_t i) const;
};

struct ChainConfig {
  nlohmann::json document;
  std::optional<SweepSpec> sweep;
  std::string source;
  std::uint64_t hash = 0;
};

struct ChainSetup {
  MeasurementChain chain;
  ChainQuery query;
};

/// Throws Error(ConfigParse) with "source:line:column" for syntax errors and
/// "source: /json/pointer: message" for schema errors.
ChainConfig parse_chain_config(const std::string& text, const std::string& source);
ChainConfig load_chain_config(const std::string& path);

/// Builds the chain and query from a (possibly sweep-modified) document.
ChainSetup build_chain(const nlohmann::json& doc, const std::string& source);

/// Copy of the document with the sweep parameter set to `value`.
nlohmann::json with_parameter(const nlohmann::json& doc, const std::string& pointer, double value);

}  // namespace seqmeas::cli
