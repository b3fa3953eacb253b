#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "seqmeas/presets.hpp"

namespace seqmeas::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ConfigParse, source + ": " + where + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path,
                    const std::string& source) {
  if (!obj.is_object()) fail(source, path.empty() ? "/" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(source, path + "/" + key, "missing required field");
  return *it;
}

double number(const json& v, const std::string& path, const std::string& source) {
  if (!v.is_number()) fail(source, path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(source, path, "expected a finite number");
  return d;
}

Complex entry(const json& v, const std::string& path, const std::string& source) {
  if (v.is_number()) return {number(v, path, source), 0.0};
  if (v.is_array() && v.size() == 2) {
    return {number(v[0], path + "/0", source), number(v[1], path + "/1", source)};
  }
  fail(source, path, "expected a number or a [re, im] pair");
}

ComplexMatrix matrix(const json& v, std::size_t dim, const std::string& path, const std::string& source) {
  if (!v.is_array() || v.size() != dim) {
    fail(source, path, "expected " + std::to_string(dim) + " rows");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!v[r].is_array() || v[r].size() != dim) {
      fail(source, rp, "expected " + std::to_string(dim) + " entries");
    }
    for (std::size_t c = 0; c < dim; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          entry(v[r][c], rp + "/" + std::to_string(c), source);
  }
  return m;
}

DensityMatrix initial_state(const json& v, std::size_t dim, const std::string& source) {
  const std::string path = "/initial_state";
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (dim != 2) fail(source, path, "preset states need dimension 2");
    if (name == "plus") return DensityMatrix::from_pure(presets::ket_plus());
    if (name == "minus") return DensityMatrix::from_pure(presets::ket_minus());
    if (name == "up") return DensityMatrix::from_pure(presets::ket_up());
    if (name == "down") return DensityMatrix::from_pure(presets::ket_down());
    fail(source, path, "unknown preset '" + name + "' (plus, minus, up, down)");
  }
  try {
    return DensityMatrix(matrix(v, dim, path, source));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigParse) throw;
    fail(source, path, e.what());
  }
}

Observable observable(const json& v, std::size_t dim, const std::string& path, const std::string& source) {
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (dim != 2) fail(source, path, "preset observables need dimension 2");
    if (name == "Sz") return presets::spin_z();
    if (name == "Sx") return presets::spin_x();
    if (name == "Sy") return presets::spin_y();
    fail(source, path, "unknown preset '" + name + "' (Sx, Sy, Sz)");
  }
  try {
    return Observable(matrix(v, dim, path, source));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigParse) throw;
    fail(source, path, e.what());
  }
}

}  // namespace

double SweepSpec::value(std::size_t i) const {
  if (steps < 2) return min;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

ChainSetup build_chain(const json& doc, const std::string& source) {
  if (!doc.is_object()) fail(source, "/", "expected an object");
  const json& dim_v = require(doc, "dimension", "", source);
  if (!dim_v.is_number_integer() || dim_v.get<long long>() < 1) {
    fail(source, "/dimension", "expected a positive integer");
  }
  const auto dim = dim_v.get<std::size_t>();
  DensityMatrix rho0 = initial_state(require(doc, "initial_state", "", source), dim, source);

  const json& stages_v = require(doc, "stages", "", source);
  if (!stages_v.is_array() || stages_v.empty()) fail(source, "/stages", "expected a non-empty array");
  std::vector<MeasurementStage> stages;
  for (std::size_t k = 0; k < stages_v.size(); ++k) {
    const std::string sp = "/stages/" + std::to_string(k);
    const json& s = stages_v[k];
    Observable obs = observable(require(s, "observable", sp, source), dim, sp + "/observable", source);
    const double sigma = number(require(s, "sigma", sp, source), sp + "/sigma", source);
    if (!(sigma > 0.0)) fail(source, sp + "/sigma", "must be positive");
    std::string label = "stage" + std::to_string(k + 1);
    if (s.contains("label")) {
      if (!s["label"].is_string()) fail(source, sp + "/label", "expected a string");
      label = s["label"].get<std::string>();
    }
    stages.push_back({std::move(obs), Pointer(sigma), std::move(label)});
  }

  const json& q = require(doc, "query", "", source);
  const json& fi = require(q, "free_index", "/query", source);
  if (!fi.is_number_integer() || fi.get<long long>() < 1 ||
      fi.get<std::size_t>() > stages.size()) {
    fail(source, "/query/free_index", "expected an integer in 1.." + std::to_string(stages.size()));
  }
  ChainQuery query;
  query.free_stage = fi.get<std::size_t>() - 1;
  const json& fo = require(q, "fixed_outcomes", "/query", source);
  if (!fo.is_array() || fo.size() != stages.size()) {
    fail(source, "/query/fixed_outcomes", "expected " + std::to_string(stages.size()) + " entries");
  }
  for (std::size_t k = 0; k < fo.size(); ++k) {
    const std::string p = "/query/fixed_outcomes/" + std::to_string(k);
    if (k == query.free_stage) {
      if (!fo[k].is_null() && !fo[k].is_number()) fail(source, p, "free slot must be null");
      query.outcomes.push_back(0.0);
    } else {
      query.outcomes.push_back(number(fo[k], p, source));
    }
  }
  try {
    return {MeasurementChain(std::move(rho0), std::move(stages)), std::move(query)};
  } catch (const Error& e) {
    fail(source, "/", e.what());
  }
}

json with_parameter(const json& doc, const std::string& pointer, double value) {
  json copy = doc;
  copy[json::json_pointer(pointer)] = value;
  return copy;
}

ChainConfig parse_chain_config(const std::string& text, const std::string& source) {
  ChainConfig cfg;
  cfg.source = source;
  cfg.hash = fnv1a64(text);
  try {
    cfg.document = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": " << e.what();
    throw Error(ErrorKind::ConfigParse, os.str());
  }
  if (cfg.document.is_object() && cfg.document.contains("sweep")) {
    const json& s = cfg.document["sweep"];
    SweepSpec sw;
    const json& p = require(s, "parameter", "/sweep", source);
    if (!p.is_string()) fail(source, "/sweep/parameter", "expected a JSON pointer string");
    sw.parameter = p.get<std::string>();
    sw.min = number(require(s, "min", "/sweep", source), "/sweep/min", source);
    sw.max = number(require(s, "max", "/sweep", source), "/sweep/max", source);
    const json& st = require(s, "steps", "/sweep", source);
    if (!st.is_number_integer() || st.get<long long>() < 2) fail(source, "/sweep/steps", "expected an integer >= 2");
    sw.steps = st.get<std::size_t>();
    if (!(sw.min < sw.max)) fail(source, "/sweep", "min must be below max");
    json::json_pointer ptr;
    try {
      ptr = json::json_pointer(sw.parameter);
    } catch (const json::exception& e) {
      fail(source, "/sweep/parameter", e.what());
    }
    if (!cfg.document.contains(ptr) || !cfg.document[ptr].is_number()) {
      fail(source, "/sweep/parameter", "'" + sw.parameter + "' does not name a numeric field");
    }
    cfg.sweep = sw;
  }
  // Validate the base document once so errors surface before any work.
  build_chain(cfg.document, source);
  return cfg;
}

ChainConfig load_chain_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigParse, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_chain_config(ss.str(), path);
}

}  // namespace seqmeas::cli
