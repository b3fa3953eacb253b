#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "seqmeas/conditional_model.hpp"
#include "seqmeas/joint_model.hpp"
#include "seqmeas/parallel.hpp"
#include "seqmeas/presets.hpp"
#include "seqmeas/quad_oracle.hpp"
#include "seqmeas/sampling.hpp"
#include "seqmeas/spin_reference.hpp"

namespace seqmeas::cli {

namespace {

double parse_number(const std::string& text, const std::string& name) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::ConfigParse, name + ": '" + text + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

void add_standard_meta(CsvTable& t, const CommonOptions& opts, std::uint64_t config_hash) {
  t.add_meta("seqmeas", SEQMEAS_VERSION);
  t.add_meta("command", opts.command_line);
  t.add_meta("seed", std::to_string(opts.seed));
  t.add_meta("rng", std::string(oracle::Rng::kAlgorithm));
  t.add_meta("config_hash", "fnv1a64:" + hex64(config_hash));
}

std::uint64_t options_hash(const std::string& payload) { return fnv1a64(payload); }

void require_positive(const std::vector<double>& v, const std::string& name) {
  for (double x : v) {
    if (!(x > 0.0)) throw Error(ErrorKind::InvalidRange, name + " values must be positive");
  }
}

bool disagree(double closed, double engine) {
  return std::abs(closed - engine) > kColumnAgreementTol * std::max(1.0, std::abs(closed));
}

struct SpinStages {
  DensityMatrix rho0 = DensityMatrix::from_pure(presets::ket_plus());
  MeasurementStage first;
  MeasurementStage second;
  SpinStages(double s1, double s2)
      : first{presets::spin_z(), Pointer(s1), "Sz"}, second{presets::spin_x(), Pointer(s2), "Sx"} {}
};

/// Evaluates rows in parallel and appends them in order.
template <class RowFn>
void fill_rows(TableResult& r, std::size_t count, RowFn&& row_fn) {
  std::vector<std::vector<double>> rows(count);
  std::vector<double> discrepancy(count, 0.0);
  std::vector<char> bad(count, 0);
  parallel_for(count, [&](std::size_t i) {
    double d = 0.0;
    bool mismatch = false;
    rows[i] = row_fn(i, d, mismatch);
    discrepancy[i] = d;
    bad[i] = mismatch;
  });
  for (std::size_t i = 0; i < count; ++i) {
    r.table.add_row(std::move(rows[i]));
    r.max_discrepancy = std::max(r.max_discrepancy, discrepancy[i]);
    r.mismatches += bad[i] ? 1 : 0;
  }
}

std::string grid_text(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + format_double(x);
  return s;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec, const std::string& name) {
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3 && parts.size() != 4) {
      throw Error(ErrorKind::ConfigParse, name + ": expected min:max:steps[:log], got '" + spec + "'");
    }
    const double lo = parse_number(parts[0], name);
    const double hi = parse_number(parts[1], name);
    const double steps_d = parse_number(parts[2], name);
    const bool geometric = parts.size() == 4;
    if (geometric && parts[3] != "log") {
      throw Error(ErrorKind::ConfigParse, name + ": the optional fourth field must be 'log'");
    }
    if (steps_d != std::floor(steps_d) || steps_d < 2) {
      throw Error(ErrorKind::InvalidRange, name + ": steps must be an integer >= 2");
    }
    if (!(lo < hi)) throw Error(ErrorKind::InvalidRange, name + ": min must be below max");
    if (geometric && !(lo > 0.0)) throw Error(ErrorKind::InvalidRange, name + ": log grids need min > 0");
    const auto steps = static_cast<std::size_t>(steps_d);
    std::vector<double> v(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(steps - 1);
      v[i] = geometric ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
    }
    v.front() = lo;
    v.back() = hi;
    return v;
  }
  std::vector<double> v;
  for (const auto& p : split(spec, ',')) v.push_back(parse_number(p, name));
  if (v.empty()) throw Error(ErrorKind::InvalidRange, name + ": empty grid");
  return v;
}

TableResult fig2_table(const std::vector<double>& sigma1, const CommonOptions& opts) {
  require_positive(sigma1, "sigma1");
  TableResult r;
  add_standard_meta(r.table, opts, options_hash("fig2|" + grid_text(sigma1)));
  r.table.set_header({"sigma1", "var_sx_rho1", "var_sx_rho1_engine"});
  fill_rows(r, sigma1.size(), [&](std::size_t i, double& d, bool& bad) {
    const SpinStages s(sigma1[i], 1.0);
    const double closed = spin_reference::var_sx_rho1_closed(sigma1[i]);
    const double engine = backaction_variance(s.rho0, s.first, s.second.observable);
    d = std::abs(closed - engine);
    bad = disagree(closed, engine);
    return std::vector<double>{sigma1[i], closed, engine};
  });
  return r;
}

TableResult fig3_table(const std::vector<double>& x1, const std::vector<double>& sigma1,
                       const CommonOptions& opts) {
  require_positive(sigma1, "sigma1");
  TableResult r;
  add_standard_meta(r.table, opts, options_hash("fig3|" + grid_text(x1) + "|" + grid_text(sigma1)));
  r.table.set_header({"x1", "sigma1", "var_sx_given_sz", "var_sx_given_sz_engine"});
  const std::size_t n = x1.size() * sigma1.size();
  fill_rows(r, n, [&](std::size_t i, double& d, bool& bad) {
    const double x = x1[i / sigma1.size()];
    const double s1 = sigma1[i % sigma1.size()];
    const SpinStages s(s1, 1.0);
    const double closed = spin_reference::var_sx_given_sz_closed(s1, x);
    const double engine = forward_stats(s.rho0, s.first, s.second, x).extracted_system_variance;
    d = std::abs(closed - engine);
    bad = disagree(closed, engine);
    return std::vector<double>{x, s1, closed, engine};
  });
  return r;
}

TableResult fig4_table(const std::vector<double>& x2, const std::vector<double>& sigma2, double sigma1,
                       const CommonOptions& opts) {
  require_positive(sigma2, "sigma2");
  if (!(sigma1 > 0.0) || !std::isfinite(sigma1)) throw Error(ErrorKind::InvalidRange, "sigma1 must be positive");
  TableResult r;
  add_standard_meta(r.table, opts,
                    options_hash("fig4|" + grid_text(x2) + "|" + grid_text(sigma2) + "|" + format_double(sigma1)));
  r.table.add_meta("sigma1", format_double(sigma1));
  r.table.add_meta("note", "var_sz_given_sx_display is capped at 0.5 (the plotted range); engine is nan "
                           "where the conditioning outcome has vanishing likelihood");
  r.table.set_header({"x2", "sigma2", "var_sz_given_sx", "var_sz_given_sx_engine", "var_sz_given_sx_display"});
  const std::size_t n = x2.size() * sigma2.size();
  fill_rows(r, n, [&](std::size_t i, double& d, bool& bad) {
    const double x = x2[i / sigma2.size()];
    const double s2 = sigma2[i % sigma2.size()];
    const SpinStages s(sigma1, s2);
    const double closed = spin_reference::var_sz_given_sx_closed(sigma1, s2, x);
    double engine = std::nan("");
    try {
      engine = backward_stats(s.rho0, s.first, s.second, x).extracted_system_variance;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroLikelihood) throw;
    }
    if (!std::isnan(engine) && closed <= kFig4DisplayCap) {
      d = std::abs(closed - engine);
      bad = disagree(closed, engine);
    }
    return std::vector<double>{x, s2, closed, engine, std::min(closed, kFig4DisplayCap)};
  });
  return r;
}

TableResult chain_table(const ChainConfig& cfg, const CommonOptions& opts) {
  TableResult r;
  add_standard_meta(r.table, opts, cfg.hash);
  r.table.add_meta("config", cfg.source);
  std::vector<std::string> header;
  if (cfg.sweep) header.push_back(cfg.sweep->parameter);
  for (const char* c : {"free_index", "mean", "variance", "extracted_variance", "sub_probe_width"})
    header.emplace_back(c);
  if (opts.with_oracles) {
    r.table.add_meta("mc_samples", std::to_string(opts.mc_samples));
    r.table.add_meta("quad_tol", format_double(opts.quad_tol));
    r.table.add_meta("mc_seeds", "seed + row index");
    for (const char* c : {"quad_mean", "quad_variance", "mc_mean", "mc_variance", "mc_se", "mc_z"})
      header.emplace_back(c);
  }
  r.table.set_header(header);
  const std::size_t points = cfg.sweep ? cfg.sweep->steps : 1;
  oracle::QuadratureConfig qc;
  qc.abs_tol = opts.quad_tol;
  fill_rows(r, points, [&](std::size_t i, double& d, bool& bad) {
    const double pv = cfg.sweep ? cfg.sweep->value(i) : 0.0;
    const auto doc = cfg.sweep ? with_parameter(cfg.document, cfg.sweep->parameter, pv) : cfg.document;
    const ChainSetup setup = build_chain(doc, cfg.source);
    const ChainResult res = conditional_stats_k(setup.chain, setup.query);
    std::vector<double> row;
    if (cfg.sweep) row.push_back(pv);
    row.insert(row.end(), {static_cast<double>(setup.query.free_stage + 1), res.mean, res.variance,
                           res.extracted_variance, res.sub_probe_width ? 1.0 : 0.0});
    if (opts.with_oracles) {
      const oracle::QuadMoments q = oracle::quad_conditional(setup.chain, setup.query, qc);
      oracle::SamplerConfig sc;
      sc.samples = opts.mc_samples;
      sc.seed = opts.seed + i;
      const oracle::McConditional mc = oracle::mc_conditional_variance(setup.chain, setup.query, sc);
      d = std::abs(q.variance - res.variance);
      bad = d > 1e-8;
      row.insert(row.end(), {q.mean, q.variance, mc.mean, mc.estimate, mc.standard_error,
                             (mc.estimate - res.variance) / mc.standard_error});
    }
    return row;
  });
  return r;
}

void emit(const CsvTable& table, const CommonOptions& opts) {
  if (opts.out.empty()) {
    table.write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(opts.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot open output file " + opts.out);
  table.write(f);
  if (!f) throw Error(ErrorKind::InvalidArgument, "failed writing " + opts.out);
}

}  // namespace seqmeas::cli
