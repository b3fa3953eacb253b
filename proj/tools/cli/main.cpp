#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "validate.hpp"

using namespace seqmeas;
using namespace seqmeas::cli;

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kUsageError = 2;

std::string quote(const std::string& arg) {
  if (!arg.empty() && arg.find_first_of(" \t\"'\\$") == std::string::npos) return arg;
  std::string q = "'";
  for (char c : arg) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
  cmd->add_option("--seed", o.seed, "Random seed for Monte Carlo checks")->capture_default_str();
  cmd->add_option("--mc-samples", o.mc_samples, "Monte Carlo sample count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--quad-tol", o.quad_tol, "Quadrature absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--with-oracles", o.with_oracles, "Add quadrature and Monte Carlo columns (chain)");
}

int finish(const TableResult& r, const CommonOptions& opts) {
  emit(r.table, opts);
  if (r.mismatches > 0) {
    std::cerr << "seqmeas: " << r.mismatches << " row(s) where closed-form and engine columns disagree (max "
              << format_double(r.max_discrepancy) << ")\n";
    return kValidationFailure;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential indirect measurements with Gaussian pointers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SEQMEAS_VERSION);

  CommonOptions opts;
  for (int i = 0; i < argc; ++i) opts.command_line += (i ? " " : "") + quote(i ? argv[i] : "seqmeas");

  std::string sigma1_grid = "0.01:100:50:log";
  auto* fig2 = app.add_subcommand("fig2", "Var(S_x) after an unread S_z measurement versus sigma1");
  fig2->add_option("--sigma1", sigma1_grid, "sigma1 grid")->capture_default_str();
  add_common(fig2, opts);

  std::string x1_grid = "-1:1:41", fig3_sigma1 = "0.01,0.1,0.25,0.5,1,2";
  auto* fig3 = app.add_subcommand("fig3", "Var(S_x | S_z) versus x1 and sigma1");
  fig3->add_option("--x1", x1_grid, "x1 grid")->capture_default_str();
  fig3->add_option("--sigma1", fig3_sigma1, "sigma1 grid")->capture_default_str();
  add_common(fig3, opts);

  std::string x2_grid = "-1:1:41", sigma2_grid = "0.1,0.25,0.5,1";
  double fig4_sigma1 = 1e3;
  auto* fig4 = app.add_subcommand("fig4", "Var(S_z | S_x) versus x2 and sigma2");
  fig4->add_option("--x2", x2_grid, "x2 grid")->capture_default_str();
  fig4->add_option("--sigma2", sigma2_grid, "sigma2 grid")->capture_default_str();
  fig4->add_option("--sigma1", fig4_sigma1, "First-probe width")->capture_default_str();
  add_common(fig4, opts);

  std::string config_path;
  auto* chain = app.add_subcommand("chain", "Conditional statistics of one stage of a configured chain");
  chain->add_option("config", config_path, "Chain configuration (JSON)")->required();
  add_common(chain, opts);

  std::string suite;
  std::size_t trials = 1000;
  auto* validate = app.add_subcommand("validate", "Run an invariant suite");
  std::vector<std::string> suites = suite_names();
  suites.emplace_back("all");
  validate->add_option("suite", suite, "pointer, kraus, joint, conditional, nseq, mpur or all")
      ->required()
      ->check(CLI::IsMember(suites));
  validate->add_option("--trials", trials, "Randomized trials per property")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(validate, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*fig2) return finish(fig2_table(parse_grid(sigma1_grid, "--sigma1"), opts), opts);
    if (*fig3) {
      return finish(fig3_table(parse_grid(x1_grid, "--x1"), parse_grid(fig3_sigma1, "--sigma1"), opts), opts);
    }
    if (*fig4) {
      return finish(fig4_table(parse_grid(x2_grid, "--x2"), parse_grid(sigma2_grid, "--sigma2"), fig4_sigma1, opts),
                    opts);
    }
    if (*chain) return finish(chain_table(load_chain_config(config_path), opts), opts);
    if (*validate) {
      ValidateOptions vo{opts.seed, opts.mc_samples, opts.quad_tol, trials};
      const auto start = std::chrono::steady_clock::now();
      const auto results = run_suite(suite, vo);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::size_t failed = 0;
      std::ostream* os = &std::cout;
      std::ofstream file;
      if (!opts.out.empty()) {
        file.open(opts.out);
        if (!file) throw Error(ErrorKind::InvalidArgument, "cannot open output file " + opts.out);
        os = &file;
      }
      for (const auto& r : results) {
        print_check(*os, r);
        failed += r.passed ? 0 : 1;
      }
      *os << "summary suite=" << suite << " checks=" << results.size() << " failed=" << failed
          << " seed=" << opts.seed << " seconds=" << format_double(secs) << '\n';
      return failed == 0 ? kOk : kValidationFailure;
    }
  } catch (const Error& e) {
    std::cerr << "seqmeas: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "seqmeas: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}
