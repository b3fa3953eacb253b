#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "test_support.hpp"
#include "validate.hpp"

using namespace seqmeas;
using namespace seqmeas::cli;
using seqmeas::testing::throws_kind;

namespace {

const std::string kConfigDir = SEQMEAS_CONFIG_DIR;

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  oracle::Rng rng(91);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, 40.0 * rng.uniform() - 20.0);
    const std::string s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    ASSERT_EQ(back, v) << s;
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Fnv1a64, ReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}

TEST(CsvTable, Layout) {
  CsvTable t;
  t.add_meta("seed", "3");
  t.set_header({"a", "b"});
  t.add_row({1.0, 0.5});
  EXPECT_THROW(t.add_row({1.0}), std::logic_error);
  std::ostringstream os;
  t.write(os);
  EXPECT_EQ(os.str(), "# seed: 3\na,b\n1,0.5\n");
}

TEST(ParseGrid, Forms) {
  EXPECT_EQ(parse_grid("0:1:3", "g"), (std::vector<double>{0.0, 0.5, 1.0}));
  const auto lg = parse_grid("0.01:100:5:log", "g");
  ASSERT_EQ(lg.size(), 5u);
  EXPECT_EQ(lg.front(), 0.01);
  EXPECT_EQ(lg.back(), 100.0);
  EXPECT_NEAR(lg[2], 1.0, 1e-12);
  EXPECT_EQ(parse_grid("0.5,1,2", "g"), (std::vector<double>{0.5, 1.0, 2.0}));
}

TEST(ParseGrid, Errors) {
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidRange, [] { parse_grid("1:0:5", "g"); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidRange, [] { parse_grid("0:1:1", "g"); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidRange, [] { parse_grid("-1:1:3:log", "g"); }));
  EXPECT_TRUE(throws_kind(ErrorKind::ConfigParse, [] { parse_grid("a:b:c", "g"); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidRange, [] { parse_grid("", "g"); }));
}

TEST(Config, FourStageChainLoads) {
  const ChainConfig cfg = load_chain_config(kConfigDir + "/four_stage_chain.json");
  EXPECT_FALSE(cfg.sweep.has_value());
  const ChainSetup setup = build_chain(cfg.document, cfg.source);
  EXPECT_EQ(setup.chain.size(), 4u);
  EXPECT_EQ(setup.query.free_stage, 1u);
  EXPECT_EQ(setup.query.outcomes[0], 0.3);
  EXPECT_EQ(setup.chain.stage(3).label, "A2");
  EXPECT_NEAR(conditional_stats_k(setup.chain, setup.query).variance, 0.2581876633529904, 1e-13);
}

TEST(Config, SweepAndParameterOverride) {
  const ChainConfig cfg = load_chain_config(kConfigDir + "/qutrit_backward.json");
  ASSERT_TRUE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.sweep->steps, 12u);
  EXPECT_EQ(cfg.sweep->value(0), 0.1);
  EXPECT_EQ(cfg.sweep->value(11), 2.0);
  const auto doc = with_parameter(cfg.document, cfg.sweep->parameter, 0.7);
  EXPECT_EQ(build_chain(doc, cfg.source).chain.stage(0).sigma(), 0.7);
  EXPECT_EQ(build_chain(doc, cfg.source).chain.dim(), 3u);
}

TEST(Config, SyntaxErrorsCarryPosition) {
  try {
    parse_chain_config("{\n  \"dimension\": 2,\n  oops\n}", "inline");
    FAIL() << "expected ConfigParse";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigParse);
    EXPECT_NE(std::string(e.what()).find("inline:3:"), std::string::npos) << e.what();
  }
}

TEST(Config, SchemaErrorsCarryPointer) {
  const std::string base = R"({"dimension": 2, "initial_state": "plus",
    "stages": [{"observable": "Sz", "sigma": -1}],
    "query": {"free_index": 1, "fixed_outcomes": [null]}})";
  try {
    const ChainConfig cfg = parse_chain_config(base, "inline");
    build_chain(cfg.document, cfg.source);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/stages/0/sigma"), std::string::npos) << e.what();
  }
  const std::string bad_obs = R"({"dimension": 2, "initial_state": "plus",
    "stages": [{"observable": "Sq", "sigma": 1}],
    "query": {"free_index": 1, "fixed_outcomes": [null]}})";
  EXPECT_TRUE(throws_kind(ErrorKind::ConfigParse, [&] {
    const ChainConfig c = parse_chain_config(bad_obs, "inline");
    build_chain(c.document, c.source);
  }));
  EXPECT_TRUE(throws_kind(ErrorKind::ConfigParse, [] { load_chain_config("/nonexistent/config.json"); }));
}

TEST(Config, HashDependsOnContent) {
  const std::string doc = R"({"dimension": 2, "initial_state": "plus",
    "stages": [{"observable": "Sz", "sigma": SIGMA}],
    "query": {"free_index": 1, "fixed_outcomes": [null]}})";
  auto with_sigma = [&](const std::string& v) {
    std::string d = doc;
    d.replace(d.find("SIGMA"), 5, v);
    return parse_chain_config(d, "x");
  };
  const auto a = with_sigma("0.5");
  const auto b = with_sigma("0.6");
  EXPECT_EQ(a.hash, with_sigma("0.5").hash);
  EXPECT_NE(a.hash, b.hash);
}

TEST(Tables, Fig2AgreesWithClosedForm) {
  CommonOptions opts;
  const TableResult r = fig2_table(parse_grid("0.01:100:50:log", "sigma1"), opts);
  EXPECT_EQ(r.mismatches, 0u);
  EXPECT_EQ(r.table.rows().size(), 50u);
  EXPECT_EQ(r.table.header(), (std::vector<std::string>{"sigma1", "var_sx_rho1", "var_sx_rho1_engine"}));
}

TEST(Tables, Fig3AndFig4AgreeWithClosedForm) {
  CommonOptions opts;
  EXPECT_EQ(fig3_table(parse_grid("-1:1:9", "x1"), {0.1, 0.5, 2.0}, opts).mismatches, 0u);
  const TableResult f4 = fig4_table(parse_grid("-1:1:9", "x2"), {0.25, 1.0}, 1e3, opts);
  EXPECT_EQ(f4.mismatches, 0u);
  EXPECT_EQ(f4.table.rows().size(), 18u);
}

TEST(Tables, ChainWithOracles) {
  CommonOptions opts;
  opts.with_oracles = true;
  opts.mc_samples = 20'000;
  opts.seed = 5;
  const TableResult r = chain_table(load_chain_config(kConfigDir + "/n2_forward_sweep.json"), opts);
  EXPECT_EQ(r.mismatches, 0u);
  EXPECT_EQ(r.table.rows().size(), 21u);
  EXPECT_EQ(r.table.header().back(), "mc_z");
}

TEST(Validate, SuitesRunAndUnknownRejected) {
  ValidateOptions vo;
  vo.trials = 20;
  vo.mc_samples = 20'000;
  for (const std::string name : {"pointer", "kraus", "mpur"}) {
    for (const auto& r : run_suite(name, vo)) EXPECT_TRUE(r.passed) << r.suite << "/" << r.name;
  }
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [&] { run_suite("nope", vo); }));
  std::ostringstream os;
  print_check(os, CheckResult{"s", "n", true, 0.5, 1.0, 3, ""});
  EXPECT_EQ(os.str(), "check suite=s name=n status=pass value=0.5 tol=1 trials=3\n");
}
