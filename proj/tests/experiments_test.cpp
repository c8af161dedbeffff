#include "exactdag/experiments.hpp"

#include <gtest/gtest.h>
#include <mpfr.h>

#include <sstream>

using namespace exactdag;
using namespace exactdag::bench;

namespace {

BigFloat parse(const char* digits) {
  BigFloat r(300);
  mpfr_set_str(r.get(), digits, 10, MPFR_RNDN);
  return r;
}

ExperimentConfig make(Experiment e, long n, long q) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.n = n;
  cfg.q = q;
  cfg.repeat = 1;
  return cfg;
}

Approximation evaluate(const ExperimentConfig& cfg) {
  return build(cfg).result.guarantee_absolute_error_two_to(-cfg.q, cfg.eval_cfg);
}

} // namespace

TEST(Experiments, NamesRoundTrip) {
  for (auto e : {Experiment::SumOfSqrts, Experiment::BinCoeff, Experiment::GeometricSum,
                 Experiment::TelescopingProduct, Experiment::TelescopingProductReverse})
    EXPECT_EQ(parse_experiment(to_string(e)), e);
  EXPECT_THROW(parse_experiment("sum"), std::invalid_argument);
}

TEST(Experiments, SumOfSqrtsValues) {
  auto one = make(Experiment::SumOfSqrts, 1, 100);
  EXPECT_TRUE(oracle::check(evaluate(one), parse("1"), 100));
  auto four = make(Experiment::SumOfSqrts, 4, 200);
  BigFloat ref = parse("6.14626436994197234232913506571557044551247712918732870123248671744266549537");
  EXPECT_TRUE(oracle::check(evaluate(four), ref, 200));
  EXPECT_TRUE(oracle::check(evaluate(four), oracle::value(four), 200));
}

TEST(Experiments, BinCoeffValues) {
  auto one = make(Experiment::BinCoeff, 1, 150);
  BigFloat sqrt13 = parse("3.60555127546398929311922126747049594625129657384524621271045305622716694829");
  EXPECT_TRUE(oracle::check(evaluate(one), sqrt13, 150));
  auto two = make(Experiment::BinCoeff, 2, 200);
  BigFloat ref = parse("4.69722436226800535344038936626475202687435171307737689364477347188641652585");
  EXPECT_TRUE(oracle::check(evaluate(two), ref, 200));
  EXPECT_TRUE(oracle::check(evaluate(two), oracle::value(two), 200));
}

TEST(Experiments, GeometricSumValues) {
  auto zero = make(Experiment::GeometricSum, 0, 100);
  EXPECT_TRUE(oracle::check(evaluate(zero), parse("1"), 100));
  // Explicit 1 + r + r^2 + r^3 against the closed form used by the oracle.
  BigFloat r(400), acc(400), term(400);
  mpfr_sqrt_ui(r.get(), 13, MPFR_RNDN);
  mpfr_div_ui(r.get(), r.get(), 8, MPFR_RNDN);
  mpfr_set_ui(acc.get(), 1, MPFR_RNDN);
  mpfr_set_ui(term.get(), 1, MPFR_RNDN);
  for (int i = 0; i < 3; ++i) {
    mpfr_mul(term.get(), term.get(), r.get(), MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
  }
  auto three = make(Experiment::GeometricSum, 3, 300);
  EXPECT_TRUE(oracle::check(evaluate(three), acc, 300));
  EXPECT_TRUE(oracle::check(evaluate(three), oracle::value(three), 300));
}

TEST(Experiments, TelescopingValues) {
  for (auto e : {Experiment::TelescopingProduct, Experiment::TelescopingProductReverse}) {
    auto cfg = make(e, 5, 60);
    EXPECT_TRUE(oracle::check(evaluate(cfg), parse("5"), 60));
    cfg.start_index = 3;
    BigFloat five_thirds(300);
    mpfr_set_ui(five_thirds.get(), 5, MPFR_RNDN);
    mpfr_div_ui(five_thirds.get(), five_thirds.get(), 3, MPFR_RNDN);
    EXPECT_TRUE(oracle::check(evaluate(cfg), five_thirds, 60));
    cfg = make(e, 1, 60);
    EXPECT_TRUE(oracle::check(evaluate(cfg), parse("1"), 60));
  }
}

TEST(Experiments, OracleRejectsWrongAnswer) {
  Approximation a{parse("1.001"), -20};
  EXPECT_FALSE(oracle::check(a, parse("1"), 20));
  EXPECT_TRUE(oracle::check(a, parse("1"), 9));
}

TEST(Experiments, ConfigValidation) {
  EXPECT_NO_THROW(make(Experiment::GeometricSum, 0, 10).validate());
  EXPECT_THROW(make(Experiment::SumOfSqrts, 0, 10).validate(), std::invalid_argument);
  EXPECT_THROW(make(Experiment::SumOfSqrts, 5, 0).validate(), std::invalid_argument);
  auto cfg = make(Experiment::SumOfSqrts, 5, 10);
  cfg.repeat = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = make(Experiment::SumOfSqrts, 5, 10);
  cfg.eval_cfg.guard_bits_c = 0;
  EXPECT_THROW(run_experiment(cfg), std::invalid_argument);
}

TEST(Experiments, BalancedTopologicalGeometricSumComputesEachNodeOnce) {
  auto cfg = make(Experiment::GeometricSum, 175, 50000);
  cfg.eval_cfg.balance_mode = BalanceMode::Add;
  cfg.eval_cfg.strategy = Strategy::Topological;
  RunRecord rec = run_once(cfg, 0);
  ASSERT_TRUE(rec.verified.has_value());
  EXPECT_TRUE(*rec.verified);
  EXPECT_LE(rec.metrics.recompute_total, rec.node_count);
  EXPECT_LE(rec.metrics.max_recompute_per_node(), 1u);
}

TEST(Experiments, CountersAreDeterministic) {
  auto cfg = make(Experiment::BinCoeff, 60, 3000);
  cfg.eval_cfg.balance_mode = BalanceMode::Mul;
  cfg.repeat = 3;
  auto runs = run_experiment(cfg);
  ASSERT_EQ(runs.size(), 3u);
  for (const auto& r : runs) {
    EXPECT_EQ(r.metrics.add_cost_units, runs[0].metrics.add_cost_units);
    EXPECT_EQ(r.metrics.mul_cost_units, runs[0].metrics.mul_cost_units);
    EXPECT_EQ(r.metrics.recompute_total, runs[0].metrics.recompute_total);
    EXPECT_EQ(r.depth_after, runs[0].depth_after);
    EXPECT_EQ(r.node_count, runs[0].node_count);
    EXPECT_TRUE(r.verified.value_or(false));
  }
  EXPECT_LT(runs[0].depth_after, runs[0].depth_before);
}

TEST(Experiments, MatrixAndCsv) {
  MatrixGrid grid;
  grid.experiments = {Experiment::SumOfSqrts};
  grid.ns = {30};
  grid.qs = {500};
  grid.balance_modes = {BalanceMode::None, BalanceMode::Add, BalanceMode::Mul, BalanceMode::All};
  grid.strategies = {Strategy::Recursive, Strategy::Topological};
  grid.repeat = 3;
  auto records = run_matrix(grid);
  ASSERT_EQ(records.size(), 24u);
  EXPECT_EQ(exit_code(records), 0);

  std::ostringstream os;
  write_csv(os, records);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, kCsvHeader);
  EXPECT_EQ(line,
            "experiment,n,q,start_index,balance,eval,order_preserving,run_index,wall_time_s,"
            "add_cost_units,mul_cost_units,recompute_total,balance_time_s,topo_sort_time_s,"
            "depth_before,depth_after,node_count,verified");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 17) << line;
    EXPECT_TRUE(line.ends_with(",pass")) << line;
    EXPECT_TRUE(line.starts_with("sum-of-sqrts,30,500,1,")) << line;
  }
  EXPECT_EQ(rows, 24);

  records[5].verified = false;
  EXPECT_EQ(exit_code(records), 1);
  records[5].verified.reset();
  EXPECT_EQ(exit_code(records), 0);
  std::ostringstream skip;
  write_csv_row(skip, records[5]);
  EXPECT_TRUE(skip.str().ends_with(",skip\n"));
}

TEST(Experiments, DotOutputFromLastRun) {
  auto cfg = make(Experiment::SumOfSqrts, 4, 200);
  cfg.repeat = 2;
  std::string dot;
  run_experiment(cfg, &dot);
  EXPECT_TRUE(dot.starts_with("digraph"));
  EXPECT_NE(dot.find("evaluated=1"), std::string::npos);
}
