#pragma once

// Benchmark experiments: build the expression dag of a fixed computation,
// guarantee an accuracy, and check the result against an independent
// fixed-precision MPFR computation.

#include "exactdag/exact_real.hpp"

#include <mpfr.h>

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace exactdag::bench {

enum class Experiment : std::uint8_t {
  SumOfSqrts,
  BinCoeff,
  GeometricSum,
  TelescopingProduct,
  TelescopingProductReverse,
};

inline std::string_view to_string(Experiment e) {
  switch (e) {
  case Experiment::SumOfSqrts: return "sum-of-sqrts";
  case Experiment::BinCoeff: return "bin-coeff";
  case Experiment::GeometricSum: return "geometric-sum";
  case Experiment::TelescopingProduct: return "telescoping";
  case Experiment::TelescopingProductReverse: return "telescoping-reverse";
  }
  return "?";
}

inline Experiment parse_experiment(std::string_view s) {
  for (auto e : {Experiment::SumOfSqrts, Experiment::BinCoeff, Experiment::GeometricSum,
                 Experiment::TelescopingProduct, Experiment::TelescopingProductReverse})
    if (to_string(e) == s) return e;
  throw std::invalid_argument("unknown experiment: " + std::string(s));
}

struct ExperimentConfig {
  Experiment experiment = Experiment::SumOfSqrts;
  long n = 1;
  long q = 1;
  /// First factor index of the forward telescoping product.
  long start_index = 1;
  int repeat = 25;
  bool verify = true;
  EvalConfig eval_cfg;

  void validate() const {
    long min_n = experiment == Experiment::GeometricSum ? 0 : 1;
    if (n < min_n) throw std::invalid_argument("n out of range");
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    if (start_index < 1) throw std::invalid_argument("start_index must be >= 1");
    if (repeat < 1) throw std::invalid_argument("repeat must be >= 1");
    eval_cfg.validate();
  }
};

struct RunRecord {
  ExperimentConfig config;
  int run_index = 0;
  double wall_time = 0;
  EvalMetrics metrics;
  /// Empty when verification was not requested.
  std::optional<bool> verified;
  std::size_t depth_before = 0;
  std::size_t depth_after = 0;
  std::size_t node_count = 0;
};

/// Result of building an experiment: the value to evaluate plus every
/// handle the original program still holds at the time of the query.
struct BuiltExpression {
  ExactReal result;
  std::vector<ExactReal> live;
};

inline BuiltExpression build_sum_of_sqrts(long n) {
  ExactReal sum(0);
  for (long i = 1; i <= n; ++i) sum += sqrt(ExactReal(static_cast<double>(i)));
  return {sum, {}};
}

inline BuiltExpression build_bin_coeff(long n) {
  ExactReal b = sqrt(ExactReal(13));
  ExactReal num(1), denom(1);
  for (long i = 0; i < n; ++i) {
    num *= b - ExactReal(static_cast<double>(i));
    denom *= ExactReal(static_cast<double>(i + 1));
  }
  ExactReal bc = num / denom;
  return {bc, {b, num, denom}};
}

inline BuiltExpression build_geometric_sum(long n) {
  ExactReal r = sqrt(ExactReal(13) / ExactReal(64));
  ExactReal ri(1);
  ExactReal s = ri;
  for (long i = 0; i < n; ++i) {
    ri *= r;
    s += ri;
  }
  return {s, {r, ri}};
}

inline BuiltExpression build_telescoping(long n, long start_index, bool reverse) {
  ExactReal prod(1);
  auto factor = [](long i) {
    return ExactReal(static_cast<double>(i + 1)) / ExactReal(static_cast<double>(i));
  };
  if (reverse) {
    for (long i = n - 1; i >= start_index; --i) prod *= factor(i);
  } else {
    for (long i = start_index; i < n; ++i) prod *= factor(i);
  }
  return {prod, {}};
}

inline BuiltExpression build(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
  case Experiment::SumOfSqrts: return build_sum_of_sqrts(cfg.n);
  case Experiment::BinCoeff: return build_bin_coeff(cfg.n);
  case Experiment::GeometricSum: return build_geometric_sum(cfg.n);
  case Experiment::TelescopingProduct: return build_telescoping(cfg.n, cfg.start_index, false);
  case Experiment::TelescopingProductReverse: return build_telescoping(cfg.n, cfg.start_index, true);
  }
  throw std::invalid_argument("unknown experiment");
}

namespace oracle {

/// Straight-line MPFR evaluation with every intermediate at prec bits.
inline BigFloat evaluate_at(const ExperimentConfig& cfg, Precision prec) {
  BigFloat acc(prec), t(prec), u(prec);
  const long n = cfg.n;
  switch (cfg.experiment) {
  case Experiment::SumOfSqrts:
    mpfr_set_ui(acc.get(), 0, MPFR_RNDN);
    for (long i = 1; i <= n; ++i) {
      mpfr_sqrt_ui(t.get(), static_cast<unsigned long>(i), MPFR_RNDN);
      mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
    }
    break;
  case Experiment::BinCoeff: {
    BigFloat b(prec);
    mpfr_sqrt_ui(b.get(), 13, MPFR_RNDN);
    mpfr_set_ui(acc.get(), 1, MPFR_RNDN);
    for (long i = 0; i < n; ++i) {
      mpfr_sub_ui(t.get(), b.get(), static_cast<unsigned long>(i), MPFR_RNDN);
      mpfr_mul(acc.get(), acc.get(), t.get(), MPFR_RNDN);
      mpfr_div_ui(acc.get(), acc.get(), static_cast<unsigned long>(i + 1), MPFR_RNDN);
    }
    break;
  }
  case Experiment::GeometricSum: {
    // (1 - r^(n+1)) / (1 - r)
    BigFloat r(prec);
    mpfr_set_ui(r.get(), 13, MPFR_RNDN);
    mpfr_div_ui(r.get(), r.get(), 64, MPFR_RNDN);
    mpfr_sqrt(r.get(), r.get(), MPFR_RNDN);
    mpfr_pow_ui(t.get(), r.get(), static_cast<unsigned long>(n + 1), MPFR_RNDN);
    mpfr_ui_sub(t.get(), 1, t.get(), MPFR_RNDN);
    mpfr_ui_sub(u.get(), 1, r.get(), MPFR_RNDN);
    mpfr_div(acc.get(), t.get(), u.get(), MPFR_RNDN);
    break;
  }
  case Experiment::TelescopingProduct:
  case Experiment::TelescopingProductReverse:
    // The product telescopes to n / start (1 when the range is empty).
    if (cfg.start_index >= n) {
      mpfr_set_ui(acc.get(), 1, MPFR_RNDN);
    } else {
      mpfr_set_ui(acc.get(), static_cast<unsigned long>(n), MPFR_RNDN);
      mpfr_div_ui(acc.get(), acc.get(), static_cast<unsigned long>(cfg.start_index), MPFR_RNDN);
    }
    break;
  }
  return acc;
}

/// Reference value with absolute error well below 2^-(q+64).
inline BigFloat value(const ExperimentConfig& cfg) {
  BigFloat rough = evaluate_at(cfg, 64);
  long mag = rough.is_zero() ? 0 : std::max<long>(0, rough.exponent());
  long chain = static_cast<long>(ceil_log2(static_cast<std::size_t>(cfg.n) + 2)) + 8;
  return evaluate_at(cfg, BigFloat::clamp(cfg.q + 64 + mag + chain));
}

/// |approx - reference| <= 2^-q, allowing for the reference's own error.
inline bool check(const Approximation& approx, const BigFloat& reference, long q) {
  Precision prec = std::max(reference.precision(), approx.value.precision()) + 2;
  BigFloat diff(prec);
  mpfr_sub(diff.get(), approx.value.get(), reference.get(), MPFR_RNDN);
  mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
  BigFloat bound(64);
  mpfr_set_ui_2exp(bound.get(), 1, -q, MPFR_RNDN);
  BigFloat slack(64);
  mpfr_set_ui_2exp(slack.get(), 1, -(q + 48), MPFR_RNDN);
  mpfr_add(bound.get(), bound.get(), slack.get(), MPFR_RNDU);
  return compare(diff, bound) <= 0;
}

} // namespace oracle

/// One timed run: build the dag, guarantee 2^-q, optionally verify.
inline RunRecord run_once(const ExperimentConfig& cfg, int run_index, std::string* dot_out = nullptr) {
  RunRecord rec;
  rec.config = cfg;
  rec.run_index = run_index;

  auto start = std::chrono::steady_clock::now();
  BuiltExpression built = build(cfg);
  Approximation approx = built.result.guarantee_absolute_error_two_to(-cfg.q, cfg.eval_cfg, rec.metrics);
  rec.wall_time = Seconds(std::chrono::steady_clock::now() - start).count();

  const Node* root = built.result.root().get();
  if (rec.metrics.depth_before == 0 && rec.metrics.depth_after == 0) {
    // The filter answered; the dag was left untouched.
    rec.metrics.depth_before = rec.metrics.depth_after = depth(root);
  }
  rec.depth_before = rec.metrics.depth_before;
  rec.depth_after = rec.metrics.depth_after;
  rec.node_count = node_count(root);
  if (cfg.verify) rec.verified = oracle::check(approx, oracle::value(cfg), cfg.q);
  if (dot_out) *dot_out = export_dot(root);
  return rec;
}

/// A warmup run followed by cfg.repeat recorded runs.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, std::string* dot_out = nullptr) {
  cfg.validate();
  ExperimentConfig warm = cfg;
  warm.verify = false;
  run_once(warm, -1);
  std::vector<RunRecord> out;
  out.reserve(static_cast<std::size_t>(cfg.repeat));
  for (int i = 0; i < cfg.repeat; ++i)
    out.push_back(run_once(cfg, i, i + 1 == cfg.repeat ? dot_out : nullptr));
  return out;
}

/// Cartesian product of settings; every combination is run repeat times.
struct MatrixGrid {
  std::vector<Experiment> experiments;
  std::vector<long> ns;
  std::vector<long> qs;
  std::vector<BalanceMode> balance_modes{BalanceMode::None};
  std::vector<Strategy> strategies{Strategy::Recursive};
  std::vector<bool> order_preserving{false};
  long start_index = 1;
  int repeat = 25;
  bool verify = true;
  EvalConfig base;
};

inline std::vector<RunRecord> run_matrix(const MatrixGrid& grid) {
  std::vector<RunRecord> out;
  for (Experiment e : grid.experiments)
    for (long n : grid.ns)
      for (long q : grid.qs)
        for (BalanceMode b : grid.balance_modes)
          for (Strategy s : grid.strategies)
            for (bool op : grid.order_preserving) {
              ExperimentConfig cfg;
              cfg.experiment = e;
              cfg.n = n;
              cfg.q = q;
              cfg.start_index = grid.start_index;
              cfg.repeat = grid.repeat;
              cfg.verify = grid.verify;
              cfg.eval_cfg = grid.base;
              cfg.eval_cfg.balance_mode = b;
              cfg.eval_cfg.strategy = s;
              cfg.eval_cfg.order_preserving = op;
              auto runs = run_experiment(cfg);
              out.insert(out.end(), runs.begin(), runs.end());
            }
  return out;
}

inline constexpr std::string_view kCsvHeader =
    "experiment,n,q,start_index,balance,eval,order_preserving,run_index,wall_time_s,"
    "add_cost_units,mul_cost_units,recompute_total,balance_time_s,topo_sort_time_s,"
    "depth_before,depth_after,node_count,verified";

inline void write_csv_row(std::ostream& os, const RunRecord& r) {
  const auto& c = r.config;
  std::ostringstream row;
  row.precision(17);
  row << to_string(c.experiment) << ',' << c.n << ',' << c.q << ',' << c.start_index << ','
      << to_string(c.eval_cfg.balance_mode) << ',' << to_string(c.eval_cfg.strategy) << ','
      << (c.eval_cfg.order_preserving ? 1 : 0) << ',' << r.run_index << ',' << r.wall_time << ','
      << r.metrics.add_cost_units << ',' << r.metrics.mul_cost_units << ','
      << r.metrics.recompute_total << ',' << r.metrics.balance_time.count() << ','
      << r.metrics.topo_sort_time.count() << ',' << r.depth_before << ',' << r.depth_after << ','
      << r.node_count << ',' << (r.verified ? (*r.verified ? "pass" : "fail") : "skip");
  os << row.str() << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) write_csv_row(os, r);
}

/// 0 when every verified run passed, 1 otherwise.
inline int exit_code(const std::vector<RunRecord>& records) {
  for (const auto& r : records)
    if (r.verified && !*r.verified) return 1;
  return 0;
}

} // namespace exactdag::bench
