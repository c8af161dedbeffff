// bench: run the benchmark experiments and emit per-run CSV metrics.
//
//   bench run --experiment sum-of-sqrts --n 1000 --q 2000 --balance add --eval topological
//   bench matrix --experiment bin-coeff --n 200 --q 2000 --repeat 3 --csv out.csv

#include "exactdag/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace bench = exactdag::bench;
using exactdag::BalanceMode;
using exactdag::Strategy;

namespace {

constexpr int kConfigError = 2;

const std::vector<std::string> kExperiments{"sum-of-sqrts", "bin-coeff", "geometric-sum", "telescoping",
                                            "telescoping-reverse"};
const std::vector<std::string> kBalanceModes{"def", "add", "mul", "all"};
const std::vector<std::string> kStrategies{"recursive", "topological"};

struct Common {
  long q = 0;
  long start_index = 1;
  int repeat = 25;
  bool verify = false;
  std::string csv;
  long guard_bits = 2;
  double threshold = 1.0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--q", c.q, "Requested accuracy: absolute error <= 2^-q")->required()->check(CLI::PositiveNumber);
  cmd->add_option("--start-index", c.start_index, "First index of the forward telescoping product")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--repeat", c.repeat, "Recorded runs per configuration (one extra warmup run)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--verify", c.verify, "Check every result against an MPFR reference");
  cmd->add_option("--csv", c.csv, "Write CSV here instead of stdout");
  cmd->add_option("--guard-bits", c.guard_bits, "Accuracy increment per dag level (>= 1)");
  cmd->add_option("--balance-threshold", c.threshold, "Balance trees deeper than factor * ceil(log2 m)");
}

int emit(const Common& c, const std::vector<bench::RunRecord>& records) {
  if (c.csv.empty()) {
    bench::write_csv(std::cout, records);
  } else {
    std::ofstream out(c.csv);
    if (!out) {
      std::cerr << "bench: cannot open " << c.csv << "\n";
      return kConfigError;
    }
    bench::write_csv(out, records);
  }
  int code = bench::exit_code(records);
  if (code != 0) std::cerr << "bench: oracle verification failed\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark experiments for dag-based exact real arithmetic"};
  app.require_subcommand(1);

  Common run_opts;
  std::string run_experiment;
  long run_n = 0;
  std::string run_balance;
  std::string run_eval;
  bool run_order_preserving = false;
  std::string dot_path;

  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("--experiment", run_experiment, "Experiment")
      ->required()
      ->check(CLI::IsMember(kExperiments));
  run->add_option("--n", run_n, "Problem size")->required()->check(CLI::NonNegativeNumber);
  add_common(run, run_opts);
  run->add_option("--balance", run_balance, "Balancing: def, add, mul or all")
      ->required()
      ->check(CLI::IsMember(kBalanceModes));
  run->add_option("--eval", run_eval, "Evaluation strategy")
      ->required()
      ->check(CLI::IsMember(kStrategies));
  run->add_flag("--order-preserving", run_order_preserving, "Pad operand lists to a power of two");
  run->add_option("--dot", dot_path, "Write the final dag of the last run as Graphviz");

  Common matrix_opts;
  std::vector<std::string> matrix_experiments;
  std::vector<long> matrix_ns;
  auto* matrix = app.add_subcommand("matrix", "Run every balance x eval x order-preserving combination");
  matrix->add_option("--experiment", matrix_experiments, "Experiments")
      ->required()
      ->check(CLI::IsMember(kExperiments));
  matrix->add_option("--n", matrix_ns, "Problem sizes")->required()->check(CLI::NonNegativeNumber);
  add_common(matrix, matrix_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  auto eval_cfg = [](const Common& c) {
    exactdag::EvalConfig cfg;
    cfg.guard_bits_c = c.guard_bits;
    cfg.balance_threshold_factor = c.threshold;
    return cfg;
  };

  try {
    if (*run) {
      bench::ExperimentConfig cfg;
      cfg.experiment = bench::parse_experiment(run_experiment);
      cfg.n = run_n;
      cfg.q = run_opts.q;
      cfg.start_index = run_opts.start_index;
      cfg.repeat = run_opts.repeat;
      cfg.verify = run_opts.verify;
      cfg.eval_cfg = eval_cfg(run_opts);
      cfg.eval_cfg.balance_mode = exactdag::parse_balance_mode(run_balance);
      cfg.eval_cfg.strategy = exactdag::parse_strategy(run_eval);
      cfg.eval_cfg.order_preserving = run_order_preserving;
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        std::cerr << "bench: " << e.what() << "\n";
        return kConfigError;
      }
      std::string dot;
      auto records = bench::run_experiment(cfg, dot_path.empty() ? nullptr : &dot);
      if (!dot_path.empty()) {
        std::ofstream out(dot_path);
        if (!out) {
          std::cerr << "bench: cannot open " << dot_path << "\n";
          return kConfigError;
        }
        out << dot;
      }
      return emit(run_opts, records);
    }

    bench::MatrixGrid grid;
    for (const auto& e : matrix_experiments) grid.experiments.push_back(bench::parse_experiment(e));
    grid.ns = matrix_ns;
    grid.qs = {matrix_opts.q};
    grid.balance_modes = {BalanceMode::None, BalanceMode::Add, BalanceMode::Mul, BalanceMode::All};
    grid.strategies = {Strategy::Recursive, Strategy::Topological};
    grid.order_preserving = {false, true};
    grid.start_index = matrix_opts.start_index;
    grid.repeat = matrix_opts.repeat;
    grid.verify = matrix_opts.verify;
    grid.base = eval_cfg(matrix_opts);
    try {
      grid.base.validate();
      for (auto e : grid.experiments)
        for (long n : grid.ns) {
          bench::ExperimentConfig probe;
          probe.experiment = e;
          probe.n = n;
          probe.q = matrix_opts.q;
          probe.start_index = grid.start_index;
          probe.repeat = grid.repeat;
          probe.validate();
        }
    } catch (const std::invalid_argument& e) {
      std::cerr << "bench: " << e.what() << "\n";
      return kConfigError;
    }
    return emit(matrix_opts, bench::run_matrix(grid));
  } catch (const exactdag::EvaluationError& e) {
    std::cerr << "bench: evaluation failed: " << e.what() << "\n";
    return 1;
  }
}
