#pragma once

#include "exactdag/dag.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace exactdag {

enum class Strategy : std::uint8_t { Recursive, Topological };

enum class BalanceMode : std::uint8_t { None, Add, Mul, All };

inline bool balances(BalanceMode mode, OpKind kind) {
  switch (mode) {
  case BalanceMode::None: return false;
  case BalanceMode::Add: return kind == OpKind::Add;
  case BalanceMode::Mul: return kind == OpKind::Mul;
  case BalanceMode::All: return kind == OpKind::Add || kind == OpKind::Mul;
  }
  return false;
}

/// Names used on the command line and in CSV output.
inline std::string_view to_string(BalanceMode mode) {
  switch (mode) {
  case BalanceMode::None: return "def";
  case BalanceMode::Add: return "add";
  case BalanceMode::Mul: return "mul";
  case BalanceMode::All: return "all";
  }
  return "?";
}

inline std::string_view to_string(Strategy s) {
  return s == Strategy::Recursive ? "recursive" : "topological";
}

inline BalanceMode parse_balance_mode(std::string_view s) {
  if (s == "def" || s == "none") return BalanceMode::None;
  if (s == "add") return BalanceMode::Add;
  if (s == "mul") return BalanceMode::Mul;
  if (s == "all") return BalanceMode::All;
  throw std::invalid_argument("unknown balance mode: " + std::string(s));
}

inline Strategy parse_strategy(std::string_view s) {
  if (s == "recursive") return Strategy::Recursive;
  if (s == "topological") return Strategy::Topological;
  throw std::invalid_argument("unknown evaluation strategy: " + std::string(s));
}

struct EvalConfig {
  /// Accuracy increment per level when propagating requirements to children.
  long guard_bits_c = 2;
  Strategy strategy = Strategy::Recursive;
  BalanceMode balance_mode = BalanceMode::None;
  /// Pad operand lists with identity leaves so balancing keeps operand order.
  bool order_preserving = false;
  /// Balance a tree only if depth > factor * ceil(log2(#operands)).
  double balance_threshold_factor = 1.0;
  /// Largest accuracy (fractional bits) any node may be asked for.
  long max_precision = 1L << 22;
  /// Accuracy used when a magnitude must be bootstrapped by evaluation.
  long bootstrap_accuracy = 53;
  /// Exponent applied to multiplication cost units.
  double mul_cost_exponent = std::log2(3.0);

  void validate() const {
    if (guard_bits_c < 1) throw std::invalid_argument("guard_bits_c must be >= 1");
    if (!(balance_threshold_factor >= 1.0))
      throw std::invalid_argument("balance_threshold_factor must be >= 1");
    if (max_precision < 1) throw std::invalid_argument("max_precision must be positive");
  }
};

using Seconds = std::chrono::duration<double>;

struct EvalMetrics {
  /// Sum over additions/subtractions of (q_i + max(0, log2|z_i|)).
  double add_cost_units = 0;
  /// Sum over multiplications of (q_i + max(0, log2|z_i|))^mul_cost_exponent.
  double mul_cost_units = 0;
  std::uint64_t recompute_total = 0;
  std::unordered_map<const Node*, std::uint32_t> recompute_count;
  /// Evaluations done only to learn a magnitude or sign.
  std::uint64_t bootstrap_recomputes = 0;
  /// Recomputations caused by a result missing its target accuracy.
  std::uint64_t shortfall_retries = 0;
  Seconds balance_time{0};
  Seconds topo_sort_time{0};
  Seconds eval_time{0};
  std::size_t depth_before = 0;
  std::size_t depth_after = 0;

  std::uint32_t max_recompute_per_node() const {
    std::uint32_t m = 0;
    for (const auto& [node, count] : recompute_count) m = std::max(m, count);
    return m;
  }
};

/// Adds elapsed wall time to a duration on scope exit.
class ScopedTimer {
public:
  explicit ScopedTimer(Seconds& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~ScopedTimer() { sink_ += std::chrono::steady_clock::now() - start_; }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

private:
  Seconds& sink_;
  std::chrono::steady_clock::time_point start_;
};

} // namespace exactdag
