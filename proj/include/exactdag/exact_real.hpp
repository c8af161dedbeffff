#pragma once

// Exact-decision real number: a double interval filter in front of a lazily
// evaluated expression dag.

#include "exactdag/balancer.hpp"
#include "exactdag/config.hpp"
#include "exactdag/dag.hpp"
#include "exactdag/evaluate.hpp"
#include "exactdag/interval.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace exactdag {

class ExactReal {
public:
  ExactReal() : ExactReal(0.0) {}
  ExactReal(double v) : interval_(Interval::point(v)), root_(make_leaf(v)) {} // NOLINT: implicit by design of a number type
  ExactReal(int v) : ExactReal(static_cast<double>(v)) {}                      // NOLINT

  const Interval& interval() const { return interval_; }
  const NodeRef& root() const { return root_; }

  ExactReal& operator+=(const ExactReal& o) { return *this = *this + o; }
  ExactReal& operator-=(const ExactReal& o) { return *this = *this - o; }
  ExactReal& operator*=(const ExactReal& o) { return *this = *this * o; }
  ExactReal& operator/=(const ExactReal& o) { return *this = *this / o; }

  friend ExactReal arith(OpKind op, const ExactReal& a, const ExactReal* b);

  friend ExactReal operator+(const ExactReal& a, const ExactReal& b) { return arith(OpKind::Add, a, &b); }
  friend ExactReal operator-(const ExactReal& a, const ExactReal& b) { return arith(OpKind::Sub, a, &b); }
  friend ExactReal operator*(const ExactReal& a, const ExactReal& b) { return arith(OpKind::Mul, a, &b); }
  friend ExactReal operator/(const ExactReal& a, const ExactReal& b) { return arith(OpKind::Div, a, &b); }
  friend ExactReal operator-(const ExactReal& a) { return arith(OpKind::Neg, a, nullptr); }
  friend ExactReal sqrt(const ExactReal& a) { return arith(OpKind::Sqrt, a, nullptr); }

  /// Returns an approximation within 2^neg_q of the true value. Uses the
  /// interval alone when it is already tight enough; otherwise balances the
  /// dag (if configured) and runs bigfloat evaluation.
  Approximation guarantee_absolute_error_two_to(long neg_q, const EvalConfig& cfg,
                                                EvalMetrics& metrics) const;

  Approximation guarantee_absolute_error_two_to(long neg_q, const EvalConfig& cfg = {}) const {
    EvalMetrics metrics;
    return guarantee_absolute_error_two_to(neg_q, cfg, metrics);
  }

private:
  ExactReal(Interval iv, NodeRef root) : interval_(iv), root_(std::move(root)) {}

  Interval interval_;
  NodeRef root_;
};

/// Builds op(a) or op(a, b): interval arithmetic on the filter plus a fresh
/// dag node. Division by an interval containing zero is allowed here; the
/// problem surfaces only if the value is ever needed.
inline ExactReal arith(OpKind op, const ExactReal& a, const ExactReal* b) {
  if (arity(op) == 2 && !b) throw std::invalid_argument("binary operation needs two operands");
  if (arity(op) != 2 && b) throw std::invalid_argument("unary operation takes one operand");
  Interval iv;
  switch (op) {
  case OpKind::Neg: iv = -a.interval_; break;
  case OpKind::Sqrt: iv = sqrt(a.interval_); break;
  case OpKind::Add: iv = a.interval_ + b->interval_; break;
  case OpKind::Sub: iv = a.interval_ - b->interval_; break;
  case OpKind::Mul: iv = a.interval_ * b->interval_; break;
  case OpKind::Div: iv = a.interval_ / b->interval_; break;
  case OpKind::Leaf: throw std::invalid_argument("arith: leaf is not an operation");
  }
  NodeRef node = b ? make_node(op, a.root_, b->root_) : make_node(op, a.root_);
  return ExactReal(iv, std::move(node));
}

namespace detail {

/// Smallest e with w <= 2^e, for finite w > 0.
inline long ceil_log2_width(double w) {
  int e = 0;
  double m = std::frexp(w, &e);
  return m == 0.5 ? e - 1 : e;
}

} // namespace detail

inline Approximation ExactReal::guarantee_absolute_error_two_to(long neg_q, const EvalConfig& cfg,
                                                                EvalMetrics& metrics) const {
  cfg.validate();
  const long q = -neg_q;
  Node* root = root_.get();

  if (root->approx && root->approx->accurate_to(q)) return *root->approx;

  // Filter: a point interval is exact; otherwise its midpoint is within half
  // the width of the true value.
  if (interval_.is_finite()) {
    if (interval_.is_point()) return Approximation{BigFloat::exact(interval_.lo), kExactError};
    double w = interval_.width();
    if (std::isfinite(w) && detail::ceil_log2_width(w) <= -q) {
      double mid = interval_.lo + (interval_.hi - interval_.lo) / 2;
      if (!(interval_.lo <= mid && mid <= interval_.hi)) mid = interval_.lo;
      return Approximation{BigFloat::exact(mid), detail::ceil_log2_width(w)};
    }
  }

  metrics.depth_before = depth(root);
  if (cfg.balance_mode != BalanceMode::None) balance_dag(root, cfg, metrics);
  metrics.depth_after = depth(root);

  Evaluator evaluator(cfg, metrics);
  if (cfg.strategy == Strategy::Recursive) return evaluator.evaluate_recursive(root, q);
  return evaluator.evaluate_topological(root, q);
}

} // namespace exactdag
