#pragma once

// Closed-form work predictions for evaluating a sum or product of n operands
// to accuracy q, either as a list-shaped chain or as a balanced tree. Costs
// are exact partial sums with all hidden constants set to 1, so only growth
// rates are meaningful when comparing against measured work units.

#include "exactdag/balancer.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace exactdag {

struct CostParams {
  std::size_t n = 1;
  double q = 0;
  /// Largest operand exponent.
  double e = 0;
  /// Largest exponent anywhere in the computation.
  double e_max = 0;
  double c = 2;
  double mul_exponent = std::log2(3.0);

  void validate() const {
    if (n < 1) throw std::invalid_argument("CostParams: n must be >= 1");
    if (q < 0 || e < 0) throw std::invalid_argument("CostParams: q and e must be >= 0");
    if (e_max < e) throw std::invalid_argument("CostParams: e_max must be >= e");
  }
};

namespace detail {

/// Sums term(level) over the levels of a balanced tree with n - 1 operators,
/// root level 0 holding one operator and level i holding 2^i, the deepest
/// level truncated to the operators that remain.
template <typename Term>
double balanced_levels(std::size_t n, Term term) {
  double total = 0;
  std::size_t remaining = n - 1;
  for (std::size_t i = 0; remaining > 0; ++i) {
    std::size_t width = std::min<std::size_t>(std::size_t{1} << i, remaining);
    total += static_cast<double>(width) * term(static_cast<double>(i));
    remaining -= width;
  }
  return total;
}

} // namespace detail

/// Additions. Chain: operator i (counted from the root) needs q + i c bits
/// below the point and carries e + log2(n - i) bits above it. Balanced: level
/// i needs q + i c and carries e + log2(n) - i.
inline double predict_add_cost(const CostParams& p, bool balanced) {
  p.validate();
  if (p.n == 1) return p.q + p.e;
  const double log_n = std::log2(static_cast<double>(p.n));
  if (balanced) {
    return detail::balanced_levels(p.n, [&](double i) {
      return p.q + i * p.c + p.e + std::max(0.0, log_n - i);
    });
  }
  double total = 0;
  for (std::size_t i = 0; i < p.n; ++i) {
    double di = static_cast<double>(i);
    total += p.q + di * p.c + p.e + std::log2(static_cast<double>(p.n - i));
  }
  return total;
}

/// Multiplications, each costing size^mul_exponent. With bounded_exponent
/// every intermediate exponent is at most e_max; otherwise exponents add up
/// along the chain (or double per level in the balanced tree).
inline double predict_mul_cost(const CostParams& p, bool balanced, bool bounded_exponent) {
  p.validate();
  const double a = p.mul_exponent;
  if (p.n == 1) return std::pow(p.q + (bounded_exponent ? p.e_max : 0.0), a);

  if (bounded_exponent) {
    auto term = [&](double i) { return std::pow(p.q + i * (p.c + p.e_max) + p.e_max, a); };
    if (balanced) return detail::balanced_levels(p.n, term);
    double total = 0;
    for (std::size_t i = 0; i < p.n; ++i) total += term(static_cast<double>(i));
    return total;
  }

  const double n = static_cast<double>(p.n);
  if (balanced) {
    const double levels = static_cast<double>(ceil_log2(p.n));
    // Accuracy at level i uses the upper bound 2^(L+1) e for the sum of the
    // subtree exponents below it.
    return detail::balanced_levels(p.n, [&](double i) {
      double qi = p.q + i * p.c + std::exp2(levels + 1) * p.e;
      return std::pow(qi + std::exp2(levels - i) * p.e, a);
    });
  }
  double total = 0;
  for (std::size_t i = 0; i < p.n; ++i) {
    double di = static_cast<double>(i);
    total += std::pow(p.q + di * (p.c + p.e) + (n - di) * p.e, a);
  }
  return total;
}

} // namespace exactdag
