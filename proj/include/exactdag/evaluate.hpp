#pragma once

// Accuracy-driven bigfloat evaluation of an expression dag.
//
// A request "accuracy q" at a node means |true - approx| <= 2^-q. Each
// operator translates its own request into requests for its children
// (required_child_accuracy), the children are brought up to that accuracy,
// and the node is recomputed with enough working precision that its own
// rounding error stays below 2^-(q+c). The error actually attained is then
// bounded rigorously from the children's error bounds, so the stored
// error_exp is always a true bound even when magnitude estimates were loose.

#include "exactdag/bigfloat.hpp"
#include "exactdag/config.hpp"
#include "exactdag/dag.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace exactdag {

/// Evaluation could not reach the requested accuracy.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& what, const Node* node)
      : std::runtime_error(what), node_(const_cast<Node*>(node)) {}

  /// The node at which evaluation failed.
  const Node* node() const { return node_.get(); }

private:
  NodeRef node_;
};

/// Power-of-two bounds on |x|. ub_exp: |x| <= 2^ub_exp; lb_exp: |x| >= 2^lb_exp.
/// A missing ub means "unbounded", a missing lb means "may be zero".
struct Magnitude {
  static constexpr long kZero = std::numeric_limits<long>::min() / 4;

  std::optional<long> ub_exp;
  std::optional<long> lb_exp;

  static Magnitude zero() { return {kZero, std::nullopt}; }

  /// ceil(log2 ub) clamped below at 0.
  long clamped_ub() const { return std::max(0L, *ub_exp); }

  void tighten(const Magnitude& other) {
    if (other.ub_exp) ub_exp = ub_exp ? std::min(*ub_exp, *other.ub_exp) : other.ub_exp;
    if (other.lb_exp) lb_exp = lb_exp ? std::max(*lb_exp, *other.lb_exp) : other.lb_exp;
  }
};

namespace detail {

inline constexpr Precision kBoundPrec = 32;
inline constexpr Precision kEnclosurePrec = 64;

inline Magnitude magnitude_of(const Approximation& a) {
  const BigFloat& v = a.value;
  if (a.is_exact()) {
    if (v.is_zero()) return Magnitude::zero();
    return {ceil_log2_abs(v), floor_log2_abs(v)};
  }
  if (v.is_zero()) return {a.error_exp, std::nullopt};
  Magnitude m;
  m.ub_exp = std::max(ceil_log2_abs(v), a.error_exp) + 1;
  long fl = floor_log2_abs(v);
  if (a.error_exp <= fl - 1) m.lb_exp = fl - 1;
  return m;
}

inline Magnitude magnitude_of(const Enclosure& e) {
  if (e.lo.is_nan() || e.hi.is_nan()) return {};
  if (e.lo.is_zero() && e.hi.is_zero()) return Magnitude::zero();
  Magnitude m;
  BigFloat a(kBoundPrec), b(kBoundPrec);
  mpfr_abs(a.get(), e.lo.get(), MPFR_RNDU);
  mpfr_abs(b.get(), e.hi.get(), MPFR_RNDU);
  const BigFloat& top = compare(a, b) >= 0 ? a : b;
  if (top.is_finite()) m.ub_exp = ceil_log2_abs(top);
  if (e.lo.sign() > 0 || e.hi.sign() < 0) {
    BigFloat c(kBoundPrec), d(kBoundPrec);
    mpfr_abs(c.get(), e.lo.get(), MPFR_RNDD);
    mpfr_abs(d.get(), e.hi.get(), MPFR_RNDD);
    const BigFloat& bottom = compare(c, d) <= 0 ? c : d;
    if (!bottom.is_zero() && bottom.is_finite()) m.lb_exp = floor_log2_abs(bottom);
  }
  return m;
}

inline Enclosure entire_enclosure() {
  Enclosure e{BigFloat(kEnclosurePrec), BigFloat(kEnclosurePrec)};
  mpfr_set_inf(e.lo.get(), -1);
  mpfr_set_inf(e.hi.get(), 1);
  return e;
}

inline Enclosure enclosure_from(const Approximation& a) {
  Enclosure e{BigFloat(kEnclosurePrec), BigFloat(kEnclosurePrec)};
  if (a.is_exact()) {
    mpfr_set(e.lo.get(), a.value.get(), MPFR_RNDD);
    mpfr_set(e.hi.get(), a.value.get(), MPFR_RNDU);
    return e;
  }
  BigFloat err = pow2(a.error_exp);
  mpfr_sub(e.lo.get(), a.value.get(), err.get(), MPFR_RNDD);
  mpfr_add(e.hi.get(), a.value.get(), err.get(), MPFR_RNDU);
  return e;
}

/// Outward enclosure of op applied to child enclosures.
inline Enclosure combine_enclosures(const Node& n) {
  const Enclosure* x = n.arity() > 0 ? &*n.child(0)->enclosure : nullptr;
  const Enclosure* y = n.arity() > 1 ? &*n.child(1)->enclosure : nullptr;
  Enclosure r{BigFloat(kEnclosurePrec), BigFloat(kEnclosurePrec)};
  auto lo = r.lo.get();
  auto hi = r.hi.get();
  switch (n.kind) {
  case OpKind::Leaf:
    mpfr_set_d(lo, n.leaf_value, MPFR_RNDD);
    mpfr_set_d(hi, n.leaf_value, MPFR_RNDU);
    break;
  case OpKind::Neg:
    mpfr_neg(lo, x->hi.get(), MPFR_RNDD);
    mpfr_neg(hi, x->lo.get(), MPFR_RNDU);
    break;
  case OpKind::Add:
    mpfr_add(lo, x->lo.get(), y->lo.get(), MPFR_RNDD);
    mpfr_add(hi, x->hi.get(), y->hi.get(), MPFR_RNDU);
    break;
  case OpKind::Sub:
    mpfr_sub(lo, x->lo.get(), y->hi.get(), MPFR_RNDD);
    mpfr_sub(hi, x->hi.get(), y->lo.get(), MPFR_RNDU);
    break;
  case OpKind::Mul:
  case OpKind::Div: {
    bool div = n.kind == OpKind::Div;
    if (div && y->lo.sign() <= 0 && y->hi.sign() >= 0) return entire_enclosure();
    mpfr_set_inf(lo, 1);
    mpfr_set_inf(hi, -1);
    BigFloat t(kEnclosurePrec);
    for (const BigFloat* a : {&x->lo, &x->hi}) {
      for (const BigFloat* b : {&y->lo, &y->hi}) {
        auto op = div ? mpfr_div : mpfr_mul;
        op(t.get(), a->get(), b->get(), MPFR_RNDD);
        if (t.is_nan()) return entire_enclosure();
        mpfr_min(lo, lo, t.get(), MPFR_RNDD);
        op(t.get(), a->get(), b->get(), MPFR_RNDU);
        mpfr_max(hi, hi, t.get(), MPFR_RNDU);
      }
    }
    break;
  }
  case OpKind::Sqrt:
    if (x->hi.sign() < 0) throw EvaluationError("square root of a negative value", &n);
    if (x->lo.sign() <= 0)
      mpfr_set_zero(lo, 1);
    else
      mpfr_sqrt(lo, x->lo.get(), MPFR_RNDD);
    mpfr_sqrt(hi, x->hi.get(), MPFR_RNDU);
    break;
  }
  if (r.lo.is_nan() || r.hi.is_nan()) return entire_enclosure();
  return r;
}

} // namespace detail

/// Computes magnitude enclosures for every reachable node that lacks one.
inline void ensure_enclosures(Node* root) {
  for_each_post_order(root, [](const Node* cn) {
    Node* n = const_cast<Node*>(cn);
    if (n->enclosure) return;
    n->enclosure = n->approx ? detail::enclosure_from(*n->approx) : detail::combine_enclosures(*n);
  });
}

/// Best magnitude bounds known for a node without evaluating anything.
inline Magnitude known_magnitude(const Node& n) {
  Magnitude m;
  if (n.approx) m = detail::magnitude_of(*n.approx);
  if (n.enclosure) m.tighten(detail::magnitude_of(*n.enclosure));
  return m;
}

/// Which magnitude facts a child must supply for its parent's rule.
struct MagnitudeNeeds {
  std::array<bool, 2> ub{false, false};
  std::array<bool, 2> lb{false, false};
};

inline MagnitudeNeeds magnitude_needs(OpKind kind) {
  MagnitudeNeeds needs;
  if (kind == OpKind::Mul) needs.ub = {true, true};
  if (kind == OpKind::Div) {
    needs.ub[0] = true;
    needs.lb[1] = true;
  }
  return needs;
}

/// Accuracy each child needs so that the operator result can be accurate to
/// q fractional bits, given magnitude bounds of the children.
///
///   Add/Sub/Neg: q + c
///   Mul x*y:     x: q + c + ceil(log2 ub|y|)+,  y: q + c + ceil(log2 ub|x|)+
///   Div x/y:     x: q + c + ceil(log2 1/lb|y|)+,
///                y: q + c + ceil(log2 ub|x|/lb|y|^2)+, and at least enough
///                to keep the error below lb|y|/2
///   Sqrt:        q + c if |x| >= 1, q + c + k if |x| >= 2^-2k, else 2(q + c)
inline std::array<long, 2> required_child_accuracy(OpKind kind, long q, long c,
                                                   std::span<const Magnitude> children) {
  const long base = q + c;
  switch (kind) {
  case OpKind::Leaf: return {0, 0};
  case OpKind::Neg:
  case OpKind::Add:
  case OpKind::Sub: return {base, base};
  case OpKind::Mul:
    return {base + children[1].clamped_ub(), base + children[0].clamped_ub()};
  case OpKind::Div: {
    long lb_y = *children[1].lb_exp;
    long ub_x = *children[0].ub_exp;
    long x_req = base + std::max(0L, -lb_y);
    long y_req = base + std::max(0L, ub_x - 2 * lb_y);
    y_req = std::max(y_req, 1 - lb_y);
    return {x_req, y_req};
  }
  case OpKind::Sqrt: {
    const auto& lb = children[0].lb_exp;
    if (lb && *lb >= 0) return {base, 0};
    long loose = 2 * base;
    if (lb) {
      long k = (-*lb + 1) / 2;
      return {std::min(base + k, loose), 0};
    }
    return {loose, 0};
  }
  }
  return {base, base};
}

/// Node-level variant using whatever magnitude knowledge is already stored.
/// Throws EvaluationError when a needed bound is missing.
inline std::array<long, 2> required_child_accuracy(const Node& node, long q, long c) {
  std::array<Magnitude, 2> mags{};
  auto needs = magnitude_needs(node.kind);
  for (std::size_t i = 0; i < node.arity(); ++i) {
    mags[i] = known_magnitude(*node.child(i));
    if ((needs.ub[i] && !mags[i].ub_exp) || (needs.lb[i] && !mags[i].lb_exp))
      throw EvaluationError("no magnitude bound available for child", node.child(i));
  }
  return required_child_accuracy(node.kind, q, c, std::span<const Magnitude>(mags.data(), node.arity()));
}

/// All reachable inexact (non-leaf) nodes, every node before its children.
/// Children are explored left to right, so the order is deterministic.
inline std::vector<Node*> topological_order(Node* root) {
  std::vector<Node*> out;
  for (const Node* n : reverse_post_order(root))
    if (!n->is_leaf()) out.push_back(const_cast<Node*>(n));
  return out;
}

/// Stateful driver shared by both strategies. Holds no dag state of its own.
class Evaluator {
public:
  Evaluator(const EvalConfig& cfg, EvalMetrics& metrics) : cfg_(cfg), metrics_(metrics) {
    cfg_.validate();
  }

  /// Recursively raises children to their required accuracy, then
  /// recomputes. A node shared by several parents may be recomputed once
  /// per parent request that exceeds its cached accuracy.
  const Approximation& evaluate_recursive(Node* root, long q) {
    ScopedTimer timer(metrics_.eval_time);
    ensure_enclosures(root);
    recursive(root, q);
    return *root->approx;
  }

  /// Two passes over a topological order: gather the maximum requested
  /// accuracy of every node, then recompute children-first. Each node is
  /// recomputed at most once.
  const Approximation& evaluate_topological(Node* root, long q) {
    ScopedTimer timer(metrics_.eval_time);
    ensure_enclosures(root);
    if (accurate(root, q)) return *root->approx;

    std::vector<Node*> order;
    std::unordered_map<const Node*, long> requested;
    {
      ScopedTimer topo(metrics_.topo_sort_time);
      order = topological_order(root);
      requested.reserve(order.size());
    }
    requested[root] = q;

    // Requests into a node are final once all its parents are processed.
    for (Node* n : order) {
      auto it = requested.find(n);
      if (it == requested.end()) continue;
      long r = it->second;
      if (accurate(n, r)) continue;
      check_request(n, r);
      auto req = child_requirements(n, r, 0);
      for (std::size_t i = 0; i < n->arity(); ++i) {
        Node* c = n->child(i);
        if (c->is_leaf()) continue;
        auto [slot, fresh] = requested.try_emplace(c, req[i]);
        if (!fresh) slot->second = std::max(slot->second, req[i]);
      }
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Node* n = *it;
      auto r = requested.find(n);
      if (r == requested.end() || accurate(n, r->second)) continue;
      if (!recompute(n, r->second)) recursive(n, r->second);
    }
    return *root->approx;
  }

  static bool accurate(const Node* n, long q) { return n->approx && n->approx->accurate_to(q); }

private:
  struct Frame {
    Node* node;
    long q;
    long extra = 0;
    std::array<long, 2> req{};
    std::size_t next = 0;
    bool ready = false;
  };

  void recursive(Node* root, long q) {
    if (accurate(root, q)) return;
    std::vector<Frame> stack;
    stack.push_back({root, q});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (!f.ready) {
        check_request(f.node, f.q);
        f.req = child_requirements(f.node, f.q, f.extra);
        f.ready = true;
        f.next = 0;
      }
      if (f.next < f.node->arity()) {
        Node* c = f.node->child(f.next);
        long cq = f.req[f.next++];
        if (!accurate(c, cq)) stack.push_back({c, cq});
        continue;
      }
      if (recompute(f.node, f.q)) {
        stack.pop_back();
        continue;
      }
      // Result missed its target: ask the children for more.
      ++metrics_.shortfall_retries;
      f.extra = f.extra == 0 ? 1 : 2 * f.extra;
      f.ready = false;
      if (f.q + f.extra > cfg_.max_precision)
        throw EvaluationError("accuracy target unreachable within max_precision", f.node);
    }
  }

  void check_request(const Node* n, long q) const {
    if (q > cfg_.max_precision)
      throw EvaluationError("requested accuracy " + std::to_string(q) + " exceeds max_precision", n);
  }

  std::array<long, 2> child_requirements(Node* n, long q, long extra) {
    std::array<Magnitude, 2> mags{};
    auto needs = magnitude_needs(n->kind);
    for (std::size_t i = 0; i < n->arity(); ++i)
      mags[i] = magnitude_for(n->child(i), needs.ub[i], needs.lb[i]);
    auto req = required_child_accuracy(n->kind, q, cfg_.guard_bits_c,
                                       std::span<const Magnitude>(mags.data(), n->arity()));
    for (auto& r : req) r += extra;
    return req;
  }

  /// Magnitude bounds for a child, evaluating it at increasing accuracy if
  /// the stored knowledge does not give the bounds the caller needs.
  Magnitude magnitude_for(Node* child, bool need_ub, bool need_lb) {
    Magnitude m = known_magnitude(*child);
    long k = cfg_.bootstrap_accuracy;
    while ((need_ub && !m.ub_exp) || (need_lb && !m.lb_exp)) {
      if (k > cfg_.max_precision)
        throw EvaluationError("value cannot be bounded away from zero", child);
      ++bootstrapping_;
      try {
        recursive(child, k);
      } catch (...) {
        --bootstrapping_;
        throw;
      }
      --bootstrapping_;
      m.tighten(known_magnitude(*child));
      k *= 2;
    }
    return m;
  }

  /// Recomputes n from its children's current approximations aiming for
  /// accuracy q. Stores the result if it improves the error bound. Returns
  /// whether n is now accurate to q.
  bool recompute(Node* n, long q) {
    using detail::kBoundPrec;
    const long c = cfg_.guard_bits_c;
    const Approximation* x = n->arity() > 0 ? &*n->child(0)->approx : nullptr;
    const Approximation* y = n->arity() > 1 ? &*n->child(1)->approx : nullptr;

    auto err_of = [](const Approximation* a) {
      BigFloat e(kBoundPrec);
      if (!a->is_exact()) mpfr_set_ui_2exp(e.get(), 1, a->error_exp, MPFR_RNDU);
      return e;
    };
    auto abs_up = [](const BigFloat& v) {
      BigFloat r(kBoundPrec);
      mpfr_abs(r.get(), v.get(), MPFR_RNDU);
      return r;
    };
    auto exp_or = [](const BigFloat& v, long fallback) {
      return v.is_zero() ? fallback : static_cast<long>(v.exponent());
    };

    // Estimated exponent of the result, used to size the working precision
    // so that the rounding error is at most 2^-(q+c+1).
    long est = 0;
    bool zero_result = false;
    switch (n->kind) {
    case OpKind::Leaf: return true;
    case OpKind::Neg: break;
    case OpKind::Add:
    case OpKind::Sub:
      zero_result = x->value.is_zero() && y->value.is_zero();
      est = std::max(exp_or(x->value, Magnitude::kZero), exp_or(y->value, Magnitude::kZero)) + 1;
      break;
    case OpKind::Mul:
      zero_result = x->value.is_zero() || y->value.is_zero();
      if (!zero_result) est = x->value.exponent() + y->value.exponent();
      break;
    case OpKind::Div:
      if (y->value.is_zero()) return false;
      zero_result = x->value.is_zero();
      if (!zero_result) est = x->value.exponent() - y->value.exponent() + 1;
      break;
    case OpKind::Sqrt:
      zero_result = x->value.sign() <= 0;
      if (!zero_result) est = (static_cast<long>(x->value.exponent()) + 1) / 2 + 1;
      break;
    }

    Precision prec = zero_result ? 2 : BigFloat::clamp(std::max(2L, est + q + c + 1));
    BigFloat z(prec);
    int ternary = 0;
    switch (n->kind) {
    case OpKind::Neg:
      z = x->value;
      mpfr_neg(z.get(), z.get(), MPFR_RNDN);
      break;
    case OpKind::Add: ternary = mpfr_add(z.get(), x->value.get(), y->value.get(), MPFR_RNDN); break;
    case OpKind::Sub: ternary = mpfr_sub(z.get(), x->value.get(), y->value.get(), MPFR_RNDN); break;
    case OpKind::Mul: ternary = mpfr_mul(z.get(), x->value.get(), y->value.get(), MPFR_RNDN); break;
    case OpKind::Div: ternary = mpfr_div(z.get(), x->value.get(), y->value.get(), MPFR_RNDN); break;
    case OpKind::Sqrt:
      if (zero_result)
        mpfr_set_zero(z.get(), 1);
      else
        ternary = mpfr_sqrt(z.get(), x->value.get(), MPFR_RNDN);
      break;
    case OpKind::Leaf: break;
    }

    // Rigorous bound: propagated child errors plus our own rounding.
    BigFloat err(kBoundPrec);
    if (ternary != 0) mpfr_set_ui_2exp(err.get(), 1, z.exponent() - z.precision() - 1, MPFR_RNDU);
    BigFloat t(kBoundPrec);
    bool unbounded = false;
    switch (n->kind) {
    case OpKind::Neg: err = err_of(x); break;
    case OpKind::Add:
    case OpKind::Sub:
      mpfr_add(err.get(), err.get(), err_of(x).get(), MPFR_RNDU);
      mpfr_add(err.get(), err.get(), err_of(y).get(), MPFR_RNDU);
      break;
    case OpKind::Mul: {
      BigFloat ex = err_of(x), ey = err_of(y);
      mpfr_mul(t.get(), abs_up(x->value).get(), ey.get(), MPFR_RNDU);
      mpfr_add(err.get(), err.get(), t.get(), MPFR_RNDU);
      mpfr_mul(t.get(), abs_up(y->value).get(), ex.get(), MPFR_RNDU);
      mpfr_add(err.get(), err.get(), t.get(), MPFR_RNDU);
      mpfr_mul(t.get(), ex.get(), ey.get(), MPFR_RNDU);
      mpfr_add(err.get(), err.get(), t.get(), MPFR_RNDU);
      break;
    }
    case OpKind::Div: {
      // |x~/y~ - x/y| <= ex/|y| + |x~| ey / (|y| |y~|), |y| >= |y~| - ey.
      BigFloat ex = err_of(x), ey = err_of(y);
      BigFloat ylb(kBoundPrec), yabs(kBoundPrec);
      mpfr_abs(yabs.get(), y->value.get(), MPFR_RNDD);
      mpfr_sub(ylb.get(), yabs.get(), ey.get(), MPFR_RNDD);
      if (ylb.sign() <= 0) {
        unbounded = true;
        break;
      }
      mpfr_div(t.get(), ex.get(), ylb.get(), MPFR_RNDU);
      mpfr_add(err.get(), err.get(), t.get(), MPFR_RNDU);
      BigFloat denom(kBoundPrec);
      mpfr_mul(denom.get(), ylb.get(), yabs.get(), MPFR_RNDD);
      mpfr_mul(t.get(), abs_up(x->value).get(), ey.get(), MPFR_RNDU);
      mpfr_div(t.get(), t.get(), denom.get(), MPFR_RNDU);
      mpfr_add(err.get(), err.get(), t.get(), MPFR_RNDU);
      break;
    }
    case OpKind::Sqrt: {
      if (x->is_exact()) {
        if (x->value.sign() < 0) throw EvaluationError("square root of a negative value", n);
        break;
      }
      BigFloat ex = err_of(x);
      BigFloat upper(kBoundPrec);
      mpfr_add(upper.get(), x->value.get(), ex.get(), MPFR_RNDU);
      if (upper.sign() < 0) throw EvaluationError("square root of a negative value", n);
      // |sqrt(a) - sqrt(b)| <= sqrt|a - b| always; <= |a-b|/(sqrt a + sqrt b)
      // when a lower bound on x is positive.
      BigFloat prop(kBoundPrec);
      mpfr_sqrt(prop.get(), ex.get(), MPFR_RNDU);
      BigFloat lower(kBoundPrec);
      mpfr_sub(lower.get(), x->value.get(), ex.get(), MPFR_RNDD);
      if (lower.sign() > 0) {
        BigFloat s1(kBoundPrec), s2(kBoundPrec);
        mpfr_sqrt(s1.get(), lower.get(), MPFR_RNDD);
        mpfr_set(s2.get(), x->value.get(), MPFR_RNDD);
        mpfr_sqrt(s2.get(), s2.get(), MPFR_RNDD);
        mpfr_add(s1.get(), s1.get(), s2.get(), MPFR_RNDD);
        mpfr_div(t.get(), ex.get(), s1.get(), MPFR_RNDU);
        mpfr_min(prop.get(), prop.get(), t.get(), MPFR_RNDU);
      }
      mpfr_add(err.get(), err.get(), prop.get(), MPFR_RNDU);
      break;
    }
    case OpKind::Leaf: break;
    }

    record_work(n, q, z);
    if (unbounded) return false;

    long error_exp = err.is_zero() ? kExactError : ceil_log2_abs(err);
    // An inexact node is credited with the accuracy it was asked for, not
    // the (possibly better) bound it happened to reach. Later, stronger
    // requests therefore recompute it, as in plain precision-driven
    // evaluation.
    if (error_exp != kExactError && error_exp < -q) error_exp = -q;
    bool better = !n->approx || (n->approx->error_exp != kExactError &&
                                 (error_exp == kExactError || error_exp < n->approx->error_exp));
    if (better) {
      n->approx = Approximation{std::move(z), error_exp};
    }
    n->evaluated = true;
    return n->approx->accurate_to(q);
  }

  void record_work(const Node* n, long q, const BigFloat& z) {
    if (bootstrapping_ > 0) {
      ++metrics_.bootstrap_recomputes;
    } else {
      ++metrics_.recompute_total;
      ++metrics_.recompute_count[n];
    }
    double size = static_cast<double>(std::max(0L, q)) +
                  (z.is_zero() ? 0.0 : static_cast<double>(std::max<long>(0, z.exponent())));
    if (n->kind == OpKind::Add || n->kind == OpKind::Sub)
      metrics_.add_cost_units += size;
    else if (n->kind == OpKind::Mul)
      metrics_.mul_cost_units += std::pow(size, cfg_.mul_cost_exponent);
  }

  EvalConfig cfg_;
  EvalMetrics& metrics_;
  int bootstrapping_ = 0;
};

inline const Approximation& evaluate_recursive(const NodeRef& root, long q, const EvalConfig& cfg,
                                               EvalMetrics& metrics) {
  return Evaluator(cfg, metrics).evaluate_recursive(root.get(), q);
}

inline const Approximation& evaluate_topological(const NodeRef& root, long q, const EvalConfig& cfg,
                                                 EvalMetrics& metrics) {
  return Evaluator(cfg, metrics).evaluate_topological(root.get(), q);
}

inline const Approximation& evaluate(const NodeRef& root, long q, const EvalConfig& cfg,
                                     EvalMetrics& metrics) {
  return cfg.strategy == Strategy::Recursive ? evaluate_recursive(root, q, cfg, metrics)
                                             : evaluate_topological(root, q, cfg, metrics);
}

} // namespace exactdag
