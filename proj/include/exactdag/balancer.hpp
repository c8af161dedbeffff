#pragma once

// Balancing of maximal operator trees of consecutive additions or
// multiplications.
//
// An operator tree is a connected set of same-kind (+ or *) nodes whose
// non-root members each have exactly one incoming reference and have never
// been evaluated or balanced. Its operands are the children that fail one of
// those conditions. Balancing rebuilds the tree over the same operands with
// depth ceil(log2 m), reusing the root so outside references stay valid.

#include "exactdag/config.hpp"
#include "exactdag/dag.hpp"

#include <bit>
#include <cstddef>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

namespace exactdag {

struct OperandList {
  /// One entry per edge into the tree; a shared node may appear repeatedly.
  std::vector<NodeRef> operands;
  /// Depth of the dismantled tree in operator levels.
  std::size_t tree_depth = 0;
};

/// ceil(log2 m) for m >= 1.
constexpr std::size_t ceil_log2(std::size_t m) {
  return m <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(m - 1));
}

namespace detail {

/// The child is not absorbed into the operator tree rooted above it.
inline bool is_operand_boundary(const Node& child, OpKind op) {
  return child.kind != op || child.balanced || child.evaluated || child.ref_count > 1;
}

} // namespace detail

/// Collects the operands of the maximal operator tree rooted at node, in
/// left-to-right order. The root's own flags and references are not checked.
inline OperandList retrieve_operands(const Node& node) {
  if (node.kind != OpKind::Add && node.kind != OpKind::Mul)
    throw std::invalid_argument("operator trees exist only for + and *");
  OperandList out;
  struct Item {
    const Node* node;
    std::size_t level; // 0: emit as operand
  };
  std::vector<Item> stack{{&node, 1}};
  while (!stack.empty()) {
    auto [n, level] = stack.back();
    stack.pop_back();
    if (level == 0) {
      out.operands.emplace_back(const_cast<Node*>(n));
      continue;
    }
    out.tree_depth = std::max(out.tree_depth, level);
    // Right first so the left side is emitted first.
    for (std::size_t i = 2; i-- > 0;) {
      const Node* c = n->child(i);
      bool inner = !detail::is_operand_boundary(*c, node.kind);
      stack.push_back({c, inner ? level + 1 : 0});
    }
  }
  return out;
}

/// Depth in operator levels of the structural operator tree at root (same
/// kind, single-reference interior nodes), ignoring balanced/evaluated flags.
inline std::size_t operator_tree_depth(const Node& root) {
  if (root.kind != OpKind::Add && root.kind != OpKind::Mul) return 0;
  std::size_t best = 0;
  std::vector<std::pair<const Node*, std::size_t>> stack{{&root, 1}};
  while (!stack.empty()) {
    auto [n, level] = stack.back();
    stack.pop_back();
    best = std::max(best, level);
    for (std::size_t i = 0; i < 2; ++i) {
      const Node* c = n->child(i);
      if (c->kind == root.kind && c->ref_count == 1) stack.emplace_back(c, level + 1);
    }
  }
  return best;
}

/// Appends identity leaves (0 for +, 1 for *) up to the next power of two.
inline void pad_to_power_of_two(OperandList& list, OpKind op) {
  if (op != OpKind::Add && op != OpKind::Mul) throw std::invalid_argument("pad: op must be + or *");
  const double identity = op == OpKind::Add ? 0.0 : 1.0;
  while (!std::has_single_bit(list.operands.size())) list.operands.push_back(make_leaf(identity));
}

/// Rebuilds root's operator tree over the operands: pairs are combined from
/// the front of a queue and appended at the back until two remain, which
/// become root's children. The old interior nodes are released.
inline void balance_operation(OperandList list, OpKind op, Node& root) {
  if (list.operands.size() < 2) throw std::invalid_argument("balance_operation needs >= 2 operands");
  if (root.kind != op) throw std::invalid_argument("root kind does not match operation");
  std::deque<NodeRef> queue(std::make_move_iterator(list.operands.begin()),
                            std::make_move_iterator(list.operands.end()));
  while (queue.size() > 2) {
    NodeRef a = std::move(queue.front());
    queue.pop_front();
    NodeRef b = std::move(queue.front());
    queue.pop_front();
    NodeRef joined = make_node(op, a, b);
    joined->balanced = true;
    queue.push_back(std::move(joined));
  }
  root.children[0] = std::move(queue[0]);
  root.children[1] = std::move(queue[1]);
}

/// Balances every eligible operator tree reachable from root, visiting each
/// node at most once over the lifetime of the dag.
inline void balance_dag(Node* root, const EvalConfig& cfg, EvalMetrics& metrics) {
  ScopedTimer timer(metrics.balance_time);
  std::vector<Node*> work{root};
  while (!work.empty()) {
    Node* n = work.back();
    work.pop_back();
    if (n->balanced || n->evaluated) continue;
    n->balanced = true;
    if (balances(cfg.balance_mode, n->kind)) {
      OperandList list = retrieve_operands(*n);
      std::size_t m = list.operands.size();
      std::vector<Node*> operands;
      operands.reserve(m);
      for (const auto& op : list.operands) operands.push_back(op.get());
      if (static_cast<double>(list.tree_depth) >
          cfg.balance_threshold_factor * static_cast<double>(ceil_log2(m))) {
        if (cfg.order_preserving) pad_to_power_of_two(list, n->kind);
        balance_operation(std::move(list), n->kind, *n);
      }
      // Operands stay alive: they are referenced from the rebuilt tree.
      for (auto it = operands.rbegin(); it != operands.rend(); ++it) work.push_back(*it);
    } else {
      for (std::size_t i = n->arity(); i-- > 0;) work.push_back(n->child(i));
    }
  }
}

inline void balance_dag(const NodeRef& root, const EvalConfig& cfg, EvalMetrics& metrics) {
  balance_dag(root.get(), cfg, metrics);
}

} // namespace exactdag
