#pragma once

// Expression dag: nodes, shared-ownership handles and structural queries.
//
// A node's ref_count is the number of incoming edges plus live external
// handles. A parent whose two operands are the same node contributes 2.
// Nodes are reclaimed when the count drops to zero; reclamation is
// iterative so very deep chains do not exhaust the call stack.

#include "exactdag/bigfloat.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace exactdag {

enum class OpKind : std::uint8_t { Leaf, Neg, Sqrt, Add, Sub, Mul, Div };

constexpr std::size_t arity(OpKind kind) {
  switch (kind) {
  case OpKind::Leaf: return 0;
  case OpKind::Neg:
  case OpKind::Sqrt: return 1;
  default: return 2;
  }
}

constexpr std::string_view to_string(OpKind kind) {
  switch (kind) {
  case OpKind::Leaf: return "leaf";
  case OpKind::Neg: return "neg";
  case OpKind::Sqrt: return "sqrt";
  case OpKind::Add: return "+";
  case OpKind::Sub: return "-";
  case OpKind::Mul: return "*";
  case OpKind::Div: return "/";
  }
  return "?";
}

/// Error exponent of an exact value.
inline constexpr long kExactError = std::numeric_limits<long>::min();

/// value plus an absolute error bound: |true - value| <= 2^error_exp.
struct Approximation {
  BigFloat value;
  long error_exp = kExactError;

  bool is_exact() const { return error_exp == kExactError; }

  /// Accurate up to q fractional bits.
  bool accurate_to(long q) const { return is_exact() || error_exp <= -q; }
};

/// Extended-range outward enclosure of a node's value, used only for
/// magnitude estimates during evaluation (doubles overflow on long products).
struct Enclosure {
  BigFloat lo;
  BigFloat hi;
};

struct Node;

namespace detail {
inline void release(Node* node) noexcept;
}

/// Counted handle to a dag node.
class NodeRef {
public:
  NodeRef() = default;
  explicit NodeRef(Node* node) noexcept;
  NodeRef(const NodeRef& other) noexcept : NodeRef(other.node_) {}
  NodeRef(NodeRef&& other) noexcept : node_(std::exchange(other.node_, nullptr)) {}
  NodeRef& operator=(const NodeRef& other) noexcept {
    NodeRef tmp(other);
    swap(tmp);
    return *this;
  }
  NodeRef& operator=(NodeRef&& other) noexcept {
    NodeRef tmp(std::move(other));
    swap(tmp);
    return *this;
  }
  ~NodeRef() { reset(); }

  void reset() noexcept {
    if (node_) detail::release(std::exchange(node_, nullptr));
  }
  void swap(NodeRef& other) noexcept { std::swap(node_, other.node_); }

  Node* get() const noexcept { return node_; }
  Node* operator->() const noexcept { return node_; }
  Node& operator*() const noexcept { return *node_; }
  explicit operator bool() const noexcept { return node_ != nullptr; }

  friend bool operator==(const NodeRef& a, const NodeRef& b) { return a.node_ == b.node_; }

private:
  friend void detail::release(Node*) noexcept;
  Node* node_ = nullptr;
};

struct Node {
  explicit Node(OpKind k) : kind(k) {}
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  OpKind kind;
  std::array<NodeRef, 2> children{};
  std::uint32_t ref_count = 0;
  double leaf_value = 0.0;
  std::optional<Approximation> approx;
  std::optional<Enclosure> enclosure;
  bool balanced = false;
  bool evaluated = false;

  std::size_t arity() const { return exactdag::arity(kind); }
  Node* child(std::size_t i) const { return children[i].get(); }
  bool is_leaf() const { return kind == OpKind::Leaf; }
};

inline NodeRef::NodeRef(Node* node) noexcept : node_(node) {
  if (node_) ++node_->ref_count;
}

namespace detail {

inline void release(Node* node) noexcept {
  if (--node->ref_count != 0) return;
  std::vector<Node*> dead{node};
  while (!dead.empty()) {
    Node* n = dead.back();
    dead.pop_back();
    for (auto& c : n->children) {
      Node* child = std::exchange(c.node_, nullptr);
      if (child && --child->ref_count == 0) dead.push_back(child);
    }
    delete n;
  }
}

} // namespace detail

/// Thrown when a traversal finds a cycle; the dag is corrupt.
class StructureError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

inline NodeRef make_leaf(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("leaf value must be finite");
  NodeRef ref(new Node(OpKind::Leaf));
  ref->leaf_value = value;
  ref->approx = Approximation{BigFloat::exact(value), kExactError};
  ref->evaluated = true;
  return ref;
}

inline NodeRef make_node(OpKind kind, std::initializer_list<NodeRef> children) {
  if (kind == OpKind::Leaf) throw std::invalid_argument("use make_leaf for leaves");
  if (children.size() != arity(kind))
    throw std::invalid_argument("arity mismatch for " + std::string(to_string(kind)));
  NodeRef ref(new Node(kind));
  std::size_t i = 0;
  for (const auto& c : children) {
    if (!c) throw std::invalid_argument("null child");
    ref->children[i++] = c;
  }
  return ref;
}

inline NodeRef make_node(OpKind kind, const NodeRef& a) { return make_node(kind, {a}); }
inline NodeRef make_node(OpKind kind, const NodeRef& a, const NodeRef& b) {
  return make_node(kind, {a, b});
}

/// Visits every node reachable from root exactly once, children (left to
/// right) before parents. Throws StructureError on a cycle.
template <typename Visit>
void for_each_post_order(const Node* root, Visit&& visit) {
  if (!root) return;
  enum class Mark : std::uint8_t { Open, Done };
  std::unordered_map<const Node*, Mark> marks;
  struct Frame {
    const Node* node;
    std::size_t next;
  };
  std::vector<Frame> stack{{root, 0}};
  marks.emplace(root, Mark::Open);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.node->arity()) {
      const Node* c = f.node->child(f.next++);
      auto [it, fresh] = marks.try_emplace(c, Mark::Open);
      if (fresh) {
        stack.push_back({c, 0});
      } else if (it->second == Mark::Open) {
        throw StructureError("cycle in expression dag");
      }
      continue;
    }
    const Node* done = f.node;
    stack.pop_back();
    marks[done] = Mark::Done;
    visit(done);
  }
}

/// All reachable nodes with every parent before its children.
inline std::vector<const Node*> reverse_post_order(const Node* root) {
  std::vector<const Node*> order;
  for_each_post_order(root, [&](const Node* n) { order.push_back(n); });
  return {order.rbegin(), order.rend()};
}

/// Longest root-to-node path in edges; shared subdags are visited once.
inline std::size_t depth(const Node* root) {
  std::unordered_map<const Node*, std::size_t> memo;
  std::size_t result = 0;
  for_each_post_order(root, [&](const Node* n) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < n->arity(); ++i) d = std::max(d, memo.at(n->child(i)) + 1);
    memo.emplace(n, d);
    result = d;
  });
  return result;
}

inline std::size_t depth(const NodeRef& root) { return depth(root.get()); }

inline std::size_t node_count(const Node* root) {
  std::size_t count = 0;
  for_each_post_order(root, [&](const Node*) { ++count; });
  return count;
}

inline std::size_t node_count(const NodeRef& root) { return node_count(root.get()); }

/// Graphviz text. Vertex ids are topological indices, so the output is
/// stable for a given structure.
inline std::string export_dot(const Node* root) {
  auto order = reverse_post_order(root);
  std::unordered_map<const Node*, std::size_t> id;
  for (std::size_t i = 0; i < order.size(); ++i) id.emplace(order[i], i);

  std::ostringstream out;
  out << "digraph exactdag {\n";
  for (const Node* n : order) {
    out << "  n" << id[n] << " [label=\"";
    if (n->is_leaf()) {
      std::ostringstream v;
      v.precision(17);
      v << n->leaf_value;
      out << v.str();
    } else {
      out << to_string(n->kind);
    }
    out << "\", refs=" << n->ref_count << ", balanced=" << (n->balanced ? 1 : 0)
        << ", evaluated=" << (n->evaluated ? 1 : 0) << "];\n";
  }
  for (const Node* n : order)
    for (std::size_t i = 0; i < n->arity(); ++i)
      out << "  n" << id[n] << " -> n" << id[n->child(i)] << " [label=" << i << "];\n";
  out << "}\n";
  return out.str();
}

inline std::string export_dot(const NodeRef& root) { return export_dot(root.get()); }

} // namespace exactdag
