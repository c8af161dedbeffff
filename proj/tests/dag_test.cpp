#include "exactdag/dag.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <regex>
#include <string>
#include <vector>

using namespace exactdag;

namespace {

/// a^16 by repeated squaring: every Mul has both edges to the previous node.
NodeRef power16(NodeRef a) {
  NodeRef x = std::move(a);
  for (int i = 0; i < 4; ++i) x = make_node(OpKind::Mul, x, x);
  return x;
}

std::size_t count(const std::string& s, const std::regex& re) {
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator()));
}

} // namespace

TEST(OpKind, Arity) {
  EXPECT_EQ(arity(OpKind::Leaf), 0u);
  EXPECT_EQ(arity(OpKind::Neg), 1u);
  EXPECT_EQ(arity(OpKind::Sqrt), 1u);
  for (auto k : {OpKind::Add, OpKind::Sub, OpKind::Mul, OpKind::Div}) EXPECT_EQ(arity(k), 2u);
}

TEST(MakeLeaf, IsExactAndEvaluated) {
  NodeRef one = make_leaf(1);
  EXPECT_TRUE(one->is_leaf());
  EXPECT_TRUE(one->evaluated);
  ASSERT_TRUE(one->approx);
  EXPECT_TRUE(one->approx->is_exact());
  EXPECT_EQ(one->approx->value.to_double(), 1.0);
  EXPECT_EQ(depth(make_leaf(0.5)), 0u);
}

TEST(MakeLeaf, RejectsNonFinite) {
  EXPECT_THROW(make_leaf(std::numeric_limits<double>::infinity()), std::invalid_argument);
  EXPECT_THROW(make_leaf(std::nan("")), std::invalid_argument);
}

TEST(MakeNode, SqrtOfLeafHasDepthOne) {
  EXPECT_EQ(depth(make_node(OpKind::Sqrt, make_leaf(13))), 1u);
}

TEST(MakeNode, SelfSharedChildCountsBothEdges) {
  NodeRef x = make_leaf(3);
  EXPECT_EQ(x->ref_count, 1u);
  NodeRef sum = make_node(OpKind::Add, x, x);
  EXPECT_EQ(x->ref_count, 3u);
  EXPECT_EQ(sum->child(0), sum->child(1));
  EXPECT_FALSE(sum->balanced);
  EXPECT_FALSE(sum->evaluated);
  sum.reset();
  EXPECT_EQ(x->ref_count, 1u);
}

TEST(MakeNode, ArityMismatchThrows) {
  NodeRef x = make_leaf(1);
  EXPECT_THROW(make_node(OpKind::Add, {x}), std::invalid_argument);
  EXPECT_THROW(make_node(OpKind::Sqrt, {x, x}), std::invalid_argument);
  EXPECT_THROW(make_node(OpKind::Leaf, {}), std::invalid_argument);
  EXPECT_THROW(make_node(OpKind::Neg, {NodeRef{}}), std::invalid_argument);
}

TEST(MakeNode, DivisionKeepsOperandOrder) {
  NodeRef num = make_leaf(1), denom = make_leaf(2);
  NodeRef q = make_node(OpKind::Div, num, denom);
  EXPECT_EQ(q->child(0), num.get());
  EXPECT_EQ(q->child(1), denom.get());
}

TEST(Depth, LeftDeepChain) {
  NodeRef chain = make_node(OpKind::Add, make_leaf(1),
                            make_node(OpKind::Add, make_leaf(2), make_node(OpKind::Add, make_leaf(3), make_leaf(4))));
  EXPECT_EQ(depth(chain), 3u);
  EXPECT_EQ(node_count(chain), 7u);
}

TEST(Depth, PowerSixteenSharedChain) {
  // Edges m4->m3->m2->m1->a: the leaf sits below the deepest multiplication.
  NodeRef p = power16(make_leaf(2));
  EXPECT_EQ(depth(p), 4u);
  EXPECT_EQ(node_count(p), 5u);
}

TEST(Depth, ChainOfNOperatorsOverDistinctLeaves) {
  for (int n : {1, 2, 10, 1000}) {
    NodeRef s = make_leaf(0);
    for (int i = 1; i <= n; ++i) s = make_node(OpKind::Add, s, make_leaf(i));
    EXPECT_EQ(depth(s), static_cast<std::size_t>(n));
    EXPECT_EQ(node_count(s), static_cast<std::size_t>(2 * n + 1));
  }
}

TEST(NodeRef, DeepChainReleaseDoesNotOverflowStack) {
  NodeRef s = make_leaf(0);
  for (int i = 0; i < 1'000'000; ++i) s = make_node(OpKind::Neg, s);
  EXPECT_EQ(depth(s), 1'000'000u);
  s.reset();
  SUCCEED();
}

TEST(NodeRef, RefCountTracksHandlesAndEdges) {
  NodeRef a = make_leaf(1);
  NodeRef b = a;
  EXPECT_EQ(a->ref_count, 2u);
  NodeRef p = make_node(OpKind::Mul, a, make_leaf(2));
  EXPECT_EQ(a->ref_count, 3u);
  b = NodeRef{};
  EXPECT_EQ(a->ref_count, 2u);
  NodeRef moved = std::move(p);
  EXPECT_FALSE(p);
  EXPECT_EQ(moved->ref_count, 1u);
}

TEST(Traversal, ReversePostOrderPutsParentsFirst) {
  NodeRef x = make_leaf(1);
  NodeRef y = make_node(OpKind::Sqrt, x);
  NodeRef z = make_node(OpKind::Add, y, make_node(OpKind::Mul, y, x));
  auto order = reverse_post_order(z.get());
  ASSERT_EQ(order.size(), 4u);
  std::unordered_map<const Node*, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (const Node* n : order)
    for (std::size_t i = 0; i < n->arity(); ++i) EXPECT_LT(pos[n], pos[n->child(i)]);
}

TEST(Traversal, CycleIsDetected) {
  NodeRef a = make_node(OpKind::Neg, make_leaf(1));
  NodeRef b = make_node(OpKind::Neg, a);
  a->children[0] = b; // corrupt on purpose
  EXPECT_THROW(depth(a), StructureError);
  a->children[0] = make_leaf(1); // break the cycle so both nodes are freed
}

TEST(ExportDot, Leaf) {
  std::string dot = export_dot(make_leaf(1));
  EXPECT_EQ(count(dot, std::regex(R"(n\d+ \[label=")")), 1u);
  EXPECT_EQ(count(dot, std::regex("->")), 0u);
}

TEST(ExportDot, SumOfTwoLeaves) {
  std::string dot = export_dot(make_node(OpKind::Add, make_leaf(1), make_leaf(2)));
  EXPECT_EQ(count(dot, std::regex(R"(n\d+ \[label=")")), 3u);
  EXPECT_EQ(count(dot, std::regex("->")), 2u);
}

TEST(ExportDot, PowerSixteenAndDeterminism) {
  NodeRef p = power16(make_leaf(2));
  std::string dot = export_dot(p);
  EXPECT_EQ(count(dot, std::regex(R"(n\d+ \[label=")")), 5u);
  EXPECT_EQ(count(dot, std::regex("->")), 8u);
  EXPECT_EQ(dot, export_dot(power16(make_leaf(2))));
  EXPECT_NE(dot.find("refs=2"), std::string::npos);
}
