#include <gtest/gtest.h>

#include "gocta/error.hpp"
#include "gocta/tree.hpp"

namespace gocta {
namespace {

Tree parse(std::string_view text) { return parse_tree(text); }

const Tree kSample = parse_tree("sigma(a(#),b(#),#)");

TEST(RankedAlphabet, RanksAndMaxRank) {
  RankedAlphabet sigma{{"sigma", 3}, {"a", 1}, {"#", 0}};
  EXPECT_EQ(sigma.rank("sigma"), 3U);
  EXPECT_FALSE(sigma.rank("b").has_value());
  EXPECT_EQ(sigma.max_rank(), 3U);
  sigma.add("a", 1);
  EXPECT_THROW(sigma.add("a", 2), PreconditionError);
  EXPECT_THROW(sigma.add("", 0), PreconditionError);
}

TEST(Positions, LexicographicOrder) {
  std::vector<Position> expected{{}, {1}, {1, 1}, {2}, {2, 1}, {3}};
  EXPECT_EQ(positions(kSample), expected);
  EXPECT_EQ(positions(Tree::leaf("#")), std::vector<Position>{{}});
  EXPECT_EQ(positions(parse("a(a(#))")), (std::vector<Position>{{}, {1}, {1, 1}}));
  EXPECT_EQ(render_position({2, 1}), "2.1");
  EXPECT_EQ(render_position({}), "eps");
}

TEST(Positions, StrictlyIncreasingAndComplete) {
  for (auto text : {"sigma(a(#),b(#),#)", "s(s(#,a(#)),s(#,#))", "a(a(a(#)))"}) {
    Tree t = parse(text);
    auto ps = positions(t);
    ASSERT_EQ(ps.size(), t.size());
    for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_LT(ps[i - 1], ps[i]);
    for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_EQ(render_tree(t.at(ps[i])), render_tree(nth_subtree(t, i)));
  }
}

TEST(PrefixContext, Examples) {
  EXPECT_EQ(render_tree(prefix_context(kSample, 0)), "x1");
  EXPECT_EQ(render_tree(prefix_context(kSample, 1)), "sigma(x1,x2,x3)");
  EXPECT_EQ(render_tree(prefix_context(kSample, 3)), "sigma(a(#),x1,x2)");
  EXPECT_EQ(prefix_context(kSample, kSample.size()), kSample);
  EXPECT_THROW(prefix_context(kSample, 7), PreconditionError);
}

TEST(PrefixContext, FrontierWidth) {
  EXPECT_EQ(frontier_width(kSample, 0), 1U);
  EXPECT_EQ(frontier_width(kSample, 1), 3U);
  EXPECT_EQ(frontier_width(kSample, kSample.size()), 0U);
  EXPECT_THROW(frontier_width(kSample, 99), PreconditionError);
}

// <t>_{i+1} is <t>_i with its first variable expanded by the (i+1)-st label.
TEST(PrefixContext, StepwiseExpansion) {
  Tree t = parse("s(s(#,a(#)),s(a(a(#)),#))");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Tree& node = nth_subtree(t, i);
    std::vector<Tree> vars;
    for (std::size_t j = 0; j < node.arity(); ++j) vars.push_back(Tree::variable(j + 1));
    Tree head = node.arity() == 0 ? Tree::leaf(node.label()) : Tree::node(node.label(), vars);
    Context before = prefix_context(t, i);
    std::vector<Tree> parts{head};
    for (std::size_t j = 2; j <= before.variable_count(); ++j) parts.push_back(Tree::variable(j));
    EXPECT_EQ(compose(before, parts), prefix_context(t, i + 1)) << i;
    EXPECT_TRUE(is_context(prefix_context(t, i)));
  }
}

TEST(Compose, Examples) {
  EXPECT_EQ(render_tree(compose(Tree::variable(1), std::vector<Tree>{Tree::leaf("#")})), "#");
  EXPECT_EQ(compose(parse("sigma(x1,x2,x3)"), std::vector<Tree>{parse("a(#)"), parse("b(#)"), parse("#")}), kSample);
  EXPECT_EQ(compose(parse("sigma(a(x1),x2,x3)"), std::vector<Tree>{parse("#"), parse("b(#)"), parse("#")}), kSample);
  EXPECT_THROW(compose(parse("sigma(x1,x2,x3)"), std::vector<Tree>{parse("#")}), PreconditionError);
}

TEST(Compose, RenumbersVariables) {
  Tree c = compose(parse("s(x1,x2)"), std::vector<Tree>{parse("s(x1,x2)"), parse("a(x1)")});
  EXPECT_EQ(render_tree(c), "s(s(x1,x2),a(x3))");
  EXPECT_TRUE(is_context(c));
  Tree c2 = parse("s(x2,x1)");
  EXPECT_FALSE(is_context(c2));
  EXPECT_EQ(c.size(), 3U - 2U + 3U + 2U);
}

TEST(CountSymbol, Examples) {
  EXPECT_EQ(count_symbol(kSample, "a"), 1U);
  EXPECT_EQ(count_symbol(parse("sigma(#,#,#)"), "a"), 0U);
  EXPECT_EQ(count_symbol(parse("omega(sigma(#,#),#)"), "sigma"), 1U);
  RankedAlphabet sigma{{"sigma", 3}, {"#", 0}};
  EXPECT_THROW(count_symbol(kSample, "zz", sigma), PreconditionError);
}

TEST(ParseTree, RoundTripAndErrors) {
  EXPECT_EQ(kSample.size(), 6U);
  EXPECT_EQ(kSample.height(), 2U);
  EXPECT_EQ(render_tree(parse(" sigma ( a(#) , b(#), # ) ")), "sigma(a(#),b(#),#)");
  EXPECT_THROW(parse("#,"), ParseError);
  EXPECT_THROW(parse("sigma(#"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  RankedAlphabet sigma{{"sigma", 3}, {"#", 0}};
  EXPECT_THROW(parse_tree("sigma(#,#)", &sigma), ParseError);
  EXPECT_THROW(parse_tree("tau(#)", &sigma), ParseError);
  try {
    parse("a(#))");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4U);
  }
}

TEST(ParseTree, Monadic) {
  EXPECT_EQ(render_monadic(parse("a(b(a(#)))")), "a b a #");
  EXPECT_FALSE(render_monadic(kSample).has_value());
}

TEST(EnumerateTrees, CountsBySize) {
  RankedAlphabet sigma{{"#", 0}, {"a", 1}, {"s", 2}};
  // Motzkin-like counts: sizes 1..5 give 1, 1, 2, 4, 9 trees.
  auto trees = enumerate_trees(sigma, 5);
  EXPECT_EQ(trees.size(), 1U + 1U + 2U + 4U + 9U);
  EXPECT_TRUE(std::is_sorted(trees.begin(), trees.end()));
  for (const auto& t : trees) EXPECT_NO_THROW(check_tree(t, sigma));
  EXPECT_TRUE(enumerate_trees(sigma, 0).empty());
}

TEST(Tree, StructuralEquality) {
  EXPECT_EQ(parse("a(#)"), Tree::node("a", {Tree::leaf("#")}));
  EXPECT_NE(parse("a(#)"), parse("b(#)"));
  EXPECT_EQ(parse("a(#)").hash(), Tree::node("a", {Tree::leaf("#")}).hash());
}

}  // namespace
}  // namespace gocta
