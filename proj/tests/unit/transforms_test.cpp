#include <gtest/gtest.h>

#include "gocta/decide.hpp"
#include "gocta/error.hpp"
#include "gocta/io.hpp"
#include "gocta/random.hpp"
#include "gocta/semantics.hpp"
#include "gocta/transforms.hpp"

namespace gocta {
namespace {

Tree tree(const Gocta& a, std::string_view text) { return parse_tree(text, &a.alphabet()); }

TEST(ZeroAccepting, StateCount) {
  for (const auto& [name, a] : paper_examples()) {
    auto z = make_zero_accepting(a);
    EXPECT_EQ(z.num_states(), 2 * a.num_states() + a.num_states() * a.alphabet().size()) << name;
    EXPECT_TRUE(z.zero_accepting_certified());
    EXPECT_TRUE(validate(z).empty());
  }
}

TEST(ZeroAccepting, SingleLeaf) {
  Gocta a(RankedAlphabet{{"#", 0}}, {"q0"}, 0, {Transition::read(0, Predicate::Top, 0, "#", {})});
  auto z = make_zero_accepting(a);
  EXPECT_EQ(z.state_name(z.initial()), "q0__za");
  auto trace = oracle_member_global(z, tree(z, "#"), 10);
  ASSERT_TRUE(trace.has_value());
  ASSERT_EQ(trace->steps.size(), 2U);
  EXPECT_EQ(z.render_transition(z.transitions()[trace->steps[0].transition]), "q0__za -[top/0]-> q0__za_#");
  EXPECT_EQ(z.render_transition(z.transitions()[trace->steps[1].transition]), "q0__za_# -[eq0/0]-> #");
  EXPECT_EQ(trace->last().counter, 0);
}

TEST(ZeroAccepting, FreshNamesAvoidCollisions) {
  Gocta a(RankedAlphabet{{"#", 0}}, {"q", "q__za"}, 0, {Transition::read(0, Predicate::Top, 0, "#", {})});
  auto z = make_zero_accepting(a);
  EXPECT_TRUE(validate(z).empty());
  EXPECT_EQ(z.state_name(z.initial()), "q__za'");
}

TEST(ZeroAccepting, AEqBPreservedWithFinalCounterZero) {
  auto a = example_a_eq_b();
  auto z = make_zero_accepting(a);
  auto t = tree(a, "sigma(a(#),b(#),#)");
  auto trace = oracle_member_global(z, t, 100);
  ASSERT_TRUE(trace.has_value());
  EXPECT_EQ(trace->last().counter, 0);
  EXPECT_FALSE(oracle_member_global(z, tree(a, "sigma(a(#),#,#)"), 100).has_value());
}

TEST(Normalize, SplitsInstructions) {
  RankedAlphabet sigma{{"a", 1}, {"#", 0}};
  Gocta eps(sigma, {"q", "r"}, 0, {Transition::epsilon(0, Predicate::GtZero, 3, 1)});
  auto n = normalize(eps);
  EXPECT_TRUE(is_normalized(n));
  EXPECT_EQ(n.num_states(), 4U);
  ASSERT_EQ(n.transitions().size(), 3U);
  std::size_t guarded = 0;
  for (const auto& t : n.transitions()) {
    EXPECT_EQ(t.instruction, 1);
    guarded += t.predicate == Predicate::GtZero ? 1 : 0;
  }
  EXPECT_EQ(guarded, 1U);
  EXPECT_EQ(n.render_transition(n.transitions()[0]), "q -[gt0/+1]-> q__nf_0_0");

  Gocta read(sigma, {"q", "r"}, 0, {Transition::read(0, Predicate::EqZero, 1, "a", {1})});
  auto m = normalize(read);
  EXPECT_TRUE(is_normalized(m));
  ASSERT_EQ(m.transitions().size(), 2U);
  EXPECT_EQ(m.render_transition(m.transitions()[0]), "q -[eq0/+1]-> q__nf_0_0");
  EXPECT_EQ(m.render_transition(m.transitions()[1]), "q__nf_0_0 -[top/0]-> a(r)");
}

TEST(Normalize, AEqBLanguageUpToSizeSix) {
  auto a = example_a_eq_b();
  auto n = normalize(a);
  EXPECT_TRUE(is_normalized(n));
  EXPECT_EQ(enumerate_language(n, 6, Semantics::Global, 50), enumerate_language(a, 6, Semantics::Global, 50));
}

TEST(Normalize, KeepsZeroAcceptance) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto a = random_gocta(seed);
    auto n = normalize(make_zero_accepting(a));
    EXPECT_TRUE(is_normalized(n));
    EXPECT_TRUE(n.zero_accepting_certified());
    for (const auto& t : enumerate_trees(a.alphabet(), 4)) {
      auto trace = oracle_member_global(n, t, 20);
      if (trace) {
        EXPECT_EQ(trace->last().counter, 0);
      }
    }
  }
}

TEST(Trim, DropsUselessStates) {
  RankedAlphabet sigma{{"a", 1}, {"#", 0}};
  // q -> a(dead) can never finish; u is unreachable.
  Gocta a(sigma, {"q", "dead", "u"}, 0,
          {Transition::read(0, Predicate::Top, 0, "#", {}), Transition::read(0, Predicate::Top, 0, "a", {1}),
           Transition::read(2, Predicate::Top, 0, "#", {})});
  auto t = trim(a);
  EXPECT_EQ(t.num_states(), 1U);
  EXPECT_EQ(t.transitions().size(), 1U);
  Gocta none(sigma, {"q"}, 0, {Transition::read(0, Predicate::Top, 0, "a", {0})});
  EXPECT_EQ(trim(none).num_states(), 1U);
  EXPECT_TRUE(trim(none).transitions().empty());
}

TEST(Behaviour, LeafAndEpsilonRules) {
  RankedAlphabet sigma{{"#", 0}};
  Gocta leaf(sigma, {"q"}, 0, {Transition::read(0, Predicate::Top, 0, "#", {})});
  auto b = behaviour_automaton(leaf, 1);
  EXPECT_TRUE(is_fta(b));
  EXPECT_EQ(b.num_states(), 4U);
  std::vector<std::string> rules;
  for (const auto& t : b.transitions()) rules.push_back(b.render_transition(t));
  EXPECT_EQ(rules, (std::vector<std::string>{"q@0@0 -[top/0]-> #", "q@1@1 -[top/0]-> #"}));

  Gocta eps(sigma, {"q", "r"}, 0, {Transition::epsilon(0, Predicate::EqZero, 1, 1)});
  auto e = behaviour_automaton(eps, 2);
  rules.clear();
  for (const auto& t : e.transitions()) rules.push_back(e.render_transition(t));
  EXPECT_EQ(rules, (std::vector<std::string>{"q@0@0 -[top/0]-> r@1@0", "q@0@1 -[top/0]-> r@1@1",
                                             "q@0@2 -[top/0]-> r@1@2"}));
}

TEST(Behaviour, SizeBounds) {
  auto n = normalize(example_a_eq_b());
  for (Counter k : {1, 2, 3}) {
    auto b = behaviour_automaton(n, k);
    const auto w = static_cast<std::size_t>(k + 1);
    EXPECT_LE(b.num_states(), n.num_states() * w * w);
    std::size_t bound = n.transitions().size();
    for (std::size_t i = 0; i <= n.alphabet().max_rank(); ++i) bound *= w;
    EXPECT_LE(b.transitions().size(), bound);
  }
}

TEST(Behaviour, Preconditions) {
  EXPECT_THROW(behaviour_automaton(example_a_eq_b(), 2), PreconditionError);
  EXPECT_THROW(behaviour_automaton(normalize(example_a_eq_b()), 100000, 1000), ResourceLimitError);
}

// Two states, k = 2: at most 2 * 3 * 3 = 18 behaviour states.
TEST(Behaviour, TwoStateExample) {
  RankedAlphabet sigma{{"a", 1}, {"#", 0}};
  Gocta a(sigma, {"p", "q"}, 0,
          {Transition::read(0, Predicate::Top, 0, "a", {1}), Transition::epsilon(1, Predicate::Top, 1, 0),
           Transition::read(1, Predicate::Top, 0, "#", {})});
  EXPECT_LE(behaviour_automaton(a, 2).num_states(), 18U);
}

TEST(EliminateEpsilon, OneStepClosure) {
  RankedAlphabet sigma{{"#", 0}};
  Gocta f(sigma, {"q0", "q1"}, 0,
          {Transition::epsilon(0, Predicate::Top, 0, 1), Transition::read(1, Predicate::Top, 0, "#", {})});
  auto g = eliminate_epsilon(f);
  EXPECT_FALSE(has_epsilon(g));
  EXPECT_EQ(g.render_transition(g.transitions()[0]), "q0 -[top/0]-> #");
  EXPECT_TRUE(fta_member(g, parse_tree("#")));
}

TEST(EliminateEpsilon, IdentityOnEpsilonFreeAndIdempotent) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RandomGoctaParams params;
    params.epsilon_percent = 0;
    auto free = random_fta(seed, params);
    EXPECT_EQ(eliminate_epsilon(free), free);
    auto f = random_fta(seed);
    auto once = eliminate_epsilon(f);
    EXPECT_EQ(eliminate_epsilon(once), once);
    for (const auto& t : enumerate_trees(f.alphabet(), 4)) {
      EXPECT_EQ(fta_member(once, t), fta_member_closure(f, t));
    }
  }
  EXPECT_THROW(eliminate_epsilon(example_a_eq_b()), PreconditionError);
}

TEST(EliminateEpsilon, BehaviourOfAEqB) {
  auto n = trim(normalize(make_zero_accepting(example_a_eq_b())));
  auto b = behaviour_automaton(n, 3);
  auto e = eliminate_epsilon(b);
  for (const auto& t : enumerate_trees(n.alphabet(), 5)) EXPECT_EQ(fta_member(e, t), fta_member_closure(b, t));
}

TEST(Transforms, OutputsRoundTrip) {
  auto a = example_pow2();
  for (const auto& out : {make_zero_accepting(a), normalize(a), trim(normalize(a)),
                          behaviour_automaton(normalize(a), 2), eliminate_epsilon(behaviour_automaton(normalize(a), 2))}) {
    auto back = parse_gocta(write_gocta(out));
    EXPECT_EQ(back, out);
    EXPECT_TRUE(validate(back).empty());
  }
}

}  // namespace
}  // namespace gocta
