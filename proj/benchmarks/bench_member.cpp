#include <benchmark/benchmark.h>

#include "gocta/decide.hpp"
#include "gocta/random.hpp"
#include "gocta/semantics.hpp"
#include "gocta/transforms.hpp"

namespace {

using namespace gocta;

Tree chain(std::size_t letters) {
  Tree t = Tree::leaf("#");
  for (std::size_t i = 0; i < letters; ++i) t = Tree::node(i % 2 == 0 ? "a" : "b", {t});
  return t;
}

// sigma over three balanced chains with `n` nodes in total.
Tree balanced(std::size_t n) {
  const std::size_t letters = n - 4;
  const std::size_t third = letters / 3 / 2 * 2;
  return Tree::node("sigma", {chain(third), chain(third), chain(letters - 2 * third)});
}

void BM_MemberBehaviour(benchmark::State& state) {
  auto a = example_a_eq_b();
  auto t = balanced(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(member(a, t).verdict);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MemberBehaviour)->RangeMultiplier(2)->Range(16, 512)->Complexity();

void BM_MemberOracle(benchmark::State& state) {
  auto a = example_a_eq_b();
  auto t = balanced(static_cast<std::size_t>(state.range(0)));
  MemberOptions options;
  options.method = Method::Oracle;
  for (auto _ : state) benchmark::DoNotOptimize(member(a, t, options).verdict);
}
BENCHMARK(BM_MemberOracle)->RangeMultiplier(2)->Range(16, 64);

void BM_PrepareForDecision(benchmark::State& state) {
  auto a = example_a_eq_b();
  for (auto _ : state) benchmark::DoNotOptimize(prepare_for_decision(a).num_states());
}
BENCHMARK(BM_PrepareForDecision);

void BM_ExplicitBehaviour(benchmark::State& state) {
  auto n = normalize(example_a_eq_b());
  for (auto _ : state) benchmark::DoNotOptimize(behaviour_automaton(n, state.range(0)).transitions().size());
}
BENCHMARK(BM_ExplicitBehaviour)->DenseRange(1, 5, 2);

void BM_RandomDifferential(benchmark::State& state) {
  auto a = random_gocta(static_cast<std::uint64_t>(state.range(0)));
  auto trees = enumerate_trees(a.alphabet(), 5);
  for (auto _ : state) {
    std::size_t accepted = 0;
    for (const auto& t : trees) accepted += member(a, t).verdict ? 1 : 0;
    benchmark::DoNotOptimize(accepted);
  }
}
BENCHMARK(BM_RandomDifferential)->Arg(27)->Arg(177);

void BM_EnumerateLanguage(benchmark::State& state) {
  auto a = example_a_eq_b();
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_language(a, static_cast<std::size_t>(state.range(0)), Semantics::Global, 50).size());
  }
}
BENCHMARK(BM_EnumerateLanguage)->DenseRange(4, 8, 2);

}  // namespace

BENCHMARK_MAIN();
