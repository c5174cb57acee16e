#include "gocta/random.hpp"

#include <random>

#include "gocta/error.hpp"

namespace gocta {

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  Counter between(Counter lo, Counter hi) { return lo + static_cast<Counter>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

 private:
  std::mt19937_64 rng_;
};

Gocta generate(std::uint64_t seed, const RandomGoctaParams& params, bool counters) {
  if (params.max_states == 0 || params.max_transitions == 0 || params.min_instruction > params.max_instruction) {
    throw PreconditionError("random automaton parameters are empty");
  }
  Draw draw(seed);
  RankedAlphabet alphabet{{"#", 0}};
  if (params.max_rank >= 1) alphabet.add("a", 1);
  if (params.max_rank >= 2) alphabet.add("s", 2);
  std::vector<std::pair<std::string, std::size_t>> symbols(alphabet.symbols().begin(), alphabet.symbols().end());

  const auto n = static_cast<std::uint32_t>(1 + draw.below(params.max_states));
  const auto m = static_cast<std::uint32_t>(1 + draw.below(params.max_transitions));
  std::vector<std::string> states;
  for (std::uint32_t q = 0; q < n; ++q) states.push_back("q" + std::to_string(q));

  std::vector<Transition> transitions;
  for (std::uint32_t i = 0; i < m; ++i) {
    const auto source = static_cast<StateId>(draw.below(n));
    Predicate p = Predicate::Top;
    Counter z = 0;
    if (counters) {
      p = static_cast<Predicate>(draw.below(3));
      z = draw.between(params.min_instruction, params.max_instruction);
    }
    if (i != 0 && draw.below(100) < params.epsilon_percent) {
      transitions.push_back(Transition::epsilon(source, p, z, static_cast<StateId>(draw.below(n))));
      continue;
    }
    const auto& [symbol, rank] = i == 0 ? symbols.front() : symbols[draw.below(symbols.size())];
    std::vector<StateId> targets;
    for (std::size_t j = 0; j < rank; ++j) targets.push_back(static_cast<StateId>(draw.below(n)));
    transitions.push_back(Transition::read(source, p, z, symbol, std::move(targets)));
  }
  return Gocta(std::move(alphabet), std::move(states), 0, std::move(transitions));
}

}  // namespace

Gocta random_gocta(std::uint64_t seed, const RandomGoctaParams& params) { return generate(seed, params, true); }

Gocta random_fta(std::uint64_t seed, const RandomGoctaParams& params) { return generate(seed, params, false); }

}  // namespace gocta
