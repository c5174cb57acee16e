#pragma once

#include <cstdint>

#include "gocta/automaton.hpp"

namespace gocta {

struct RandomGoctaParams {
  std::uint32_t max_states = 4;
  std::uint32_t max_transitions = 10;
  /// Alphabet is #/0, plus a/1 if >= 1, plus s/2 if >= 2.
  std::uint32_t max_rank = 2;
  Counter min_instruction = -2;
  Counter max_instruction = 2;
  /// Probability of an epsilon-transition, in percent.
  std::uint32_t epsilon_percent = 30;
};

/// Seed-deterministic random automaton: states q0..q(n-1), initial q0, at
/// least one transition, and the first transition a leaf read so that the
/// language has a chance to be nonempty. Draws use mt19937_64 with plain
/// modulo reduction, so the result is the same on every platform.
Gocta random_gocta(std::uint64_t seed, const RandomGoctaParams& params = {});

/// Same shape, but every transition is top/0.
Gocta random_fta(std::uint64_t seed, const RandomGoctaParams& params = {});

}  // namespace gocta
