#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gocta/tree.hpp"

namespace gocta {

using StateId = std::uint32_t;
using Counter = std::int64_t;

enum class Predicate : std::uint8_t { Top, EqZero, GtZero };

constexpr bool holds(Predicate p, Counter m) {
  switch (p) {
    case Predicate::Top:
      return true;
    case Predicate::EqZero:
      return m == 0;
    case Predicate::GtZero:
      return m >= 1;
  }
  return false;
}

std::string_view predicate_name(Predicate p);
std::optional<Predicate> parse_predicate(std::string_view text);

/// q -p/z-> q'  (epsilon, `symbol` empty, one target)
/// q -p/z-> sigma(q1,...,qn)  (read, `targets` has rank(sigma) entries)
struct Transition {
  StateId source = 0;
  Predicate predicate = Predicate::Top;
  Counter instruction = 0;
  std::optional<std::string> symbol;
  std::vector<StateId> targets;

  bool is_epsilon() const { return !symbol.has_value(); }
  bool is_read() const { return symbol.has_value(); }
  bool is_plain() const { return predicate == Predicate::Top && instruction == 0; }

  static Transition epsilon(StateId source, Predicate p, Counter z, StateId target) {
    return Transition{source, p, z, std::nullopt, {target}};
  }
  static Transition read(StateId source, Predicate p, Counter z, std::string symbol, std::vector<StateId> targets) {
    return Transition{source, p, z, std::move(symbol), std::move(targets)};
  }

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Canonical transition order: source, predicate, instruction, then
/// epsilon before read, then target/symbol data.
bool canonical_less(const Transition& a, const Transition& b);

/// A global one-counter tree automaton. Transitions are kept sorted in the
/// canonical order and deduplicated, so iteration is deterministic.
class Gocta {
 public:
  Gocta() = default;
  Gocta(RankedAlphabet alphabet, std::vector<std::string> states, StateId initial,
        std::vector<Transition> transitions);

  const RankedAlphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return states_.size(); }
  std::span<const std::string> states() const { return states_; }
  const std::string& state_name(StateId id) const;
  std::optional<StateId> find_state(std::string_view name) const;
  StateId initial() const { return initial_; }
  std::span<const Transition> transitions() const { return transitions_; }
  std::set<Counter> instructions() const;

  /// Indices into transitions(), by source state. Only valid for
  /// automata whose source ids are in range.
  std::span<const std::size_t> outgoing(StateId source) const;

  /// Set by make_zero_accepting and kept by normalize/trim: every accepting
  /// computation is known to end with counter 0.
  bool zero_accepting_certified() const { return zero_accepting_; }
  void set_zero_accepting_certified(bool value) { zero_accepting_ = value; }

  /// "q -[p/z]-> rhs" using state names.
  std::string render_transition(const Transition& t) const;

  friend bool operator==(const Gocta& a, const Gocta& b) {
    return a.alphabet_ == b.alphabet_ && a.states_ == b.states_ && a.initial_ == b.initial_ &&
           a.transitions_ == b.transitions_;
  }

 private:
  RankedAlphabet alphabet_;
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateId> index_;
  StateId initial_ = 0;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
  bool zero_accepting_ = false;
};

/// Name-based construction helper. States are numbered in order of first
/// mention.
class GoctaBuilder {
 public:
  explicit GoctaBuilder(RankedAlphabet alphabet) : alphabet_(std::move(alphabet)) {}

  StateId state(const std::string& name);
  GoctaBuilder& initial(const std::string& name);
  GoctaBuilder& epsilon(const std::string& from, Predicate p, Counter z, const std::string& to);
  GoctaBuilder& read(const std::string& from, Predicate p, Counter z, const std::string& symbol,
                     const std::vector<std::string>& targets);
  /// Plain (top/0) read.
  GoctaBuilder& read(const std::string& from, const std::string& symbol, const std::vector<std::string>& targets) {
    return read(from, Predicate::Top, 0, symbol, targets);
  }
  Gocta build() const;

 private:
  RankedAlphabet alphabet_;
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateId> index_;
  std::optional<StateId> initial_;
  std::vector<Transition> transitions_;
};

struct Diagnostic {
  /// "initial", "state", "transition #i", ...
  std::string location;
  std::string message;
};

/// Empty iff every automaton invariant holds.
std::vector<Diagnostic> validate(const Gocta& a);

/// Throws PreconditionError carrying the first diagnostic, if any.
void require_valid(const Gocta& a);

/// Instr(A) within {-1,0,1} and every read-transition is top/0.
bool is_normalized(const Gocta& a);

/// Every transition is top/0.
bool is_fta(const Gocta& a);

bool has_epsilon(const Gocta& a);

/// The automata of the worked examples, keyed by name:
///   a_eq_b            trees sigma(x1,x2,x3) over {a,b,#} with |x|_a = |x|_b
///   a_eq_b_verbatim   the five-state listing without the final zero test
///   multiply_k        the counter multiplication gadget for factor k
///   pow2              omega-chains whose blocks double the counter
///   a_sigma_b_c       a^n(sigma(b^n #, c^n #)) under copy semantics
std::map<std::string, Gocta> paper_examples(Counter multiply_factor = 2);

Gocta example_a_eq_b();
Gocta example_a_eq_b_verbatim();
Gocta example_multiply(Counter k);
Gocta example_pow2();
Gocta example_a_sigma_b_c();

}  // namespace gocta
