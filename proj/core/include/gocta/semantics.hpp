#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gocta/automaton.hpp"
#include "gocta/tree.hpp"

namespace gocta {

inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

/// Budget for the exhaustive searches; exceeding it raises
/// ResourceLimitError rather than answering "no".
struct SearchOptions {
  std::size_t node_budget = kDefaultNodeBudget;
};

/// An element of T_Sigma(Q) x N: `shape` is a context whose variable x_j
/// carries frontier[j-1]; all state positions are therefore in lex order.
struct GlobalConfiguration {
  Context shape = Tree::variable(1);
  std::vector<StateId> frontier;
  Counter counter = 0;

  static GlobalConfiguration initial(const Gocta& a) { return {Tree::variable(1), {a.initial()}, 0}; }
  bool is_terminal() const { return frontier.empty(); }

  friend bool operator==(const GlobalConfiguration&, const GlobalConfiguration&) = default;
};

/// Applies `t` at the lexicographically first state, or nullopt if `t` does
/// not start there, its predicate fails, or the counter would go negative.
/// Counter overflow throws ResourceLimitError.
std::optional<GlobalConfiguration> step_global(const Gocta& a, const GlobalConfiguration& c, const Transition& t);

/// (transition index, successor) for every applicable transition, in
/// canonical transition order.
std::vector<std::pair<std::size_t, GlobalConfiguration>> successors_global(const Gocta& a,
                                                                           const GlobalConfiguration& c);

struct GlobalStep {
  std::size_t transition;
  GlobalConfiguration after;
};

struct GlobalTrace {
  GlobalConfiguration start;
  std::vector<GlobalStep> steps;

  const GlobalConfiguration& last() const { return steps.empty() ? start : steps.back().after; }
};

/// Largest counter value in any configuration of `t`.
Counter maxcnt(const GlobalTrace& t);

/// Number of read-transitions used by `t`.
std::size_t read_steps(const Gocta& a, const GlobalTrace& t);

/// Replays `t`; empty iff every recorded step is exactly step_global of its
/// predecessor under the recorded transition and no counter is negative.
std::vector<std::string> check_global_trace(const Gocta& a, const GlobalTrace& t);

/// One line per configuration: `<counter> | <tree with <q> leaves> | <transition>`.
std::string render_global_trace(const Gocta& a, const GlobalTrace& t);

/// An element of T_Sigma(Q x N): frontier[j-1] is the (state, counter) pair
/// at variable x_j of `shape`.
struct CopyConfiguration {
  Context shape = Tree::variable(1);
  std::vector<std::pair<StateId, Counter>> frontier;

  static CopyConfiguration initial(const Gocta& a) { return {Tree::variable(1), {{a.initial(), 0}}}; }
  bool is_terminal() const { return frontier.empty(); }

  friend bool operator==(const CopyConfiguration&, const CopyConfiguration&) = default;
};

/// Applies `t` at position `at`, which must carry a state; read-transitions
/// hand the updated counter to every child.
std::optional<CopyConfiguration> step_copy(const Gocta& a, const CopyConfiguration& c, const Transition& t,
                                           const Position& at);

struct CopyStep {
  std::size_t transition;
  Position at;
  CopyConfiguration after;
};

struct CopyTrace {
  CopyConfiguration start;
  std::vector<CopyStep> steps;

  const CopyConfiguration& last() const { return steps.empty() ? start : steps.back().after; }
};

std::vector<std::string> check_copy_trace(const Gocta& a, const CopyTrace& t);
std::string render_copy_trace(const Gocta& a, const CopyTrace& t);

/// Breadth-first search over (nodes read, frontier states, counter) with
/// every counter <= `counter_bound`. Returns a shortest successful trace.
std::optional<GlobalTrace> oracle_member_global(const Gocta& a, const Tree& xi, Counter counter_bound,
                                                const SearchOptions& options = {});

/// Copy-semantics search that always rewrites the lex-first state; subtrees
/// evolve independently, so this loses no derivations.
std::optional<CopyTrace> oracle_member_copy(const Gocta& a, const Tree& xi, Counter counter_bound,
                                            const SearchOptions& options = {});

/// Copy-semantics search rewriting any state position; only used to
/// cross-check the scheduling argument above.
bool oracle_member_copy_any_position(const Gocta& a, const Tree& xi, Counter counter_bound,
                                     const SearchOptions& options = {});

enum class Semantics { Global, Copy };

/// Every tree with at most `max_size` nodes accepted with counters bounded
/// by `counter_bound`, sorted.
std::vector<Tree> enumerate_language(const Gocta& a, std::size_t max_size, Semantics semantics,
                                     Counter counter_bound, const SearchOptions& options = {});

/// Adds `z` to `m`, throwing ResourceLimitError on overflow.
Counter checked_add(Counter m, Counter z);

}  // namespace gocta
