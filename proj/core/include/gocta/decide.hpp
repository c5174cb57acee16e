#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>

#include "gocta/automaton.hpp"
#include "gocta/semantics.hpp"
#include "gocta/tree.hpp"

namespace gocta {

/// |xi| * |Q|^2 + 1. Stated for normalized, zero-accepting automata, so
/// non-normalized input is rejected. Throws ResourceLimitError on overflow.
Counter counter_bound(const Gocta& a, const Tree& xi);
Counter counter_bound(std::size_t tree_size, std::size_t num_states);

/// Bottom-up run of an epsilon-free FTA, memoized per distinct subtree.
bool fta_member(const Gocta& f, const Tree& xi);

/// Same, but closes each subtree's state set under top/0 epsilon edges, so
/// epsilon-transitions are allowed.
bool fta_member_closure(const Gocta& f, const Tree& xi);

/// Membership of xi in the k-bounded behaviour automaton of `a`, without
/// building it: for each (subtree, state, entry counter) the set of
/// possible exit counters is computed on demand. `a` must be normalized.
bool behaviour_member(const Gocta& a, const Tree& xi, Counter k, const SearchOptions& options = {});

/// The automaton the decider works on: trim(normalize(make_zero_accepting(a))),
/// or just trim(a) if `a` is already normalized and certified zero-accepting.
Gocta prepare_for_decision(const Gocta& a);

enum class Method { Behaviour, Oracle };

std::string_view method_name(Method m);

struct MemberOptions {
  Method method = Method::Behaviour;
  /// Replaces the computed counter bound when set.
  std::optional<Counter> bound;
  SearchOptions search;
};

struct MemberReport {
  bool verdict = false;
  Method method = Method::Behaviour;
  Counter bound_used = 0;
  /// |Q'| of the prepared automaton the bound was computed from.
  std::size_t prepared_states = 0;
  std::chrono::nanoseconds elapsed{0};
  /// Oracle method only; a computation of the input automaton.
  std::optional<GlobalTrace> witness;
};

/// Decides xi in L(a). The bound is computed on the prepared automaton. The
/// behaviour method runs behaviour_member there; the oracle method searches
/// the original automaton with the same bound (its computations embed into
/// the prepared automaton's, so the bound carries over) and returns a witness.
MemberReport member(const Gocta& a, const Tree& xi, const MemberOptions& options = {});

/// |{(n1,n2,n3) in [-k,k]^3 : n1+n2+n3 = 0}| by enumeration.
std::uint64_t balanced_triples(std::uint64_t k);

}  // namespace gocta
