#pragma once

#include <cstddef>
#include <string>

#include "gocta/automaton.hpp"

namespace gocta {

/// Equivalent automaton whose accepting computations all end with counter
/// 0. Adds a bracketed copy `q__za` of every state, which follows the
/// rightmost branch, and drain states `q__za_<alpha>` that empty the
/// counter before the last leaf is read. The result is certified
/// zero-accepting.
Gocta make_zero_accepting(const Gocta& a);

/// Equivalent automaton with instructions in {-1,0,1} whose reads are all
/// top/0. Guards and instructions of reads move onto fresh epsilon chains
/// `q__nf_<t>_<j>`; the zero-accepting certificate is kept.
Gocta normalize(const Gocta& a);

/// Drops states that are unreachable from the initial state or cannot
/// derive any tree when counters are ignored. Both over-approximate the
/// real behaviour, so the language is unchanged. The initial state always
/// survives; the certificate is kept.
Gocta trim(const Gocta& a);

/// Explicit k-bounded behaviour automaton over Q x [0,k] x [0,k] (states
/// rendered `q@i0@i1`). Requires a normalized automaton; throws
/// ResourceLimitError when the result would exceed `max_transitions`.
Gocta behaviour_automaton(const Gocta& a, Counter k, std::size_t max_transitions = 50'000'000);

/// Name of behaviour state (q, i0, i1).
std::string behaviour_state_name(const std::string& q, Counter i0, Counter i1);

/// Epsilon-free FTA with the same language: every read rule of p is copied
/// to each state whose epsilon-closure contains p. Requires is_fta.
Gocta eliminate_epsilon(const Gocta& f);

}  // namespace gocta
