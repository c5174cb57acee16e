#pragma once

#include <string>
#include <string_view>

#include "gocta/automaton.hpp"

namespace gocta {

/// Reads the line-based automaton format:
///
///   alphabet: sigma/3 a/1 b/1 #/0
///   states: q0 qa qb
///   initial: q0
///   trans: q0 -[top/0]-> sigma(qa,qb,qb)
///   trans: qa -[gt0/-1]-> qb          # epsilon, qb is a state
///   trans: qb -> #                    # abbreviates -[top/0]->
///
/// Lines may come in any order; `initial` must occur exactly once. A bare
/// right-hand side is an epsilon-transition if it names a state and a
/// rank-0 read if it names a symbol; names that are both are rejected.
/// Errors are ParseErrors carrying the 1-based line number.
Gocta parse_gocta(std::string_view text);

/// Canonical serialization; parse_gocta(write_gocta(a)) == a.
std::string write_gocta(const Gocta& a);

Gocta load_gocta(const std::string& path);
void save_gocta(const Gocta& a, const std::string& path);

/// Whole file as a string; throws Error if it cannot be read.
std::string read_file(const std::string& path);

}  // namespace gocta
