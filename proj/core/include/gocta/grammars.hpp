#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gocta/automaton.hpp"
#include "gocta/semantics.hpp"
#include "gocta/tree.hpp"

namespace gocta {

/// Index string gamma^gammas, followed by the bottom marker if `bottom`.
struct Index {
  std::uint32_t gammas = 0;
  bool bottom = false;

  friend bool operator==(const Index&, const Index&) = default;
  friend auto operator<=>(const Index&, const Index&) = default;
};

/// `g...g#` (empty string for the empty index).
std::string render_index(Index i);

/// A terminal, or a nonterminal carrying an index string.
struct GrammarSymbol {
  bool terminal = false;
  std::string name;
  Index index;

  static GrammarSymbol term(std::string name) { return {true, std::move(name), {}}; }
  static GrammarSymbol nonterm(std::string name, Index index = {}) { return {false, std::move(name), index}; }

  friend bool operator==(const GrammarSymbol&, const GrammarSymbol&) = default;
  friend auto operator<=>(const GrammarSymbol&, const GrammarSymbol&) = default;
};

using SententialForm = std::vector<GrammarSymbol>;

/// S -> A#, S -> eps, A g -> body (g in {gamma, eps}), A# -> body.
enum class ProductionKind { StartNonterminal, StartEmpty, Counting, Bottom };

struct Production {
  std::string name;
  ProductionKind kind = ProductionKind::Counting;
  /// `S` for the start productions.
  std::string lhs;
  /// Counting productions only: the left-hand side is A gamma.
  bool pops_gamma = false;
  SententialForm body;

  std::size_t rank() const;
};

/// Indexed counter grammar over the index alphabet {gamma, #}. The start
/// symbol is always `S` and is not a member of `nonterminals`.
struct Icg {
  static constexpr std::string_view kStart = "S";

  std::set<std::string> nonterminals;
  std::set<std::string> terminals;
  std::vector<Production> productions;

  const Production& production(std::string_view name) const;
};

/// Checks the production shapes: start productions are `S -> A#` or
/// `S -> eps`; counting bodies carry no bottom marker; bottom bodies have
/// at least one nonterminal and the marker exactly after the first index.
/// Throws PreconditionError.
void validate_icg(const Icg& g);

/// Reads
///
///   nonterminals: A B
///   terminals: a b
///   prod: S -> A#
///   prod: A -> a A[g]
///   prod p7: A[g] -> b B[gg] b
///   prod: B[#] -> C#
///   prod: C -> eps
///
/// Productions are named p1, p2, ... in file order unless named
/// explicitly. ParseError on syntax errors, PreconditionError on shape
/// violations.
Icg parse_icg(std::string_view text);
Icg load_icg(const std::string& path);
std::string write_icg(const Icg& g);

std::string render_form(const SententialForm& form);

/// Appends `delta` to the index of the first nonterminal of `body`; a body
/// without nonterminals is returned unchanged. PreconditionError if that
/// index already ends in the bottom marker and `delta` is non-empty.
SententialForm r_append(const SententialForm& body, Index delta);

/// One R-mode step with production `p` at the leftmost nonterminal, or
/// nullopt when `p` does not apply there.
std::optional<SententialForm> derive_r_step(const SententialForm& form, const Production& p);

/// The grammar with every terminal occurrence deleted from the bodies.
Icg erase_terminals(const Icg& g);

struct Derivation {
  std::vector<std::size_t> productions;
  /// forms.size() == productions.size() + 1, starting at `S`.
  std::vector<SententialForm> forms;
};

/// Applies the productions in order from `S`; nullopt as soon as one does
/// not apply.
std::optional<Derivation> replay_derivation(const Icg& g, const std::vector<std::size_t>& productions);

/// Breadth-first search for a derivation of `word` with at most `max_steps`
/// steps; forms longer than max_steps + |word| are pruned.
std::optional<Derivation> oracle_derivable(const Icg& g, const std::vector<std::string>& word,
                                           std::size_t max_steps, const SearchOptions& options = {});

/// GOCTA whose trees are the derivation trees of the terminal-erased
/// grammar: one symbol per production (rank = number of nonterminals in
/// the body), states S, the nonterminals, and `[B^k]` / `[B^k#]` for the
/// indexed body occurrences.
Gocta icg_to_gocta(const Icg& g);

/// Preorder labels of `t`.
std::vector<std::string> tree_to_production_string(const Tree& t);

/// Production indices of `names`; PreconditionError for unknown names.
std::vector<std::size_t> production_indices(const Icg& g, const std::vector<std::string>& names);

}  // namespace gocta
