#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gocta {

/// Symbol name to rank. Names are unique and non-empty.
class RankedAlphabet {
 public:
  RankedAlphabet() = default;
  RankedAlphabet(std::initializer_list<std::pair<std::string, std::size_t>> symbols);

  /// Adds a symbol; re-adding with the same rank is a no-op, with a
  /// different rank it throws PreconditionError.
  void add(const std::string& name, std::size_t rank);

  bool contains(std::string_view name) const;
  std::optional<std::size_t> rank(std::string_view name) const;
  std::size_t max_rank() const;
  std::size_t size() const { return ranks_.size(); }
  bool empty() const { return ranks_.empty(); }

  /// Symbols in name order.
  const std::map<std::string, std::size_t, std::less<>>& symbols() const { return ranks_; }

  friend bool operator==(const RankedAlphabet&, const RankedAlphabet&) = default;

 private:
  std::map<std::string, std::size_t, std::less<>> ranks_;
};

/// Position in a tree: sequence of 1-based child indices, empty = root.
/// std::vector's ordering is exactly the lexicographic order on positions.
using Position = std::vector<std::uint32_t>;

std::string render_position(const Position& position);

/// Immutable ranked term. Leaves are either symbols (rank 0) or
/// variables x1, x2, ... used by contexts. Copies share structure.
class Tree {
 public:
  static Tree leaf(std::string label);
  static Tree node(std::string label, std::vector<Tree> children);
  /// Variable x_index, index >= 1.
  static Tree variable(std::size_t index);

  bool is_variable() const { return node_->variable != 0; }
  std::size_t variable_index() const { return node_->variable; }
  /// Empty for variables.
  const std::string& label() const { return node_->label; }
  std::span<const Tree> children() const { return node_->children; }
  std::size_t arity() const { return node_->children.size(); }

  /// Number of positions, variables included.
  std::size_t size() const { return node_->size; }
  /// Length of the longest position (a single node has height 0).
  std::size_t height() const { return node_->height; }
  std::size_t variable_count() const { return node_->variables; }
  std::size_t hash() const { return node_->hash; }

  /// Subtree at `position`; throws PreconditionError if absent.
  const Tree& at(const Position& position) const;

  friend bool operator==(const Tree& a, const Tree& b);
  /// Structural order: label, then arity, then children left to right.
  friend std::strong_ordering operator<=>(const Tree& a, const Tree& b);

 private:
  struct Node {
    std::string label;
    std::size_t variable = 0;
    std::vector<Tree> children;
    std::size_t size = 1;
    std::size_t height = 0;
    std::size_t variables = 0;
    std::size_t hash = 0;
  };

  explicit Tree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Tree make(std::string label, std::size_t variable, std::vector<Tree> children);

  std::shared_ptr<const Node> node_;
};

/// A tree whose variables x1..xk occur once each in lexicographic order.
using Context = Tree;

struct TreeHash {
  std::size_t operator()(const Tree& t) const { return t.hash(); }
};

/// All positions of `t` in lexicographic order.
std::vector<Position> positions(const Tree& t);

/// Label of the `index`-th (0-based) node in lexicographic order.
const Tree& nth_subtree(const Tree& t, std::size_t index);

/// The context made of the `i` lexicographically first nodes of `t`; the
/// unexpanded frontier is x1..xw from left to right. Requires i <= |t|.
Context prefix_context(const Tree& t, std::size_t i);

/// Number of variables of prefix_context(t, i).
std::size_t frontier_width(const Tree& t, std::size_t i);

/// True iff every variable x1..xk occurs exactly once, in lexicographic order.
bool is_context(const Tree& t);

/// Substitutes parts[j-1] for x_j. Variables contained in the parts are
/// renumbered left to right so the result is again a context.
/// Throws PreconditionError on arity mismatch or a non-context `c`.
Tree compose(const Context& c, std::span<const Tree> parts);

/// Occurrences of `symbol` in `t`; throws PreconditionError if the symbol is
/// not in `alphabet`.
std::size_t count_symbol(const Tree& t, std::string_view symbol, const RankedAlphabet& alphabet);
std::size_t count_symbol(const Tree& t, std::string_view symbol);

/// Throws PreconditionError if `t` contains variables, unknown symbols or
/// nodes whose arity differs from the symbol rank.
void check_tree(const Tree& t, const RankedAlphabet& alphabet);

/// Parses `name(child,...,child)` terms, rank-0 symbols written bare.
/// With an alphabet, unknown symbols and rank mismatches are ParseErrors.
/// Leaves `x1`, `x2`, ... are variables unless the alphabet has them.
Tree parse_tree(std::string_view text, const RankedAlphabet* alphabet = nullptr);

/// Canonical text (no whitespace); variables are rendered `x1`, `x2`, ...
std::string render_tree(const Tree& t);

/// `g1 g2 ... gk #` string form for monadic trees, nullopt otherwise.
std::optional<std::string> render_monadic(const Tree& t);

/// Every tree over `alphabet` with at most `max_size` nodes, sorted.
std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_size);

}  // namespace gocta
