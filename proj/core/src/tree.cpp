#include "gocta/tree.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "gocta/error.hpp"

namespace gocta {

RankedAlphabet::RankedAlphabet(std::initializer_list<std::pair<std::string, std::size_t>> symbols) {
  for (const auto& [name, rank] : symbols) add(name, rank);
}

void RankedAlphabet::add(const std::string& name, std::size_t rank) {
  if (name.empty()) throw PreconditionError("symbol names must be non-empty");
  auto [it, inserted] = ranks_.emplace(name, rank);
  if (!inserted && it->second != rank) {
    throw PreconditionError("symbol '" + name + "' declared with ranks " + std::to_string(it->second) +
                            " and " + std::to_string(rank));
  }
}

bool RankedAlphabet::contains(std::string_view name) const { return ranks_.find(name) != ranks_.end(); }

std::optional<std::size_t> RankedAlphabet::rank(std::string_view name) const {
  auto it = ranks_.find(name);
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

std::size_t RankedAlphabet::max_rank() const {
  std::size_t result = 0;
  for (const auto& [name, rank] : ranks_) result = std::max(result, rank);
  return result;
}

std::string render_position(const Position& position) {
  if (position.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < position.size(); ++i) {
    if (i != 0) out += '.';
    out += std::to_string(position[i]);
  }
  return out;
}

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Tree Tree::make(std::string label, std::size_t variable, std::vector<Tree> children) {
  auto node = std::make_shared<Node>();
  node->hash = mix(std::hash<std::string>{}(label), variable);
  for (const auto& child : children) {
    node->size += child.size();
    node->height = std::max(node->height, child.height() + 1);
    node->variables += child.variable_count();
    node->hash = mix(node->hash, child.hash());
  }
  if (variable != 0) node->variables = 1;
  node->hash = mix(node->hash, children.size());
  node->label = std::move(label);
  node->variable = variable;
  node->children = std::move(children);
  return Tree(std::move(node));
}

Tree Tree::leaf(std::string label) { return make(std::move(label), 0, {}); }

Tree Tree::node(std::string label, std::vector<Tree> children) {
  return make(std::move(label), 0, std::move(children));
}

Tree Tree::variable(std::size_t index) {
  if (index == 0) throw PreconditionError("variables are numbered from 1");
  return make({}, index, {});
}

const Tree& Tree::at(const Position& position) const {
  const Tree* current = this;
  for (auto step : position) {
    if (step == 0 || step > current->arity()) {
      throw PreconditionError("position " + render_position(position) + " is not in the tree");
    }
    current = &current->children()[step - 1];
  }
  return *current;
}

bool operator==(const Tree& a, const Tree& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  if (a.node_->variable != b.node_->variable || a.label() != b.label() || a.arity() != b.arity()) {
    return false;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!(a.children()[i] == b.children()[i])) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Tree& a, const Tree& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_->variable <=> b.node_->variable; c != 0) return c;
  if (auto c = a.label().compare(b.label()); c != 0) {
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (auto c = a.children()[i] <=> b.children()[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::vector<Position> positions(const Tree& t) {
  std::vector<Position> out;
  out.reserve(t.size());
  Position current;
  std::function<void(const Tree&)> visit = [&](const Tree& node) {
    out.push_back(current);
    for (std::size_t i = 0; i < node.arity(); ++i) {
      current.push_back(static_cast<std::uint32_t>(i + 1));
      visit(node.children()[i]);
      current.pop_back();
    }
  };
  visit(t);
  return out;
}

const Tree& nth_subtree(const Tree& t, std::size_t index) {
  if (index >= t.size()) throw PreconditionError("node index out of range");
  const Tree* current = &t;
  // Preorder numbering: skip whole child subtrees until the index falls inside one.
  while (index != 0) {
    --index;
    bool found = false;
    for (const auto& child : current->children()) {
      if (index < child.size()) {
        current = &child;
        found = true;
        break;
      }
      index -= child.size();
    }
    if (!found) throw PreconditionError("node index out of range");
  }
  return *current;
}

Context prefix_context(const Tree& t, std::size_t i) {
  if (i > t.size()) {
    throw PreconditionError("prefix length " + std::to_string(i) + " exceeds tree size " +
                            std::to_string(t.size()));
  }
  std::size_t remaining = i;
  std::size_t next_variable = 1;
  std::function<Tree(const Tree&)> build = [&](const Tree& node) -> Tree {
    if (remaining == 0) return Tree::variable(next_variable++);
    --remaining;
    std::vector<Tree> children;
    children.reserve(node.arity());
    for (const auto& child : node.children()) children.push_back(build(child));
    return Tree::node(node.label(), std::move(children));
  };
  return build(t);
}

std::size_t frontier_width(const Tree& t, std::size_t i) { return prefix_context(t, i).variable_count(); }

bool is_context(const Tree& t) {
  std::size_t expected = 1;
  bool ok = true;
  std::function<void(const Tree&)> visit = [&](const Tree& node) {
    if (!ok) return;
    if (node.is_variable()) {
      ok = node.variable_index() == expected++;
      return;
    }
    for (const auto& child : node.children()) visit(child);
  };
  visit(t);
  return ok;
}

Tree compose(const Context& c, std::span<const Tree> parts) {
  if (!is_context(c)) throw PreconditionError("compose: first argument is not a context");
  if (parts.size() != c.variable_count()) {
    throw PreconditionError("compose: context has " + std::to_string(c.variable_count()) +
                            " variables but " + std::to_string(parts.size()) + " parts were given");
  }
  std::size_t next_variable = 1;
  std::function<Tree(const Tree&)> renumber = [&](const Tree& node) -> Tree {
    if (node.is_variable()) return Tree::variable(next_variable++);
    if (node.variable_count() == 0) return node;
    std::vector<Tree> children;
    children.reserve(node.arity());
    for (const auto& child : node.children()) children.push_back(renumber(child));
    return Tree::node(node.label(), std::move(children));
  };
  std::function<Tree(const Tree&)> substitute = [&](const Tree& node) -> Tree {
    if (node.is_variable()) return renumber(parts[node.variable_index() - 1]);
    if (node.variable_count() == 0) return node;
    std::vector<Tree> children;
    children.reserve(node.arity());
    for (const auto& child : node.children()) children.push_back(substitute(child));
    return Tree::node(node.label(), std::move(children));
  };
  return substitute(c);
}

std::size_t count_symbol(const Tree& t, std::string_view symbol) {
  std::size_t count = (!t.is_variable() && t.label() == symbol) ? 1 : 0;
  for (const auto& child : t.children()) count += count_symbol(child, symbol);
  return count;
}

std::size_t count_symbol(const Tree& t, std::string_view symbol, const RankedAlphabet& alphabet) {
  if (!alphabet.contains(symbol)) {
    throw PreconditionError("unknown symbol '" + std::string(symbol) + "'");
  }
  return count_symbol(t, symbol);
}

void check_tree(const Tree& t, const RankedAlphabet& alphabet) {
  if (t.is_variable()) throw PreconditionError("tree contains a variable");
  auto rank = alphabet.rank(t.label());
  if (!rank) throw PreconditionError("symbol '" + t.label() + "' is not in the alphabet");
  if (*rank != t.arity()) {
    throw PreconditionError("symbol '" + t.label() + "' has rank " + std::to_string(*rank) + " but " +
                            std::to_string(t.arity()) + " children");
  }
  for (const auto& child : t.children()) check_tree(child, alphabet);
}

namespace {

// x1, x2, ...
bool is_variable_name(const std::string& label) {
  return label.size() > 1 && label.size() < 10 && label[0] == 'x' && label[1] != '0' &&
         std::all_of(label.begin() + 1, label.end(), [](char c) { return c >= '0' && c <= '9'; });
}

class TermParser {
 public:
  TermParser(std::string_view text, const RankedAlphabet* alphabet) : text_(text), alphabet_(alphabet) {}

  Tree parse() {
    Tree result = term();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "' after term");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string name() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected a symbol name, found end of input");
    if (text_[pos_] == '#') {
      ++pos_;
      return "#";
    }
    auto first = static_cast<unsigned char>(text_[pos_]);
    if (!std::isalpha(first) && first != '_') fail("expected a symbol name, found '" + std::string(1, text_[pos_]) + "'");
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Tree term() {
    std::size_t start = pos_;
    std::string label = name();
    std::vector<Tree> children;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      children.push_back(term());
      skip_space();
      while (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        children.push_back(term());
        skip_space();
      }
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ',' or ')'");
      ++pos_;
    }
    if (children.empty() && is_variable_name(label) && (alphabet_ == nullptr || !alphabet_->rank(label))) {
      return Tree::variable(std::stoul(label.substr(1)));
    }
    if (alphabet_ != nullptr) {
      auto rank = alphabet_->rank(label);
      if (!rank) throw ParseError("symbol '" + label + "' is not in the alphabet", start);
      if (*rank != children.size()) {
        throw ParseError("rank mismatch: '" + label + "' has rank " + std::to_string(*rank) + " but " +
                             std::to_string(children.size()) + " children",
                         start);
      }
    }
    return Tree::node(std::move(label), std::move(children));
  }

  std::string_view text_;
  const RankedAlphabet* alphabet_;
  std::size_t pos_ = 0;
};

void render_into(const Tree& t, std::string& out) {
  if (t.is_variable()) {
    out += 'x';
    out += std::to_string(t.variable_index());
    return;
  }
  out += t.label();
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i != 0) out += ',';
    render_into(t.children()[i], out);
  }
  out += ')';
}

}  // namespace

Tree parse_tree(std::string_view text, const RankedAlphabet* alphabet) {
  return TermParser(text, alphabet).parse();
}

std::string render_tree(const Tree& t) {
  std::string out;
  render_into(t, out);
  return out;
}

std::optional<std::string> render_monadic(const Tree& t) {
  std::string out;
  const Tree* current = &t;
  while (current->arity() == 1) {
    out += current->label();
    out += ' ';
    current = &current->children()[0];
  }
  if (current->arity() != 0 || current->is_variable()) return std::nullopt;
  out += current->label();
  return out;
}

namespace {

// Trees of exactly `size` nodes, memoized per size.
class TreeEnumerator {
 public:
  explicit TreeEnumerator(const RankedAlphabet& alphabet) : alphabet_(alphabet) {}

  const std::vector<Tree>& exactly(std::size_t size) {
    if (size < by_size_.size() && computed_[size]) return by_size_[size];
    if (size >= by_size_.size()) {
      by_size_.resize(size + 1);
      computed_.resize(size + 1, false);
    }
    std::vector<Tree> out;
    for (const auto& [name, rank] : alphabet_.symbols()) {
      if (rank == 0) {
        if (size == 1) out.push_back(Tree::leaf(name));
        continue;
      }
      if (size < rank + 1) continue;
      std::vector<Tree> children;
      forests(name, rank, size - 1, children, out);
    }
    by_size_[size] = std::move(out);
    computed_[size] = true;
    return by_size_[size];
  }

 private:
  // All child sequences of `remaining` children totalling `budget` nodes.
  void forests(const std::string& label, std::size_t remaining, std::size_t budget, std::vector<Tree>& prefix,
               std::vector<Tree>& out) {
    if (remaining == 0) {
      if (budget == 0) out.push_back(Tree::node(label, prefix));
      return;
    }
    for (std::size_t s = 1; s + (remaining - 1) <= budget; ++s) {
      // Copy: exactly() may grow by_size_ and invalidate references.
      std::vector<Tree> candidates = exactly(s);
      for (const auto& child : candidates) {
        prefix.push_back(child);
        forests(label, remaining - 1, budget - s, prefix, out);
        prefix.pop_back();
      }
    }
  }

  const RankedAlphabet& alphabet_;
  std::vector<std::vector<Tree>> by_size_;
  std::vector<bool> computed_;
};

}  // namespace

std::vector<Tree> enumerate_trees(const RankedAlphabet& alphabet, std::size_t max_size) {
  TreeEnumerator enumerator(alphabet);
  std::vector<Tree> out;
  for (std::size_t size = 1; size <= max_size; ++size) {
    const auto& batch = enumerator.exactly(size);
    out.insert(out.end(), batch.begin(), batch.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gocta
