#include "gocta/semantics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "gocta/error.hpp"

namespace gocta {

Counter checked_add(Counter m, Counter z) {
  Counter out = 0;
  if (__builtin_add_overflow(m, z, &out)) throw ResourceLimitError("counter overflow");
  return out;
}

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

Tree symbol_context(const std::string& label, std::size_t arity) {
  std::vector<Tree> children;
  children.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) children.push_back(Tree::variable(i + 1));
  return Tree::node(label, std::move(children));
}

// Replaces variable x_{j+1} of `shape` by label(x..), renumbering.
Tree expand_variable(const Context& shape, std::size_t j, const std::string& label, std::size_t arity) {
  std::vector<Tree> parts(shape.variable_count(), Tree::variable(1));
  parts.at(j) = symbol_context(label, arity);
  return compose(shape, parts);
}

// 0-based variable index at `at`, nullopt if `at` is not a variable.
std::optional<std::size_t> variable_at(const Context& shape, const Position& at) {
  const Tree* current = &shape;
  for (auto step : at) {
    if (step == 0 || step > current->arity()) return std::nullopt;
    current = &current->children()[step - 1];
  }
  if (!current->is_variable()) return std::nullopt;
  return current->variable_index() - 1;
}

Position variable_position(const Context& shape, std::size_t j) {
  Position out;
  std::function<bool(const Tree&)> find = [&](const Tree& node) {
    if (node.is_variable()) return node.variable_index() == j + 1;
    for (std::size_t i = 0; i < node.arity(); ++i) {
      out.push_back(static_cast<std::uint32_t>(i + 1));
      if (find(node.children()[i])) return true;
      out.pop_back();
    }
    return false;
  };
  if (!find(shape)) throw PreconditionError("variable not found in shape");
  return out;
}

void render_shape(const Tree& t, const std::vector<std::string>& leaves, std::string& out) {
  if (t.is_variable()) {
    out += '<';
    out += leaves.at(t.variable_index() - 1);
    out += '>';
    return;
  }
  out += t.label();
  if (t.arity() == 0) return;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i != 0) out += ',';
    render_shape(t.children()[i], leaves, out);
  }
  out += ')';
}

// Hash-consed immutable lists; id 0 is the empty list.
class ListPool {
 public:
  ListPool() { cells_.push_back({0, 0, 0}); }

  std::uint32_t cons(std::uint32_t head, std::uint32_t tail) {
    std::uint64_t key = (static_cast<std::uint64_t>(head) << 32) | tail;
    auto [it, inserted] = index_.emplace(key, static_cast<std::uint32_t>(cells_.size()));
    if (inserted) cells_.push_back({head, tail, cells_[tail].length + 1});
    return it->second;
  }
  std::uint32_t head(std::uint32_t list) const { return cells_[list].head; }
  std::uint32_t tail(std::uint32_t list) const { return cells_[list].tail; }
  std::uint32_t length(std::uint32_t list) const { return cells_[list].length; }

 private:
  struct Cell {
    std::uint32_t head;
    std::uint32_t tail;
    std::uint32_t length;
  };
  std::vector<Cell> cells_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

struct SearchKey {
  std::uint32_t read;
  std::uint32_t list;
  Counter counter;
  friend bool operator==(const SearchKey&, const SearchKey&) = default;
};

struct SearchKeyHash {
  std::size_t operator()(const SearchKey& k) const {
    return mix(mix(k.read, k.list), static_cast<std::size_t>(k.counter));
  }
};

std::vector<const Tree*> preorder_nodes(const Tree& xi) {
  std::vector<const Tree*> out;
  out.reserve(xi.size());
  std::function<void(const Tree&)> visit = [&](const Tree& t) {
    out.push_back(&t);
    for (const auto& child : t.children()) visit(child);
  };
  visit(xi);
  return out;
}

void check_input(const Gocta& a, const Tree& xi, Counter bound) {
  require_valid(a);
  check_tree(xi, a.alphabet());
  if (bound < 0) throw PreconditionError("counter bound must be non-negative");
}

[[noreturn]] void budget_exhausted(std::size_t budget) {
  throw ResourceLimitError("search exceeded node budget of " + std::to_string(budget) +
                           " (raise it with GOCTA_NODE_BUDGET or --budget)");
}

}  // namespace

std::optional<GlobalConfiguration> step_global(const Gocta& a, const GlobalConfiguration& c, const Transition& t) {
  if (c.frontier.empty() || c.frontier.front() != t.source) return std::nullopt;
  if (!holds(t.predicate, c.counter)) return std::nullopt;
  Counter next = checked_add(c.counter, t.instruction);
  if (next < 0) return std::nullopt;
  GlobalConfiguration out;
  out.counter = next;
  if (t.is_epsilon()) {
    out.shape = c.shape;
    out.frontier = c.frontier;
    out.frontier.front() = t.targets.at(0);
    return out;
  }
  auto rank = a.alphabet().rank(*t.symbol);
  if (!rank || *rank != t.targets.size()) return std::nullopt;
  out.shape = expand_variable(c.shape, 0, *t.symbol, t.targets.size());
  out.frontier = t.targets;
  out.frontier.insert(out.frontier.end(), c.frontier.begin() + 1, c.frontier.end());
  return out;
}

std::vector<std::pair<std::size_t, GlobalConfiguration>> successors_global(const Gocta& a,
                                                                           const GlobalConfiguration& c) {
  std::vector<std::pair<std::size_t, GlobalConfiguration>> out;
  if (c.frontier.empty()) return out;
  for (auto index : a.outgoing(c.frontier.front())) {
    if (auto next = step_global(a, c, a.transitions()[index])) out.emplace_back(index, std::move(*next));
  }
  return out;
}

Counter maxcnt(const GlobalTrace& t) {
  Counter result = t.start.counter;
  for (const auto& step : t.steps) result = std::max(result, step.after.counter);
  return result;
}

std::size_t read_steps(const Gocta& a, const GlobalTrace& t) {
  return static_cast<std::size_t>(std::count_if(t.steps.begin(), t.steps.end(), [&](const GlobalStep& s) {
    return a.transitions()[s.transition].is_read();
  }));
}

std::vector<std::string> check_global_trace(const Gocta& a, const GlobalTrace& t) {
  std::vector<std::string> problems;
  if (t.start.counter < 0) problems.push_back("start configuration has a negative counter");
  const GlobalConfiguration* previous = &t.start;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& step = t.steps[i];
    std::string where = "step " + std::to_string(i + 1) + ": ";
    if (step.transition >= a.transitions().size()) {
      problems.push_back(where + "transition index out of range");
      return problems;
    }
    auto next = step_global(a, *previous, a.transitions()[step.transition]);
    if (!next) {
      problems.push_back(where + "transition is not applicable");
      return problems;
    }
    if (!(*next == step.after)) problems.push_back(where + "recorded configuration differs from replay");
    if (step.after.counter < 0) problems.push_back(where + "negative counter");
    previous = &step.after;
  }
  return problems;
}

std::string render_global_trace(const Gocta& a, const GlobalTrace& t) {
  auto line = [&](const GlobalConfiguration& c, const std::string& transition) {
    std::vector<std::string> leaves;
    for (auto q : c.frontier) leaves.push_back(a.state_name(q));
    std::string out = std::to_string(c.counter) + " | ";
    render_shape(c.shape, leaves, out);
    out += " | " + transition + "\n";
    return out;
  };
  std::string out = line(t.start, "start");
  for (const auto& step : t.steps) out += line(step.after, a.render_transition(a.transitions()[step.transition]));
  return out;
}

std::optional<CopyConfiguration> step_copy(const Gocta& a, const CopyConfiguration& c, const Transition& t,
                                           const Position& at) {
  auto j = variable_at(c.shape, at);
  if (!j || *j >= c.frontier.size()) return std::nullopt;
  auto [state, m] = c.frontier[*j];
  if (state != t.source || !holds(t.predicate, m)) return std::nullopt;
  Counter next = checked_add(m, t.instruction);
  if (next < 0) return std::nullopt;
  CopyConfiguration out;
  if (t.is_epsilon()) {
    out.shape = c.shape;
    out.frontier = c.frontier;
    out.frontier[*j] = {t.targets.at(0), next};
    return out;
  }
  auto rank = a.alphabet().rank(*t.symbol);
  if (!rank || *rank != t.targets.size()) return std::nullopt;
  out.shape = expand_variable(c.shape, *j, *t.symbol, t.targets.size());
  out.frontier.assign(c.frontier.begin(), c.frontier.begin() + static_cast<std::ptrdiff_t>(*j));
  for (auto q : t.targets) out.frontier.emplace_back(q, next);
  out.frontier.insert(out.frontier.end(), c.frontier.begin() + static_cast<std::ptrdiff_t>(*j) + 1,
                      c.frontier.end());
  return out;
}

std::vector<std::string> check_copy_trace(const Gocta& a, const CopyTrace& t) {
  std::vector<std::string> problems;
  const CopyConfiguration* previous = &t.start;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& step = t.steps[i];
    std::string where = "step " + std::to_string(i + 1) + ": ";
    if (step.transition >= a.transitions().size()) {
      problems.push_back(where + "transition index out of range");
      return problems;
    }
    auto next = step_copy(a, *previous, a.transitions()[step.transition], step.at);
    if (!next) {
      problems.push_back(where + "transition is not applicable");
      return problems;
    }
    if (!(*next == step.after)) problems.push_back(where + "recorded configuration differs from replay");
    for (const auto& [q, m] : step.after.frontier) {
      if (m < 0) problems.push_back(where + "negative counter");
    }
    previous = &step.after;
  }
  return problems;
}

std::string render_copy_trace(const Gocta& a, const CopyTrace& t) {
  auto line = [&](const CopyConfiguration& c, const std::string& counter, const std::string& transition) {
    std::vector<std::string> leaves;
    for (const auto& [q, m] : c.frontier) leaves.push_back(a.state_name(q) + "," + std::to_string(m));
    std::string out = counter + " | ";
    render_shape(c.shape, leaves, out);
    out += " | " + transition + "\n";
    return out;
  };
  std::string out = line(t.start, "0", "start");
  const CopyConfiguration* previous = &t.start;
  for (const auto& step : t.steps) {
    const auto& tr = a.transitions()[step.transition];
    auto j = variable_at(previous->shape, step.at);
    Counter m = j ? previous->frontier[*j].second + tr.instruction : 0;
    out += line(step.after, std::to_string(m), a.render_transition(tr) + " @ " + render_position(step.at));
    previous = &step.after;
  }
  return out;
}

std::optional<GlobalTrace> oracle_member_global(const Gocta& a, const Tree& xi, Counter counter_bound,
                                                const SearchOptions& options) {
  check_input(a, xi, counter_bound);
  const auto nodes = preorder_nodes(xi);
  const auto n = static_cast<std::uint32_t>(nodes.size());
  ListPool lists;

  struct Record {
    SearchKey key;
    std::uint32_t parent;
    std::size_t transition;
  };
  std::vector<Record> records;
  std::unordered_map<SearchKey, std::uint32_t, SearchKeyHash> seen;
  std::deque<std::uint32_t> queue;

  auto add = [&](const SearchKey& key, std::uint32_t parent, std::size_t transition) -> std::optional<std::uint32_t> {
    auto [it, inserted] = seen.emplace(key, static_cast<std::uint32_t>(records.size()));
    if (!inserted) return std::nullopt;
    records.push_back({key, parent, transition});
    queue.push_back(it->second);
    return it->second;
  };

  std::optional<std::uint32_t> goal;
  add({0, lists.cons(a.initial(), 0), 0}, 0, 0);
  std::size_t expansions = 0;
  while (!queue.empty() && !goal) {
    auto index = queue.front();
    queue.pop_front();
    if (++expansions > options.node_budget) budget_exhausted(options.node_budget);
    const SearchKey key = records[index].key;
    if (key.list == 0) continue;
    const StateId head = lists.head(key.list);
    const std::uint32_t tail = lists.tail(key.list);
    for (auto ti : a.outgoing(head)) {
      const auto& t = a.transitions()[ti];
      if (!holds(t.predicate, key.counter)) continue;
      Counter next = checked_add(key.counter, t.instruction);
      if (next < 0 || next > counter_bound) continue;
      SearchKey child{};
      if (t.is_epsilon()) {
        child = {key.read, lists.cons(t.targets[0], tail), next};
      } else {
        if (key.read >= n) continue;
        const Tree& node = *nodes[key.read];
        if (node.label() != *t.symbol || node.arity() != t.targets.size()) continue;
        std::uint32_t list = tail;
        for (auto it = t.targets.rbegin(); it != t.targets.rend(); ++it) list = lists.cons(*it, list);
        child = {key.read + 1, list, next};
        // Every pending state still needs at least one node.
        if (lists.length(list) > n - child.read) continue;
      }
      auto added = add(child, index, ti);
      if (added && child.read == n && child.list == 0) {
        goal = added;
        break;
      }
    }
  }
  if (!goal) return std::nullopt;

  std::vector<std::size_t> path;
  for (auto index = *goal; index != 0; index = records[index].parent) path.push_back(records[index].transition);
  std::reverse(path.begin(), path.end());
  GlobalTrace trace{GlobalConfiguration::initial(a), {}};
  for (auto ti : path) {
    auto next = step_global(a, trace.last(), a.transitions()[ti]);
    if (!next) throw Error("internal error: oracle path does not replay");
    trace.steps.push_back({ti, std::move(*next)});
  }
  return trace;
}

std::optional<CopyTrace> oracle_member_copy(const Gocta& a, const Tree& xi, Counter counter_bound,
                                            const SearchOptions& options) {
  check_input(a, xi, counter_bound);
  const auto nodes = preorder_nodes(xi);
  const auto n = static_cast<std::uint32_t>(nodes.size());
  ListPool lists;
  // (state, counter) pairs interned to list heads.
  std::vector<std::pair<StateId, Counter>> ids;
  std::map<std::pair<StateId, Counter>, std::uint32_t> id_index;
  auto intern = [&](StateId q, Counter m) {
    auto [it, inserted] = id_index.emplace(std::pair{q, m}, static_cast<std::uint32_t>(ids.size()));
    if (inserted) ids.emplace_back(q, m);
    return it->second;
  };

  struct Record {
    SearchKey key;
    std::uint32_t parent;
    std::size_t transition;
  };
  std::vector<Record> records;
  std::unordered_map<SearchKey, std::uint32_t, SearchKeyHash> seen;
  std::deque<std::uint32_t> queue;
  auto add = [&](const SearchKey& key, std::uint32_t parent, std::size_t transition) -> std::optional<std::uint32_t> {
    auto [it, inserted] = seen.emplace(key, static_cast<std::uint32_t>(records.size()));
    if (!inserted) return std::nullopt;
    records.push_back({key, parent, transition});
    queue.push_back(it->second);
    return it->second;
  };

  std::optional<std::uint32_t> goal;
  add({0, lists.cons(intern(a.initial(), 0), 0), 0}, 0, 0);
  std::size_t expansions = 0;
  while (!queue.empty() && !goal) {
    auto index = queue.front();
    queue.pop_front();
    if (++expansions > options.node_budget) budget_exhausted(options.node_budget);
    const SearchKey key = records[index].key;
    if (key.list == 0) continue;
    const auto [state, m] = ids[lists.head(key.list)];
    const std::uint32_t tail = lists.tail(key.list);
    for (auto ti : a.outgoing(state)) {
      const auto& t = a.transitions()[ti];
      if (!holds(t.predicate, m)) continue;
      Counter next = checked_add(m, t.instruction);
      if (next < 0 || next > counter_bound) continue;
      SearchKey child{};
      if (t.is_epsilon()) {
        child = {key.read, lists.cons(intern(t.targets[0], next), tail), 0};
      } else {
        if (key.read >= n) continue;
        const Tree& node = *nodes[key.read];
        if (node.label() != *t.symbol || node.arity() != t.targets.size()) continue;
        std::uint32_t list = tail;
        for (auto it = t.targets.rbegin(); it != t.targets.rend(); ++it) list = lists.cons(intern(*it, next), list);
        child = {key.read + 1, list, 0};
        if (lists.length(list) > n - child.read) continue;
      }
      auto added = add(child, index, ti);
      if (added && child.read == n && child.list == 0) {
        goal = added;
        break;
      }
    }
  }
  if (!goal) return std::nullopt;

  std::vector<std::size_t> path;
  for (auto index = *goal; index != 0; index = records[index].parent) path.push_back(records[index].transition);
  std::reverse(path.begin(), path.end());
  CopyTrace trace{CopyConfiguration::initial(a), {}};
  for (auto ti : path) {
    Position at = variable_position(trace.last().shape, 0);
    auto next = step_copy(a, trace.last(), a.transitions()[ti], at);
    if (!next) throw Error("internal error: oracle path does not replay");
    trace.steps.push_back({ti, std::move(at), std::move(*next)});
  }
  return trace;
}

bool oracle_member_copy_any_position(const Gocta& a, const Tree& xi, Counter counter_bound,
                                     const SearchOptions& options) {
  check_input(a, xi, counter_bound);
  const auto nodes = preorder_nodes(xi);
  const std::size_t n = nodes.size();
  // Preorder index of the children of every node.
  std::vector<std::vector<std::size_t>> child_index(n);
  {
    std::size_t next = 0;
    std::function<std::size_t(const Tree&)> visit = [&](const Tree& t) {
      std::size_t self = next++;
      for (const auto& child : t.children()) child_index[self].push_back(visit(child));
      return self;
    };
    visit(xi);
  }
  // Per node: kExpanded, kUnreached, or an encoded (state, counter).
  constexpr std::int64_t kExpanded = -1;
  constexpr std::int64_t kUnreached = -2;
  const std::int64_t width = counter_bound + 1;
  using Config = std::vector<std::int64_t>;
  struct ConfigHash {
    std::size_t operator()(const Config& c) const {
      std::size_t h = c.size();
      for (auto v : c) h = mix(h, static_cast<std::size_t>(v));
      return h;
    }
  };
  std::unordered_set<Config, ConfigHash> seen;
  std::deque<Config> queue;
  Config start(n, kUnreached);
  start[0] = static_cast<std::int64_t>(a.initial()) * width;
  seen.insert(start);
  queue.push_back(start);
  std::size_t expansions = 0;
  while (!queue.empty()) {
    Config c = std::move(queue.front());
    queue.pop_front();
    if (++expansions > options.node_budget) budget_exhausted(options.node_budget);
    if (std::all_of(c.begin(), c.end(), [](std::int64_t v) { return v == kExpanded; })) return true;
    for (std::size_t v = 0; v < n; ++v) {
      if (c[v] < 0) continue;
      auto state = static_cast<StateId>(c[v] / width);
      Counter m = c[v] % width;
      for (auto ti : a.outgoing(state)) {
        const auto& t = a.transitions()[ti];
        if (!holds(t.predicate, m)) continue;
        Counter next = checked_add(m, t.instruction);
        if (next < 0 || next > counter_bound) continue;
        Config d = c;
        if (t.is_epsilon()) {
          d[v] = static_cast<std::int64_t>(t.targets[0]) * width + next;
        } else {
          if (nodes[v]->label() != *t.symbol || nodes[v]->arity() != t.targets.size()) continue;
          d[v] = kExpanded;
          for (std::size_t i = 0; i < t.targets.size(); ++i) {
            d[child_index[v][i]] = static_cast<std::int64_t>(t.targets[i]) * width + next;
          }
        }
        if (seen.insert(d).second) queue.push_back(std::move(d));
      }
    }
  }
  return false;
}

std::vector<Tree> enumerate_language(const Gocta& a, std::size_t max_size, Semantics semantics,
                                     Counter counter_bound, const SearchOptions& options) {
  require_valid(a);
  if (counter_bound < 0) throw PreconditionError("counter bound must be non-negative");
  std::set<Tree> accepted;
  if (max_size == 0) return {};

  // Frontier entries are (state, counter); under the global semantics the
  // single counter is stored in `counter` and entry counters stay 0.
  struct Config {
    Tree shape = Tree::variable(1);
    std::vector<std::pair<StateId, Counter>> frontier;
    Counter counter = 0;
    bool operator==(const Config&) const = default;
  };
  struct ConfigHash {
    std::size_t operator()(const Config& c) const {
      std::size_t h = mix(c.shape.hash(), static_cast<std::size_t>(c.counter));
      for (const auto& [q, m] : c.frontier) h = mix(mix(h, q), static_cast<std::size_t>(m));
      return h;
    }
  };
  std::unordered_set<Config, ConfigHash> seen;
  std::deque<Config> queue;
  Config start{Tree::variable(1), {{a.initial(), 0}}, 0};
  seen.insert(start);
  queue.push_back(start);
  std::size_t expansions = 0;
  const bool global = semantics == Semantics::Global;
  while (!queue.empty()) {
    Config c = std::move(queue.front());
    queue.pop_front();
    if (++expansions > options.node_budget) budget_exhausted(options.node_budget);
    if (c.frontier.empty()) {
      accepted.insert(c.shape);
      continue;
    }
    const auto [state, own] = c.frontier.front();
    const Counter m = global ? c.counter : own;
    for (auto ti : a.outgoing(state)) {
      const auto& t = a.transitions()[ti];
      if (!holds(t.predicate, m)) continue;
      Counter next = checked_add(m, t.instruction);
      if (next < 0 || next > counter_bound) continue;
      Config d;
      d.counter = global ? next : 0;
      const Counter entry = global ? 0 : next;
      if (t.is_epsilon()) {
        d.shape = c.shape;
        d.frontier = c.frontier;
        d.frontier.front() = {t.targets[0], entry};
      } else {
        if (c.shape.size() + t.targets.size() > max_size) continue;
        d.shape = expand_variable(c.shape, 0, *t.symbol, t.targets.size());
        for (auto q : t.targets) d.frontier.emplace_back(q, entry);
        d.frontier.insert(d.frontier.end(), c.frontier.begin() + 1, c.frontier.end());
      }
      if (seen.insert(d).second) queue.push_back(std::move(d));
    }
  }
  return {accepted.begin(), accepted.end()};
}

}  // namespace gocta
