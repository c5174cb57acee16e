#include "gocta/decide.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>
#include <unordered_map>

#include "gocta/error.hpp"
#include "gocta/transforms.hpp"

namespace gocta {

Counter counter_bound(std::size_t tree_size, std::size_t num_states) {
  Counter squared = 0;
  Counter product = 0;
  Counter result = 0;
  const auto q = static_cast<Counter>(num_states);
  const auto n = static_cast<Counter>(tree_size);
  if (__builtin_mul_overflow(q, q, &squared) || __builtin_mul_overflow(n, squared, &product) ||
      __builtin_add_overflow(product, Counter{1}, &result)) {
    throw ResourceLimitError("counter bound overflows");
  }
  return result;
}

Counter counter_bound(const Gocta& a, const Tree& xi) {
  if (!is_normalized(a)) throw PreconditionError("counter bound is only stated for normalized automata");
  return counter_bound(xi.size(), a.num_states());
}

namespace {

// Distinct subtrees of the input, children first.
struct SubtreeTable {
  struct Entry {
    const Tree* tree;
    std::vector<std::uint32_t> children;
  };
  std::vector<Entry> entries;
  std::unordered_map<Tree, std::uint32_t, TreeHash> ids;

  std::uint32_t add(const Tree& t) {
    if (auto it = ids.find(t); it != ids.end()) return it->second;
    std::vector<std::uint32_t> children;
    for (const auto& child : t.children()) children.push_back(add(child));
    auto id = static_cast<std::uint32_t>(entries.size());
    entries.push_back({&t, std::move(children)});
    ids.emplace(t, id);
    return id;
  }
};

// States reached bottom-up by each distinct subtree.
std::vector<bool> fta_states(const Gocta& f, const Tree& xi, bool close) {
  require_valid(f);
  if (!is_fta(f)) throw PreconditionError("automaton is not a finite tree automaton");
  if (!close && has_epsilon(f)) {
    throw PreconditionError("fta_member needs an epsilon-free automaton; use fta_member_closure");
  }
  const std::size_t n = f.num_states();
  std::unordered_map<std::string_view, std::vector<std::size_t>> by_symbol;
  std::vector<std::vector<StateId>> reverse_epsilon(n);
  for (std::size_t i = 0; i < f.transitions().size(); ++i) {
    const auto& t = f.transitions()[i];
    if (t.is_read()) {
      by_symbol[*t.symbol].push_back(i);
    } else {
      reverse_epsilon[t.targets[0]].push_back(t.source);
    }
  }
  SubtreeTable table;
  auto root = table.add(xi);
  std::vector<std::vector<bool>> states(table.entries.size());
  for (std::uint32_t id = 0; id < table.entries.size(); ++id) {
    const auto& entry = table.entries[id];
    std::vector<bool> reached(n, false);
    if (auto it = by_symbol.find(entry.tree->label()); it != by_symbol.end()) {
      for (auto ti : it->second) {
        const auto& t = f.transitions()[ti];
        if (t.targets.size() != entry.children.size()) continue;
        bool ok = true;
        for (std::size_t c = 0; c < t.targets.size() && ok; ++c) ok = states[entry.children[c]][t.targets[c]];
        if (ok) reached[t.source] = true;
      }
    }
    if (close) {
      std::vector<StateId> stack;
      for (StateId q = 0; q < n; ++q) {
        if (reached[q]) stack.push_back(q);
      }
      while (!stack.empty()) {
        StateId p = stack.back();
        stack.pop_back();
        for (auto q : reverse_epsilon[p]) {
          if (!reached[q]) {
            reached[q] = true;
            stack.push_back(q);
          }
        }
      }
    }
    states[id] = std::move(reached);
  }
  return states[root];
}

// A set of counters in [0, k]. Few runs are kept as sorted, disjoint,
// non-adjacent intervals; anything more fragmented (parity patterns from
// +-2 loops, say) as a bitmap. The choice depends only on the content, so
// equal sets have equal representations and can be hash-consed.
class CounterSet {
 public:
  using Interval = std::pair<Counter, Counter>;
  static constexpr std::size_t kSparseLimit = 16;

  bool empty() const { return parts_.empty() && bits_.empty(); }
  bool dense() const { return !bits_.empty(); }
  const std::vector<Interval>& parts() const { return parts_; }
  const std::vector<std::uint64_t>& bits() const { return bits_; }

  bool contains(Counter v) const {
    if (dense()) {
      const auto u = static_cast<std::uint64_t>(v);
      return u / 64 < bits_.size() && ((bits_[u / 64] >> (u % 64)) & 1U) != 0;
    }
    auto it = std::upper_bound(parts_.begin(), parts_.end(), Interval{v, std::numeric_limits<Counter>::max()});
    return it != parts_.begin() && std::prev(it)->second >= v;
  }

  template <typename F>
  void for_each_run(F&& f) const {
    if (!dense()) {
      for (const auto& [lo, hi] : parts_) f(lo, hi);
      return;
    }
    const auto limit = static_cast<Counter>(bits_.size() * 64);
    Counter v = 0;
    while (v < limit) {
      v = next_bit(v, true);
      if (v >= limit) break;
      Counter end = next_bit(v, false);
      f(v, end - 1);
      v = end;
    }
  }

  std::size_t hash() const {
    std::uint64_t h = dense() ? 0x51ed27ULL : 0x2545f4ULL;
    auto mix = [&](std::uint64_t x) { h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    for (const auto& [lo, hi] : parts_) {
      mix(static_cast<std::uint64_t>(lo));
      mix(static_cast<std::uint64_t>(hi));
    }
    for (auto w : bits_) mix(w);
    return static_cast<std::size_t>(h);
  }

  bool operator==(const CounterSet&) const = default;

 private:
  friend class SetBuilder;

  // First index >= v whose bit equals `value`; bits_.size()*64 if none.
  Counter next_bit(Counter v, bool value) const {
    auto u = static_cast<std::uint64_t>(v);
    while (u / 64 < bits_.size()) {
      std::uint64_t word = value ? bits_[u / 64] : ~bits_[u / 64];
      word &= ~std::uint64_t{0} << (u % 64);
      if (word != 0) return static_cast<Counter>((u / 64) * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
      u = (u / 64 + 1) * 64;
    }
    return static_cast<Counter>(bits_.size() * 64);
  }

  std::vector<Interval> parts_;
  std::vector<std::uint64_t> bits_;
};

struct CounterSetHash {
  std::size_t operator()(const CounterSet& s) const { return s.hash(); }
};

// Accumulates a union over [0, k], switching to a bitmap once it has seen
// too many intervals.
class SetBuilder {
 public:
  explicit SetBuilder(Counter k) : words_(static_cast<std::size_t>(k) / 64 + 1) {}

  void add(Counter lo, Counter hi) {
    if (!bits_.empty()) {
      set_range(lo, hi);
      return;
    }
    parts_.push_back({lo, hi});
    if (parts_.size() > 4 * CounterSet::kSparseLimit) densify();
  }

  void add(const CounterSet& s) {
    if (s.dense()) {
      if (bits_.empty()) densify();
      for (std::size_t w = 0; w < s.bits_.size(); ++w) bits_[w] |= s.bits_[w];
      return;
    }
    for (const auto& [lo, hi] : s.parts_) add(lo, hi);
  }

  CounterSet build() {
    CounterSet out;
    if (bits_.empty()) {
      std::sort(parts_.begin(), parts_.end());
      for (const auto& p : parts_) {
        if (!out.parts_.empty() && p.first <= out.parts_.back().second + 1) {
          out.parts_.back().second = std::max(out.parts_.back().second, p.second);
        } else {
          out.parts_.push_back(p);
        }
      }
      if (out.parts_.size() <= CounterSet::kSparseLimit) return out;
      parts_ = std::move(out.parts_);
      out.parts_.clear();
      densify();
    }
    out.bits_ = std::move(bits_);
    bool any = std::any_of(out.bits_.begin(), out.bits_.end(), [](std::uint64_t w) { return w != 0; });
    if (!any) return CounterSet{};
    std::vector<CounterSet::Interval> runs;
    out.for_each_run([&](Counter lo, Counter hi) { runs.push_back({lo, hi}); });
    if (runs.size() <= CounterSet::kSparseLimit) {
      out.bits_.clear();
      out.parts_ = std::move(runs);
    }
    return out;
  }

 private:
  void densify() {
    bits_.assign(words_, 0);
    for (const auto& [lo, hi] : parts_) set_range(lo, hi);
    parts_.clear();
  }

  void set_range(Counter lo, Counter hi) {
    for (auto u = static_cast<std::uint64_t>(lo); u <= static_cast<std::uint64_t>(hi);) {
      if (u % 64 == 0 && u + 63 <= static_cast<std::uint64_t>(hi)) {
        bits_[u / 64] = ~std::uint64_t{0};
        u += 64;
      } else {
        bits_[u / 64] |= std::uint64_t{1} << (u % 64);
        ++u;
      }
    }
  }

  std::size_t words_;
  std::vector<CounterSet::Interval> parts_;
  std::vector<std::uint64_t> bits_;
};

// Demand-driven membership in the implicit k-bounded behaviour automaton.
// out(v, q, i) is the set of exit counters i1 with (q, i, i1) =>* subtree v.
// Epsilon rules only move the entry counter, so for a fixed subtree this is a
// reachability question on (state, counter) nodes; strongly connected
// components share one exit set. Sets are interned, and threading a set of
// entry counters through a child is memoized per (set, child, state).
class LazyDecider {
 public:
  using SetId = std::uint32_t;

  LazyDecider(const Gocta& a, Counter k, const SearchOptions& options)
      : a_(a), k_(k), width_(static_cast<std::uint64_t>(k) + 1), budget_(options.node_budget) {
    if (!is_normalized(a)) throw PreconditionError("behaviour decision requires a normalized automaton");
    if (k < 0) throw PreconditionError("behaviour bound must be non-negative");
    if (width_ > (std::uint64_t{1} << 40)) throw ResourceLimitError("behaviour bound too large");
    epsilon_.resize(a.num_states());
    reads_.resize(a.num_states());
    for (std::size_t i = 0; i < a.transitions().size(); ++i) {
      const auto& t = a.transitions()[i];
      (t.is_epsilon() ? epsilon_ : reads_)[t.source].push_back(i);
    }
  }

  bool accepts(const Tree& xi) {
    auto root = table_.add(xi);
    memo_.resize(table_.entries.size());
    return sets_[out(root, a_.initial(), 0)].contains(0);
  }

 private:
  using NodeKey = std::uint64_t;

  NodeKey key(StateId q, Counter i) const { return q * width_ + static_cast<std::uint64_t>(i); }
  StateId key_state(NodeKey n) const { return static_cast<StateId>(n / width_); }
  Counter key_counter(NodeKey n) const { return static_cast<Counter>(n % width_); }

  SetId intern(CounterSet s) {
    if (auto it = interned_.find(s); it != interned_.end()) return it->second;
    auto id = static_cast<SetId>(sets_.size());
    sets_.push_back(s);
    interned_.emplace(std::move(s), id);
    return id;
  }

  SetId single(Counter i) {
    SetBuilder b(k_);
    b.add(i, i);
    return intern(b.build());
  }

  template <typename F>
  void for_each_successor(NodeKey node, F&& f) const {
    const StateId q = key_state(node);
    const Counter i = key_counter(node);
    for (auto ti : epsilon_[q]) {
      const auto& t = a_.transitions()[ti];
      const Counter next = i + t.instruction;
      if (holds(t.predicate, i) && next >= 0 && next <= k_) f(key(t.targets[0], next));
    }
  }

  SetId out(std::uint32_t v, StateId q, Counter i) {
    NodeKey start = key(q, i);
    if (auto it = memo_[v].find(start); it != memo_[v].end()) return it->second;
    tarjan(v, start);
    return memo_[v].at(start);
  }

  // Union of out(v, q, s) over s in `entries`.
  SetId thread(SetId entries, std::uint32_t v, StateId q) {
    const ThreadKey tk{entries, v, q};
    if (auto it = threaded_.find(tk); it != threaded_.end()) return it->second;
    SetBuilder b(k_);
    // Copy: out() may grow sets_, but deque references stay valid anyway.
    const CounterSet& from = sets_[entries];
    from.for_each_run([&](Counter lo, Counter hi) {
      if (hi - lo < 8) {
        for (Counter s = lo; s <= hi; ++s) b.add(sets_[out(v, q, s)]);
      } else {
        range_union(v, q, 1, 0, k_, lo, hi, b);
      }
    });
    SetId result = intern(b.build());
    threaded_.emplace(tk, result);
    return result;
  }

  // Segment tree over [0, k] per (subtree, state) whose nodes hold unions
  // of out(v, q, s) and are filled on first use.
  void range_union(std::uint32_t v, StateId q, std::uint64_t node, Counter node_lo, Counter node_hi, Counter lo,
                   Counter hi, SetBuilder& sink) {
    if (hi < node_lo || node_hi < lo) return;
    if (lo <= node_lo && node_hi <= hi) {
      sink.add(sets_[segment(v, q, node, node_lo, node_hi)]);
      return;
    }
    const Counter mid = node_lo + (node_hi - node_lo) / 2;
    range_union(v, q, 2 * node, node_lo, mid, lo, hi, sink);
    range_union(v, q, 2 * node + 1, mid + 1, node_hi, lo, hi, sink);
  }

  SetId segment(std::uint32_t v, StateId q, std::uint64_t node, Counter node_lo, Counter node_hi) {
    if (node_lo == node_hi) return out(v, q, node_lo);
    const ThreadKey sk{static_cast<SetId>(node >> 32), v, q, static_cast<std::uint32_t>(node)};
    if (auto it = segments_.find(sk); it != segments_.end()) return it->second;
    const Counter mid = node_lo + (node_hi - node_lo) / 2;
    auto left = segment(v, q, 2 * node, node_lo, mid);
    auto right = segment(v, q, 2 * node + 1, mid + 1, node_hi);
    SetBuilder b(k_);
    b.add(sets_[left]);
    b.add(sets_[right]);
    SetId result = intern(b.build());
    segments_.emplace(sk, result);
    return result;
  }

  void base(std::uint32_t v, NodeKey node, SetBuilder& sink) {
    const StateId q = key_state(node);
    const Counter i = key_counter(node);
    const auto& entry = table_.entries[v];
    for (auto ti : reads_[q]) {
      const auto& t = a_.transitions()[ti];
      if (*t.symbol != entry.tree->label() || t.targets.size() != entry.children.size()) continue;
      if (t.targets.empty()) {
        sink.add(i, i);
        continue;
      }
      SetId current = single(i);
      for (std::size_t c = 0; c < t.targets.size() && !sets_[current].empty(); ++c) {
        current = thread(current, entry.children[c], t.targets[c]);
      }
      sink.add(sets_[current]);
    }
  }

  void tarjan(std::uint32_t v, NodeKey start) {
    struct Info {
      std::uint32_t index;
      std::uint32_t low;
      bool on_stack;
    };
    struct Frame {
      NodeKey node;
      std::vector<NodeKey> successors;
      std::size_t next;
    };
    std::unordered_map<NodeKey, Info> info;
    std::vector<NodeKey> scc_stack;
    std::vector<Frame> frames;
    std::uint32_t counter = 0;

    auto open = [&](NodeKey node) {
      if (++visited_ > budget_) {
        throw ResourceLimitError("behaviour decision exceeded node budget of " + std::to_string(budget_));
      }
      info[node] = {counter, counter, true};
      ++counter;
      scc_stack.push_back(node);
      Frame frame{node, {}, 0};
      for_each_successor(node, [&](NodeKey succ) { frame.successors.push_back(succ); });
      frames.push_back(std::move(frame));
    };

    open(start);
    while (!frames.empty()) {
      Frame& frame = frames.back();
      if (frame.next < frame.successors.size()) {
        NodeKey succ = frame.successors[frame.next++];
        if (memo_[v].count(succ) != 0) continue;
        auto it = info.find(succ);
        if (it == info.end()) {
          open(succ);
        } else if (it->second.on_stack) {
          auto& mine = info[frame.node];
          mine.low = std::min(mine.low, it->second.index);
        }
        continue;
      }
      const NodeKey node = frame.node;
      frames.pop_back();
      Info& mine = info[node];
      if (!frames.empty()) {
        auto& parent = info[frames.back().node];
        parent.low = std::min(parent.low, mine.low);
      }
      if (mine.low != mine.index) continue;
      // `node` roots a component; every successor outside it is finished.
      std::vector<NodeKey> component;
      while (true) {
        NodeKey member = scc_stack.back();
        scc_stack.pop_back();
        info[member].on_stack = false;
        component.push_back(member);
        if (member == node) break;
      }
      SetBuilder b(k_);
      for (auto member : component) {
        base(v, member, b);
        for_each_successor(member, [&](NodeKey succ) {
          if (auto it = memo_[v].find(succ); it != memo_[v].end()) b.add(sets_[it->second]);
        });
      }
      SetId index = intern(b.build());
      for (auto member : component) memo_[v][member] = index;
    }
  }

  struct ThreadKey {
    SetId set;
    std::uint32_t subtree;
    StateId state;
    std::uint32_t extra = 0;
    bool operator==(const ThreadKey&) const = default;
  };
  struct ThreadHash {
    std::size_t operator()(const ThreadKey& k) const {
      std::uint64_t h = (static_cast<std::uint64_t>(k.set) << 32 | k.subtree) * 0x9e3779b97f4a7c15ULL;
      h ^= (static_cast<std::uint64_t>(k.state) << 32 | k.extra) + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };

  const Gocta& a_;
  Counter k_;
  std::uint64_t width_;
  std::size_t budget_;
  std::size_t visited_ = 0;
  std::vector<std::vector<std::size_t>> epsilon_;
  std::vector<std::vector<std::size_t>> reads_;
  SubtreeTable table_;
  std::vector<std::unordered_map<NodeKey, SetId>> memo_;
  std::deque<CounterSet> sets_;
  std::unordered_map<CounterSet, SetId, CounterSetHash> interned_;
  std::unordered_map<ThreadKey, SetId, ThreadHash> threaded_;
  std::unordered_map<ThreadKey, SetId, ThreadHash> segments_;
};

}  // namespace

bool fta_member(const Gocta& f, const Tree& xi) {
  check_tree(xi, f.alphabet());
  return fta_states(f, xi, false)[f.initial()];
}

bool fta_member_closure(const Gocta& f, const Tree& xi) {
  check_tree(xi, f.alphabet());
  return fta_states(f, xi, true)[f.initial()];
}

bool behaviour_member(const Gocta& a, const Tree& xi, Counter k, const SearchOptions& options) {
  require_valid(a);
  check_tree(xi, a.alphabet());
  return LazyDecider(a, k, options).accepts(xi);
}

Gocta prepare_for_decision(const Gocta& a) {
  if (a.zero_accepting_certified() && is_normalized(a)) return trim(a);
  return trim(normalize(make_zero_accepting(a)));
}

std::string_view method_name(Method m) { return m == Method::Behaviour ? "behaviour" : "oracle"; }

MemberReport member(const Gocta& a, const Tree& xi, const MemberOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  require_valid(a);
  try {
    check_tree(xi, a.alphabet());
  } catch (const PreconditionError& e) {
    throw PreconditionError(std::string("tree does not match the automaton's alphabet: ") + e.what());
  }
  Gocta prepared = prepare_for_decision(a);
  MemberReport report;
  report.method = options.method;
  report.prepared_states = prepared.num_states();
  report.bound_used = options.bound ? *options.bound : counter_bound(prepared, xi);
  if (options.method == Method::Behaviour) {
    report.verdict = behaviour_member(prepared, xi, report.bound_used, options.search);
  } else {
    report.witness = oracle_member_global(a, xi, report.bound_used, options.search);
    report.verdict = report.witness.has_value();
  }
  report.elapsed = std::chrono::steady_clock::now() - started;
  return report;
}

std::uint64_t balanced_triples(std::uint64_t k) {
  const auto bound = static_cast<std::int64_t>(k);
  std::uint64_t count = 0;
  for (std::int64_t n1 = -bound; n1 <= bound; ++n1) {
    for (std::int64_t n2 = -bound; n2 <= bound; ++n2) {
      for (std::int64_t n3 = -bound; n3 <= bound; ++n3) {
        if (n1 + n2 + n3 == 0) ++count;
      }
    }
  }
  return count;
}

}  // namespace gocta
