#include "gocta/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <span>
#include <unordered_set>

#include "gocta/error.hpp"

namespace gocta {

namespace {

// Builds state lists with collision-free fresh names.
class StateTable {
 public:
  explicit StateTable(std::span<const std::string> existing) {
    for (const auto& s : existing) add(s);
  }

  StateId add(const std::string& name) {
    names_.push_back(name);
    used_.insert(name);
    return static_cast<StateId>(names_.size() - 1);
  }

  StateId fresh(const std::string& base) {
    std::string name = base;
    while (used_.count(name) != 0) name += '\'';
    return add(name);
  }

  std::vector<std::string> take() { return std::move(names_); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_set<std::string> used_;
};

constexpr std::size_t kMaxFreshStates = 10'000'000;

}  // namespace

Gocta make_zero_accepting(const Gocta& a) {
  require_valid(a);
  const auto n = static_cast<StateId>(a.num_states());
  StateTable table(a.states());
  std::vector<StateId> bracket(n);
  for (StateId q = 0; q < n; ++q) bracket[q] = table.fresh(a.state_name(q) + "__za");
  // drain[q][s] for the s-th symbol in name order.
  std::vector<std::vector<StateId>> drain(n);
  for (StateId q = 0; q < n; ++q) {
    for (const auto& [symbol, rank] : a.alphabet().symbols()) {
      drain[q].push_back(table.fresh(a.state_name(q) + "__za_" + symbol));
    }
  }

  std::vector<Transition> out(a.transitions().begin(), a.transitions().end());
  auto slot_of = [&](const std::string& symbol) {
    std::size_t i = 0;
    for (const auto& [name, rank] : a.alphabet().symbols()) {
      if (name == symbol) return i;
      ++i;
    }
    throw PreconditionError("unknown symbol '" + symbol + "'");
  };
  for (const auto& t : a.transitions()) {
    if (t.is_epsilon()) {
      out.push_back(Transition::epsilon(bracket[t.source], t.predicate, t.instruction, bracket[t.targets[0]]));
    } else if (!t.targets.empty()) {
      auto targets = t.targets;
      targets.back() = bracket[targets.back()];
      out.push_back(Transition::read(bracket[t.source], t.predicate, t.instruction, *t.symbol, targets));
    } else {
      out.push_back(
          Transition::epsilon(bracket[t.source], t.predicate, t.instruction, drain[t.source][slot_of(*t.symbol)]));
    }
  }
  // Drain loops exist for every state, but only rank-0 symbols can close them.
  for (StateId q = 0; q < n; ++q) {
    std::size_t slot = 0;
    for (const auto& [symbol, rank] : a.alphabet().symbols()) {
      StateId d = drain[q][slot++];
      if (rank != 0) continue;
      out.push_back(Transition::epsilon(d, Predicate::GtZero, -1, d));
      out.push_back(Transition::read(d, Predicate::EqZero, 0, symbol, {}));
    }
  }
  Gocta result(a.alphabet(), table.take(), bracket[a.initial()], std::move(out));
  result.set_zero_accepting_certified(true);
  return result;
}

Gocta normalize(const Gocta& a) {
  require_valid(a);
  StateTable table(a.states());
  std::vector<Transition> out;
  auto unit_chain = [&](StateId from, Predicate p, Counter z, StateId to, const std::string& prefix,
                        std::size_t& counter) {
    // |z| unit steps from `from` to `to`; the guard only on the first.
    const Counter step = z > 0 ? 1 : -1;
    const Counter length = z > 0 ? z : -z;
    StateId current = from;
    for (Counter j = 0; j < length; ++j) {
      StateId next = j + 1 == length ? to : table.fresh(prefix + std::to_string(counter++));
      out.push_back(Transition::epsilon(current, j == 0 ? p : Predicate::Top, step, next));
      current = next;
    }
  };
  std::size_t fresh_total = 0;
  for (std::size_t ti = 0; ti < a.transitions().size(); ++ti) {
    const auto& t = a.transitions()[ti];
    const Counter magnitude = t.instruction < 0 ? -t.instruction : t.instruction;
    fresh_total += static_cast<std::size_t>(std::min<Counter>(magnitude, kMaxFreshStates)) + 1;
    if (fresh_total > kMaxFreshStates) throw ResourceLimitError("normalization would create too many states");
    const std::string prefix = a.state_name(t.source) + "__nf_" + std::to_string(ti) + "_";
    std::size_t counter = 0;
    if (t.is_epsilon()) {
      if (magnitude <= 1) {
        out.push_back(t);
      } else {
        unit_chain(t.source, t.predicate, t.instruction, t.targets[0], prefix, counter);
      }
      continue;
    }
    if (t.is_plain()) {
      out.push_back(t);
      continue;
    }
    StateId before_read = table.fresh(prefix + std::to_string(counter++));
    if (t.instruction == 0) {
      out.push_back(Transition::epsilon(t.source, t.predicate, 0, before_read));
    } else {
      unit_chain(t.source, t.predicate, t.instruction, before_read, prefix, counter);
    }
    out.push_back(Transition::read(before_read, Predicate::Top, 0, *t.symbol, t.targets));
  }
  Gocta result(a.alphabet(), table.take(), a.initial(), std::move(out));
  result.set_zero_accepting_certified(a.zero_accepting_certified());
  return result;
}

Gocta trim(const Gocta& a) {
  require_valid(a);
  const std::size_t n = a.num_states();
  std::vector<bool> productive(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& t : a.transitions()) {
      if (productive[t.source]) continue;
      bool ok = std::all_of(t.targets.begin(), t.targets.end(), [&](StateId q) { return productive[q]; });
      if (ok) {
        productive[t.source] = true;
        changed = true;
      }
    }
  }
  std::vector<bool> reachable(n, false);
  std::deque<StateId> queue{a.initial()};
  reachable[a.initial()] = true;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (auto ti : a.outgoing(q)) {
      const auto& t = a.transitions()[ti];
      if (!std::all_of(t.targets.begin(), t.targets.end(), [&](StateId p) { return productive[p]; })) continue;
      for (auto p : t.targets) {
        if (!reachable[p]) {
          reachable[p] = true;
          queue.push_back(p);
        }
      }
    }
  }
  std::vector<StateId> rename(n, 0);
  std::vector<std::string> names;
  for (StateId q = 0; q < n; ++q) {
    bool keep = q == a.initial() || (reachable[q] && productive[q]);
    if (keep) {
      rename[q] = static_cast<StateId>(names.size());
      names.push_back(a.state_name(q));
    }
  }
  std::vector<Transition> out;
  for (const auto& t : a.transitions()) {
    bool keep = reachable[t.source] && productive[t.source] &&
                std::all_of(t.targets.begin(), t.targets.end(), [&](StateId p) { return productive[p]; });
    if (!keep) continue;
    Transition copy = t;
    copy.source = rename[t.source];
    for (auto& p : copy.targets) p = rename[p];
    out.push_back(std::move(copy));
  }
  Gocta result(a.alphabet(), std::move(names), rename[a.initial()], std::move(out));
  result.set_zero_accepting_certified(a.zero_accepting_certified());
  return result;
}

std::string behaviour_state_name(const std::string& q, Counter i0, Counter i1) {
  return q + "@" + std::to_string(i0) + "@" + std::to_string(i1);
}

Gocta behaviour_automaton(const Gocta& a, Counter k, std::size_t max_transitions) {
  require_valid(a);
  if (!is_normalized(a)) throw PreconditionError("behaviour automaton requires a normalized automaton");
  if (k < 0) throw PreconditionError("behaviour bound must be non-negative");
  const auto width = static_cast<std::size_t>(k) + 1;
  // Overflow-safe size estimate before allocating anything.
  long double estimate = 0;
  for (const auto& t : a.transitions()) {
    estimate += t.is_epsilon() ? static_cast<long double>(width) * width
                               : std::pow(static_cast<long double>(width), t.targets.size() + 1);
  }
  if (estimate > static_cast<long double>(max_transitions) ||
      static_cast<long double>(a.num_states()) * width * width > static_cast<long double>(max_transitions)) {
    throw ResourceLimitError("behaviour automaton at k=" + std::to_string(k) + " exceeds " +
                             std::to_string(max_transitions) + " elements");
  }
  auto id = [&](StateId q, std::size_t i0, std::size_t i1) {
    return static_cast<StateId>((q * width + i0) * width + i1);
  };
  std::vector<std::string> names;
  names.reserve(a.num_states() * width * width);
  for (StateId q = 0; q < a.num_states(); ++q) {
    for (std::size_t i0 = 0; i0 < width; ++i0) {
      for (std::size_t i1 = 0; i1 < width; ++i1) {
        names.push_back(behaviour_state_name(a.state_name(q), static_cast<Counter>(i0), static_cast<Counter>(i1)));
      }
    }
  }
  std::vector<Transition> out;
  for (const auto& t : a.transitions()) {
    if (t.is_epsilon()) {
      for (std::size_t i0 = 0; i0 < width; ++i0) {
        const auto m = static_cast<Counter>(i0);
        const Counter next = m + t.instruction;
        if (!holds(t.predicate, m) || next < 0 || next > k) continue;
        for (std::size_t i1 = 0; i1 < width; ++i1) {
          out.push_back(Transition::epsilon(id(t.source, i0, i1), Predicate::Top, 0,
                                            id(t.targets[0], static_cast<std::size_t>(next), i1)));
        }
      }
      continue;
    }
    const std::size_t arity = t.targets.size();
    if (arity == 0) {
      for (std::size_t i = 0; i < width; ++i) out.push_back(Transition::read(id(t.source, i, i), Predicate::Top, 0, *t.symbol, {}));
      continue;
    }
    // Odometer over i0..in.
    std::vector<std::size_t> counters(arity + 1, 0);
    while (true) {
      std::vector<StateId> targets(arity);
      for (std::size_t j = 0; j < arity; ++j) targets[j] = id(t.targets[j], counters[j], counters[j + 1]);
      out.push_back(Transition::read(id(t.source, counters[0], counters[arity]), Predicate::Top, 0, *t.symbol, std::move(targets)));
      std::size_t pos = 0;
      while (pos <= arity && ++counters[pos] == width) counters[pos++] = 0;
      if (pos > arity) break;
    }
  }
  return Gocta(a.alphabet(), std::move(names), id(a.initial(), 0, 0), std::move(out));
}

Gocta eliminate_epsilon(const Gocta& f) {
  require_valid(f);
  if (!is_fta(f)) throw PreconditionError("epsilon elimination requires a finite tree automaton");
  const std::size_t n = f.num_states();
  std::vector<std::vector<StateId>> epsilon_edges(n);
  for (const auto& t : f.transitions()) {
    if (t.is_epsilon()) epsilon_edges[t.source].push_back(t.targets[0]);
  }
  std::vector<Transition> out;
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t generation = 0;
  for (StateId q = 0; q < n; ++q) {
    ++generation;
    std::vector<StateId> stack{q};
    mark[q] = generation;
    while (!stack.empty()) {
      StateId p = stack.back();
      stack.pop_back();
      for (auto ti : f.outgoing(p)) {
        const auto& t = f.transitions()[ti];
        if (t.is_read()) out.push_back(Transition::read(q, Predicate::Top, 0, *t.symbol, t.targets));
      }
      for (auto r : epsilon_edges[p]) {
        if (mark[r] != generation) {
          mark[r] = generation;
          stack.push_back(r);
        }
      }
    }
  }
  std::vector<std::string> names(f.states().begin(), f.states().end());
  return Gocta(f.alphabet(), std::move(names), f.initial(), std::move(out));
}

}  // namespace gocta
