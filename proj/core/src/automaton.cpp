#include "gocta/automaton.hpp"

#include <algorithm>
#include <tuple>

#include "gocta/error.hpp"

namespace gocta {

std::string_view predicate_name(Predicate p) {
  switch (p) {
    case Predicate::Top:
      return "top";
    case Predicate::EqZero:
      return "eq0";
    case Predicate::GtZero:
      return "gt0";
  }
  return "?";
}

std::optional<Predicate> parse_predicate(std::string_view text) {
  if (text == "top") return Predicate::Top;
  if (text == "eq0") return Predicate::EqZero;
  if (text == "gt0") return Predicate::GtZero;
  return std::nullopt;
}

bool canonical_less(const Transition& a, const Transition& b) {
  auto key = [](const Transition& t) {
    return std::tie(t.source, t.predicate, t.instruction);
  };
  if (key(a) != key(b)) return key(a) < key(b);
  if (a.is_epsilon() != b.is_epsilon()) return a.is_epsilon();
  if (a.symbol != b.symbol) return a.symbol < b.symbol;
  return a.targets < b.targets;
}

Gocta::Gocta(RankedAlphabet alphabet, std::vector<std::string> states, StateId initial,
             std::vector<Transition> transitions)
    : alphabet_(std::move(alphabet)), states_(std::move(states)), initial_(initial),
      transitions_(std::move(transitions)) {
  std::sort(transitions_.begin(), transitions_.end(), canonical_less);
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  for (StateId id = 0; id < states_.size(); ++id) index_.emplace(states_[id], id);
  outgoing_.resize(states_.size());
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    if (transitions_[i].source < states_.size()) outgoing_[transitions_[i].source].push_back(i);
  }
}

const std::string& Gocta::state_name(StateId id) const {
  if (id >= states_.size()) throw PreconditionError("state id " + std::to_string(id) + " out of range");
  return states_[id];
}

std::optional<StateId> Gocta::find_state(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::set<Counter> Gocta::instructions() const {
  std::set<Counter> out;
  for (const auto& t : transitions_) out.insert(t.instruction);
  return out;
}

std::span<const std::size_t> Gocta::outgoing(StateId source) const {
  if (source >= outgoing_.size()) return {};
  return outgoing_[source];
}

std::string Gocta::render_transition(const Transition& t) const {
  auto name = [&](StateId id) -> std::string {
    return id < states_.size() ? states_[id] : "?" + std::to_string(id);
  };
  std::string out = name(t.source);
  out += " -[";
  out += predicate_name(t.predicate);
  out += '/';
  if (t.instruction > 0) out += '+';
  out += std::to_string(t.instruction);
  out += "]-> ";
  if (t.is_epsilon()) {
    out += name(t.targets.at(0));
    return out;
  }
  out += *t.symbol;
  if (!t.targets.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.targets.size(); ++i) {
      if (i != 0) out += ',';
      out += name(t.targets[i]);
    }
    out += ')';
  }
  return out;
}

StateId GoctaBuilder::state(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  auto id = static_cast<StateId>(states_.size());
  states_.push_back(name);
  index_.emplace(name, id);
  return id;
}

GoctaBuilder& GoctaBuilder::initial(const std::string& name) {
  initial_ = state(name);
  return *this;
}

GoctaBuilder& GoctaBuilder::epsilon(const std::string& from, Predicate p, Counter z, const std::string& to) {
  auto source = state(from);
  auto target = state(to);
  transitions_.push_back(Transition::epsilon(source, p, z, target));
  return *this;
}

GoctaBuilder& GoctaBuilder::read(const std::string& from, Predicate p, Counter z, const std::string& symbol,
                                 const std::vector<std::string>& targets) {
  auto source = state(from);
  std::vector<StateId> ids;
  ids.reserve(targets.size());
  for (const auto& t : targets) ids.push_back(state(t));
  transitions_.push_back(Transition::read(source, p, z, symbol, std::move(ids)));
  return *this;
}

Gocta GoctaBuilder::build() const {
  if (!initial_) throw PreconditionError("automaton has no initial state");
  return Gocta(alphabet_, states_, *initial_, transitions_);
}

std::vector<Diagnostic> validate(const Gocta& a) {
  std::vector<Diagnostic> out;
  {
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < a.num_states(); ++i) {
      const auto& name = a.states()[i];
      if (name.empty()) out.push_back({"state " + std::to_string(i), "state name is empty"});
      if (!seen.insert(name).second) out.push_back({"state " + name, "duplicate state name"});
    }
  }
  if (a.initial() >= a.num_states()) {
    out.push_back({"initial", "initial state " + std::to_string(a.initial()) + " is not in the state set"});
  }
  for (std::size_t i = 0; i < a.transitions().size(); ++i) {
    const auto& t = a.transitions()[i];
    std::string where = "transition #" + std::to_string(i);
    if (t.source >= a.num_states()) out.push_back({where, "source state is not in the state set"});
    for (auto target : t.targets) {
      if (target >= a.num_states()) {
        out.push_back({where, "target state " + std::to_string(target) + " is not in the state set"});
      }
    }
    if (t.is_epsilon()) {
      if (t.targets.size() != 1) out.push_back({where, "epsilon-transition must have exactly one target"});
      continue;
    }
    auto rank = a.alphabet().rank(*t.symbol);
    if (!rank) {
      out.push_back({where, "symbol '" + *t.symbol + "' is not in the alphabet"});
    } else if (*rank != t.targets.size()) {
      out.push_back({where, "arity mismatch: '" + *t.symbol + "' has rank " + std::to_string(*rank) + " but " +
                                std::to_string(t.targets.size()) + " target states"});
    }
  }
  return out;
}

void require_valid(const Gocta& a) {
  auto diagnostics = validate(a);
  if (!diagnostics.empty()) {
    throw PreconditionError("invalid automaton: " + diagnostics.front().location + ": " +
                            diagnostics.front().message);
  }
}

bool is_normalized(const Gocta& a) {
  return std::all_of(a.transitions().begin(), a.transitions().end(), [](const Transition& t) {
    if (t.instruction < -1 || t.instruction > 1) return false;
    return t.is_epsilon() || t.is_plain();
  });
}

bool is_fta(const Gocta& a) {
  return std::all_of(a.transitions().begin(), a.transitions().end(),
                     [](const Transition& t) { return t.is_plain(); });
}

bool has_epsilon(const Gocta& a) {
  return std::any_of(a.transitions().begin(), a.transitions().end(),
                     [](const Transition& t) { return t.is_epsilon(); });
}

namespace {

const std::vector<std::string> kLetters{"a", "b"};

std::string bracket(const std::string& u, const std::string& v) { return "[" + u + "]_" + v; }
std::string brace(const std::string& u, const std::string& v) { return "{" + u + "}_" + v; }

// Counting rules of the a=b example for the state family `name`.
void add_counting_rules(GoctaBuilder& b, std::string (*name)(const std::string&, const std::string&)) {
  for (const auto& u : kLetters) {
    const auto& other = u == "a" ? kLetters[1] : kLetters[0];
    for (const auto& v : kLetters) {
      b.read(name(u, v), Predicate::Top, 1, u, {name(u, v)});
      b.read(name(u, v), Predicate::GtZero, -1, other, {name(u, v)});
      b.read(name(u, v), Predicate::EqZero, 1, other, {name(other, v)});
    }
  }
}

RankedAlphabet a_eq_b_alphabet() { return RankedAlphabet{{"sigma", 3}, {"a", 1}, {"b", 1}, {"#", 0}}; }

}  // namespace

Gocta example_a_eq_b_verbatim() {
  GoctaBuilder b(a_eq_b_alphabet());
  b.initial("q0");
  for (const auto& u : kLetters) {
    for (const auto& v : kLetters) b.state(bracket(u, v));
  }
  for (const auto& v : kLetters) {
    for (const auto& v1 : kLetters) {
      for (const auto& v2 : kLetters) b.read("q0", "sigma", {bracket("a", v), bracket(v, v1), bracket(v1, v2)});
    }
  }
  add_counting_rules(b, bracket);
  for (const auto& u : kLetters) b.read(bracket(u, u), "#", {});
  return b.build();
}

Gocta example_a_eq_b() {
  // The third subtree runs in a copy {u}_v of the counting states whose
  // leaf requires counter 0, so only balanced trees are accepted.
  GoctaBuilder b(a_eq_b_alphabet());
  b.initial("q0");
  for (const auto& u : kLetters) {
    for (const auto& v : kLetters) b.state(bracket(u, v));
  }
  for (const auto& u : kLetters) {
    for (const auto& v : kLetters) b.state(brace(u, v));
  }
  for (const auto& v : kLetters) {
    for (const auto& v1 : kLetters) {
      for (const auto& v2 : kLetters) b.read("q0", "sigma", {bracket("a", v), bracket(v, v1), brace(v1, v2)});
    }
  }
  add_counting_rules(b, bracket);
  add_counting_rules(b, brace);
  for (const auto& u : kLetters) {
    b.read(bracket(u, u), "#", {});
    b.read(brace(u, u), Predicate::EqZero, 0, "#", {});
  }
  return b.build();
}

Gocta example_multiply(Counter k) {
  GoctaBuilder b(RankedAlphabet{{"sigma", 2}, {"#", 0}});
  b.initial("p");
  b.state("q");
  b.state("r");  // stands for the untouched right neighbour q'
  b.read("q", Predicate::Top, k, "#", {});
  b.read("p", Predicate::GtZero, -1, "sigma", {"p", "q"});
  b.read("p", Predicate::EqZero, 0, "#", {});
  return b.build();
}

Gocta example_pow2() {
  GoctaBuilder b(RankedAlphabet{{"omega", 2}, {"sigma", 2}, {"#", 0}});
  for (const auto* s : {"q", "p", "f", "q0"}) b.state(s);
  b.initial("q0");
  b.read("q0", Predicate::Top, 1, "omega", {"p", "f"});
  b.read("q", Predicate::Top, 2, "#", {});
  b.read("p", Predicate::GtZero, -1, "sigma", {"p", "q"});
  b.read("p", Predicate::EqZero, 0, "#", {});
  b.read("f", "omega", {"p", "f"});
  b.read("f", "#", {});
  return b.build();
}

Gocta example_a_sigma_b_c() {
  GoctaBuilder b(RankedAlphabet{{"sigma", 2}, {"a", 1}, {"b", 1}, {"c", 1}, {"#", 0}});
  for (const auto* s : {"q0", "q1", "q2"}) b.state(s);
  b.initial("q0");
  b.read("q0", Predicate::Top, 1, "a", {"q0"});
  b.read("q0", "sigma", {"q1", "q2"});
  b.read("q1", Predicate::GtZero, -1, "b", {"q1"});
  b.read("q2", Predicate::GtZero, -1, "c", {"q2"});
  b.read("q1", Predicate::EqZero, 0, "#", {});
  b.read("q2", Predicate::EqZero, 0, "#", {});
  return b.build();
}

std::map<std::string, Gocta> paper_examples(Counter multiply_factor) {
  return {
      {"a_eq_b", example_a_eq_b()},
      {"a_eq_b_verbatim", example_a_eq_b_verbatim()},
      {"multiply_k", example_multiply(multiply_factor)},
      {"pow2", example_pow2()},
      {"a_sigma_b_c", example_a_sigma_b_c()},
  };
}

}  // namespace gocta
