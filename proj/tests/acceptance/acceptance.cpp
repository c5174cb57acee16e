// Acceptance suite: one PASS/FAIL line per criterion.
#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "gocta/automaton.hpp"
#include "gocta/decide.hpp"
#include "gocta/grammars.hpp"
#include "gocta/random.hpp"
#include "gocta/semantics.hpp"
#include "gocta/transforms.hpp"

using namespace gocta;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

nlohmann::ordered_json g_timings = nlohmann::ordered_json::object();

Tree chain(const std::string& word) {
  Tree t = Tree::leaf("#");
  for (auto it = word.rbegin(); it != word.rend(); ++it) t = Tree::node(std::string(1, *it), {t});
  return t;
}

// Words over {a,b} of length <= 4: 31 of them.
std::vector<std::string> short_words() {
  std::vector<std::string> words{""};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() == 4) continue;
    words.push_back(words[i] + "a");
    words.push_back(words[i] + "b");
  }
  return words;
}

std::vector<Tree> a_eq_b_corpus() {
  std::vector<Tree> chains;
  for (const auto& w : short_words()) chains.push_back(chain(w));
  std::vector<Tree> out;
  for (const auto& x : chains) {
    for (const auto& y : chains) {
      for (const auto& z : chains) out.push_back(Tree::node("sigma", {x, y, z}));
    }
  }
  return out;
}

bool oracle_verdict(const Gocta& a, const Tree& t) {
  MemberOptions o;
  o.method = Method::Oracle;
  return member(a, t, o).verdict;
}

constexpr std::uint64_t kRandomAutomata = 200;

Outcome criterion1() {
  auto a = example_a_eq_b();
  auto corpus = a_eq_b_corpus();
  auto start = Clock::now();
  std::size_t mismatches = 0;
  std::size_t members = 0;
  for (const auto& t : corpus) {
    bool expected = count_symbol(t, "a") == count_symbol(t, "b");
    bool verdict = member(a, t).verdict;
    members += verdict ? 1 : 0;
    mismatches += verdict != expected ? 1 : 0;
  }
  double elapsed = seconds_since(start);
  g_timings["criterion1_seconds"] = elapsed;
  std::ostringstream d;
  d << corpus.size() << " trees, " << members << " members, " << mismatches << " mismatches, " << std::fixed
    << std::setprecision(1) << elapsed << "s (limit 300s)";
  return {corpus.size() == 29791 && mismatches == 0 && elapsed <= 300.0, d.str()};
}

Outcome criterion2() {
  auto start = Clock::now();
  std::size_t cases = 0;
  std::size_t mismatches = 0;
  std::size_t accepted = 0;
  for (std::uint64_t seed = 0; seed < kRandomAutomata; ++seed) {
    auto a = random_gocta(seed);
    for (const auto& t : enumerate_trees(a.alphabet(), 5)) {
      bool behaviour = member(a, t).verdict;
      bool oracle = oracle_verdict(a, t);
      ++cases;
      accepted += oracle ? 1 : 0;
      if (behaviour != oracle) {
        ++mismatches;
        std::cerr << "  criterion 2 mismatch: seed " << seed << " tree " << render_tree(t) << '\n';
      }
    }
  }
  g_timings["criterion2_seconds"] = seconds_since(start);
  std::ostringstream d;
  d << kRandomAutomata << " automata, " << cases << " cases (" << accepted << " accepted), agreement "
    << (cases - mismatches) << "/" << cases;
  return {mismatches == 0 && cases > 0, d.str()};
}

Outcome criterion3() {
  std::vector<Gocta> automata{normalize(example_a_eq_b())};
  for (std::uint64_t seed = 0; seed < 10; ++seed) automata.push_back(normalize(random_gocta(500 + seed)));
  std::size_t checks = 0;
  std::size_t violations = 0;
  for (const auto& a : automata) {
    for (Counter k : {1, 2, 3, 5}) {
      auto b = behaviour_automaton(a, k);
      const auto w = static_cast<std::size_t>(k + 1);
      std::size_t rule_bound = a.transitions().size();
      for (std::size_t i = 0; i <= a.alphabet().max_rank(); ++i) rule_bound *= w;
      ++checks;
      if (!is_fta(b) || b.num_states() > a.num_states() * w * w || b.transitions().size() > rule_bound) ++violations;
    }
  }
  std::ostringstream d;
  d << automata.size() << " automata x k in {1,2,3,5}: " << checks - violations << "/" << checks << " within |Q|(k+1)^2 and |D|(k+1)^(maxrk+1)";
  return {violations == 0, d.str()};
}

// The explicit automaton at the decision bound k = |xi|*|Q|^2+1 is far too large to build, so
// this criterion is reported as failed. The line still carries the evidence
// that is attainable: the implicit materialization at the full bound, and
// explicit against implicit at small k.
Outcome criterion4() {
  auto prepared = prepare_for_decision(example_a_eq_b());
  const auto q = prepared.num_states();
  std::size_t cases = 0;
  std::size_t implicit_agree = 0;
  std::size_t small_cases = 0;
  std::size_t small_agree = 0;
  Counter largest = 0;
  for (const auto& t : enumerate_trees(prepared.alphabet(), 5)) {
    const Counter k = counter_bound(t.size(), q);
    largest = std::max(largest, k);
    bool oracle = oracle_member_global(prepared, t, k).has_value();
    ++cases;
    implicit_agree += behaviour_member(prepared, t, k) == oracle ? 1 : 0;
  }
  for (Counter k = 0; k <= 8; ++k) {
    auto f = eliminate_epsilon(behaviour_automaton(prepared, k));
    for (const auto& t : enumerate_trees(prepared.alphabet(), 5)) {
      ++small_cases;
      small_agree += fta_member(f, t) == behaviour_member(prepared, t, k) ? 1 : 0;
    }
  }
  const long double w = static_cast<long double>(largest) + 1;
  const long double states = static_cast<long double>(q) * w * w;
  const long double rules = 8.0L * w * w * w * w;
  std::ostringstream d;
  d << std::setprecision(2) << "explicit construction at k=" << largest << " infeasible (|Q'|=" << q << ", ~"
    << static_cast<double>(states) << " states, ~" << static_cast<double>(rules)
    << " sigma rules); attainable evidence: implicit at that k agrees with oracle " << implicit_agree << "/"
    << cases << ", explicit == implicit for k<=8 " << small_agree << "/" << small_cases;
  return {false, d.str()};
}

Outcome criterion5() {
  std::size_t runs = 0;
  std::size_t good = 0;
  for (Counter k = 1; k <= 3; ++k) {
    auto a = example_multiply(k);
    const StateId p = *a.find_state("p");
    const StateId r = *a.find_state("r");
    for (Counter c = 0; c <= 5; ++c) {
      GlobalTrace trace{{parse_tree("sigma(x1,x2)"), {p, r}, c}, {}};
      bool deterministic = true;
      while (trace.last().frontier.front() != r && deterministic) {
        auto succ = successors_global(a, trace.last());
        deterministic = succ.size() == 1;
        if (deterministic) trace.steps.push_back({succ[0].first, succ[0].second});
      }
      ++runs;
      const auto& comb = trace.last().shape.children()[0];
      bool ok = deterministic && check_global_trace(a, trace).empty() && trace.last().counter == k * c &&
                count_symbol(comb, "sigma") == static_cast<std::size_t>(c);
      good += ok ? 1 : 0;
    }
  }
  std::ostringstream d;
  d << good << "/" << runs << " runs end with counter k*c and c sigmas in the comb";
  return {good == runs, d.str()};
}

Outcome criterion6() {
  // Recorded from the oracle before the suite was written: one and three
  // sigmas for one and two omega-blocks, i.e. 2^n - 1.
  const std::map<std::size_t, std::size_t> recorded{{1, 1}, {2, 3}};
  auto a = example_pow2();
  constexpr std::size_t kMaxSize = 13;
  const Counter bound = counter_bound(kMaxSize, prepare_for_decision(a).num_states());
  auto accepted = enumerate_language(a, kMaxSize, Semantics::Global, bound);
  std::map<std::size_t, std::set<std::size_t>> sigmas;
  bool oracle_agrees = true;
  for (const auto& t : accepted) {
    std::size_t blocks = count_symbol(t, "omega");
    if (blocks > 2) continue;
    sigmas[blocks].insert(count_symbol(t, "sigma"));
    oracle_agrees = oracle_agrees && oracle_member_global(a, t, bound).has_value();
  }
  bool exact = sigmas.size() == 2;
  for (const auto& [n, f] : recorded) exact = exact && sigmas[n] == std::set<std::size_t>{f};
  const bool recurrence = recorded.at(2) == 2 * recorded.at(1) + 1;
  std::ostringstream d;
  d << "f(1)=";
  for (auto v : sigmas[1]) d << v << ' ';
  d << "f(2)=";
  for (auto v : sigmas[2]) d << v << ' ';
  d << "(recorded 1, 3; f(2)=2f(1)+1, closed form 2^n-1)";
  return {exact && recurrence && oracle_agrees, d.str()};
}

Outcome criterion7() {
  auto a = example_a_sigma_b_c();
  std::size_t cases = 0;
  std::size_t correct = 0;
  for (int n1 = 0; n1 <= 4; ++n1) {
    for (int n2 = 0; n2 <= 4; ++n2) {
      for (int n3 = 0; n3 <= 4; ++n3) {
        Tree t = Tree::node("sigma", {chain(std::string(static_cast<std::size_t>(n2), 'b')),
                                      chain(std::string(static_cast<std::size_t>(n3), 'c'))});
        for (int i = 0; i < n1; ++i) t = Tree::node("a", {t});
        Counter q = static_cast<Counter>(a.num_states());
        Counter bound = static_cast<Counter>(t.height()) * q * q * q * q + 1;
        bool expected = n1 == n2 && n2 == n3;
        ++cases;
        correct += oracle_member_copy(a, t, bound).has_value() == expected ? 1 : 0;
      }
    }
  }
  std::ostringstream d;
  d << correct << "/" << cases << " exponent triples in [0,4]^3 classified correctly";
  return {correct == cases, d.str()};
}

Outcome criterion8() {
  // Sample (automaton, tree) pairs from the corpora of criteria 1 and 2.
  std::vector<std::pair<Gocta, std::vector<Tree>>> sources;
  sources.emplace_back(example_a_eq_b(), a_eq_b_corpus());
  for (std::uint64_t seed = 0; seed < kRandomAutomata; ++seed) {
    auto a = random_gocta(seed);
    auto trees = enumerate_trees(a.alphabet(), 5);
    sources.emplace_back(std::move(a), std::move(trees));
  }
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (std::size_t i = 0; i < sources[s].second.size(); ++i) all.emplace_back(s, i);
  }
  std::mt19937_64 rng(20240601);
  std::vector<std::pair<std::size_t, std::size_t>> sample;
  std::set<std::size_t> chosen;
  while (sample.size() < 1000 && chosen.size() < all.size()) {
    auto pick = static_cast<std::size_t>(rng() % all.size());
    if (chosen.insert(pick).second) sample.push_back(all[pick]);
  }
  std::map<std::size_t, std::pair<Gocta, Gocta>> transformed;
  std::size_t preserved = 0;
  std::size_t traces = 0;
  std::size_t bad_traces = 0;
  bool normalized = true;
  for (const auto& [s, i] : sample) {
    const auto& a = sources[s].first;
    const auto& t = sources[s].second[i];
    auto it = transformed.find(s);
    if (it == transformed.end()) {
      auto z = make_zero_accepting(a);
      it = transformed.emplace(s, std::make_pair(z, normalize(a))).first;
      normalized = normalized && is_normalized(it->second.second) && is_normalized(normalize(z));
    }
    const auto& [z, n] = it->second;
    bool original = oracle_verdict(a, t);
    MemberOptions o;
    o.method = Method::Oracle;
    auto rz = member(z, t, o);
    auto rn = member(n, t, o);
    preserved += (rz.verdict == original && rn.verdict == original) ? 1 : 0;
    // Accepting computations of the zero-accepting automaton, plain and
    // normalized, end with counter 0.
    const auto zn = normalize(z);
    for (const auto* x : {&z, &zn}) {
      const Counter bound = counter_bound(t.size(), prepare_for_decision(*x).num_states());
      if (auto trace = oracle_member_global(*x, t, bound)) {
        ++traces;
        if (trace->last().counter != 0 || !check_global_trace(*x, *trace).empty()) ++bad_traces;
      }
    }
  }
  std::ostringstream d;
  d << sample.size() << " sampled pairs: membership preserved " << preserved << "/" << sample.size()
    << ", normalized outputs " << (normalized ? "yes" : "no") << ", " << traces - bad_traces << "/" << traces
    << " accepting traces end at counter 0";
  return {sample.size() == 1000 && preserved == sample.size() && normalized && bad_traces == 0, d.str()};
}

Outcome criterion9() {
  std::size_t automata = 0;
  std::size_t cases = 0;
  std::size_t agree = 0;
  bool idempotent = true;
  for (std::uint64_t seed = 0; automata < 20; ++seed) {
    auto f = random_fta(seed);
    if (!has_epsilon(f)) continue;
    ++automata;
    auto e = eliminate_epsilon(f);
    idempotent = idempotent && !has_epsilon(e) && eliminate_epsilon(e) == e;
    for (const auto& t : enumerate_trees(f.alphabet(), 4)) {
      ++cases;
      // The FTA as a GOCTA never touches the counter.
      bool before = oracle_member_global(f, t, 0).has_value();
      agree += (before == fta_member(e, t) && before == fta_member_closure(f, t)) ? 1 : 0;
    }
  }
  std::ostringstream d;
  d << automata << " FTAs with epsilon, " << agree << "/" << cases << " trees agree, idempotent "
    << (idempotent ? "yes" : "no");
  return {agree == cases && idempotent, d.str()};
}

// Rebuilds the tree whose preorder is `names`, using the symbol ranks.
std::optional<Tree> tree_from_preorder(const std::vector<std::string>& names, const RankedAlphabet& alphabet) {
  std::size_t pos = 0;
  std::function<std::optional<Tree>()> build = [&]() -> std::optional<Tree> {
    if (pos >= names.size()) return std::nullopt;
    auto rank = alphabet.rank(names[pos]);
    if (!rank) return std::nullopt;
    std::string label = names[pos++];
    std::vector<Tree> children;
    for (std::size_t i = 0; i < *rank; ++i) {
      auto child = build();
      if (!child) return std::nullopt;
      children.push_back(*child);
    }
    return children.empty() ? Tree::leaf(label) : Tree::node(label, children);
  };
  auto t = build();
  if (!t || pos != names.size()) return std::nullopt;
  return t;
}

Outcome criterion10(const std::string& fixtures) {
  const std::vector<std::pair<std::string, bool>> grammars{{"empty.icg", false}, {"eps.icg", true}, {"branch.icg", true}};
  std::ostringstream d;
  bool pass = true;
  const char* separator = "";
  for (const auto& [name, nonempty] : grammars) {
    Icg g = load_icg(fixtures + "/" + name);
    Icg erased = erase_terminals(g);
    Gocta a = icg_to_gocta(g);
    const Counter bound = counter_bound(8, prepare_for_decision(a).num_states());
    auto trees = enumerate_language(a, 8, Semantics::Global, bound);
    auto derivation = oracle_derivable(erased, {}, 20);
    std::size_t replayed = 0;
    for (const auto& t : trees) {
      auto d2 = replay_derivation(erased, production_indices(g, tree_to_production_string(t)));
      replayed += (d2 && d2->forms.back().empty()) ? 1 : 0;
    }
    bool back = true;
    if (derivation) {
      std::vector<std::string> names;
      for (auto i : derivation->productions) names.push_back(g.productions[i].name);
      auto t = tree_from_preorder(names, a.alphabet());
      back = t.has_value() && member(a, *t).verdict;
    }
    bool ok = (!trees.empty() == derivation.has_value()) && (!trees.empty() == nonempty) && replayed == trees.size() && back;
    pass = pass && ok;
    d << separator << name << ": " << trees.size() << " trees, derivation " << (derivation ? "found" : "none") << ", replayed "
      << replayed << "/" << trees.size() << (back ? "" : ", derivation tree rejected");
    separator = "; ";
  }
  return {pass, d.str()};
}

Outcome criterion11() {
  std::size_t good = 0;
  for (std::uint64_t k = 0; k <= 30; ++k) good += balanced_triples(k) == 3 * k * k + 3 * k + 1 ? 1 : 0;
  return {good == 31, std::to_string(good) + "/31 values of k match 3k^2+3k+1"};
}

Outcome criterion12() {
  auto a = example_a_eq_b();
  std::ostringstream d;
  bool pass = true;
  for (std::size_t n : {50, 100, 200}) {
    std::string word;
    for (std::size_t i = 0; i + 1 < n; ++i) word += i % 2 == 0 ? 'a' : 'b';
    Tree monadic = chain(word);
    // sigma over three chains, n nodes in total.
    const std::size_t letters = n - 4;
    std::string w1 = word.substr(0, letters / 3);
    std::string w2 = word.substr(0, letters / 3);
    std::string w3 = word.substr(0, letters - 2 * (letters / 3));
    Tree branched = Tree::node("sigma", {chain(w1), chain(w2), chain(w3)});
    for (const auto& [kind, t] : {std::pair<std::string, Tree>{"monadic", monadic}, {"sigma3", branched}}) {
      auto start = Clock::now();
      auto r = member(a, t);
      double elapsed = seconds_since(start);
      bool expected = count_symbol(t, "a") == count_symbol(t, "b") && t.label() == "sigma";
      pass = pass && elapsed <= 60.0 && t.size() == n && r.verdict == expected;
      g_timings["criterion12"][kind + "_" + std::to_string(n)] = {{"seconds", elapsed}, {"bound", r.bound_used},
                                                                  {"verdict", r.verdict}};
      d << kind << "/" << n << " " << std::fixed << std::setprecision(3) << elapsed << "s ";
    }
  }
  d << "(limit 60s each)";
  return {pass, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string fixtures = "tests/fixtures";
  std::string timings;
  std::vector<int> only;
  std::vector<int> known_infeasible;
  app.add_option("--fixtures", fixtures, "Directory with the grammar fixtures");
  app.add_option("--timings", timings, "Write timings as JSON to this file");
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--known-infeasible", known_infeasible,
                 "Criteria that are reported but do not affect the exit status");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exhaustive L_a=b conformance", criterion1},
      {"decider-oracle differential", criterion2},
      {"behaviour automaton size bounds", criterion3},
      {"explicit behaviour automaton at the decision bound k = |xi|*|Q|^2+1", criterion4},
      {"multiplication gadget", criterion5},
      {"pow2 sigma counts", criterion6},
      {"copy semantics on a^n sigma(b^n #, c^n #)", criterion7},
      {"transform preservation", criterion8},
      {"epsilon elimination", criterion9},
      {"ICG reduction", [&] { return criterion10(fixtures); }},
      {"balanced triples", criterion11},
      {"scaling sanity", criterion12},
  };
  int gating_failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    auto start = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    g_timings["criterion" + std::to_string(id) + "_total_seconds"] = seconds_since(start);
    bool exempt = std::find(known_infeasible.begin(), known_infeasible.end(), id) != known_infeasible.end();
    std::cout << "[" << std::setw(2) << id << "] " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
              << o.detail << (exempt && !o.pass ? " [known infeasible, not gating]" : "") << std::endl;
    if (!o.pass && !exempt) ++gating_failures;
  }
  if (!timings.empty()) std::ofstream(timings) << g_timings.dump(2) << '\n';
  return gating_failures == 0 ? 0 : 1;
}
