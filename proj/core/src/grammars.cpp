#include "gocta/grammars.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gocta/error.hpp"
#include "gocta/io.hpp"

namespace gocta {

std::string render_index(Index i) {
  std::string out(i.gammas, 'g');
  if (i.bottom) out += '#';
  return out;
}

std::size_t Production::rank() const {
  return static_cast<std::size_t>(
      std::count_if(body.begin(), body.end(), [](const GrammarSymbol& s) { return !s.terminal; }));
}

const Production& Icg::production(std::string_view name) const {
  for (const auto& p : productions) {
    if (p.name == name) return p;
  }
  throw PreconditionError("unknown production '" + std::string(name) + "'");
}

void validate_icg(const Icg& g) {
  if (g.nonterminals.count(std::string(Icg::kStart)) != 0) throw PreconditionError("S must not be a nonterminal");
  for (const auto& t : g.terminals) {
    if (g.nonterminals.count(t) != 0) throw PreconditionError("'" + t + "' is both terminal and nonterminal");
  }
  std::set<std::string> names;
  for (const auto& p : g.productions) {
    auto fail = [&](const std::string& message) { return PreconditionError("production " + p.name + ": " + message); };
    if (!names.insert(p.name).second) throw fail("duplicate production name");
    for (const auto& s : p.body) {
      if (s.terminal && g.terminals.count(s.name) == 0) throw fail("unknown terminal '" + s.name + "'");
      if (!s.terminal && g.nonterminals.count(s.name) == 0) throw fail("unknown nonterminal '" + s.name + "'");
    }
    switch (p.kind) {
      case ProductionKind::StartEmpty:
        if (p.lhs != Icg::kStart || !p.body.empty()) throw fail("expected S -> eps");
        break;
      case ProductionKind::StartNonterminal:
        if (p.lhs != Icg::kStart || p.body.size() != 1 || p.body[0].terminal || p.body[0].index != Index{0, true}) {
          throw fail("expected S -> A#");
        }
        break;
      case ProductionKind::Counting:
        if (g.nonterminals.count(p.lhs) == 0) throw fail("unknown nonterminal '" + p.lhs + "'");
        for (const auto& s : p.body) {
          if (!s.terminal && s.index.bottom) throw fail("the bottom marker may only occur in A# productions");
        }
        break;
      case ProductionKind::Bottom: {
        if (g.nonterminals.count(p.lhs) == 0) throw fail("unknown nonterminal '" + p.lhs + "'");
        bool first = true;
        for (const auto& s : p.body) {
          if (s.terminal) continue;
          if (s.index.bottom != first) throw fail("the bottom marker must follow exactly the first index");
          first = false;
        }
        if (first) throw fail("A# productions need at least one nonterminal");
        break;
      }
    }
  }
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

struct ParsedToken {
  std::string name;
  std::optional<Index> index;
};

ParsedToken parse_token(std::string_view token, std::size_t line) {
  auto fail = [&](const std::string& m) { return ParseError(m + " in '" + std::string(token) + "'", 0, line); };
  std::size_t i = 0;
  if (token.empty() || !is_ident_start(token[0])) throw fail("expected a symbol name");
  while (i < token.size() && is_ident_char(token[i])) ++i;
  ParsedToken out{std::string(token.substr(0, i)), std::nullopt};
  if (i == token.size()) return out;
  Index index;
  if (token[i] == '#' && i + 1 == token.size()) {
    index.bottom = true;
    out.index = index;
    return out;
  }
  if (token[i] != '[' || token.back() != ']') throw fail("expected '[index]'");
  auto body = token.substr(i + 1, token.size() - i - 2);
  for (std::size_t j = 0; j < body.size(); ++j) {
    if (body[j] == 'g' && !index.bottom) {
      ++index.gammas;
    } else if (body[j] == '#' && !index.bottom) {
      index.bottom = true;
    } else {
      throw fail("index must match g*#?");
    }
  }
  out.index = index;
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

struct RawProduction {
  std::size_t line;
  std::string name;
  std::string_view lhs;
  std::vector<std::string_view> body;
};

}  // namespace

Icg parse_icg(std::string_view text) {
  Icg g;
  std::vector<RawProduction> raw;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    // Comments start with "//" since '#' is the bottom marker.
    if (auto c = line.find("//"); c != std::string_view::npos) line = line.substr(0, c);
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", 0, line_no);
    auto head = split_ws(line.substr(0, colon));
    auto rest = line.substr(colon + 1);
    if (head.size() == 1 && head[0] == "nonterminals") {
      for (auto t : split_ws(rest)) g.nonterminals.insert(parse_token(t, line_no).name);
    } else if (head.size() == 1 && head[0] == "terminals") {
      for (auto t : split_ws(rest)) g.terminals.insert(parse_token(t, line_no).name);
    } else if (!head.empty() && head[0] == "prod" && head.size() <= 2) {
      auto parts = split_ws(rest);
      if (parts.size() < 3 || parts[1] != "->") throw ParseError("expected 'lhs -> body'", 0, line_no);
      RawProduction p{line_no, head.size() == 2 ? std::string(head[1]) : "p" + std::to_string(raw.size() + 1),
                      parts[0], {parts.begin() + 2, parts.end()}};
      raw.push_back(std::move(p));
    } else {
      throw ParseError("unknown key '" + (head.empty() ? std::string() : std::string(head[0])) + "'", 0, line_no);
    }
  }
  for (const auto& r : raw) {
    Production p;
    p.name = r.name;
    auto lhs = parse_token(r.lhs, r.line);
    p.lhs = lhs.name;
    if (r.body.size() == 1 && r.body[0] == "eps") {
      // empty body
    } else {
      for (auto token : r.body) {
        auto parsed = parse_token(token, r.line);
        if (g.terminals.count(parsed.name) != 0) {
          if (parsed.index) throw ParseError("terminal '" + parsed.name + "' cannot carry an index", 0, r.line);
          p.body.push_back(GrammarSymbol::term(parsed.name));
        } else if (g.nonterminals.count(parsed.name) != 0) {
          p.body.push_back(GrammarSymbol::nonterm(parsed.name, parsed.index.value_or(Index{})));
        } else {
          throw ParseError("undeclared symbol '" + parsed.name + "'", 0, r.line);
        }
      }
    }
    if (lhs.name == Icg::kStart) {
      if (lhs.index) throw ParseError("S takes no index", 0, r.line);
      p.kind = p.body.empty() ? ProductionKind::StartEmpty : ProductionKind::StartNonterminal;
    } else {
      Index i = lhs.index.value_or(Index{});
      if (i == Index{0, true}) {
        p.kind = ProductionKind::Bottom;
      } else if (i == Index{} || i == Index{1, false}) {
        p.kind = ProductionKind::Counting;
        p.pops_gamma = i.gammas == 1;
      } else {
        throw ParseError("left-hand index must be empty, [g] or [#]", 0, r.line);
      }
    }
    g.productions.push_back(std::move(p));
  }
  validate_icg(g);
  return g;
}

Icg load_icg(const std::string& path) { return parse_icg(read_file(path)); }

std::string render_form(const SententialForm& form) {
  if (form.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < form.size(); ++i) {
    if (i != 0) out += ' ';
    out += form[i].name;
    if (!form[i].terminal && form[i].index != Index{}) {
      out += '[' + render_index(form[i].index) + ']';
    }
  }
  return out;
}

std::string write_icg(const Icg& g) {
  std::ostringstream out;
  out << "nonterminals:";
  for (const auto& n : g.nonterminals) out << ' ' << n;
  out << "\nterminals:";
  for (const auto& t : g.terminals) out << ' ' << t;
  out << '\n';
  for (const auto& p : g.productions) {
    out << "prod " << p.name << ": " << p.lhs;
    if (p.kind == ProductionKind::Bottom) out << "[#]";
    if (p.kind == ProductionKind::Counting && p.pops_gamma) out << "[g]";
    out << " -> " << render_form(p.body) << '\n';
  }
  return out.str();
}

SententialForm r_append(const SententialForm& body, Index delta) {
  SententialForm out = body;
  for (auto& s : out) {
    if (s.terminal) continue;
    if (s.index.bottom && (delta.gammas != 0 || delta.bottom)) {
      throw PreconditionError("cannot append to an index that already ends in the bottom marker");
    }
    s.index.gammas += delta.gammas;
    s.index.bottom = s.index.bottom || delta.bottom;
    break;
  }
  return out;
}

std::optional<SententialForm> derive_r_step(const SententialForm& form, const Production& p) {
  std::size_t at = 0;
  while (at < form.size() && form[at].terminal) ++at;
  if (at == form.size()) return std::nullopt;
  const auto& x = form[at];
  SententialForm out(form.begin(), form.begin() + static_cast<std::ptrdiff_t>(at));
  switch (p.kind) {
    case ProductionKind::StartEmpty:
    case ProductionKind::StartNonterminal:
      if (form.size() != 1 || x.name != Icg::kStart || x.index != Index{}) return std::nullopt;
      return p.body;
    case ProductionKind::Counting: {
      if (x.name != p.lhs || !x.index.bottom) return std::nullopt;
      const std::uint32_t popped = p.pops_gamma ? 1 : 0;
      if (x.index.gammas < popped) return std::nullopt;
      SententialForm rest = p.body;
      rest.insert(rest.end(), form.begin() + static_cast<std::ptrdiff_t>(at) + 1, form.end());
      rest = r_append(rest, Index{x.index.gammas - popped, true});
      out.insert(out.end(), rest.begin(), rest.end());
      return out;
    }
    case ProductionKind::Bottom:
      if (x.name != p.lhs || x.index != Index{0, true}) return std::nullopt;
      out.insert(out.end(), p.body.begin(), p.body.end());
      out.insert(out.end(), form.begin() + static_cast<std::ptrdiff_t>(at) + 1, form.end());
      return out;
  }
  return std::nullopt;
}

Icg erase_terminals(const Icg& g) {
  Icg out;
  out.nonterminals = g.nonterminals;
  out.productions = g.productions;
  for (auto& p : out.productions) {
    std::erase_if(p.body, [](const GrammarSymbol& s) { return s.terminal; });
  }
  return out;
}

namespace {

SententialForm start_form() { return {GrammarSymbol::nonterm(std::string(Icg::kStart))}; }

}  // namespace

std::optional<Derivation> replay_derivation(const Icg& g, const std::vector<std::size_t>& productions) {
  Derivation d{productions, {start_form()}};
  for (auto index : productions) {
    if (index >= g.productions.size()) return std::nullopt;
    auto next = derive_r_step(d.forms.back(), g.productions[index]);
    if (!next) return std::nullopt;
    d.forms.push_back(std::move(*next));
  }
  return d;
}

std::optional<Derivation> oracle_derivable(const Icg& g, const std::vector<std::string>& word, std::size_t max_steps,
                                           const SearchOptions& options) {
  SententialForm target;
  for (const auto& w : word) target.push_back(GrammarSymbol::term(w));
  const std::size_t max_length = max_steps + word.size();

  struct Record {
    SententialForm form;
    std::size_t parent;
    std::size_t production;
    std::size_t depth;
  };
  std::vector<Record> records{{start_form(), 0, 0, 0}};
  std::map<SententialForm, std::size_t> seen{{start_form(), 0}};
  std::deque<std::size_t> queue{0};
  std::optional<std::size_t> goal;
  if (records[0].form == target) goal = 0;
  std::size_t expansions = 0;
  while (!queue.empty() && !goal) {
    auto index = queue.front();
    queue.pop_front();
    if (++expansions > options.node_budget) {
      throw ResourceLimitError("derivation search exceeded node budget of " + std::to_string(options.node_budget));
    }
    if (records[index].depth >= max_steps) continue;
    for (std::size_t pi = 0; pi < g.productions.size() && !goal; ++pi) {
      auto next = derive_r_step(records[index].form, g.productions[pi]);
      if (!next || next->size() > max_length) continue;
      // Leftmost derivation: the terminal prefix is final and must match.
      std::size_t terminals = 0;
      bool prefix_ok = true;
      bool in_prefix = true;
      for (const auto& s : *next) {
        if (!s.terminal) {
          in_prefix = false;
          continue;
        }
        if (in_prefix && (terminals >= word.size() || word[terminals] != s.name)) prefix_ok = false;
        ++terminals;
      }
      if (!prefix_ok || terminals > word.size()) continue;
      if (seen.count(*next) != 0) continue;
      std::size_t id = records.size();
      seen.emplace(*next, id);
      bool done = *next == target;
      records.push_back({std::move(*next), index, pi, records[index].depth + 1});
      queue.push_back(id);
      if (done) goal = id;
    }
  }
  if (!goal) return std::nullopt;
  Derivation d;
  for (auto index = *goal; index != 0; index = records[index].parent) {
    d.productions.push_back(records[index].production);
    d.forms.push_back(records[index].form);
  }
  d.forms.push_back(start_form());
  std::reverse(d.productions.begin(), d.productions.end());
  std::reverse(d.forms.begin(), d.forms.end());
  return d;
}

Gocta icg_to_gocta(const Icg& g) {
  validate_icg(g);
  const Icg erased = erase_terminals(g);
  RankedAlphabet alphabet;
  for (const auto& p : erased.productions) alphabet.add(p.name, p.rank());

  GoctaBuilder b(alphabet);
  b.initial(std::string(Icg::kStart));
  for (const auto& n : erased.nonterminals) b.state(n);
  auto bracket = [](const GrammarSymbol& s) {
    return "[" + s.name + "^" + std::to_string(s.index.gammas) + (s.index.bottom ? "#" : "") + "]";
  };
  std::set<std::string> brackets;
  for (const auto& p : erased.productions) {
    switch (p.kind) {
      case ProductionKind::StartEmpty:
        b.read(std::string(Icg::kStart), p.name, {});
        break;
      case ProductionKind::StartNonterminal:
        b.read(std::string(Icg::kStart), p.name, {p.body[0].name});
        break;
      case ProductionKind::Counting:
      case ProductionKind::Bottom: {
        std::vector<std::string> targets;
        for (const auto& s : p.body) {
          targets.push_back(bracket(s));
          if (brackets.insert(targets.back()).second) b.epsilon(targets.back(), Predicate::Top, s.index.gammas, s.name);
        }
        Predicate pred = Predicate::Top;
        Counter z = 0;
        if (p.kind == ProductionKind::Bottom) {
          pred = Predicate::EqZero;
        } else if (p.pops_gamma) {
          pred = Predicate::GtZero;
          z = -1;
        }
        b.read(p.lhs, pred, z, p.name, targets);
        break;
      }
    }
  }
  Gocta a = b.build();
  for (const auto& p : erased.productions) {
    if (a.find_state(p.name)) {
      throw PreconditionError("production name '" + p.name + "' clashes with a state name");
    }
  }
  return a;
}

std::vector<std::string> tree_to_production_string(const Tree& t) {
  std::vector<std::string> out;
  std::function<void(const Tree&)> visit = [&](const Tree& node) {
    out.push_back(node.label());
    for (const auto& child : node.children()) visit(child);
  };
  visit(t);
  return out;
}

std::vector<std::size_t> production_indices(const Icg& g, const std::vector<std::string>& names) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.productions.size(); ++i) index.emplace(g.productions[i].name, i);
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    auto it = index.find(n);
    if (it == index.end()) throw PreconditionError("unknown production '" + n + "'");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace gocta
