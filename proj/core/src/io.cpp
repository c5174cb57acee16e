#include "gocta/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gocta/error.hpp"

namespace gocta {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_name_char(char c) { return !is_space(c) && c != '(' && c != ')' && c != ','; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Drops a trailing comment: '#' preceded by whitespace and not followed by '/'
// (so `#/0` in an alphabet survives).
std::string_view strip_comment(std::string_view line) {
  for (std::size_t i = 1; i < line.size(); ++i) {
    if (line[i] == '#' && is_space(line[i - 1]) && (i + 1 >= line.size() || line[i + 1] != '/')) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::optional<Counter> parse_int(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Counter value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

struct RawTransition {
  std::size_t line;
  std::string source;
  Predicate predicate;
  Counter instruction;
  std::string head;
  bool has_args;
  std::vector<std::string> args;
};

class GtaParser {
 public:
  explicit GtaParser(std::string_view text) : text_(text) {}

  Gocta parse() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      auto end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      line(text_.substr(pos, end - pos), line_no);
      pos = end + 1;
    }
    if (!initial_) throw ParseError("missing 'initial:' line", 0, line_no);
    return assemble();
  }

 private:
  void line(std::string_view raw, std::size_t line_no) {
    auto text = trim(raw);
    if (text.empty() || text.front() == '#') return;
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", 0, line_no);
    auto key = trim(text.substr(0, colon));
    auto value = text.substr(colon + 1);
    if (key == "trans") {
      transition(value, line_no);
      return;
    }
    value = trim(strip_comment(value));
    if (key == "alphabet") {
      for (auto token : split_ws(value)) {
        auto slash = token.rfind('/');
        if (slash == std::string_view::npos || slash == 0) {
          throw ParseError("alphabet entry '" + std::string(token) + "' is not name/rank", 0, line_no);
        }
        auto rank = parse_int(token.substr(slash + 1));
        if (!rank || *rank < 0) throw ParseError("bad rank in '" + std::string(token) + "'", 0, line_no);
        try {
          alphabet_.add(std::string(token.substr(0, slash)), static_cast<std::size_t>(*rank));
        } catch (const PreconditionError& e) {
          throw ParseError(e.what(), 0, line_no);
        }
      }
    } else if (key == "states") {
      for (auto token : split_ws(value)) {
        for (char c : token) {
          if (!is_name_char(c)) throw ParseError("bad state name '" + std::string(token) + "'", 0, line_no);
        }
        std::string name(token);
        if (state_index_.count(name) != 0) throw ParseError("duplicate state '" + name + "'", 0, line_no);
        state_index_.emplace(name, static_cast<StateId>(states_.size()));
        states_.push_back(std::move(name));
      }
    } else if (key == "initial") {
      if (initial_) throw ParseError("'initial:' given twice", 0, line_no);
      auto tokens = split_ws(value);
      if (tokens.size() != 1) throw ParseError("'initial:' takes exactly one state", 0, line_no);
      initial_ = std::string(tokens[0]);
      initial_line_ = line_no;
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", 0, line_no);
    }
  }

  void transition(std::string_view text, std::size_t line_no) {
    auto fail = [&](const std::string& message) -> ParseError { return ParseError(message, 0, line_no); };
    RawTransition t{line_no, {}, Predicate::Top, 0, {}, false, {}};
    std::size_t i = 0;
    auto skip = [&] {
      while (i < text.size() && is_space(text[i])) ++i;
    };
    auto name = [&]() -> std::string {
      skip();
      std::size_t start = i;
      while (i < text.size() && is_name_char(text[i])) {
        if (text.substr(i, 2) == "->" || text.substr(i, 2) == "-[") break;
        ++i;
      }
      if (i == start) throw fail("expected a name");
      return std::string(text.substr(start, i - start));
    };
    t.source = name();
    skip();
    if (text.substr(i, 2) == "->") {
      i += 2;
    } else if (text.substr(i, 2) == "-[") {
      i += 2;
      auto close = text.find("]->", i);
      if (close == std::string_view::npos) throw fail("expected ']->'");
      auto label = text.substr(i, close - i);
      auto slash = label.find('/');
      if (slash == std::string_view::npos) throw fail("expected predicate/instruction");
      auto p = parse_predicate(trim(label.substr(0, slash)));
      if (!p) throw fail("unknown predicate '" + std::string(trim(label.substr(0, slash))) + "'");
      auto z = parse_int(trim(label.substr(slash + 1)));
      if (!z) throw fail("bad instruction '" + std::string(trim(label.substr(slash + 1))) + "'");
      t.predicate = *p;
      t.instruction = *z;
      i = close + 3;
    } else {
      throw fail("expected '->' or '-[p/z]->'");
    }
    skip();
    {
      std::size_t start = i;
      while (i < text.size() && is_name_char(text[i])) ++i;
      if (i == start) throw fail("missing right-hand side");
      t.head = std::string(text.substr(start, i - start));
    }
    skip();
    if (i < text.size() && text[i] == '(') {
      ++i;
      t.has_args = true;
      while (true) {
        skip();
        std::size_t start = i;
        while (i < text.size() && is_name_char(text[i])) ++i;
        if (i == start) throw fail("expected a state name");
        t.args.emplace_back(text.substr(start, i - start));
        skip();
        if (i < text.size() && text[i] == ',') {
          ++i;
          continue;
        }
        if (i < text.size() && text[i] == ')') {
          ++i;
          break;
        }
        throw fail("expected ',' or ')'");
      }
    }
    skip();
    if (i < text.size() && text[i] != '#') throw fail("unexpected text after transition");
    raw_.push_back(std::move(t));
  }

  StateId lookup(const std::string& name, std::size_t line_no) const {
    auto it = state_index_.find(name);
    if (it == state_index_.end()) throw ParseError("undeclared state '" + name + "'", 0, line_no);
    return it->second;
  }

  Gocta assemble() const {
    std::vector<Transition> transitions;
    for (const auto& raw : raw_) {
      auto source = lookup(raw.source, raw.line);
      if (raw.has_args) {
        auto rank = alphabet_.rank(raw.head);
        if (!rank) throw ParseError("symbol '" + raw.head + "' is not in the alphabet", 0, raw.line);
        if (*rank != raw.args.size()) {
          throw ParseError("arity mismatch: '" + raw.head + "' has rank " + std::to_string(*rank) + " but " +
                               std::to_string(raw.args.size()) + " target states",
                           0, raw.line);
        }
        std::vector<StateId> targets;
        for (const auto& arg : raw.args) targets.push_back(lookup(arg, raw.line));
        transitions.push_back(Transition::read(source, raw.predicate, raw.instruction, raw.head, targets));
        continue;
      }
      bool is_state = state_index_.count(raw.head) != 0;
      auto rank = alphabet_.rank(raw.head);
      if (is_state && rank) {
        throw ParseError("'" + raw.head + "' is both a state and a symbol; write the read with parentheses", 0,
                         raw.line);
      }
      if (is_state) {
        transitions.push_back(Transition::epsilon(source, raw.predicate, raw.instruction, lookup(raw.head, raw.line)));
      } else if (rank) {
        if (*rank != 0) {
          throw ParseError("symbol '" + raw.head + "' has rank " + std::to_string(*rank) + " but no targets", 0,
                           raw.line);
        }
        transitions.push_back(Transition::read(source, raw.predicate, raw.instruction, raw.head, {}));
      } else {
        throw ParseError("'" + raw.head + "' is neither a state nor a symbol", 0, raw.line);
      }
    }
    return Gocta(alphabet_, states_, lookup(*initial_, initial_line_), std::move(transitions));
  }

  std::string_view text_;
  RankedAlphabet alphabet_;
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateId> state_index_;
  std::optional<std::string> initial_;
  std::size_t initial_line_ = 0;
  std::vector<RawTransition> raw_;
};

}  // namespace

Gocta parse_gocta(std::string_view text) { return GtaParser(text).parse(); }

std::string write_gocta(const Gocta& a) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& [name, rank] : a.alphabet().symbols()) out << ' ' << name << '/' << rank;
  out << "\nstates:";
  for (const auto& s : a.states()) out << ' ' << s;
  out << "\ninitial: " << a.state_name(a.initial()) << '\n';
  for (const auto& t : a.transitions()) {
    std::string rhs;
    if (t.is_epsilon()) {
      rhs = a.state_name(t.targets.at(0));
    } else {
      rhs = *t.symbol;
      if (!t.targets.empty()) {
        rhs += '(';
        for (std::size_t i = 0; i < t.targets.size(); ++i) {
          if (i != 0) rhs += ',';
          rhs += a.state_name(t.targets[i]);
        }
        rhs += ')';
      }
    }
    out << "trans: " << a.state_name(t.source) << " -[" << predicate_name(t.predicate) << '/'
        << (t.instruction > 0 ? "+" : "") << t.instruction << "]-> " << rhs << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Gocta load_gocta(const std::string& path) { return parse_gocta(read_file(path)); }

void save_gocta(const Gocta& a, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << write_gocta(a);
}

}  // namespace gocta
