#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "gocta/automaton.hpp"
#include "gocta/decide.hpp"
#include "gocta/error.hpp"
#include "gocta/grammars.hpp"
#include "gocta/io.hpp"
#include "gocta/random.hpp"
#include "gocta/semantics.hpp"
#include "gocta/transforms.hpp"

namespace gocta::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  std::size_t budget = 0;
  std::optional<Counter> bound;
  bool json = false;
  std::string semantics = "global";
};

std::size_t default_budget() {
  if (const char* env = std::getenv("GOCTA_NODE_BUDGET")) {
    std::size_t pos = 0;
    std::string text(env);
    unsigned long long value = 0;
    try {
      value = std::stoull(text, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != text.size() || value == 0) throw PreconditionError("GOCTA_NODE_BUDGET must be a positive integer");
    return static_cast<std::size_t>(value);
  }
  return kDefaultNodeBudget;
}

// Inline tree text, or the contents of a file when prefixed with '@'.
Tree read_tree(const std::string& text, const Gocta& a) {
  if (!text.empty() && text.front() == '@') {
    std::string body = read_file(text.substr(1));
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();
    return parse_tree(body, &a.alphabet());
  }
  return parse_tree(text, &a.alphabet());
}

SearchOptions search(const Common& c) { return SearchOptions{c.budget}; }

// Copy semantics has no proven bound here; height * |Q|^4 + 1 is a
// heuristic, overridable with --bound.
Counter copy_bound(const Gocta& a, const Tree& t) {
  Counter q = static_cast<Counter>(a.num_states());
  Counter result = static_cast<Counter>(t.height());
  for (int i = 0; i < 4; ++i) {
    if (__builtin_mul_overflow(result, q, &result)) throw ResourceLimitError("copy bound overflows");
  }
  return result + 1;
}

// A chain of max_size nodes: the tallest tree enumeration can produce.
Tree enumeration_shape(std::size_t max_size) {
  Tree t = Tree::leaf("_");
  for (std::size_t i = 1; i < max_size; ++i) t = Tree::node("_", {t});
  return t;
}

json trace_lines(const std::string& text) {
  json lines = json::array();
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
}

int cmd_member(const Common& c, const std::string& file, const std::string& tree_text, const std::string& method,
               bool method_given, std::ostream& out) {
  Gocta a = load_gocta(file);
  Tree t = read_tree(tree_text, a);
  json report{{"schema", 1}, {"command", "member"}, {"tree", render_tree(t)}, {"semantics", c.semantics}};
  bool verdict = false;
  if (c.semantics == "copy") {
    if (method_given && method != "oracle") throw PreconditionError("copy semantics is only decided by the oracle");
    const auto started = std::chrono::steady_clock::now();
    Counter bound = c.bound ? *c.bound : copy_bound(a, t);
    auto trace = oracle_member_copy(a, t, bound, search(c));
    verdict = trace.has_value();
    report["verdict"] = verdict;
    report["method"] = "oracle";
    report["bound_used"] = bound;
    report["elapsed_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    if (trace) report["witness"] = trace_lines(render_copy_trace(a, *trace));
  } else {
    MemberOptions options;
    options.method = method == "oracle" ? Method::Oracle : Method::Behaviour;
    options.bound = c.bound;
    options.search = search(c);
    MemberReport r = member(a, t, options);
    verdict = r.verdict;
    report["verdict"] = r.verdict;
    report["method"] = method_name(r.method);
    report["bound_used"] = r.bound_used;
    report["prepared_states"] = r.prepared_states;
    report["elapsed_ms"] = std::chrono::duration<double, std::milli>(r.elapsed).count();
    if (r.witness) report["witness"] = trace_lines(render_global_trace(a, *r.witness));
  }
  if (c.json) {
    out << report.dump(2) << '\n';
  } else {
    out << (verdict ? "member" : "non-member") << " (" << report["method"].get<std::string>()
        << ", bound " << report["bound_used"].get<Counter>() << ")\n";
  }
  return verdict ? kMember : kNonMember;
}

int cmd_trace(const Common& c, const std::string& file, const std::string& tree_text, std::ostream& out) {
  Gocta a = load_gocta(file);
  Tree t = read_tree(tree_text, a);
  std::string text;
  if (c.semantics == "copy") {
    auto trace = oracle_member_copy(a, t, c.bound ? *c.bound : copy_bound(a, t), search(c));
    if (!trace) return kNonMember;
    text = render_copy_trace(a, *trace);
  } else {
    Counter bound = c.bound ? *c.bound : counter_bound(prepare_for_decision(a), t);
    auto trace = oracle_member_global(a, t, bound, search(c));
    if (!trace) return kNonMember;
    text = render_global_trace(a, *trace);
  }
  if (c.json) {
    out << json{{"schema", 1}, {"command", "trace"}, {"semantics", c.semantics}, {"lines", trace_lines(text)}}.dump(2)
        << '\n';
  } else {
    out << text;
  }
  return kMember;
}

struct TransformFlags {
  bool zero_accept = false;
  bool normalize = false;
  bool trim = false;
  std::optional<Counter> behaviour;
  bool eps_free = false;
  std::string output;
};

int cmd_transform(const std::string& file, const TransformFlags& f, std::ostream& out) {
  Gocta a = load_gocta(file);
  if (f.zero_accept) a = make_zero_accepting(a);
  if (f.normalize) a = normalize(a);
  if (f.trim) a = trim(a);
  if (f.behaviour) a = behaviour_automaton(a, *f.behaviour);
  if (f.eps_free) a = eliminate_epsilon(a);
  write_text(f.output, write_gocta(a), out);
  return kMember;
}

int cmd_enumerate(const Common& c, const std::string& file, std::size_t max_size, std::ostream& out) {
  Gocta a = load_gocta(file);
  Counter bound = 0;
  if (c.bound) {
    bound = *c.bound;
  } else if (c.semantics == "copy") {
    bound = copy_bound(a, enumeration_shape(max_size));
  } else {
    bound = counter_bound(max_size, prepare_for_decision(a).num_states());
  }
  auto trees = enumerate_language(a, max_size, c.semantics == "copy" ? Semantics::Copy : Semantics::Global, bound,
                                   search(c));
  if (c.json) {
    json list = json::array();
    for (const auto& t : trees) list.push_back(render_tree(t));
    out << json{{"schema", 1}, {"command", "enumerate"}, {"max_size", max_size}, {"bound_used", bound},
                {"trees", list}}
               .dump(2)
        << '\n';
  } else {
    for (const auto& t : trees) out << render_tree(t) << '\n';
  }
  return trees.empty() ? kNonMember : kMember;
}

int cmd_examples(const std::string& dir, Counter factor, std::ostream& out) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, a] : paper_examples(factor)) {
    auto path = (std::filesystem::path(dir) / (name + ".gta")).string();
    save_gocta(a, path);
    out << path << " (" << a.num_states() << " states, " << a.transitions().size() << " transitions)\n";
  }
  return kMember;
}

int cmd_icg_convert(const std::string& file, const std::string& output, std::ostream& out) {
  Icg g = load_icg(file);
  write_text(output, write_gocta(icg_to_gocta(g)), out);
  return kMember;
}

int cmd_validate(const std::string& file, bool as_json, std::ostream& out) {
  Gocta a = load_gocta(file);
  auto diagnostics = validate(a);
  if (as_json) {
    json list = json::array();
    for (const auto& d : diagnostics) list.push_back({{"location", d.location}, {"message", d.message}});
    out << json{{"schema", 1},
                {"command", "validate"},
                {"valid", diagnostics.empty()},
                {"states", a.num_states()},
                {"transitions", a.transitions().size()},
                {"normalized", is_normalized(a)},
                {"fta", is_fta(a)},
                {"diagnostics", list}}
               .dump(2)
        << '\n';
  } else if (diagnostics.empty()) {
    out << "valid: " << a.num_states() << " states, " << a.transitions().size() << " transitions"
        << (is_normalized(a) ? ", normalized" : "") << (is_fta(a) ? ", fta" : "") << '\n';
  } else {
    for (const auto& d : diagnostics) out << d.location << ": " << d.message << '\n';
  }
  return diagnostics.empty() ? kMember : kUsage;
}

// Decider against oracle on random automata; exit 1 on any disagreement.
int cmd_fuzz(const Common& c, std::uint64_t seed, std::size_t count, std::size_t max_size, std::ostream& out) {
  std::size_t cases = 0;
  std::size_t accepted = 0;
  json mismatches = json::array();
  for (std::uint64_t s = seed; s < seed + count; ++s) {
    Gocta a = random_gocta(s);
    for (const auto& t : enumerate_trees(a.alphabet(), max_size)) {
      MemberOptions options;
      options.search = search(c);
      bool behaviour = member(a, t, options).verdict;
      options.method = Method::Oracle;
      bool oracle = member(a, t, options).verdict;
      ++cases;
      accepted += behaviour ? 1 : 0;
      if (behaviour != oracle) mismatches.push_back({{"seed", s}, {"tree", render_tree(t)}, {"behaviour", behaviour}});
    }
  }
  if (c.json) {
    out << json{{"schema", 1},       {"command", "fuzz"},     {"seed", seed},
                {"automata", count}, {"cases", cases},        {"accepted", accepted},
                {"mismatches", mismatches}}
               .dump(2)
        << '\n';
  } else {
    out << cases << " cases, " << accepted << " accepted, " << mismatches.size() << " mismatches\n";
    for (const auto& m : mismatches) out << "  seed " << m["seed"] << ": " << m["tree"].get<std::string>() << '\n';
  }
  return mismatches.empty() ? kMember : kNonMember;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global one-counter tree automata toolkit", "gocta"};
  app.require_subcommand(1);
  Common common;
  std::string file;
  std::string tree_text;

  auto add_common = [&](CLI::App* sub, bool with_semantics) {
    sub->add_option("--budget", common.budget, "Search node budget (default 1000000 or $GOCTA_NODE_BUDGET)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--bound", common.bound, "Counter bound override")->check(CLI::NonNegativeNumber);
    sub->add_flag("--json", common.json, "JSON output");
    if (with_semantics) {
      sub->add_option("--semantics", common.semantics, "global or copy")
          ->check(CLI::IsMember({"global", "copy"}));
    }
  };

  std::string method = "behaviour";
  auto* member_cmd = app.add_subcommand("member", "Decide membership (exit 0 member, 1 non-member)");
  member_cmd->add_option("automaton", file, "Automaton file (.gta)")->required();
  member_cmd->add_option("tree", tree_text, "Tree text or @file.tree")->required();
  auto* method_opt =
      member_cmd->add_option("--method", method, "behaviour or oracle")->check(CLI::IsMember({"behaviour", "oracle"}));
  add_common(member_cmd, true);

  auto* trace_cmd = app.add_subcommand("trace", "Print an accepting computation found by the oracle");
  trace_cmd->add_option("automaton", file)->required();
  trace_cmd->add_option("tree", tree_text)->required();
  add_common(trace_cmd, true);

  TransformFlags flags;
  auto* transform_cmd = app.add_subcommand(
      "transform", "Apply transforms in the order zero-accept, normalize, trim, behaviour, eps-free");
  transform_cmd->add_option("automaton", file)->required();
  transform_cmd->add_flag("--zero-accept", flags.zero_accept);
  transform_cmd->add_flag("--normalize", flags.normalize);
  transform_cmd->add_flag("--trim", flags.trim);
  transform_cmd->add_option("--behaviour", flags.behaviour, "Explicit k-bounded behaviour automaton")
      ->check(CLI::NonNegativeNumber);
  transform_cmd->add_flag("--eps-free", flags.eps_free);
  transform_cmd->add_option("-o,--output", flags.output, "Output file (default stdout)");

  std::size_t max_size = 0;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List accepted trees up to a size");
  enumerate_cmd->add_option("automaton", file)->required();
  enumerate_cmd->add_option("--max-size", max_size)->required()->check(CLI::PositiveNumber);
  add_common(enumerate_cmd, true);

  std::string dir = ".";
  Counter factor = 2;
  auto* examples_cmd = app.add_subcommand("examples", "Write the bundled example automata");
  examples_cmd->add_option("-d,--dir", dir, "Target directory");
  examples_cmd->add_option("--factor", factor, "Factor of the multiplication gadget")->check(CLI::PositiveNumber);

  std::string output;
  auto* icg_cmd = app.add_subcommand("icg-convert", "Reduce an indexed counter grammar to an automaton");
  icg_cmd->add_option("grammar", file, "Grammar file (.icg)")->required();
  icg_cmd->add_option("-o,--output", output);

  auto* validate_cmd = app.add_subcommand("validate", "Check an automaton file");
  validate_cmd->add_option("automaton", file)->required();
  validate_cmd->add_flag("--json", common.json);

  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::size_t fuzz_size = 4;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Compare decider and oracle on random automata");
  fuzz_cmd->add_option("--seed", seed);
  fuzz_cmd->add_option("--count", count)->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--max-size", fuzz_size)->check(CLI::PositiveNumber);
  add_common(fuzz_cmd, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (common.budget == 0) common.budget = default_budget();
    if (member_cmd->parsed()) return cmd_member(common, file, tree_text, method, method_opt->count() > 0, out);
    if (trace_cmd->parsed()) return cmd_trace(common, file, tree_text, out);
    if (transform_cmd->parsed()) return cmd_transform(file, flags, out);
    if (enumerate_cmd->parsed()) return cmd_enumerate(common, file, max_size, out);
    if (examples_cmd->parsed()) return cmd_examples(dir, factor, out);
    if (icg_cmd->parsed()) return cmd_icg_convert(file, output, out);
    if (validate_cmd->parsed()) return cmd_validate(file, common.json, out);
    if (fuzz_cmd->parsed()) return cmd_fuzz(common, seed, count, fuzz_size, out);
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace gocta::cli
