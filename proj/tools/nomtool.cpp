#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nominal/errors.hpp"
#include "nominal/expr.hpp"
#include "nominal/io.hpp"
#include "nominal/oracle.hpp"

using namespace nominal;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

/// Command output: an optional bare headline and ordered key/value pairs,
/// rendered as text lines or as one JSON object.
struct Report {
  std::string headline;
  Json fields = Json::object();

  void print(bool json) const {
    if (json) {
      Json out = Json::object();
      if (!headline.empty())
        out["result"] = headline;
      for (auto& [k, v] : fields.items())
        out[k] = v;
      std::cout << out.dump(2) << "\n";
      return;
    }
    if (!headline.empty())
      std::cout << headline << "\n";
    for (auto& [k, v] : fields.items()) {
      if (v.is_array()) {
        for (const Json& item : v)
          std::cout << k << ": " << scalar(item) << "\n";
      } else {
        std::cout << k << ": " << scalar(v) << "\n";
      }
    }
  }

  static std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }
};

struct Automaton {
  FileKind kind = FileKind::Dfa;
  std::optional<FraisseDFA> dfa;
  std::optional<NominalNFA> nfa;
  std::optional<FMA> fma;

  const Symmetry& symmetry() const {
    if (dfa)
      return *dfa->symmetry;
    if (nfa)
      return *nfa->symmetry;
    return symmetry_for(Backend::Equality);
  }
};

const char* kind_name(FileKind k) {
  switch (k) {
  case FileKind::Dfa:
    return "dfa";
  case FileKind::Nfa:
    return "nfa";
  case FileKind::Fma:
    return "fma";
  }
  return "";
}

Automaton load(const std::string& path) {
  std::string text = read_text_file(path);
  Automaton a;
  try {
    a.kind = detect_kind(text);
    switch (a.kind) {
    case FileKind::Dfa:
      a.dfa = parse_dfa(text);
      break;
    case FileKind::Nfa:
      a.nfa = parse_nfa(text);
      break;
    case FileKind::Fma:
      a.fma = parse_fma(text);
      break;
    }
  } catch (const ParseError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return a;
}

FraisseDFA load_dfa(const std::string& path, const char* command) {
  Automaton a = load(path);
  if (!a.dfa)
    throw UsageError(std::string(command) + " expects a dfa file, got " + kind_name(a.kind) + " (" + path + ")");
  return *a.dfa;
}

void emit(const std::string& text, const std::string& out, Report& r, bool json) {
  if (out.empty()) {
    if (json)
      r.fields["automaton"] = text;
    else
      std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f)
    throw UsageError("cannot write '" + out + "'");
  f << text;
  r.fields["output"] = out;
}

std::string format_orbit(const Symmetry& symm, const OrbitRepr& o) {
  std::string s = "struct(" + std::to_string(o.carrier());
  if (!o.shape.facts().empty())
    s += ", " + symm.describe(o.shape);
  s += ")";
  if (o.sym.order() > 1) {
    std::string gens;
    for (const Perm& g : o.sym.generators())
      gens += (gens.empty() ? "" : "; ") + g.to_cycles();
    s = "sym(" + s + ", " + gens + ")";
  }
  return s;
}

/// Accepted words over a finite domain, keyed by (length, text) so the
/// first element of a difference is a shortest divergence.
using Language = std::set<std::pair<std::size_t, std::string>>;

struct Languages {
  Language symbolic;
  Language oracle;
  std::size_t words = 0;
};

Language named(const std::set<LetterWord>& ws, const std::vector<std::string>& names) {
  Language out;
  for (const LetterWord& w : ws) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i)
      s += (i ? " " : "") + names[static_cast<std::size_t>(w[i])];
    out.emplace(w.size(), s);
  }
  return out;
}

std::size_t word_count(std::size_t letters, int len) {
  std::size_t total = 0, layer = 1;
  for (int i = 0; i <= len; ++i, layer *= letters)
    total += layer;
  return total;
}

Languages languages(const Automaton& a, const FiniteDomain& dom, int len, std::size_t pool_cap) {
  Languages out;
  std::vector<std::string> names;
  if (a.dfa) {
    for (const DataValue& v : dom.values)
      names.push_back(v.to_string());
    std::set<LetterWord> sym;
    for (const LetterWord& w : all_words(static_cast<int>(dom.values.size()), len)) {
      Word word;
      for (int x : w)
        word.push_back(dom.values[static_cast<std::size_t>(x)]);
      if (run(*a.dfa, word))
        sym.insert(w);
    }
    out.symbolic = named(sym, names);
    out.oracle = named(language_upto(restrict_dfa(*a.dfa, dom), len), names);
  } else if (a.nfa) {
    std::vector<Letter> letters = letters_over(a.nfa->alphabet, dom.values);
    for (const Letter& l : letters)
      names.push_back(format_letter(a.nfa->alphabet, l));
    std::set<LetterWord> sym;
    for (const LetterWord& w : all_words(static_cast<int>(letters.size()), len)) {
      LetterSeq seq;
      for (int x : w)
        seq.push_back(letters[static_cast<std::size_t>(x)]);
      Verdict v = nfa_member(*a.nfa, seq, pool_cap).verdict;
      if (v == Verdict::Inconclusive)
        throw ValidationError("membership of '" + format_letters(a.nfa->alphabet, seq) +
                              "' is inconclusive under the pool cap");
      if (v == Verdict::Accept)
        sym.insert(w);
    }
    out.symbolic = named(sym, names);
    out.oracle = named(language_upto(restrict_nfa(*a.nfa, dom, letters), len), names);
  } else {
    const FMA& m = *a.fma;
    FmaWord letters;
    for (std::size_t l = 0; l < m.labels.size(); ++l)
      for (const DataValue& v : dom.values) {
        letters.push_back(FmaLetter{static_cast<int>(l), v});
        names.push_back(format_fma_word(m, {letters.back()}));
      }
    std::set<LetterWord> sym;
    for (const LetterWord& w : all_words(static_cast<int>(letters.size()), len)) {
      FmaWord word;
      for (int x : w)
        word.push_back(letters[static_cast<std::size_t>(x)]);
      if (fma_accepts(m, word))
        sym.insert(w);
    }
    out.symbolic = named(sym, names);
    out.oracle = named(language_upto(restrict_fma(m, dom), len), names);
  }
  out.words = word_count(names.size(), len);
  return out;
}

std::optional<std::string> first_difference(const Language& a, const Language& b) {
  std::optional<std::pair<std::size_t, std::string>> best;
  for (const auto& w : a)
    if (!b.count(w) && (!best || w < *best))
      best = w;
  for (const auto& w : b)
    if (!a.count(w) && (!best || w < *best))
      best = w;
  if (!best)
    return std::nullopt;
  return best->second;
}

std::size_t difference_size(const Language& a, const Language& b) {
  std::size_t n = 0;
  for (const auto& w : a)
    n += !b.count(w);
  for (const auto& w : b)
    n += !a.count(w);
  return n;
}

int cmd_run(const std::string& file, const std::string& word, std::size_t pool_cap, Report& r) {
  Automaton a = load(file);
  bool accepted = false;
  if (a.dfa) {
    accepted = run(*a.dfa, parse_word(*a.dfa->symmetry, word));
  } else if (a.nfa) {
    MemberResult m = nfa_member(*a.nfa, parse_letters(a.nfa->alphabet, word), pool_cap);
    r.fields["pool"] = m.pool;
    if (m.verdict == Verdict::Inconclusive) {
      r.headline = verdict_name(m.verdict);
      r.fields["pool_cap"] = pool_cap;
      return kError;
    }
    accepted = m.verdict == Verdict::Accept;
  } else {
    accepted = fma_accepts(*a.fma, parse_fma_word(*a.fma, word));
  }
  r.headline = accepted ? "accept" : "reject";
  return accepted ? kOk : kNegative;
}

int cmd_minimize(const std::string& file, const std::string& out, bool json, Report& r) {
  FraisseDFA d = load_dfa(file, "minimize");
  FraisseDFA m = minimize(d);
  r.fields["input_states"] = d.size();
  r.fields["states"] = m.size();
  std::string text = write_dfa(m);
  if (out.empty() && !json) {
    std::cout << text;
    r.fields = Json::object();
    return kOk;
  }
  emit(text, out, r, json);
  return kOk;
}

int cmd_equiv(const std::string& left, const std::string& right, Report& r) {
  FraisseDFA a = load_dfa(left, "equiv");
  FraisseDFA b = load_dfa(right, "equiv");
  EquivalenceResult e = equivalent(a, b);
  r.fields["equivalent"] = e.equivalent;
  if (!e.equivalent)
    r.fields["counterexample"] = format_word(e.counterexample);
  return e.equivalent ? kOk : kNegative;
}

int cmd_empty(const std::string& file, Report& r) {
  Automaton a = load(file);
  bool empty = true;
  std::string witness;
  if (a.dfa) {
    EmptinessResult e = emptiness(*a.dfa);
    empty = e.empty;
    witness = format_word(e.witness);
  } else {
    NominalNFA n = a.nfa ? *a.nfa : fma_to_nfa(*a.fma);
    NfaEmptiness e = nfa_emptiness(n);
    empty = e.empty;
    if (a.nfa) {
      witness = format_letters(n.alphabet, e.witness);
    } else {
      FmaWord w;
      for (const Letter& l : e.witness)
        w.push_back(FmaLetter{l.orbit, l.valuation.front()});
      witness = format_fma_word(*a.fma, w);
    }
  }
  r.fields["empty"] = empty;
  if (!empty)
    r.fields["witness"] = witness;
  return empty ? kOk : kNegative;
}

int cmd_product(const std::string& left, const std::string& right, const std::string& op, const std::string& out,
                bool json, Report& r) {
  Automaton a = load(left);
  Automaton b = load(right);
  std::string text;
  if (a.dfa && b.dfa) {
    FraisseDFA p = product_dfa(*a.dfa, *b.dfa, bool_op_named(op));
    r.fields["states"] = p.size();
    text = write_dfa(p);
  } else if (a.nfa && b.nfa) {
    NominalNFA p;
    if (op == "or" || op == "union")
      p = nfa_union(*a.nfa, *b.nfa);
    else if (op == "concat")
      p = nfa_concat(*a.nfa, *b.nfa);
    else
      throw UsageError("nfa products support --op or and --op concat");
    r.fields["state_orbits"] = p.states.size();
    text = write_nfa(p);
  } else {
    throw UsageError("product expects two dfa files or two nfa files");
  }
  if (out.empty() && !json) {
    std::cout << text;
    return kOk;
  }
  emit(text, out, r, json);
  return kOk;
}

int cmd_orbits(const std::string& expr, const std::string& symmetry, bool list, Report& r) {
  const Symmetry& symm = symmetry_named(symmetry);
  NomSet set = eval_expr(symm, parse_expr(expr));
  r.fields["orbits"] = set.size();
  if (list) {
    Json items = Json::array();
    for (const OrbitRepr& o : set.orbits)
      items.push_back(format_orbit(symm, o));
    r.fields["orbit"] = items;
  }
  return kOk;
}

int cmd_annotations(const std::string& file, const std::string& state, Report& r) {
  FraisseDFA d = load_dfa(file, "annotations");
  const Symmetry& symm = *d.symmetry;
  std::vector<int> which;
  if (state.empty()) {
    for (int q = 0; q < d.size(); ++q)
      which.push_back(q);
  } else {
    int q = d.state_index(state);
    if (q < 0)
      throw UsageError("unknown state '" + state + "'");
    which.push_back(q);
  }
  Json items = Json::array();
  std::size_t total = 0;
  for (int q : which) {
    const DfaState& s = d.states[static_cast<std::size_t>(q)];
    for (std::size_t k = 0; k < s.annotations.size(); ++k) {
      const DfaTransition& t = s.trans[k];
      std::string assign;
      for (std::size_t i = 0; i < t.witness.size(); ++i) {
        int w = t.witness[i];
        std::string src = w == s.annotations[k].letter_index() ? "*" : std::to_string(w);
        assign += (i ? ", " : "") + std::to_string(i) + ":=" + src;
      }
      items.push_back(s.name + " " + describe_annotation(symm, s.annotations[k]) + " -> " +
                      d.states[static_cast<std::size_t>(t.target)].name + " [" + assign + "]");
      ++total;
    }
  }
  r.fields["annotations"] = total;
  r.fields["transition"] = items;
  return kOk;
}

int cmd_convert(const std::string& command, const std::string& file, const std::string& out, bool json,
                Report& r) {
  Automaton a = load(file);
  std::string text;
  if (command == "fma2nfa") {
    if (!a.fma)
      throw UsageError("fma2nfa expects an fma file, got " + std::string(kind_name(a.kind)));
    NominalNFA n = fma_to_nfa(*a.fma);
    r.fields["state_orbits"] = n.states.size();
    text = write_nfa(n);
  } else if (command == "nfa2fma") {
    if (!a.nfa)
      throw UsageError("nfa2fma expects an nfa file, got " + std::string(kind_name(a.kind)));
    FMA m = nfa_to_fma(*a.nfa);
    r.fields["controls"] = m.controls.size();
    r.fields["registers"] = m.registers;
    text = write_fma(m);
  } else {
    FraisseDFA d = load_dfa(file, "dfa2fma");
    FMA m = dfa_to_det_fma(d);
    r.fields["controls"] = m.controls.size();
    r.fields["registers"] = m.registers;
    text = write_fma(m);
  }
  if (out.empty() && !json) {
    std::cout << text;
    return kOk;
  }
  emit(text, out, r, json);
  return kOk;
}

struct OracleArgs {
  std::string file;
  std::string against;
  std::string domain;
  int maxlen = 5;
  std::string expr;
  std::string symmetry = "equality";
  std::size_t pool_cap = 0;
};

int cmd_oracle(const OracleArgs& o, Report& r) {
  if (!o.expr.empty()) {
    if (!o.file.empty())
      throw UsageError("oracle takes either FILE or --expr");
    const Symmetry& symm = symmetry_named(o.symmetry);
    Expr e = parse_expr(o.expr);
    FiniteDomain dom = o.domain.empty() ? default_domain(symm, 5) : parse_domain(symm, o.domain);
    OrbitCount brute = orbit_count_bruteforce(symm, e, dom);
    int symbolic = eval_expr(symm, e).size();
    r.fields["domain"] = dom.values.size();
    r.fields["symbolic"] = symbolic;
    r.fields["bruteforce"] = brute.count;
    if (brute.domain_small)
      r.fields["warning"] = "domain too small for the count to stabilize";
    bool agree = brute.count == static_cast<std::size_t>(symbolic);
    r.fields["agree"] = agree;
    return agree ? kOk : kNegative;
  }
  if (o.file.empty())
    throw UsageError("oracle needs FILE or --expr");
  if (o.maxlen < 0)
    throw UsageError("--maxlen must be non-negative");
  Automaton a = load(o.file);
  const Symmetry& symm = a.symmetry();
  FiniteDomain dom = o.domain.empty()
                         ? default_domain(symm, symm.backend() == Backend::Order ? 4 : 3)
                         : parse_domain(symm, o.domain);
  Languages la = languages(a, dom, o.maxlen, o.pool_cap);
  r.fields["domain"] = dom.values.size();
  r.fields["words"] = la.words;
  r.fields["accepted"] = la.symbolic.size();
  r.fields["oracle_accepted"] = la.oracle.size();
  std::size_t divergences = difference_size(la.symbolic, la.oracle);
  std::optional<std::string> first = first_difference(la.symbolic, la.oracle);
  if (!o.against.empty()) {
    Automaton b = load(o.against);
    if (&b.symmetry() != &symm)
      throw UsageError("automata use different symmetries");
    Languages lb = languages(b, dom, o.maxlen, o.pool_cap);
    r.fields["against_accepted"] = lb.symbolic.size();
    divergences += difference_size(lb.symbolic, lb.oracle) + difference_size(la.symbolic, lb.symbolic);
    if (!first)
      first = first_difference(lb.symbolic, lb.oracle);
    if (!first)
      first = first_difference(la.symbolic, lb.symbolic);
  }
  r.fields["divergences"] = divergences;
  if (first)
    r.fields["first_divergence"] = *first;
  return divergences == 0 ? kOk : kNegative;
}

int cmd_validate(const std::string& file, Report& r) {
  Automaton a = load(file);
  r.headline = "valid";
  r.fields["kind"] = kind_name(a.kind);
  if (a.dfa) {
    r.fields["symmetry"] = a.dfa->symmetry->name();
    r.fields["states"] = a.dfa->size();
  } else if (a.nfa) {
    r.fields["symmetry"] = a.nfa->symmetry->name();
    r.fields["state_orbits"] = a.nfa->states.size();
    r.fields["alphabet_orbits"] = a.nfa->alphabet.size();
  } else {
    r.fields["symmetry"] = "equality";
    r.fields["controls"] = a.fma->controls.size();
    r.fields["registers"] = a.fma->registers;
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit-finite nominal sets and automata over infinite alphabets"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  std::size_t pool_cap = default_pool_cap();
  app.add_option("--pool-cap", pool_cap, "Largest value pool for nfa membership");

  std::string file, file2, word, out, op = "and", expr, symmetry = "equality", state;
  bool list = false;
  OracleArgs oracle;

  CLI::App* run_cmd = app.add_subcommand("run", "Run an automaton on a word");
  run_cmd->add_option("file", file)->required();
  run_cmd->add_option("--word", word, "Space-separated letters")->required();

  CLI::App* minimize_cmd = app.add_subcommand("minimize", "Minimize a dfa");
  minimize_cmd->add_option("file", file)->required();
  minimize_cmd->add_option("-o,--output", out);

  CLI::App* equiv_cmd = app.add_subcommand("equiv", "Decide equivalence of two dfas");
  equiv_cmd->add_option("left", file)->required();
  equiv_cmd->add_option("right", file2)->required();

  CLI::App* empty_cmd = app.add_subcommand("empty", "Decide emptiness");
  empty_cmd->add_option("file", file)->required();

  CLI::App* product_cmd = app.add_subcommand("product", "Boolean product of two automata");
  product_cmd->add_option("left", file)->required();
  product_cmd->add_option("right", file2)->required();
  product_cmd->add_option("--op", op, "and, or, xor (dfa); or, concat (nfa)");
  product_cmd->add_option("-o,--output", out);

  CLI::App* orbits_cmd = app.add_subcommand("orbits", "Count the orbits of a nominal set expression");
  orbits_cmd->add_option("--expr", expr)->required();
  orbits_cmd->add_option("--symmetry", symmetry);
  orbits_cmd->add_flag("--list", list, "Print each orbit");

  CLI::App* annotations_cmd = app.add_subcommand("annotations", "List the annotations of dfa states");
  annotations_cmd->add_option("file", file)->required();
  annotations_cmd->add_option("--state", state);

  std::vector<CLI::App*> converters;
  for (const char* name : {"fma2nfa", "nfa2fma", "dfa2fma"}) {
    CLI::App* c = app.add_subcommand(name, "Translate between automaton models");
    c->add_option("file", file)->required();
    c->add_option("-o,--output", out);
    converters.push_back(c);
  }

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Cross-check against brute force on a finite domain");
  oracle_cmd->add_option("file", oracle.file);
  oracle_cmd->add_option("--domain", oracle.domain, "Comma-separated values");
  oracle_cmd->add_option("--maxlen", oracle.maxlen);
  oracle_cmd->add_option("--against", oracle.against);
  oracle_cmd->add_option("--expr", oracle.expr);
  oracle_cmd->add_option("--symmetry", oracle.symmetry);

  CLI::App* validate_cmd = app.add_subcommand("validate", "Parse and validate a file");
  validate_cmd->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  bool json = format == "json";
  Report report;
  int code = kOk;
  try {
    if (run_cmd->parsed())
      code = cmd_run(file, word, pool_cap, report);
    else if (minimize_cmd->parsed())
      code = cmd_minimize(file, out, json, report);
    else if (equiv_cmd->parsed())
      code = cmd_equiv(file, file2, report);
    else if (empty_cmd->parsed())
      code = cmd_empty(file, report);
    else if (product_cmd->parsed())
      code = cmd_product(file, file2, op, out, json, report);
    else if (orbits_cmd->parsed())
      code = cmd_orbits(expr, symmetry, list, report);
    else if (annotations_cmd->parsed())
      code = cmd_annotations(file, state, report);
    else if (oracle_cmd->parsed()) {
      oracle.pool_cap = pool_cap;
      code = cmd_oracle(oracle, report);
    } else if (validate_cmd->parsed())
      code = cmd_validate(file, report);
    else
      for (CLI::App* c : converters)
        if (c->parsed())
          code = cmd_convert(c->get_name(), file, out, json, report);
  } catch (const std::exception& e) {
    if (json)
      std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  report.print(json);
  return code;
}
