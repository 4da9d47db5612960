#include "nominal/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "io_common.hpp"

namespace nominal {

using text::fail;
using text::Line;
using text::Token;
using text::TokenKind;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FileKind detect_kind(std::string_view src) {
  for (const Line& l : text::lex(src)) {
    const std::string& w = l.tokens.front().text;
    if (w == "symmetry")
      continue;
    if (w == "dfa")
      return FileKind::Dfa;
    if (w == "nfa")
      return FileKind::Nfa;
    if (w == "fma")
      return FileKind::Fma;
    fail(l.tokens.front(), "expected 'dfa', 'nfa' or 'fma', got '" + w + "'");
  }
  throw ParseError("empty automaton file", 1, 1);
}

std::vector<Fact> parse_facts(const Symmetry& symm, std::string_view src,
                              const std::function<int(const std::string&)>& index) {
  std::vector<Fact> out;
  for (const std::string& item : text::split(src, ";")) {
    if (symm.backend() == Backend::Graph) {
      if (item.size() < 5 || item[0] != 'E' || item[1] != '(' || item.back() != ')')
        throw UsageError("expected an edge E(a,b), got '" + item + "'");
      auto ends = text::split(std::string_view(item).substr(2, item.size() - 3), ",");
      if (ends.size() != 2)
        throw UsageError("an edge joins exactly two registers: '" + item + "'");
      out.push_back({0, {index(ends[0]), index(ends[1])}});
    } else if (symm.backend() == Backend::Order) {
      std::vector<std::string> chain;
      std::size_t start = 0;
      for (std::size_t i = 0; i <= item.size(); ++i)
        if (i == item.size() || item[i] == '<') {
          chain.push_back(text::trim(std::string_view(item).substr(start, i - start)));
          start = i + 1;
        }
      if (chain.size() < 2)
        throw UsageError("expected a chain such as 0<1, got '" + item + "'");
      for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        out.push_back({0, {index(chain[i]), index(chain[i + 1])}});
    } else {
      throw UsageError("the equality symmetry has no relations, got '" + item + "'");
    }
  }
  return out;
}

std::vector<Perm> parse_generators(std::string_view src, int n) {
  std::vector<Perm> out;
  for (const std::string& g : text::split(src, ";"))
    out.push_back(Perm::from_cycles(g, n));
  return out;
}

Word parse_word(const Symmetry& symm, std::string_view src) {
  Word w;
  for (const std::string& item : text::split(src, " \t,"))
    w.push_back(symm.parse_value(item));
  return w;
}

std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i)
    out += (i ? " " : "") + w[i].to_string();
  return out;
}

namespace text {

const Token& expect_word(const Line& l, std::size_t i, const std::string& what) {
  if (i >= l.tokens.size())
    fail(l, "expected " + what + " at end of line");
  if (l.tokens[i].kind != TokenKind::Word)
    fail(l.tokens[i], "expected " + what);
  return l.tokens[i];
}

std::size_t parse_header(const std::vector<Line>& lines, const std::string& keyword,
                         const Symmetry*& symm) {
  symm = &symmetry_for(Backend::Equality);
  std::size_t i = 0;
  if (i < lines.size() && lines[i].tokens.front().text == "symmetry") {
    const Token& t = expect_word(lines[i], 1, "a symmetry name");
    try {
      symm = &symmetry_named(t.text);
    } catch (const UsageError& e) {
      fail(t, e.what());
    }
    if (lines[i].tokens.size() > 2)
      fail(lines[i].tokens[2], "unexpected token after symmetry name");
    ++i;
  }
  if (i >= lines.size())
    throw ParseError("missing '" + keyword + "' line", 1, 1);
  if (lines[i].tokens.front().text != keyword)
    fail(lines[i].tokens.front(), "expected '" + keyword + "'");
  return i + 1;
}

StateDecl parse_state_decl(const Symmetry& symm, const Line& l) {
  StateDecl d;
  d.line = &l;
  d.name = expect_word(l, 1, "a state name").text;
  if (expect_word(l, 2, "'registers'").text != "registers")
    fail(l.tokens[2], "expected 'registers'");
  int n = to_index(expect_word(l, 3, "a register count"), "a register count");
  if (n > 8)
    fail(l.tokens[3], "at most 8 registers per state are supported");
  std::vector<Fact> facts;
  std::vector<Perm> gens;
  for (std::size_t i = 4; i < l.tokens.size(); i += 2) {
    const Token& key = expect_word(l, i, "'rel' or 'sym'");
    if (i + 1 >= l.tokens.size() || l.tokens[i + 1].kind != TokenKind::String)
      fail(key, "expected a quoted value after '" + key.text + "'");
    const Token& val = l.tokens[i + 1];
    try {
      if (key.text == "rel")
        facts = parse_facts(symm, val.text, [&](const std::string& s) {
          Token t{TokenKind::Word, s, val.line, val.column};
          int k = to_index(t, "a register index");
          if (k >= n)
            throw UsageError("register " + s + " outside 0.." + std::to_string(n - 1));
          return k;
        });
      else if (key.text == "sym")
        gens = parse_generators(val.text, n);
      else
        fail(key, "expected 'rel' or 'sym', got '" + key.text + "'");
    } catch (const UsageError& e) {
      fail(val, e.what());
    }
  }
  try {
    d.user_shape = symm.close_facts(n, facts);
  } catch (const UsageError& e) {
    fail(l, e.what());
  }
  if (!symm.member(d.user_shape))
    fail(l, "shape of state '" + d.name + "' is not a member of the " + symm.name() +
                " class (order shapes must be total)");
  for (const Perm& g : gens)
    if (relabel(d.user_shape, g) != d.user_shape)
      fail(l, "sym generator " + g.to_cycles() + " is not an automorphism of the state shape");
  auto [orbit, kappa] = make_orbit_relabeled(symm, d.user_shape, closure(gens, n), d.name);
  d.orbit = std::move(orbit);
  d.kappa = std::move(kappa);
  return d;
}

std::string write_state_decl(const Symmetry& symm, const OrbitRepr& o, const std::string& name) {
  std::string out = "state " + name + " registers " + std::to_string(o.carrier());
  if (!o.shape.facts().empty())
    out += " rel \"" + symm.describe(o.shape) + "\"";
  if (o.sym.order() > 1) {
    std::string gens;
    for (const Perm& g : o.sym.generators())
      gens += (gens.empty() ? "" : "; ") + g.to_cycles();
    out += " sym \"" + gens + "\"";
  }
  return out;
}

} // namespace text

namespace {

std::vector<int> extend_perm(const Perm& s) {
  std::vector<int> out = s.images();
  out.push_back(s.size());
  return out;
}

struct ParsedTransition {
  int annotation = -1;
  DfaTransition trans;
  const Line* line = nullptr;
};

/// Canonical annotation of a user-written annotation, with the state-symmetry
/// element mapping the canonical annotated carrier onto the user's one.
std::pair<int, std::vector<int>> match_annotation(const Symmetry& symm, const text::StateDecl& st,
                                                  const std::vector<Annotation>& anns,
                                                  const Line& l, std::size_t& pos, int& letter) {
  int n = st.orbit.carrier();
  const Token& head = text::expect_word(l, pos, "an annotation");
  const auto& elems = st.orbit.sym.elements();
  if (head.text == "reg") {
    int r = text::to_index(text::expect_word(l, pos + 1, "a register index"), "a register index");
    if (r >= n)
      fail(l.tokens[pos + 1], "state '" + st.name + "' has no register " + std::to_string(r));
    pos += 2;
    int c = st.kappa(r);
    letter = c;
    for (std::size_t k = 0; k < anns.size(); ++k)
      if (anns[k].distinguished)
        for (const Perm& s : elems)
          if (s(anns[k].reg) == c)
            return {static_cast<int>(k), s.images()};
    fail(head, "internal error: register annotation not found");
  }
  if (head.text.rfind("ext{", 0) != 0 || head.text.back() != '}')
    fail(head, "expected 'ext{...}' or 'reg N', got '" + head.text + "'");
  ++pos;
  std::string body = head.text.substr(4, head.text.size() - 5);
  FinStruct user;
  try {
    std::vector<Fact> facts = st.user_shape.facts();
    for (Fact& f : parse_facts(symm, body, [&](const std::string& s) {
           if (s == "*")
             return n;
           Token t{TokenKind::Word, s, head.line, head.column};
           int k = text::to_index(t, "a register index or *");
           if (k >= n)
             throw UsageError("register " + s + " outside 0.." + std::to_string(n - 1));
           return k;
         }))
      facts.push_back(std::move(f));
    user = symm.close_facts(n + 1, std::move(facts));
  } catch (const UsageError& e) {
    fail(head, e.what());
  }
  if (!symm.member(user) || restrict_prefix(user, n) != st.user_shape)
    fail(head, "annotation " + head.text + " does not determine a one-point extension of state '" +
                   st.name + "'");
  FinStruct canon = relabel(user, extend_perm(st.kappa));
  letter = n;
  for (std::size_t k = 0; k < anns.size(); ++k)
    if (!anns[k].distinguished)
      for (const Perm& s : elems) {
        std::vector<int> se = extend_perm(s);
        if (restrict(canon, se) == anns[k].structure)
          return {static_cast<int>(k), se};
      }
  fail(head, "internal error: extension annotation not found");
}

ParsedTransition parse_transition(const Symmetry& symm, const std::vector<text::StateDecl>& states,
                                  const std::map<std::string, int>& ids,
                                  const std::vector<std::vector<Annotation>>& anns, const Line& l) {
  auto state_of = [&](const Token& t) {
    auto it = ids.find(t.text);
    if (it == ids.end())
      fail(t, "unknown state '" + t.text + "'");
    return it->second;
  };
  int p = state_of(text::expect_word(l, 1, "a state name"));
  const text::StateDecl& src = states[static_cast<std::size_t>(p)];
  std::size_t pos = 2;
  int letter = -1;
  auto [ann, sigma] = match_annotation(symm, src, anns[static_cast<std::size_t>(p)], l, pos, letter);
  if (pos >= l.tokens.size() || l.tokens[pos].kind != TokenKind::Arrow)
    fail(pos < l.tokens.size() ? l.tokens[pos] : l.tokens.back(), "expected '->'");
  int q = state_of(text::expect_word(l, pos + 1, "a target state"));
  const text::StateDecl& tgt = states[static_cast<std::size_t>(q)];
  int m = tgt.orbit.carrier();
  std::string assign;
  const Token* at = &l.tokens[pos + 1];
  if (pos + 2 < l.tokens.size()) {
    at = &l.tokens[pos + 2];
    if (at->kind != TokenKind::Bracket)
      fail(*at, "expected an assignment [reg:=src, ...]");
    assign = at->text;
    if (pos + 3 < l.tokens.size())
      fail(l.tokens[pos + 3], "unexpected token after the assignment");
  }
  int n = src.orbit.carrier();
  std::vector<int> w0(static_cast<std::size_t>(m), -1);
  for (const std::string& item : text::split(assign, ",")) {
    auto eq = item.find(":=");
    if (eq == std::string::npos)
      fail(*at, "expected 'reg:=src' in assignment, got '" + item + "'");
    Token lhs{TokenKind::Word, text::trim(item.substr(0, eq)), at->line, at->column};
    Token rhs{TokenKind::Word, text::trim(item.substr(eq + 2)), at->line, at->column};
    int b = text::to_index(lhs, "a target register");
    if (b >= m)
      fail(*at, "state '" + tgt.name + "' has no register " + lhs.text);
    if (w0[static_cast<std::size_t>(b)] >= 0)
      fail(*at, "register " + lhs.text + " assigned twice");
    int v;
    if (rhs.text == "*") {
      v = letter;
    } else {
      int s = text::to_index(rhs, "a source register or *");
      if (s >= n)
        fail(*at, "state '" + src.name + "' has no register " + rhs.text);
      v = src.kappa(s);
    }
    w0[static_cast<std::size_t>(b)] = v;
  }
  for (int b = 0; b < m; ++b)
    if (w0[static_cast<std::size_t>(b)] < 0)
      fail(*at, "assignment must cover all " + std::to_string(m) + " registers of state '" +
                    tgt.name + "'");
  std::vector<int> sigma_inv(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i)
    sigma_inv[static_cast<std::size_t>(sigma[i])] = static_cast<int>(i);
  Perm kq_inv = tgt.kappa.inverse();
  std::vector<int> w(static_cast<std::size_t>(m));
  for (int b = 0; b < m; ++b)
    w[static_cast<std::size_t>(b)] =
        sigma_inv[static_cast<std::size_t>(w0[static_cast<std::size_t>(kq_inv(b))])];
  const Annotation& a = anns[static_cast<std::size_t>(p)][static_cast<std::size_t>(ann)];
  if (!is_embedding(w, tgt.orbit.shape, a.structure))
    fail(*at, "assignment does not embed the shape of state '" + tgt.name +
                  "' into the annotated structure");
  if (!commutes(w, a.local_sym, tgt.orbit.sym))
    fail(*at, "assignment is not invariant under the local symmetry of the annotation");
  return ParsedTransition{ann, DfaTransition{q, canonical_witness(w, tgt.orbit.sym)}, &l};
}

} // namespace

FraisseDFA parse_dfa(std::string_view src) {
  std::vector<Line> lines = text::lex(src);
  const Symmetry* symm = nullptr;
  std::size_t i = text::parse_header(lines, "dfa", symm);
  std::vector<text::StateDecl> states;
  std::map<std::string, int> ids;
  std::vector<const Line*> trans_lines;
  const Token* initial = nullptr;
  std::vector<const Token*> accepts;
  for (; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const Token& key = l.tokens.front();
    if (key.text == "state") {
      text::StateDecl d = text::parse_state_decl(*symm, l);
      if (ids.count(d.name))
        fail(l.tokens[1], "state '" + d.name + "' declared twice");
      ids[d.name] = static_cast<int>(states.size());
      states.push_back(std::move(d));
    } else if (key.text == "initial") {
      if (initial)
        fail(key, "only one initial state is allowed in a dfa");
      initial = &text::expect_word(l, 1, "a state name");
      if (l.tokens.size() > 2)
        fail(l.tokens[2], "only one initial state is allowed in a dfa");
    } else if (key.text == "accept") {
      for (std::size_t k = 1; k < l.tokens.size(); ++k)
        accepts.push_back(&text::expect_word(l, k, "a state name"));
    } else if (key.text == "on") {
      trans_lines.push_back(&l);
    } else {
      fail(key, "unknown directive '" + key.text + "'");
    }
  }
  if (states.empty())
    throw ParseError("no states declared", lines.empty() ? 1 : lines.back().number, 1);
  if (!initial)
    throw ParseError("missing 'initial' line", lines.back().number, 1);
  auto state_of = [&](const Token& t) {
    auto it = ids.find(t.text);
    if (it == ids.end())
      fail(t, "unknown state '" + t.text + "'");
    return it->second;
  };
  int init = state_of(*initial);
  if (states[static_cast<std::size_t>(init)].orbit.carrier() != 0)
    fail(*initial, "initial state '" + initial->text + "' must have no registers");
  std::vector<bool> acc(states.size(), false);
  for (const Token* t : accepts)
    acc[static_cast<std::size_t>(state_of(*t))] = true;

  std::vector<std::vector<Annotation>> anns;
  for (const text::StateDecl& d : states)
    anns.push_back(enumerate_annotations(*symm, d.orbit));
  std::vector<std::vector<std::optional<ParsedTransition>>> table(states.size());
  for (std::size_t q = 0; q < states.size(); ++q)
    table[q].resize(anns[q].size());
  for (const Line* l : trans_lines) {
    ParsedTransition t = parse_transition(*symm, states, ids, anns, *l);
    int p = ids.at(l->tokens[1].text);
    auto& slot = table[static_cast<std::size_t>(p)][static_cast<std::size_t>(t.annotation)];
    if (slot)
      fail(*l, "duplicate transition for annotation " +
                   describe_annotation(*symm, anns[static_cast<std::size_t>(p)][static_cast<std::size_t>(t.annotation)]) +
                   " of state '" + states[static_cast<std::size_t>(p)].name + "' (first given on line " +
                   std::to_string(slot->line->number) + ")");
    slot = std::move(t);
  }
  for (std::size_t q = 0; q < states.size(); ++q) {
    Perm inv = states[q].kappa.inverse();
    for (std::size_t k = 0; k < anns[q].size(); ++k)
      if (!table[q][k])
        fail(*states[q].line,
             "state '" + states[q].name + "' has no transition for annotation " +
                 describe_annotation(*symm, anns[q][k], [&](int r) { return std::to_string(inv(r)); }));
  }
  std::vector<std::pair<std::string, OrbitRepr>> decls;
  for (const text::StateDecl& d : states)
    decls.emplace_back(d.name, d.orbit);
  return build_dfa(*symm, std::move(decls), init, std::move(acc), [&](int q, int k, const Annotation&) {
    return table[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)]->trans;
  });
}

std::string write_dfa(const FraisseDFA& dfa) {
  const Symmetry& symm = *dfa.symmetry;
  std::string out = "symmetry " + std::string(symm.name()) + "\ndfa\n";
  for (const DfaState& s : dfa.states)
    out += text::write_state_decl(symm, s.orbit, s.name) + "\n";
  out += "initial " + dfa.states[static_cast<std::size_t>(dfa.initial)].name + "\n";
  std::string acc;
  for (int q = 0; q < dfa.size(); ++q)
    if (dfa.accepting[static_cast<std::size_t>(q)])
      acc += " " + dfa.states[static_cast<std::size_t>(q)].name;
  if (!acc.empty())
    out += "accept" + acc + "\n";
  for (const DfaState& s : dfa.states)
    for (std::size_t k = 0; k < s.annotations.size(); ++k) {
      const Annotation& a = s.annotations[k];
      const DfaTransition& t = s.trans[k];
      out += "on " + s.name + " " + describe_annotation(symm, a) + " -> " +
             dfa.states[static_cast<std::size_t>(t.target)].name + " [";
      for (std::size_t b = 0; b < t.witness.size(); ++b) {
        int w = t.witness[b];
        out += (b ? ", " : "") + std::to_string(b) + ":=" +
               (!a.distinguished && w == a.letter_index() ? std::string("*") : std::to_string(w));
      }
      out += "]\n";
    }
  return out;
}

} // namespace nominal
