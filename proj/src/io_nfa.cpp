#include <algorithm>
#include <map>
#include <numeric>

#include "io_common.hpp"
#include "nominal/expr.hpp"
#include "nominal/io.hpp"

namespace nominal {

using text::fail;
using text::Line;
using text::Token;
using text::TokenKind;

std::string letter_orbit_name(const NomSet& alphabet, int orbit) {
  const std::string& n = alphabet.orbit(orbit).name;
  return n.empty() ? "o" + std::to_string(orbit) : n;
}

namespace {

int find_letter_orbit(const NomSet& alphabet, const std::string& name) {
  for (int o = 0; o < alphabet.size(); ++o)
    if (letter_orbit_name(alphabet, o) == name)
      return o;
  return -1;
}

const char* part_prefix(int part, bool with_letter) {
  if (part == 0)
    return "src";
  if (with_letter && part == 1)
    return "in";
  return "dst";
}

struct Overlap {
  bool all = false;
  /// Class id per combined position (positions are listed part by part).
  std::vector<int> cls;
  std::vector<Fact> facts;
  std::vector<Fact> absent;
};

Overlap parse_overlap(const Symmetry& symm, const Token& tok, const std::vector<int>& sizes, bool with_letter) {
  const std::string& w = tok.text;
  if (w.rfind("overlap{", 0) != 0 || w.back() != '}')
    fail(tok, "expected overlap{...}, got '" + w + "'");
  std::string body = w.substr(8, w.size() - 9);
  std::vector<int> offset(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i)
    offset[i + 1] = offset[i] + sizes[i];
  int total = offset.back();
  auto index = [&](const std::string& raw) -> int {
    std::string s = text::trim(raw);
    std::string head = s, tail;
    if (auto dot = s.find('.'); dot != std::string::npos) {
      head = s.substr(0, dot);
      tail = s.substr(dot + 1);
    }
    for (std::size_t part = 0; part < sizes.size(); ++part) {
      if (head != part_prefix(static_cast<int>(part), with_letter))
        continue;
      int r = -1;
      if (tail.empty()) {
        if (sizes[part] != 1)
          throw UsageError("'" + s + "' needs a register index");
        r = 0;
      } else {
        Token t{TokenKind::Word, tail, tok.line, tok.column};
        r = text::to_index(t, "a register index");
      }
      if (r >= sizes[part])
        throw UsageError("'" + s + "' is out of range (" + head + " has " + std::to_string(sizes[part]) +
                         " registers)");
      return offset[part] + r;
    }
    throw UsageError("unknown position '" + s + "' (expected src.i, " +
                     std::string(with_letter ? "in.i, " : "") + "dst.i)");
  };
  Overlap o;
  o.cls.resize(static_cast<std::size_t>(total));
  std::iota(o.cls.begin(), o.cls.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return o.cls[static_cast<std::size_t>(x)] == x ? x : o.cls[static_cast<std::size_t>(x)] = find(o.cls[static_cast<std::size_t>(x)]);
  };
  bool other = false;
  try {
    std::string fact_text, absent_text;
    for (const std::string& item : text::split(body, ";")) {
      if (item == "*") {
        o.all = true;
        continue;
      }
      other = true;
      if (item.find('=') != std::string::npos) {
        auto names = text::split(item, "=");
        if (names.size() < 2)
          throw UsageError("expected an equality such as src.0=in, got '" + item + "'");
        int first = index(names[0]);
        for (std::size_t i = 1; i < names.size(); ++i)
          o.cls[static_cast<std::size_t>(find(index(names[i])))] = find(first);
        continue;
      }
      if (item[0] == '!')
        absent_text += (absent_text.empty() ? "" : ";") + item.substr(1);
      else
        fact_text += (fact_text.empty() ? "" : ";") + item;
    }
    if (!fact_text.empty())
      o.facts = parse_facts(symm, fact_text, index);
    if (!absent_text.empty())
      o.absent = parse_facts(symm, absent_text, index);
  } catch (const UsageError& e) {
    fail(tok, e.what());
  }
  if (o.all && other)
    fail(tok, "overlap{*} cannot be combined with other items");
  for (int i = 0; i < total; ++i)
    o.cls[static_cast<std::size_t>(i)] = find(i);
  return o;
}

/// Whether the concatenated values realize the overlap exactly on equalities
/// and satisfy its facts.
bool overlap_holds(const Symmetry& symm, const Overlap& o, const Valuation& vals) {
  if (o.all)
    return true;
  std::size_t n = vals.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((vals[i] == vals[j]) != (o.cls[i] == o.cls[j]))
        return false;
  if (o.facts.empty() && o.absent.empty())
    return true;
  Valuation distinct;
  std::vector<int> at(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::find(distinct.begin(), distinct.end(), vals[i]);
    at[i] = static_cast<int>(it - distinct.begin());
    if (it == distinct.end())
      distinct.push_back(vals[i]);
  }
  FinStruct s = symm.induced_struct(distinct);
  for (Fact f : o.facts) {
    for (int& x : f.args)
      x = at[static_cast<std::size_t>(x)];
    if (std::find(s.facts().begin(), s.facts().end(), f) == s.facts().end())
      return false;
  }
  for (Fact f : o.absent) {
    for (int& x : f.args)
      x = at[static_cast<std::size_t>(x)];
    if (std::find(s.facts().begin(), s.facts().end(), f) != s.facts().end())
      return false;
  }
  return true;
}

/// All concatenations of the component valuations, read in user coordinates,
/// under every rearrangement allowed by the component symmetries.
void for_each_arrangement(const std::vector<const OrbitRepr*>& orbits, const std::vector<const Perm*>& kappas,
                          const std::vector<const Valuation*>& vals,
                          const std::function<bool(const Valuation&)>& visit) {
  std::vector<std::vector<Valuation>> options(orbits.size());
  for (std::size_t p = 0; p < orbits.size(); ++p) {
    std::set<Valuation> seen;
    for (const Perm& s : orbits[p]->sym.elements()) {
      Valuation v;
      for (int i = 0; i < orbits[p]->carrier(); ++i)
        v.push_back((*vals[p])[static_cast<std::size_t>(s((*kappas[p])(i)))]);
      if (seen.insert(v).second)
        options[p].push_back(std::move(v));
    }
  }
  Valuation cur;
  std::function<bool(std::size_t)> go = [&](std::size_t p) {
    if (p == options.size())
      return visit(cur);
    for (const Valuation& v : options[p]) {
      std::size_t mark = cur.size();
      cur.insert(cur.end(), v.begin(), v.end());
      bool stop = go(p + 1);
      cur.resize(mark);
      if (stop)
        return true;
    }
    return false;
  };
  go(0);
}

std::string overlap_text(const Symmetry& symm, const std::vector<int>& sizes, bool with_letter,
                         const Valuation& vals) {
  std::vector<std::string> names;
  for (std::size_t p = 0; p < sizes.size(); ++p)
    for (int r = 0; r < sizes[p]; ++r) {
      std::string n = part_prefix(static_cast<int>(p), with_letter);
      if (!(with_letter && p == 1 && sizes[p] == 1))
        n += "." + std::to_string(r);
      names.push_back(std::move(n));
    }
  std::vector<std::string> items;
  std::vector<int> reps;
  Valuation distinct;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    std::size_t first = std::find(vals.begin(), vals.end(), vals[i]) - vals.begin();
    if (first != i)
      continue;
    reps.push_back(static_cast<int>(i));
    distinct.push_back(vals[i]);
    std::string chain = names[i];
    for (std::size_t j = i + 1; j < vals.size(); ++j)
      if (vals[j] == vals[i])
        chain += "=" + names[j];
    if (chain != names[i])
      items.push_back(chain);
  }
  FinStruct s = symm.induced_struct(distinct);
  auto name = [&](int k) { return names[static_cast<std::size_t>(reps[static_cast<std::size_t>(k)])]; };
  if (!s.facts().empty())
    items.push_back(symm.describe(s, name));
  if (symm.backend() == Backend::Graph)
    for (int x = 0; x < s.size(); ++x)
      for (int y = x + 1; y < s.size(); ++y)
        if (std::find(s.facts().begin(), s.facts().end(), Fact{0, {x, y}}) == s.facts().end())
          items.push_back("!E(" + name(x) + "," + name(y) + ")");
  std::string out;
  for (const std::string& it : items)
    out += (out.empty() ? "" : "; ") + it;
  return "overlap{" + out + "}";
}

} // namespace

NominalNFA parse_nfa(std::string_view src) {
  std::vector<Line> lines = text::lex(src);
  const Symmetry* symm = nullptr;
  std::size_t i = text::parse_header(lines, "nfa", symm);

  NomSet alphabet;
  alphabet.symmetry = symm;
  std::vector<Perm> letter_kappa;
  bool alphabet_seen = false;
  NomSet states;
  states.symmetry = symm;
  std::vector<Perm> state_kappa;
  std::map<std::string, int> ids;
  std::vector<const Line*> rules;
  std::vector<const Token*> initial, accepts;

  auto add_letter_orbit = [&](OrbitRepr o, Perm kappa, const Token& at) {
    if (find_letter_orbit(alphabet, o.name.empty() ? "o" + std::to_string(alphabet.size()) : o.name) >= 0)
      fail(at, "alphabet orbit '" + o.name + "' declared twice");
    alphabet.orbits.push_back(std::move(o));
    letter_kappa.push_back(std::move(kappa));
  };

  for (; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const Token& key = l.tokens.front();
    if (key.text == "alphabet") {
      if (alphabet_seen || alphabet.size())
        fail(key, "the alphabet is already declared");
      alphabet_seen = true;
      if (l.tokens.size() < 2)
        fail(l, "expected 'atom', 'labels ...' or 'expr \"...\"' after 'alphabet'");
      const Token& kind = l.tokens[1];
      if (kind.text == "atom" && l.tokens.size() == 2) {
        add_letter_orbit(make_orbit(*symm, FinStruct(1), PermGroup::trivial(1), "atom"), Perm::identity(1), kind);
      } else if (kind.text == "labels") {
        if (l.tokens.size() < 3)
          fail(kind, "expected at least one label");
        for (std::size_t k = 2; k < l.tokens.size(); ++k) {
          const Token& t = text::expect_word(l, k, "a label");
          add_letter_orbit(make_orbit(*symm, FinStruct(1), PermGroup::trivial(1), t.text), Perm::identity(1), t);
        }
      } else if (kind.text == "expr") {
        if (l.tokens.size() != 3 || l.tokens[2].kind != TokenKind::String)
          fail(kind, "expected a quoted expression after 'expr'");
        NomSet e;
        try {
          e = eval_expr(*symm, parse_expr(l.tokens[2].text));
        } catch (const ParseError& err) {
          throw ParseError(err.message(), l.tokens[2].line, l.tokens[2].column + err.column());
        } catch (const UsageError& err) {
          fail(l.tokens[2], err.what());
        }
        for (OrbitRepr& o : e.orbits) {
          o.name.clear();
          int c = o.carrier();
          add_letter_orbit(std::move(o), Perm::identity(c), l.tokens[2]);
        }
      } else {
        fail(kind, "expected 'atom', 'labels ...' or 'expr \"...\"', got '" + kind.text + "'");
      }
    } else if (key.text == "letter") {
      if (alphabet_seen)
        fail(key, "'letter' cannot be combined with an 'alphabet' line");
      text::StateDecl d = text::parse_state_decl(*symm, l);
      add_letter_orbit(std::move(d.orbit), std::move(d.kappa), l.tokens[1]);
    } else if (key.text == "state") {
      text::StateDecl d = text::parse_state_decl(*symm, l);
      if (ids.count(d.name))
        fail(l.tokens[1], "state '" + d.name + "' declared twice");
      ids[d.name] = states.size();
      states.orbits.push_back(std::move(d.orbit));
      state_kappa.push_back(std::move(d.kappa));
    } else if (key.text == "initial" || key.text == "accept") {
      for (std::size_t k = 1; k < l.tokens.size(); ++k)
        (key.text == "initial" ? initial : accepts).push_back(&text::expect_word(l, k, "a state name"));
    } else if (key.text == "trans" || key.text == "eps") {
      rules.push_back(&l);
    } else {
      fail(key, "unknown directive '" + key.text + "'");
    }
  }
  int last = lines.empty() ? 1 : lines.back().number;
  if (alphabet.size() == 0)
    throw ParseError("missing alphabet declaration", last, 1);
  if (states.size() == 0)
    throw ParseError("no states declared", last, 1);

  NominalNFA a = make_nfa(std::move(states), std::move(alphabet));
  auto state_of = [&](const Token& t, const std::string& s) {
    auto it = ids.find(s);
    if (it == ids.end())
      fail(t, "unknown state '" + s + "'");
    return it->second;
  };
  for (const Token* t : initial)
    a.initial.members.insert(state_of(*t, t->text));
  for (const Token* t : accepts)
    a.accepting.members.insert(state_of(*t, t->text));

  for (const Line* l : rules) {
    bool is_trans = l->tokens[0].text == "trans";
    if (l->tokens.size() != 3 || l->tokens[1].kind != TokenKind::Paren)
      fail(*l, is_trans ? "expected 'trans (SRC, LETTER, DST) overlap{...}'"
                        : "expected 'eps (SRC, DST) overlap{...}'");
    const Token& head = l->tokens[1];
    auto parts = text::split(head.text, ",");
    if (parts.size() != (is_trans ? 3u : 2u))
      fail(head, is_trans ? "expected (SRC, LETTER, DST)" : "expected (SRC, DST)");
    int p = state_of(head, parts.front());
    int q = state_of(head, parts.back());
    int lo = -1;
    if (is_trans) {
      lo = find_letter_orbit(a.alphabet, parts[1]);
      if (lo < 0)
        fail(head, "unknown alphabet orbit '" + parts[1] + "'");
    }
    std::vector<const OrbitRepr*> orbits{&a.states.orbit(p)};
    std::vector<const Perm*> kappas{&state_kappa[static_cast<std::size_t>(p)]};
    if (is_trans) {
      orbits.push_back(&a.alphabet.orbit(lo));
      kappas.push_back(&letter_kappa[static_cast<std::size_t>(lo)]);
    }
    orbits.push_back(&a.states.orbit(q));
    kappas.push_back(&state_kappa[static_cast<std::size_t>(q)]);
    std::vector<int> sizes;
    for (const OrbitRepr* o : orbits)
      sizes.push_back(o->carrier());
    Overlap ov = parse_overlap(*symm, l->tokens[2], sizes, is_trans);

    const ProductResult& prod = is_trans ? *a.qaq : *a.qq;
    EqSubset& target = is_trans ? a.trans : a.eps;
    bool any = false;
    for (int t = 0; t < prod.set.size(); ++t) {
      const ProductTag& tag = prod.tags[static_cast<std::size_t>(t)];
      if (tag.right != q)
        continue;
      std::vector<Valuation> vals;
      if (is_trans) {
        const ProductTag& inner = a.qa->tags[static_cast<std::size_t>(tag.left)];
        if (inner.left != p || inner.right != lo)
          continue;
        Triple tr = realize_triple(a, t);
        vals = {tr.src.valuation, tr.letter.valuation, tr.dst.valuation};
      } else {
        if (tag.left != p)
          continue;
        auto [x, y] = unpair(prod, realize_element(prod.set, t));
        vals = {x.valuation, y.valuation};
      }
      std::vector<const Valuation*> vp;
      for (const Valuation& v : vals)
        vp.push_back(&v);
      bool hit = false;
      for_each_arrangement(orbits, kappas, vp, [&](const Valuation& cat) {
        hit = overlap_holds(*symm, ov, cat);
        return hit;
      });
      if (hit) {
        target.members.insert(t);
        any = true;
      }
    }
    if (!any)
      fail(l->tokens[2], "overlap selects no " + std::string(is_trans ? "transition" : "epsilon") +
                             " orbit (inconsistent equalities or relations)");
  }
  return a;
}

std::string write_nfa(const NominalNFA& a) {
  const Symmetry& symm = *a.symmetry;
  std::string out = "symmetry " + std::string(symm.name()) + "\nnfa\n";
  const NomSet& al = a.alphabet;
  bool unary = true;
  for (const OrbitRepr& o : al.orbits)
    unary = unary && o.carrier() == 1 && !o.name.empty();
  if (unary && al.size() == 1 && al.orbit(0).name == "atom") {
    out += "alphabet atom\n";
  } else if (unary) {
    out += "alphabet labels";
    for (const OrbitRepr& o : al.orbits)
      out += " " + o.name;
    out += "\n";
  } else {
    for (int o = 0; o < al.size(); ++o)
      out += "letter " + text::write_state_decl(symm, al.orbit(o), letter_orbit_name(al, o)).substr(6) + "\n";
  }
  for (const OrbitRepr& o : a.states.orbits)
    out += text::write_state_decl(symm, o, o.name) + "\n";
  auto list = [&](const char* key, const EqSubset& s) {
    if (s.members.empty())
      return;
    out += key;
    for (int o : s.members)
      out += " " + a.states.orbit(o).name;
    out += "\n";
  };
  list("initial", a.initial);
  list("accept", a.accepting);
  for (int t : a.trans.members) {
    Triple tr = realize_triple(a, t);
    Valuation cat = tr.src.valuation;
    cat.insert(cat.end(), tr.letter.valuation.begin(), tr.letter.valuation.end());
    cat.insert(cat.end(), tr.dst.valuation.begin(), tr.dst.valuation.end());
    std::vector<int> sizes{a.states.orbit(tr.src.orbit).carrier(), al.orbit(tr.letter.orbit).carrier(),
                           a.states.orbit(tr.dst.orbit).carrier()};
    out += "trans (" + a.states.orbit(tr.src.orbit).name + ", " + letter_orbit_name(al, tr.letter.orbit) +
           ", " + a.states.orbit(tr.dst.orbit).name + ") " + overlap_text(symm, sizes, true, cat) + "\n";
  }
  for (int t : a.eps.members) {
    auto [x, y] = unpair(*a.qq, realize_element(a.qq->set, t));
    Valuation cat = x.valuation;
    cat.insert(cat.end(), y.valuation.begin(), y.valuation.end());
    std::vector<int> sizes{a.states.orbit(x.orbit).carrier(), a.states.orbit(y.orbit).carrier()};
    out += "eps (" + a.states.orbit(x.orbit).name + ", " + a.states.orbit(y.orbit).name + ") " +
           overlap_text(symm, sizes, false, cat) + "\n";
  }
  return out;
}

Letter parse_letter(const NomSet& alphabet, std::string_view src) {
  std::string s(src);
  int orbit = 0;
  if (auto colon = s.find(':'); colon != std::string::npos) {
    orbit = find_letter_orbit(alphabet, s.substr(0, colon));
    if (orbit < 0)
      throw UsageError("unknown alphabet orbit '" + s.substr(0, colon) + "'");
    s = s.substr(colon + 1);
  } else if (alphabet.size() != 1) {
    throw UsageError("letter '" + s + "' needs an orbit prefix such as " + letter_orbit_name(alphabet, 0) + ":");
  }
  Valuation v;
  for (const std::string& item : text::split(s, ","))
    v.push_back(alphabet.symmetry->parse_value(item));
  if (static_cast<int>(v.size()) != alphabet.orbit(orbit).carrier())
    throw UsageError("letter '" + std::string(src) + "' needs " + std::to_string(alphabet.orbit(orbit).carrier()) +
                     " values");
  auto e = element_in_orbit(alphabet, orbit, v);
  if (!e)
    throw UsageError("values of letter '" + std::string(src) + "' do not have the shape of orbit " +
                     letter_orbit_name(alphabet, orbit));
  return *e;
}

std::string format_letter(const NomSet& alphabet, const Letter& l) {
  std::string out;
  for (std::size_t i = 0; i < l.valuation.size(); ++i)
    out += (i ? "," : "") + l.valuation[i].to_string();
  return alphabet.size() == 1 ? out : letter_orbit_name(alphabet, l.orbit) + ":" + out;
}

LetterSeq parse_letters(const NomSet& alphabet, std::string_view src) {
  LetterSeq w;
  for (const std::string& item : text::split(src, " \t"))
    w.push_back(parse_letter(alphabet, item));
  return w;
}

std::string format_letters(const NomSet& alphabet, const LetterSeq& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i)
    out += (i ? " " : "") + format_letter(alphabet, w[i]);
  return out;
}

} // namespace nominal
