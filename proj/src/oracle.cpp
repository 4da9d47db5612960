#include "nominal/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "nominal/errors.hpp"
#include "nominal/io.hpp"

namespace nominal {

FiniteDomain default_domain(const Symmetry& symm, int n) {
  FiniteDomain d{&symm, {}};
  for (int i = 0; i < n; ++i)
    d.values.push_back(symm.parse_value(std::to_string(i)));
  return d;
}

FiniteDomain parse_domain(const Symmetry& symm, const std::string& text) {
  FiniteDomain d{&symm, parse_word(symm, text)};
  std::vector<DataValue> sorted = d.values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw UsageError("domain values must be distinct");
  if (d.values.empty())
    throw UsageError("domain must not be empty");
  return d;
}

bool ClassicalAutomaton::accepts(const std::vector<int>& word) const {
  std::set<int> cur(initial.begin(), initial.end());
  for (int a : word) {
    std::set<int> nxt;
    for (int s : cur)
      for (int t : next[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)])
        nxt.insert(t);
    cur = std::move(nxt);
  }
  for (int s : cur)
    if (accepting[static_cast<std::size_t>(s)])
      return true;
  return false;
}

bool ClassicalAutomaton::accepts(const Word& word) const {
  std::vector<int> idx;
  for (const DataValue& d : word) {
    auto it = std::find(alphabet.begin(), alphabet.end(), d);
    if (it == alphabet.end())
      throw UsageError("letter " + d.to_string() + " is outside the finite domain");
    idx.push_back(static_cast<int>(it - alphabet.begin()));
  }
  return accepts(idx);
}

namespace {

void for_each_tuple(const std::vector<DataValue>& dom, int k, bool injective,
                    const std::function<void(const Valuation&)>& visit) {
  Valuation cur;
  std::function<void()> go = [&] {
    if (static_cast<int>(cur.size()) == k) {
      visit(cur);
      return;
    }
    for (const DataValue& d : dom) {
      if (injective && std::find(cur.begin(), cur.end(), d) != cur.end())
        continue;
      cur.push_back(d);
      go();
      cur.pop_back();
    }
  };
  go();
}

/// Least rearrangement of t over the listed position permutations.
Valuation least_rearrangement(const Valuation& t, const std::vector<Perm>& perms) {
  Valuation best = t;
  for (const Perm& p : perms) {
    Valuation c;
    for (int i = 0; i < p.size(); ++i)
      c.push_back(t[static_cast<std::size_t>(p(i))]);
    if (c < best)
      best = std::move(c);
  }
  return best;
}

} // namespace

ClassicalAutomaton restrict_dfa(const FraisseDFA& dfa, const FiniteDomain& dom) {
  if (dom.symmetry != dfa.symmetry)
    throw UsageError("domain and automaton use different symmetries");
  const Symmetry& symm = *dfa.symmetry;
  ClassicalAutomaton out;
  out.alphabet = dom.values;
  out.letters = static_cast<int>(dom.values.size());
  std::map<std::pair<int, Valuation>, int> id;
  std::vector<std::pair<int, Valuation>> configs;
  for (int q = 0; q < dfa.size(); ++q) {
    const DfaState& s = dfa.states[static_cast<std::size_t>(q)];
    for_each_tuple(dom.values, s.orbit.carrier(), true, [&](const Valuation& t) {
      if (symm.induced_struct(t) != s.orbit.shape)
        return;
      Valuation key = least_rearrangement(t, s.orbit.sym.elements());
      if (id.emplace(std::make_pair(q, key), static_cast<int>(configs.size())).second)
        configs.emplace_back(q, key);
    });
  }
  for (const auto& [q, v] : configs) {
    const DfaState& s = dfa.states[static_cast<std::size_t>(q)];
    out.labels.push_back(s.name + (v.empty() ? "" : "(" + format_word(v) + ")"));
    out.accepting.push_back(dfa.accepting[static_cast<std::size_t>(q)]);
    std::vector<std::vector<int>> row;
    for (const DataValue& d : dom.values) {
      bool in_regs = std::find(v.begin(), v.end(), d) != v.end();
      std::optional<std::pair<int, Valuation>> target;
      for (std::size_t k = 0; k < s.annotations.size() && !target; ++k) {
        const Annotation& a = s.annotations[k];
        if (a.distinguished != in_regs)
          continue;
        for (const Perm& p : s.orbit.sym.elements()) {
          Valuation g;
          for (int i = 0; i < p.size(); ++i)
            g.push_back(v[static_cast<std::size_t>(p(i))]);
          bool match;
          if (a.distinguished) {
            match = g[static_cast<std::size_t>(a.reg)] == d;
          } else {
            g.push_back(d);
            match = symm.induced_struct(g) == a.structure;
          }
          if (!match)
            continue;
          const DfaTransition& t = s.trans[k];
          Valuation nv;
          for (int w : t.witness)
            nv.push_back(g[static_cast<std::size_t>(w)]);
          const OrbitRepr& to = dfa.states[static_cast<std::size_t>(t.target)].orbit;
          target = std::make_pair(t.target, least_rearrangement(nv, to.sym.elements()));
          break;
        }
      }
      if (!target)
        throw std::logic_error("letter " + d.to_string() + " matches no annotation of state '" + s.name + "'");
      row.push_back({id.at(*target)});
    }
    out.next.push_back(std::move(row));
  }
  out.initial.push_back(id.at({dfa.initial, {}}));
  return out;
}

std::set<LetterWord> language_upto(const ClassicalAutomaton& a, int len) {
  std::set<LetterWord> out;
  LetterWord w;
  int n = a.letters;
  std::function<void(const std::set<int>&)> go = [&](const std::set<int>& cur) {
    for (int s : cur)
      if (a.accepting[static_cast<std::size_t>(s)]) {
        out.insert(w);
        break;
      }
    if (static_cast<int>(w.size()) == len)
      return;
    for (int l = 0; l < n; ++l) {
      std::set<int> nxt;
      for (int s : cur)
        for (int t : a.next[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)])
          nxt.insert(t);
      w.push_back(l);
      go(nxt);
      w.pop_back();
    }
  };
  go(std::set<int>(a.initial.begin(), a.initial.end()));
  return out;
}

std::vector<LetterWord> all_words(int n, int len) {
  std::vector<LetterWord> out{{}};
  std::size_t begin = 0;
  for (int l = 0; l < len; ++l) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (int x = 0; x < n; ++x) {
        LetterWord w = out[i];
        w.push_back(x);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

int minimal_size(const ClassicalAutomaton& a) {
  if (a.initial.size() != 1)
    throw UsageError("minimal_size expects a deterministic automaton");
  int n = a.letters;
  std::vector<int> reach{a.initial.front()};
  std::vector<char> seen(static_cast<std::size_t>(a.size()), 0);
  seen[static_cast<std::size_t>(a.initial.front())] = 1;
  for (std::size_t i = 0; i < reach.size(); ++i)
    for (int l = 0; l < n; ++l) {
      const auto& succ = a.next[static_cast<std::size_t>(reach[i])][static_cast<std::size_t>(l)];
      if (succ.size() != 1)
        throw UsageError("minimal_size expects a deterministic automaton");
      if (!seen[static_cast<std::size_t>(succ[0])]) {
        seen[static_cast<std::size_t>(succ[0])] = 1;
        reach.push_back(succ[0]);
      }
    }
  std::vector<int> cls(static_cast<std::size_t>(a.size()), 0);
  for (int s : reach)
    cls[static_cast<std::size_t>(s)] = a.accepting[static_cast<std::size_t>(s)] ? 1 : 0;
  std::size_t count = 0;
  for (;;) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> ncls(cls.size(), 0);
    for (int s : reach) {
      std::vector<int> key{cls[static_cast<std::size_t>(s)]};
      for (int l = 0; l < n; ++l)
        key.push_back(cls[static_cast<std::size_t>(a.next[static_cast<std::size_t>(s)][static_cast<std::size_t>(l)][0])]);
      auto it = sig.emplace(key, static_cast<int>(sig.size())).first;
      ncls[static_cast<std::size_t>(s)] = it->second;
    }
    cls = std::move(ncls);
    if (sig.size() == count)
      break;
    count = sig.size();
  }
  return static_cast<int>(count);
}

namespace {

struct ConcreteElement {
  std::vector<int> tag;
  Valuation values;
  std::vector<Perm> rearrangements;
};

std::vector<Perm> all_perms(int k) {
  std::vector<int> img(static_cast<std::size_t>(k));
  std::iota(img.begin(), img.end(), 0);
  std::vector<Perm> out;
  do
    out.emplace_back(img);
  while (std::next_permutation(img.begin(), img.end()));
  return out;
}

std::vector<ConcreteElement> concrete_elements(const Symmetry& symm, const Expr& e,
                                               const std::vector<DataValue>& dom) {
  std::vector<ConcreteElement> out;
  auto leaf = [&](int k, bool injective, const std::function<bool(const Valuation&)>& keep,
                  std::vector<Perm> perms) {
    for_each_tuple(dom, k, injective, [&](const Valuation& t) {
      if (keep(t))
        out.push_back({{}, t, perms});
    });
  };
  auto any = [](const Valuation&) { return true; };
  auto increasing = [](const Valuation& t) { return std::is_sorted(t.begin(), t.end()); };
  switch (e.kind) {
  case Expr::Kind::Atom:
    leaf(1, false, any, {Perm::identity(1)});
    break;
  case Expr::Kind::Tuple:
    leaf(e.k, false, any, {Perm::identity(e.k)});
    break;
  case Expr::Kind::DTuple:
    leaf(e.k, true, any, {Perm::identity(e.k)});
    break;
  case Expr::Kind::Set:
    leaf(e.k, true, increasing, all_perms(e.k));
    break;
  case Expr::Kind::OTuple:
    if (symm.backend() != Backend::Order)
      throw UsageError("otuple(k) requires the order symmetry");
    leaf(e.k, true, increasing, {Perm::identity(e.k)});
    break;
  case Expr::Kind::Struct: {
    int k = e.k;
    FinStruct shape = symm.close_facts(k, parse_facts(symm, e.facts, [&](const std::string& s) {
      int v = std::stoi(s);
      if (v < 0 || v >= k)
        throw UsageError("struct index out of range");
      return v;
    }));
    std::vector<Perm> gens = parse_generators(e.gens, k);
    leaf(k, true, [&](const Valuation& t) { return symm.induced_struct(t) == shape; },
         closure(gens, k).elements());
    break;
  }
  case Expr::Kind::Sum:
    for (std::size_t i = 0; i < e.children.size(); ++i)
      for (ConcreteElement& c : concrete_elements(symm, e.children[i], dom)) {
        c.tag.insert(c.tag.begin(), static_cast<int>(i));
        out.push_back(std::move(c));
      }
    break;
  case Expr::Kind::Prod: {
    out = concrete_elements(symm, e.children.front(), dom);
    for (std::size_t i = 1; i < e.children.size(); ++i) {
      std::vector<ConcreteElement> rhs = concrete_elements(symm, e.children[i], dom);
      std::vector<ConcreteElement> acc;
      for (const ConcreteElement& l : out)
        for (const ConcreteElement& r : rhs) {
          ConcreteElement c;
          c.tag = l.tag;
          c.tag.push_back(-1);
          c.tag.insert(c.tag.end(), r.tag.begin(), r.tag.end());
          c.values = l.values;
          c.values.insert(c.values.end(), r.values.begin(), r.values.end());
          int nl = static_cast<int>(l.values.size());
          for (const Perm& p : l.rearrangements)
            for (const Perm& q : r.rearrangements) {
              std::vector<int> img = p.images();
              for (int x : q.images())
                img.push_back(x + nl);
              c.rearrangements.emplace_back(std::move(img));
            }
          acc.push_back(std::move(c));
        }
      out = std::move(acc);
    }
    break;
  }
  }
  return out;
}

/// Equality pattern plus the structure induced on the distinct values in
/// order of first occurrence.
std::pair<std::vector<int>, FinStruct> positional_pattern(const Symmetry& symm, const Valuation& t) {
  std::vector<int> rgs;
  Valuation distinct;
  for (const DataValue& d : t) {
    auto it = std::find(distinct.begin(), distinct.end(), d);
    rgs.push_back(static_cast<int>(it - distinct.begin()));
    if (it == distinct.end())
      distinct.push_back(d);
  }
  return {rgs, symm.induced_struct(distinct)};
}

std::size_t arity(const Expr& e) {
  std::size_t n = 0;
  switch (e.kind) {
  case Expr::Kind::Atom:
    return 1;
  case Expr::Kind::Prod:
    for (const Expr& c : e.children)
      n += arity(c);
    return n;
  case Expr::Kind::Sum:
    for (const Expr& c : e.children)
      n = std::max(n, arity(c));
    return n;
  default:
    return static_cast<std::size_t>(e.k);
  }
}

} // namespace

OrbitCount orbit_count_bruteforce(const Symmetry& symm, const Expr& e, const FiniteDomain& dom) {
  if (dom.symmetry != &symm)
    throw UsageError("domain and expression use different symmetries");
  std::set<std::pair<std::vector<int>, std::pair<std::vector<int>, FinStruct>>> classes;
  for (const ConcreteElement& c : concrete_elements(symm, e, dom.values)) {
    std::pair<std::vector<int>, FinStruct> best;
    bool first = true;
    for (const Perm& p : c.rearrangements) {
      Valuation r;
      for (int i = 0; i < p.size(); ++i)
        r.push_back(c.values[static_cast<std::size_t>(p(i))]);
      auto pat = positional_pattern(symm, r);
      if (first || pat < best)
        best = std::move(pat);
      first = false;
    }
    classes.emplace(c.tag, std::move(best));
  }
  return OrbitCount{classes.size(), dom.values.size() < arity(e) + 2};
}

} // namespace nominal

namespace nominal {

std::vector<DataValue> oracle_pool(const Symmetry& symm, const std::vector<DataValue>& dom, int k) {
  std::vector<DataValue> pool = dom;
  int nd = static_cast<int>(dom.size());
  for (const FinStruct& type : symm.one_point_extensions(symm.induced_struct(dom))) {
    for (int r = 0; r < 2 * k; ++r) {
      int m = static_cast<int>(pool.size());
      std::vector<Fact> facts = symm.induced_struct(pool).facts();
      std::vector<int> place(static_cast<std::size_t>(nd) + 1);
      std::iota(place.begin(), place.end(), 0);
      place.back() = m;
      FinStruct placed = relabel(type, place, m + 1);
      facts.insert(facts.end(), placed.facts().begin(), placed.facts().end());
      for (int j = nd; j < m; ++j) {
        const DataValue& x = pool[static_cast<std::size_t>(j)];
        if (symm.backend() == Backend::Order && symm.extension_type(dom, x) == type)
          facts.push_back({0, {j, m}});
      }
      FinStruct target = symm.close_facts(m + 1, std::move(facts));
      pool.push_back(symm.witness(target, pool, {}));
    }
  }
  return pool;
}

namespace {

using Pattern = std::pair<std::vector<int>, FinStruct>;

/// Positional patterns of every rearrangement of a realized orbit member.
void add_patterns(const Symmetry& symm, const std::vector<const OrbitRepr*>& parts,
                  const std::vector<Valuation>& vals, std::set<Pattern>& out) {
  Valuation cur;
  std::function<void(std::size_t)> go = [&](std::size_t p) {
    if (p == parts.size()) {
      out.insert(positional_pattern(symm, cur));
      return;
    }
    for (const Perm& s : parts[p]->sym.elements()) {
      std::size_t mark = cur.size();
      for (int i = 0; i < s.size(); ++i)
        cur.push_back(vals[p][static_cast<std::size_t>(s(i))]);
      go(p + 1);
      cur.resize(mark);
    }
  };
  go(0);
}

} // namespace

ClassicalAutomaton restrict_nfa(const NominalNFA& a, const FiniteDomain& dom, const std::vector<Letter>& letters) {
  if (dom.symmetry != a.symmetry)
    throw UsageError("domain and automaton use different symmetries");
  const Symmetry& symm = *a.symmetry;
  int k = std::max(a.states.max_carrier(), a.alphabet.max_carrier());
  std::vector<DataValue> pool = oracle_pool(symm, dom.values, k);

  std::map<std::tuple<int, int, int>, std::set<Pattern>> trans_patterns;
  for (int t : a.trans.members) {
    Triple tr = realize_triple(a, t);
    add_patterns(symm,
                 {&a.states.orbit(tr.src.orbit), &a.alphabet.orbit(tr.letter.orbit), &a.states.orbit(tr.dst.orbit)},
                 {tr.src.valuation, tr.letter.valuation, tr.dst.valuation},
                 trans_patterns[{tr.src.orbit, tr.letter.orbit, tr.dst.orbit}]);
  }
  std::map<std::pair<int, int>, std::set<Pattern>> eps_patterns;
  for (int t : a.eps.members) {
    auto [x, y] = unpair(*a.qq, realize_element(a.qq->set, t));
    add_patterns(symm, {&a.states.orbit(x.orbit), &a.states.orbit(y.orbit)}, {x.valuation, y.valuation},
                 eps_patterns[{x.orbit, y.orbit}]);
  }

  std::vector<std::pair<int, Valuation>> configs;
  for (int q = 0; q < a.states.size(); ++q) {
    const OrbitRepr& o = a.states.orbit(q);
    std::set<Valuation> seen;
    for_each_tuple(pool, o.carrier(), true, [&](const Valuation& t) {
      if (symm.induced_struct(t) != o.shape)
        return;
      Valuation key = least_rearrangement(t, o.sym.elements());
      if (seen.insert(key).second)
        configs.emplace_back(q, key);
    });
  }
  int n = static_cast<int>(configs.size());
  auto cat = [](std::initializer_list<const Valuation*> parts) {
    Valuation v;
    for (const Valuation* p : parts)
      v.insert(v.end(), p->begin(), p->end());
    return v;
  };

  std::vector<std::vector<int>> eps_next(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& [p, u] = configs[static_cast<std::size_t>(i)];
      const auto& [q, w] = configs[static_cast<std::size_t>(j)];
      auto it = eps_patterns.find({p, q});
      if (it != eps_patterns.end() && it->second.count(positional_pattern(symm, cat({&u, &w}))))
        eps_next[static_cast<std::size_t>(i)].push_back(j);
    }
  auto close = [&](std::set<int> s) {
    std::deque<int> work(s.begin(), s.end());
    while (!work.empty()) {
      int x = work.front();
      work.pop_front();
      for (int y : eps_next[static_cast<std::size_t>(x)])
        if (s.insert(y).second)
          work.push_back(y);
    }
    return std::vector<int>(s.begin(), s.end());
  };

  ClassicalAutomaton out;
  out.letters = static_cast<int>(letters.size());
  for (int i = 0; i < n; ++i) {
    const auto& [p, u] = configs[static_cast<std::size_t>(i)];
    out.labels.push_back(a.states.orbit(p).name + (u.empty() ? "" : "(" + format_word(u) + ")"));
    out.accepting.push_back(a.accepting.contains(p));
    std::vector<std::vector<int>> row;
    for (const Letter& l : letters) {
      std::set<int> succ;
      for (int j = 0; j < n; ++j) {
        const auto& [q, w] = configs[static_cast<std::size_t>(j)];
        auto it = trans_patterns.find({p, l.orbit, q});
        if (it != trans_patterns.end() && it->second.count(positional_pattern(symm, cat({&u, &l.valuation, &w}))))
          succ.insert(j);
      }
      row.push_back(close(std::move(succ)));
    }
    out.next.push_back(std::move(row));
  }
  std::set<int> init;
  for (int i = 0; i < n; ++i)
    if (a.initial.contains(configs[static_cast<std::size_t>(i)].first))
      init.insert(i);
  out.initial = close(std::move(init));
  return out;
}

} // namespace nominal

namespace nominal {

ClassicalAutomaton restrict_fma(const FMA& m, const FiniteDomain& dom) {
  if (dom.symmetry->backend() != Backend::Equality)
    throw UsageError("finite memory automata read equality data");
  std::vector<DataValue> pool = dom.values;
  for (std::int64_t k = 0; static_cast<int>(pool.size()) < static_cast<int>(dom.values.size()) + 2 * m.registers + 1; ++k) {
    DataValue d = DataValue::natural(k);
    if (std::find(pool.begin(), pool.end(), d) == pool.end())
      pool.push_back(d);
  }
  std::vector<Partial> regs{Partial{}};
  for (int r = 0; r < m.registers; ++r) {
    std::vector<Partial> next;
    for (const Partial& p : regs) {
      Partial q = p;
      q.push_back(std::nullopt);
      next.push_back(q);
      for (const DataValue& d : pool) {
        q.back() = d;
        next.push_back(q);
      }
    }
    regs = std::move(next);
  }
  int per = static_cast<int>(regs.size());
  int nc = static_cast<int>(m.controls.size());
  ClassicalAutomaton out;
  out.letters = static_cast<int>(m.labels.size() * dom.values.size());
  for (int c = 0; c < nc; ++c)
    for (int r = 0; r < per; ++r) {
      out.labels.push_back(m.controls[static_cast<std::size_t>(c)]);
      out.accepting.push_back(m.accepting.count(c) > 0);
      std::vector<std::vector<int>> row;
      for (int label = 0; label < static_cast<int>(m.labels.size()); ++label)
        for (const DataValue& d : dom.values) {
          std::set<int> succ;
          for (const FmaTransition& t : m.trans) {
            if (t.from != c || t.label != label)
              continue;
            for (int r2 = 0; r2 < per; ++r2)
              if (satisfies(t.guard, regs[static_cast<std::size_t>(r)], d, regs[static_cast<std::size_t>(r2)]))
                succ.insert(t.to * per + r2);
          }
          row.emplace_back(succ.begin(), succ.end());
        }
      out.next.push_back(std::move(row));
    }
  for (int c : m.initial)
    out.initial.push_back(c * per);
  return out;
}

} // namespace nominal
