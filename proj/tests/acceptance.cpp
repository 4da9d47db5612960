// Acceptance harness: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nominal/expr.hpp"
#include "nominal/io.hpp"
#include "nominal/oracle.hpp"

using namespace nominal;

namespace {

const Symmetry& EQ = symmetry_for(Backend::Equality);
const Symmetry& ORD = symmetry_for(Backend::Order);
const Symmetry& GR = symmetry_for(Backend::Graph);

struct Outcome {
  bool ok = true;
  std::string detail;
  std::string failure;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      failure = what;
    }
  }
};

int report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.failure = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= limit_s)
    o.require(false, "time limit exceeded");
  std::printf("%s %d %s: %s [%.2f s, limit %.0f s]%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs, limit_s, o.ok ? "" : " -- ", o.failure.c_str());
  return o.ok ? 0 : 1;
}

std::string describe_counts(const std::vector<std::pair<std::string, int>>& xs) {
  std::string s;
  for (const auto& [name, n] : xs)
    s += (s.empty() ? "" : ", ") + name + "=" + std::to_string(n);
  return s;
}

int orbit_count(const Symmetry& symm, const std::string& expr) { return eval_expr(symm, parse_expr(expr)).size(); }

struct CountCase {
  const Symmetry* symm;
  std::string expr;
  int expected;
};

std::vector<CountCase> count_cases() {
  std::vector<CountCase> cs;
  for (int n = 1; n <= 5; ++n)
    cs.push_back({&EQ, "prod(dtuple(" + std::to_string(n) + "), atom)", n + 1});
  cs.push_back({&EQ, "prod(set2, atom)", 2});
  for (int n = 1; n <= 5; ++n)
    cs.push_back({&ORD, "prod(otuple(" + std::to_string(n) + "), atom)", 2 * n + 1});
  cs.push_back({&GR, "prod(struct(2), atom)", 6});
  cs.push_back({&GR, "prod(sym(struct(2), (0 1)), atom)", 4});
  return cs;
}

Outcome count_criterion(const Symmetry& symm) {
  Outcome o;
  std::vector<std::pair<std::string, int>> got;
  for (const CountCase& c : count_cases()) {
    if (c.symm != &symm)
      continue;
    int n = orbit_count(symm, c.expr);
    got.emplace_back(c.expr, n);
    o.require(n == c.expected, c.expr + " has " + std::to_string(n) + " orbits, expected " +
                                   std::to_string(c.expected));
  }
  o.detail = describe_counts(got) + " (exact)";
  return o;
}

std::string fixture(const std::string& dir, const std::string& name) { return dir + "/" + name; }

int domain_size(const Symmetry& s) { return s.backend() == Backend::Order ? 4 : 3; }

Outcome minimization_criterion(const std::string& dir) {
  Outcome o;
  FraisseDFA d = parse_dfa(read_text_file(fixture(dir, "def_in_de.dfa")));
  FraisseDFA m = minimize(d);
  int pair_states = 0, swapped = 0;
  for (const DfaState& s : m.states)
    if (s.orbit.carrier() == 2) {
      ++pair_states;
      swapped += s.orbit.sym.order() == 2;
    }
  bool eq = equivalent(d, m).equivalent;
  o.detail = "orbits " + std::to_string(d.size()) + " -> " + std::to_string(m.size()) +
             ", two-register states " + std::to_string(pair_states) + " with swap symmetry " +
             std::to_string(swapped) + ", equiv " + (eq ? "true" : "false") + " (exact: 6 orbits, 1 swap state)";
  o.require(m.size() == 6, "minimal automaton has " + std::to_string(m.size()) + " orbits");
  o.require(pair_states == 1 && swapped == 1, "two-register state lacks the order-2 local symmetry");
  o.require(eq, "minimized automaton is not equivalent to the input");
  return o;
}

struct Census {
  std::vector<std::string> dfas, nfas, fmas;
};

Census census(const std::string& dir) {
  Census c;
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  for (const std::string& n : names) {
    std::string text = read_text_file(fixture(dir, n));
    switch (detect_kind(text)) {
    case FileKind::Dfa:
      c.dfas.push_back(n);
      break;
    case FileKind::Nfa:
      c.nfas.push_back(n);
      break;
    case FileKind::Fma:
      c.fmas.push_back(n);
      break;
    }
  }
  return c;
}

/// Number of words of length at most len on which the two predicates differ.
std::size_t divergences(int letters, int len, const std::function<bool(const LetterWord&)>& symbolic,
                        const std::set<LetterWord>& oracle, std::size_t& words) {
  std::size_t bad = 0;
  for (const LetterWord& w : all_words(letters, len)) {
    ++words;
    bad += symbolic(w) != static_cast<bool>(oracle.count(w));
  }
  return bad;
}

Outcome oracle_criterion(const std::string& dir) {
  Outcome o;
  Census c = census(dir);
  std::set<std::string> backends;
  std::size_t words = 0, bad = 0;
  const int len = 5;
  for (const std::string& n : c.dfas) {
    FraisseDFA d = parse_dfa(read_text_file(fixture(dir, n)));
    backends.insert(d.symmetry->name());
    FiniteDomain dom = default_domain(*d.symmetry, domain_size(*d.symmetry));
    std::size_t b = divergences(
        static_cast<int>(dom.values.size()), len,
        [&](const LetterWord& w) {
          Word word;
          for (int x : w)
            word.push_back(dom.values[static_cast<std::size_t>(x)]);
          return run(d, word);
        },
        language_upto(restrict_dfa(d, dom), len), words);
    o.require(b == 0, n + " diverges from the oracle");
    bad += b;
  }
  for (const std::string& n : c.nfas) {
    NominalNFA a = parse_nfa(read_text_file(fixture(dir, n)));
    FiniteDomain dom = default_domain(*a.symmetry, domain_size(*a.symmetry));
    std::vector<Letter> letters = letters_over(a.alphabet, dom.values);
    std::size_t b = divergences(
        static_cast<int>(letters.size()), len,
        [&](const LetterWord& w) {
          LetterSeq seq;
          for (int x : w)
            seq.push_back(letters[static_cast<std::size_t>(x)]);
          Verdict v = nfa_member(a, seq).verdict;
          o.require(v != Verdict::Inconclusive, n + " gave an inconclusive verdict");
          return v == Verdict::Accept;
        },
        language_upto(restrict_nfa(a, dom, letters), len), words);
    o.require(b == 0, n + " diverges from the oracle");
    bad += b;
  }
  for (const std::string& n : c.fmas) {
    FMA m = parse_fma(read_text_file(fixture(dir, n)));
    FiniteDomain dom = default_domain(EQ, 3);
    FmaWord letters;
    for (std::size_t l = 0; l < m.labels.size(); ++l)
      for (const DataValue& v : dom.values)
        letters.push_back(FmaLetter{static_cast<int>(l), v});
    std::size_t b = divergences(
        static_cast<int>(letters.size()), len,
        [&](const LetterWord& w) {
          FmaWord word;
          for (int x : w)
            word.push_back(letters[static_cast<std::size_t>(x)]);
          return fma_accepts(m, word);
        },
        language_upto(restrict_fma(m, dom), len), words);
    o.require(b == 0, n + " diverges from the oracle");
    bad += b;
  }
  o.detail = std::to_string(c.dfas.size()) + " dfas over " + std::to_string(backends.size()) + " symmetries, " +
             std::to_string(c.nfas.size()) + " nfas, " + std::to_string(c.fmas.size()) + " fmas; " +
             std::to_string(words) + " words of length <= 5, " + std::to_string(bad) +
             " divergences (required: >= 8 dfas over 3 symmetries, >= 4 nfas, >= 4 fmas, 0 divergences)";
  o.require(c.dfas.size() >= 8 && backends.size() == 3, "too few dfa fixtures or symmetries");
  o.require(c.nfas.size() >= 4 && c.fmas.size() >= 4, "too few nfa or fma fixtures");
  return o;
}

Outcome bruteforce_criterion() {
  Outcome o;
  int checked = 0;
  for (const CountCase& c : count_cases()) {
    Expr e = parse_expr(c.expr);
    NomSet set = eval_expr(*c.symm, e);
    int first = set.max_carrier() + 3;
    for (int n = first; n <= first + 1; ++n) {
      OrbitCount r = orbit_count_bruteforce(*c.symm, e, default_domain(*c.symm, n));
      o.require(!r.domain_small, c.expr + ": domain of size " + std::to_string(n) + " reported too small");
      o.require(r.count == static_cast<std::size_t>(set.size()),
                std::string(c.symm->name()) + " " + c.expr + " over " + std::to_string(n) + " values: " +
                    std::to_string(r.count) + " vs symbolic " + std::to_string(set.size()));
      ++checked;
    }
  }
  o.detail = std::to_string(checked) + " counts at domain sizes carrier+3 and carrier+4 (exact)";
  return o;
}

FMA random_fma(std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  FMA m;
  m.labels = {"atom"};
  m.controls = {"p", "q"};
  m.registers = 1 + pick(2);
  m.initial = {0};
  m.accepting = {pick(2)};
  std::function<Constraint(int)> formula = [&](int depth) -> Constraint {
    auto name = [&]() {
      int k = pick(2 * m.registers + 1);
      if (k == 0)
        return RegName{RegName::Part::Input, 0};
      k -= 1;
      return RegName{k < m.registers ? RegName::Part::Before : RegName::Part::After, k % m.registers};
    };
    int kind = depth == 0 ? pick(2) : pick(5);
    switch (kind) {
    case 0:
      return Constraint::eq(name(), name());
    case 1:
      return Constraint::neq(name(), name());
    case 2:
      return Constraint::negate(formula(depth - 1));
    case 3:
      return Constraint::all({formula(depth - 1), formula(depth - 1)});
    default:
      return Constraint::any({formula(depth - 1), formula(depth - 1)});
    }
  };
  int count = 2 + pick(3);
  for (int i = 0; i < count; ++i) {
    std::vector<Constraint> parts{formula(2)};
    // Every after-register gets an explicit update.
    for (int r = 0; r < m.registers; ++r) {
      RegName after{RegName::Part::After, r};
      switch (pick(3)) {
      case 0:
        parts.push_back(Constraint::eq(after, RegName{RegName::Part::Before, r}));
        break;
      case 1:
        parts.push_back(Constraint::eq(after, RegName{RegName::Part::Input, 0}));
        break;
      default:
        parts.push_back(Constraint::undefined(after));
      }
    }
    m.trans.push_back(FmaTransition{pick(2), 0, Constraint::all(std::move(parts)), pick(2)});
  }
  return m;
}

Outcome fma_criterion(const std::string& dir, unsigned seed) {
  Outcome o;
  std::mt19937 rng(seed);
  FiniteDomain dom = default_domain(EQ, 3);
  const int len = 5;
  std::size_t bad = 0, nonempty = 0;
  for (int i = 0; i < 20; ++i) {
    FMA m = random_fma(rng);
    std::set<LetterWord> lang = language_upto(restrict_fma(m, dom), len);
    nonempty += !lang.empty();
    NominalNFA n = fma_to_nfa(m);
    std::vector<Letter> letters = letters_over(n.alphabet, dom.values);
    bool same_letters = letters.size() == dom.values.size();
    for (std::size_t k = 0; same_letters && k < letters.size(); ++k)
      same_letters = letters[k].valuation == Valuation{dom.values[k]};
    o.require(same_letters, "letter order differs between fma and nfa");
    std::size_t b = 0;
    b += nfa_language_upto(n, letters, len) != lang;
    b += language_upto(restrict_nfa(n, dom, letters), len) != lang;
    FMA back = nfa_to_fma(n);
    b += language_upto(restrict_fma(back, dom), len) != lang;
    o.require(b == 0, "random automaton " + std::to_string(i) + " changes language");
    bad += b;
  }

  FraisseDFA d = parse_dfa(read_text_file(fixture(dir, "def_in_de.dfa")));
  FMA det = dfa_to_det_fma(d);
  bool lang_ok = language_upto(restrict_fma(det, dom), len) == language_upto(restrict_dfa(d, dom), len);
  o.require(lang_ok, "deterministic automaton diverges from the dfa");
  std::size_t audited = 0, nondet = 0;
  std::vector<std::optional<DataValue>> slot{std::nullopt};
  for (int v = 0; v < 5; ++v)
    slot.push_back(DataValue::natural(v));
  for (int c = 0; c < static_cast<int>(det.controls.size()); ++c)
    for (const auto& r0 : slot)
      for (const auto& r1 : slot)
        for (int v = 0; v < 5; ++v) {
          ++audited;
          nondet += fma_step(det, FmaConfig{c, {r0, r1}}, FmaLetter{0, DataValue::natural(v)}).size() != 1;
        }
  o.require(nondet == 0, std::to_string(nondet) + " configurations without exactly one successor");
  o.require(det.registers == 2, "deterministic automaton does not use two registers");
  o.detail = "20 random fmas (" + std::to_string(nonempty) + " nonempty, seed " + std::to_string(seed) + "), " +
             std::to_string(bad) + " divergences over 3 values, words <= 5; det fma " +
             std::to_string(det.registers) + " registers, " + std::to_string(audited) + " steps audited, " +
             std::to_string(nondet) + " nondeterministic, language " + (lang_ok ? "equal" : "different");
  return o;
}

/// Another valuation inducing the same structure as values (pairwise distinct).
Valuation isomorphic_copy(const Symmetry& symm, const Valuation& values, std::mt19937& rng) {
  std::size_t n = values.size();
  Valuation out(n);
  switch (symm.backend()) {
  case Backend::Equality: {
    std::vector<int> pool(100);
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = DataValue::natural(pool[i]);
    return out;
  }
  case Backend::Order: {
    std::set<DataValue> fresh;
    while (fresh.size() < n)
      fresh.insert(DataValue::rational(std::uniform_int_distribution<int>(-50, 50)(rng),
                                       std::uniform_int_distribution<int>(1, 6)(rng)));
    std::vector<DataValue> sorted(fresh.begin(), fresh.end());
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), 0);
    std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    for (std::size_t k = 0; k < n; ++k)
      out[rank[k]] = sorted[k];
    return out;
  }
  case Backend::Graph: {
    FinStruct shape = symm.induced_struct(values);
    std::vector<DataValue> avoid;
    for (int v = 0; v < 40; ++v)
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0)
        avoid.push_back(DataValue::vertex(v));
    return realize(symm, shape, avoid);
  }
  }
  return out;
}

/// Acceptance by one fixture of a given symmetry on a word of raw values.
struct Acceptor {
  std::string name;
  std::function<bool(const std::vector<DataValue>&, const std::vector<int>&)> accepts;
  int labels = 1;
};

std::vector<Acceptor> acceptors(const std::string& dir, const Census& c, const Symmetry& symm) {
  std::vector<Acceptor> out;
  for (const std::string& n : c.dfas) {
    auto d = std::make_shared<FraisseDFA>(parse_dfa(read_text_file(fixture(dir, n))));
    if (d->symmetry == &symm)
      out.push_back({n, [d](const std::vector<DataValue>& w, const std::vector<int>&) { return run(*d, w); }, 1});
  }
  for (const std::string& n : c.nfas) {
    auto a = std::make_shared<NominalNFA>(parse_nfa(read_text_file(fixture(dir, n))));
    if (a->symmetry != &symm)
      continue;
    out.push_back({n,
                   [a](const std::vector<DataValue>& w, const std::vector<int>& labels) {
                     LetterSeq seq;
                     for (std::size_t i = 0; i < w.size(); ++i)
                       seq.push_back(*element_in_orbit(a->alphabet, labels[i], Valuation{w[i]}));
                     return nfa_member(*a, seq).verdict == Verdict::Accept;
                   },
                   a->alphabet.size()});
  }
  if (&symm == &EQ)
    for (const std::string& n : c.fmas) {
      auto m = std::make_shared<FMA>(parse_fma(read_text_file(fixture(dir, n))));
      out.push_back({n,
                     [m](const std::vector<DataValue>& w, const std::vector<int>& labels) {
                       FmaWord word;
                       for (std::size_t i = 0; i < w.size(); ++i)
                         word.push_back(FmaLetter{labels[i], w[i]});
                       return fma_accepts(*m, word);
                     },
                     static_cast<int>(m->labels.size())});
    }
  return out;
}

Outcome property_criterion(const std::string& dir, unsigned seed) {
  Outcome o;
  std::mt19937 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  Census c = census(dir);

  // Equivariance of acceptance.
  std::size_t equivariance = 0;
  for (const Symmetry* s : {&EQ, &ORD, &GR}) {
    std::vector<Acceptor> as = acceptors(dir, c, *s);
    o.require(!as.empty(), std::string("no fixtures for ") + s->name());
    for (int i = 0; i < 1000 && !as.empty(); ++i) {
      const Acceptor& a = as[static_cast<std::size_t>(pick(static_cast<int>(as.size())))];
      int len = pick(7);
      Valuation distinct;
      std::vector<int> word_idx, labels;
      for (int k = 0; k < len; ++k) {
        int v = pick(6);
        DataValue d = s->backend() == Backend::Order ? DataValue::rational(v, 1)
                                                     : s->parse_value(std::to_string(v));
        auto it = std::find(distinct.begin(), distinct.end(), d);
        if (it == distinct.end()) {
          distinct.push_back(d);
          it = distinct.end() - 1;
        }
        word_idx.push_back(static_cast<int>(it - distinct.begin()));
        labels.push_back(pick(a.labels));
      }
      Valuation copy = isomorphic_copy(*s, distinct, rng);
      if (s->induced_struct(copy) != s->induced_struct(distinct)) {
        o.require(false, "isomorphic copy does not induce the same structure");
        continue;
      }
      Word w1, w2;
      for (int k : word_idx) {
        w1.push_back(distinct[static_cast<std::size_t>(k)]);
        w2.push_back(copy[static_cast<std::size_t>(k)]);
      }
      bool same = a.accepts(w1, labels) == a.accepts(w2, labels);
      o.require(same, a.name + " distinguishes '" + format_word(w1) + "' from '" + format_word(w2) + "'");
      ++equivariance;
    }
  }

  // Canonical forms are idempotent and reached by the reported relabeling.
  std::size_t canonical = 0;
  for (const Symmetry* s : {&EQ, &ORD, &GR})
    for (int i = 0; i < 300; ++i) {
      int n = pick(6);
      std::vector<Fact> facts;
      if (s == &ORD) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            facts.push_back({0, {order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]}});
      } else if (s == &GR) {
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            if (pick(2))
              facts.push_back({0, {a, b}});
      }
      FinStruct st = s->close_facts(n, facts);
      auto [cf, k] = s->canonical_form(st);
      o.require(s->canonical_form(cf).first == cf, "canonical form is not idempotent");
      o.require(relabel(st, k) == cf, "relabeling does not produce the canonical form");
      PermGroup g = s->automorphisms(st);
      std::vector<int> word;
      for (int a = 0; a < n; ++a)
        word.push_back(pick(4));
      auto [cw, p] = canonical_under(g, word);
      o.require(canonical_under(g, cw).first == cw, "canonical_under is not idempotent");
      ++canonical;
    }

  // Pair and unpair are mutually inverse.
  std::size_t pairs = 0;
  struct Sets {
    const Symmetry* s;
    const char* x;
    const char* y;
  };
  for (const Sets& ps : {Sets{&EQ, "dtuple(2)", "set2"}, Sets{&EQ, "sum(atom, set2)", "dtuple(3)"},
                         Sets{&ORD, "otuple(2)", "otuple(2)"}, Sets{&GR, "struct(2, E(0,1))", "atom"},
                         Sets{&GR, "sym(struct(2), (0 1))", "struct(2)"}}) {
    NomSet x = eval_expr(*ps.s, parse_expr(ps.x));
    NomSet y = eval_expr(*ps.s, parse_expr(ps.y));
    ProductResult p = product(x, y);
    for (int z = 0; z < p.set.size(); ++z) {
      Element e = realize_element(p.set, z);
      auto [a, b] = unpair(p, e);
      o.require(pair(p, a, b) == e, std::string("pair(unpair(z)) differs in ") + ps.x + " x " + ps.y);
      ++pairs;
    }
    for (int i = 0; i < 100; ++i) {
      std::vector<DataValue> avoid;
      for (int v = 0; v < 12; ++v)
        if (pick(2))
          avoid.push_back(ps.s->backend() == Backend::Order ? DataValue::rational(v, 1)
                                                            : ps.s->parse_value(std::to_string(v)));
      Element a = realize_element(x, pick(x.size()), avoid);
      Element b = realize_element(y, pick(y.size()), a.valuation);
      // Reuse some of a's values in b where the orbit allows it.
      Valuation mixed = b.valuation;
      for (auto& v : mixed)
        if (pick(2) && !a.valuation.empty())
          v = a.valuation[static_cast<std::size_t>(pick(static_cast<int>(a.valuation.size())))];
      if (std::set<DataValue>(mixed.begin(), mixed.end()).size() == mixed.size())
        if (auto m = element_in_orbit(y, b.orbit, mixed))
          b = *m;
      auto [a2, b2] = unpair(p, pair(p, a, b));
      o.require(a2 == a && b2 == b, std::string("unpair(pair(x, y)) differs in ") + ps.x + " x " + ps.y);
      ++pairs;
    }
  }

  // The quotient of distinct pairs by the swap is the set of two-element sets.
  NomSet d2 = eval_expr(EQ, parse_expr("dtuple(2)"));
  auto xx = std::make_shared<const ProductResult>(product(d2, d2));
  EqRelation swap = diagonal_relation(xx);
  swap.members.members.insert(pair(*xx, *element_of(d2, Valuation{DataValue::natural(1), DataValue::natural(2)}),
                                   *element_of(d2, Valuation{DataValue::natural(2), DataValue::natural(1)}))
                                  .orbit);
  QuotientResult q = quotient(d2, swap);
  NomSet b2 = eval_expr(EQ, parse_expr("set2"));
  bool quotient_ok = q.set.size() == 1 && q.set.orbit(0) == b2.orbit(0);
  o.require(quotient_ok, "quotient of distinct pairs by the swap is not the set of 2-sets");

  // Equivariant function counts.
  OrbitRepr atom = eval_expr(EQ, parse_expr("atom")).orbit(0);
  OrbitRepr pair2 = d2.orbit(0);
  OrbitRepr set2 = b2.orbit(0);
  std::vector<int> homs{static_cast<int>(hom_enumerate(EQ, atom, atom).size()),
                        static_cast<int>(hom_enumerate(EQ, pair2, atom).size()),
                        static_cast<int>(hom_enumerate(EQ, set2, pair2).size()),
                        static_cast<int>(hom_enumerate(EQ, pair2, set2).size())};
  o.require(homs == std::vector<int>{1, 2, 0, 1}, "equivariant function counts differ from (1, 2, 0, 1)");

  o.detail = std::to_string(equivariance) + " equivariance cases (1000 per symmetry), " +
             std::to_string(canonical) + " canonical forms, " + std::to_string(pairs) + " pair round trips, quotient " +
             (quotient_ok ? "= set2" : "!= set2") + ", hom counts (" + std::to_string(homs[0]) + ", " +
             std::to_string(homs[1]) + ", " + std::to_string(homs[2]) + ", " + std::to_string(homs[3]) +
             ") (seed " + std::to_string(seed) + ")";
  return o;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string dir = NOMINAL_FIXTURES;
  unsigned seed = 20240611;
  app.add_option("--fixtures", dir, "Fixture directory");
  app.add_option("--seed", seed, "Seed for the randomized suites");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  failed += report(1, "equality product orbit counts", 1, [] { return count_criterion(EQ); });
  failed += report(2, "order product orbit counts", 1, [] { return count_criterion(ORD); });
  failed += report(3, "graph product orbit counts", 1, [] { return count_criterion(GR); });
  failed += report(4, "minimization", 5, [&] { return minimization_criterion(dir); });
  failed += report(5, "oracle equivalence of fixtures", 60, [&] { return oracle_criterion(dir); });
  failed += report(6, "brute-force orbit counts", 30, [] { return bruteforce_criterion(); });
  failed += report(7, "finite memory automaton translations", 60, [&] { return fma_criterion(dir, seed); });
  failed += report(8, "property suites", 60, [&] { return property_criterion(dir, seed); });
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
