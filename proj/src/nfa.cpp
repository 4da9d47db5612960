#include "nominal/nfa.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>

#include "nominal/errors.hpp"

namespace nominal {

NominalNFA make_nfa(NomSet states, NomSet alphabet) {
  if (states.symmetry != alphabet.symmetry)
    throw UsageError("states and alphabet use different symmetries");
  NominalNFA a;
  a.symmetry = states.symmetry;
  a.states = std::move(states);
  a.alphabet = std::move(alphabet);
  a.qa = std::make_shared<const ProductResult>(product(a.states, a.alphabet));
  a.qaq = std::make_shared<const ProductResult>(product(a.qa->set, a.states));
  a.qq = std::make_shared<const ProductResult>(product(a.states, a.states));
  return a;
}

NomSet labeled_alphabet(const Symmetry& symm, const std::vector<std::string>& labels) {
  NomSet out;
  out.symmetry = &symm;
  for (const std::string& l : labels)
    out.orbits.push_back(make_orbit(symm, FinStruct(1), PermGroup::trivial(1), l));
  return out;
}

int triple_orbit(const NominalNFA& a, const Element& p, const Element& letter, const Element& q) {
  return pair(*a.qaq, pair(*a.qa, p, letter), q).orbit;
}

Triple realize_triple(const NominalNFA& a, int qaq_orbit, std::span<const DataValue> avoid) {
  Element z = realize_element(a.qaq->set, qaq_orbit, avoid);
  auto [pl, q] = unpair(*a.qaq, z);
  auto [p, l] = unpair(*a.qa, pl);
  return Triple{p, l, q};
}

void validate_nfa(const NominalNFA& a) {
  auto check = [](const EqSubset& s, int n, const char* what) {
    for (int o : s.members)
      if (o < 0 || o >= n)
        throw ValidationError(std::string(what) + " refers to orbit " + std::to_string(o) +
                              " outside 0.." + std::to_string(n - 1));
  };
  check(a.initial, a.states.size(), "initial set");
  check(a.accepting, a.states.size(), "accepting set");
  check(a.trans, a.qaq->set.size(), "transition relation");
  check(a.eps, a.qq->set.size(), "epsilon relation");
}

const char* verdict_name(Verdict v) {
  switch (v) {
  case Verdict::Accept:
    return "accept";
  case Verdict::Reject:
    return "reject";
  case Verdict::Inconclusive:
    return "inconclusive";
  }
  return "";
}

std::size_t default_pool_cap() {
  if (const char* env = std::getenv("NOMINAL_POOL_CAP")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v > 0)
      return static_cast<std::size_t>(v);
  }
  return 256;
}

NfaSimulator::NfaSimulator(const NominalNFA& a, std::vector<DataValue> known)
    : a_(a) {
  for (DataValue& d : known)
    if (std::find(known_.begin(), known_.end(), d) == known_.end())
      known_.push_back(std::move(d));
  trans_by_left_.resize(static_cast<std::size_t>(a.qa->set.size()));
  for (int t : a.trans.members)
    trans_by_left_[static_cast<std::size_t>(a.qaq->tags[static_cast<std::size_t>(t)].left)].push_back(t);
  eps_by_left_.resize(static_cast<std::size_t>(a.states.size()));
  for (int t : a.eps.members)
    eps_by_left_[static_cast<std::size_t>(a.qq->tags[static_cast<std::size_t>(t)].left)].push_back(t);
}

Element NfaSimulator::canonical(const Element& config) const {
  const OrbitRepr& o = a_.states.orbit(config.orbit);
  Valuation best;
  bool first = true;
  for (const Perm& s : o.sym.elements()) {
    Valuation v = canonicalize_fresh(*a_.symmetry, permute(config.valuation, s), known_);
    if (first || v < best)
      best = std::move(v);
    first = false;
  }
  return Element{config.orbit, std::move(best)};
}

namespace {

/// Every completion of a product-orbit valuation whose left part is the
/// given element (up to its symmetry), read back through the right injection.
void for_each_right(const Symmetry& symm, const ProductResult& p, int orbit, const Element& left,
                    std::span<const DataValue> known, const std::function<void(const Valuation&)>& visit) {
  const ProductTag& tag = p.tags[static_cast<std::size_t>(orbit)];
  const OrbitRepr& C = p.set.orbit(orbit);
  const OrbitRepr& L = p.left.orbit(left.orbit);
  std::set<Valuation> seen;
  for (const Perm& u : L.sym.elements()) {
    PartialValuation partial(static_cast<std::size_t>(C.carrier()));
    for (int c = 0; c < L.carrier(); ++c)
      partial[static_cast<std::size_t>(tag.inj_left[static_cast<std::size_t>(c)])] =
          left.valuation[static_cast<std::size_t>(u(c))];
    for_each_valuation(symm, C.shape, partial, known, [&](const Valuation& d) {
      Valuation y;
      for (int j : tag.inj_right)
        y.push_back(d[static_cast<std::size_t>(j)]);
      if (seen.insert(y).second)
        visit(y);
    });
  }
}

} // namespace

std::vector<Element> NfaSimulator::successors(const Element& config, const Letter& letter) const {
  Element z = pair(*a_.qa, config, letter);
  std::vector<Element> out;
  for (int t : trans_by_left_[static_cast<std::size_t>(z.orbit)]) {
    int dst = a_.qaq->tags[static_cast<std::size_t>(t)].right;
    for_each_right(*a_.symmetry, *a_.qaq, t, z, known_,
                   [&](const Valuation& y) { out.push_back(canonical(Element{dst, y})); });
  }
  return out;
}

std::vector<Element> NfaSimulator::eps_successors(const Element& config) const {
  std::vector<Element> out;
  for (int t : eps_by_left_[static_cast<std::size_t>(config.orbit)]) {
    int dst = a_.qq->tags[static_cast<std::size_t>(t)].right;
    for_each_right(*a_.symmetry, *a_.qq, t, config, known_,
                   [&](const Valuation& y) { out.push_back(canonical(Element{dst, y})); });
  }
  return out;
}

std::set<Element> NfaSimulator::initial() const {
  std::set<Element> out;
  for (int o : a_.initial.members) {
    const OrbitRepr& s = a_.states.orbit(o);
    for_each_valuation(*a_.symmetry, s.shape, PartialValuation(static_cast<std::size_t>(s.carrier())),
                       known_, [&](const Valuation& v) { out.insert(canonical(Element{o, v})); });
  }
  return closure(std::move(out));
}

std::set<Element> NfaSimulator::closure(std::set<Element> configs) const {
  std::deque<Element> work(configs.begin(), configs.end());
  while (!work.empty()) {
    Element c = std::move(work.front());
    work.pop_front();
    for (Element& n : eps_successors(c))
      if (configs.insert(n).second)
        work.push_back(std::move(n));
  }
  return configs;
}

std::set<Element> NfaSimulator::step(const std::set<Element>& configs, const Letter& letter) const {
  std::set<Element> out;
  for (const Element& c : configs)
    for (Element& n : successors(c, letter))
      out.insert(std::move(n));
  return closure(std::move(out));
}

bool NfaSimulator::accepting(const std::set<Element>& configs) const {
  for (const Element& c : configs)
    if (a_.accepting.contains(c.orbit))
      return true;
  return false;
}

namespace {

std::size_t pool_size(const std::set<Element>& configs, const std::vector<DataValue>& known) {
  std::set<DataValue> vals(known.begin(), known.end());
  for (const Element& c : configs)
    vals.insert(c.valuation.begin(), c.valuation.end());
  return vals.size();
}

std::vector<DataValue> values_of(const LetterSeq& word) {
  std::vector<DataValue> out;
  for (const Letter& l : word)
    for (const DataValue& d : l.valuation)
      if (std::find(out.begin(), out.end(), d) == out.end())
        out.push_back(d);
  return out;
}

} // namespace

MemberResult nfa_member(const NominalNFA& a, const LetterSeq& word, std::size_t pool_cap) {
  for (const Letter& l : word) {
    if (l.orbit < 0 || l.orbit >= a.alphabet.size() ||
        !element_in_orbit(a.alphabet, l.orbit, l.valuation))
      throw UsageError("letter is not an element of the alphabet");
  }
  std::vector<DataValue> known = values_of(word);
  NfaSimulator sim(a, known);
  std::set<Element> cur = sim.initial();
  MemberResult r;
  r.pool = pool_size(cur, known);
  for (const Letter& l : word) {
    if (r.pool > pool_cap) {
      r.verdict = Verdict::Inconclusive;
      return r;
    }
    cur = sim.step(cur, element_in_orbit(a.alphabet, l.orbit, l.valuation).value());
    r.pool = std::max(r.pool, pool_size(cur, known));
  }
  if (r.pool > pool_cap)
    r.verdict = Verdict::Inconclusive;
  else
    r.verdict = sim.accepting(cur) ? Verdict::Accept : Verdict::Reject;
  return r;
}

std::vector<Letter> letters_over(const NomSet& alphabet, std::span<const DataValue> dom) {
  std::vector<Letter> out;
  std::set<Letter> seen;
  for (int o = 0; o < alphabet.size(); ++o) {
    int k = alphabet.orbit(o).carrier();
    Valuation cur;
    std::function<void()> go = [&] {
      if (static_cast<int>(cur.size()) == k) {
        if (auto e = element_in_orbit(alphabet, o, cur))
          if (seen.insert(*e).second)
            out.push_back(*e);
        return;
      }
      for (const DataValue& d : dom) {
        if (std::find(cur.begin(), cur.end(), d) != cur.end())
          continue;
        cur.push_back(d);
        go();
        cur.pop_back();
      }
    };
    go();
  }
  return out;
}

std::set<std::vector<int>> nfa_language_upto(const NominalNFA& a, const std::vector<Letter>& letters,
                                             int len) {
  std::vector<DataValue> known = values_of(letters);
  NfaSimulator sim(a, known);
  std::set<std::vector<int>> out;
  std::vector<int> w;
  std::map<std::pair<std::set<Element>, int>, std::set<Element>> memo;
  std::function<void(const std::set<Element>&)> go = [&](const std::set<Element>& cur) {
    if (sim.accepting(cur))
      out.insert(w);
    if (static_cast<int>(w.size()) == len || cur.empty())
      return;
    for (int l = 0; l < static_cast<int>(letters.size()); ++l) {
      auto key = std::make_pair(cur, l);
      auto it = memo.find(key);
      if (it == memo.end())
        it = memo.emplace(key, sim.step(cur, letters[static_cast<std::size_t>(l)])).first;
      w.push_back(l);
      go(it->second);
      w.pop_back();
    }
  };
  go(sim.initial());
  return out;
}

NfaEmptiness nfa_emptiness(const NominalNFA& a) {
  std::vector<std::optional<std::pair<Element, LetterSeq>>> seen(static_cast<std::size_t>(a.states.size()));
  std::deque<int> queue;
  auto visit = [&](const Element& c, const LetterSeq& w) {
    auto& slot = seen[static_cast<std::size_t>(c.orbit)];
    if (slot)
      return;
    slot = std::make_pair(c, w);
    queue.push_back(c.orbit);
  };
  for (int o : a.initial.members)
    visit(realize_element(a.states, o), {});
  while (!queue.empty()) {
    int o = queue.front();
    queue.pop_front();
    auto [c, w] = *seen[static_cast<std::size_t>(o)];
    if (a.accepting.contains(o))
      return NfaEmptiness{false, w};
    NfaSimulator base(a, c.valuation);
    for (const Element& n : base.eps_successors(c))
      visit(n, w);
    for (int lo = 0; lo < a.alphabet.size(); ++lo) {
      const OrbitRepr& L = a.alphabet.orbit(lo);
      for_each_valuation(*a.symmetry, L.shape, PartialValuation(static_cast<std::size_t>(L.carrier())),
                         c.valuation, [&](const Valuation& lv) {
                           Letter l{lo, canonical_valuation(L.sym, lv)};
                           std::vector<DataValue> known = c.valuation;
                           known.insert(known.end(), l.valuation.begin(), l.valuation.end());
                           NfaSimulator sim(a, known);
                           LetterSeq w2 = w;
                           w2.push_back(l);
                           for (const Element& n : sim.successors(c, l))
                             visit(n, w2);
                         });
    }
  }
  return NfaEmptiness{true, {}};
}

namespace {

void check_same_alphabet(const NominalNFA& a, const NominalNFA& b) {
  if (a.symmetry != b.symmetry)
    throw UsageError("automata use different symmetries");
  bool same = a.alphabet.size() == b.alphabet.size();
  for (int i = 0; same && i < a.alphabet.size(); ++i)
    same = a.alphabet.orbit(i) == b.alphabet.orbit(i);
  if (!same)
    throw UsageError("automata use different alphabets");
}

/// A component automaton embedded in a disjoint union at a state offset.
struct Part {
  const NominalNFA* nfa;
  int offset;

  bool owns(int o) const { return o >= offset && o < offset + nfa->states.size(); }
  Element local(const Element& e) const { return Element{e.orbit - offset, e.valuation}; }
};

void copy_parts(NominalNFA& r, const std::vector<Part>& parts) {
  for (int t = 0; t < r.qaq->set.size(); ++t) {
    Triple tr = realize_triple(r, t);
    for (const Part& p : parts)
      if (p.owns(tr.src.orbit) && p.owns(tr.dst.orbit) &&
          p.nfa->trans.contains(triple_orbit(*p.nfa, p.local(tr.src), tr.letter, p.local(tr.dst))))
        r.trans.members.insert(t);
  }
  for (int t = 0; t < r.qq->set.size(); ++t) {
    auto [x, y] = unpair(*r.qq, realize_element(r.qq->set, t));
    for (const Part& p : parts)
      if (p.owns(x.orbit) && p.owns(y.orbit) &&
          p.nfa->eps.contains(pair(*p.nfa->qq, p.local(x), p.local(y)).orbit))
        r.eps.members.insert(t);
  }
}

} // namespace

namespace {

/// Disjoint union whose orbit names are prefixed by "l." and "r.".
NomSet tagged_union(const NomSet& a, const NomSet& b) {
  NomSet out = disjoint_union(a, b);
  for (int o = 0; o < out.size(); ++o) {
    std::string& name = out.orbits[static_cast<std::size_t>(o)].name;
    std::string base = name.empty() ? "o" + std::to_string(o < a.size() ? o : o - a.size()) : name;
    name = (o < a.size() ? "l." : "r.") + base;
  }
  return out;
}

} // namespace

NominalNFA nfa_union(const NominalNFA& a, const NominalNFA& b) {
  check_same_alphabet(a, b);
  NominalNFA r = make_nfa(tagged_union(a.states, b.states), a.alphabet);
  int na = a.states.size();
  for (int o : a.initial.members)
    r.initial.members.insert(o);
  for (int o : b.initial.members)
    r.initial.members.insert(o + na);
  for (int o : a.accepting.members)
    r.accepting.members.insert(o);
  for (int o : b.accepting.members)
    r.accepting.members.insert(o + na);
  copy_parts(r, {{&a, 0}, {&b, na}});
  return r;
}

NominalNFA nfa_concat(const NominalNFA& a, const NominalNFA& b) {
  check_same_alphabet(a, b);
  NominalNFA r = make_nfa(tagged_union(a.states, b.states), a.alphabet);
  int na = a.states.size();
  r.initial = a.initial;
  for (int o : b.accepting.members)
    r.accepting.members.insert(o + na);
  copy_parts(r, {{&a, 0}, {&b, na}});
  for (int t = 0; t < r.qq->set.size(); ++t) {
    const ProductTag& tag = r.qq->tags[static_cast<std::size_t>(t)];
    if (tag.left < na && a.accepting.contains(tag.left) && tag.right >= na &&
        b.initial.contains(tag.right - na))
      r.eps.members.insert(t);
  }
  return r;
}

NominalNFA eps_eliminate(const NominalNFA& a) {
  NominalNFA r = make_nfa(a.states, a.alphabet);
  r.accepting = a.accepting;
  for (int o = 0; o < a.states.size(); ++o) {
    Element q = realize_element(a.states, o);
    NfaSimulator sim(a, q.valuation);
    if (sim.initial().count(sim.canonical(q)))
      r.initial.members.insert(o);
  }
  for (int t = 0; t < a.qaq->set.size(); ++t) {
    Triple tr = realize_triple(a, t);
    std::vector<DataValue> known = tr.src.valuation;
    known.insert(known.end(), tr.letter.valuation.begin(), tr.letter.valuation.end());
    known.insert(known.end(), tr.dst.valuation.begin(), tr.dst.valuation.end());
    NfaSimulator sim(a, known);
    std::set<Element> after = sim.step(sim.closure({sim.canonical(tr.src)}), tr.letter);
    if (after.count(sim.canonical(tr.dst)))
      r.trans.members.insert(t);
  }
  return r;
}

NominalNFA epsilon_language(const NomSet& alphabet) {
  NomSet states;
  states.symmetry = alphabet.symmetry;
  states.orbits.push_back(make_orbit(*alphabet.symmetry, FinStruct(0), PermGroup::trivial(0), "e"));
  NominalNFA r = make_nfa(std::move(states), alphabet);
  r.initial.members.insert(0);
  r.accepting.members.insert(0);
  return r;
}

} // namespace nominal
