#include "nominal/dfa.hpp"

#include <algorithm>
#include <deque>
#include <memory>

#include "nominal/errors.hpp"

namespace nominal {

namespace {

/// sigma extended by fixing the new last point.
std::vector<int> extend_perm(const Perm& s) {
  std::vector<int> out = s.images();
  out.push_back(s.size());
  return out;
}

int index_of(const Valuation& v, const DataValue& d) {
  auto it = std::find(v.begin(), v.end(), d);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

std::vector<int> locate(const Valuation& target, const Valuation& annotated) {
  std::vector<int> w;
  w.reserve(target.size());
  for (const DataValue& d : target) {
    int i = index_of(annotated, d);
    if (i < 0)
      throw std::logic_error("successor value is not supported by the annotated valuation");
    w.push_back(i);
  }
  return w;
}

Valuation annotated_valuation(const Valuation& v, const Annotation& a, const DataValue& d) {
  Valuation g = v;
  if (!a.distinguished)
    g.push_back(d);
  return g;
}

} // namespace

std::vector<Annotation> enumerate_annotations(const Symmetry& symm, const OrbitRepr& state) {
  const FinStruct& shape = state.shape;
  const auto& elems = state.sym.elements();
  int n = shape.size();
  std::vector<Annotation> out;
  for (int r = 0; r < n; ++r) {
    bool least = true;
    std::vector<Perm> stab;
    for (const Perm& s : elems) {
      if (s(r) < r)
        least = false;
      if (s(r) == r)
        stab.push_back(s);
    }
    if (!least)
      continue;
    out.push_back(Annotation{true, r, shape, group_from_closed_set(std::move(stab), n)});
  }
  std::vector<FinStruct> reps;
  for (const FinStruct& e : symm.one_point_extensions(shape)) {
    FinStruct best = e;
    for (const Perm& s : elems) {
      FinStruct c = restrict(e, extend_perm(s));
      if (c < best)
        best = std::move(c);
    }
    if (std::find(reps.begin(), reps.end(), best) != reps.end())
      continue;
    std::vector<Perm> local;
    for (const Perm& s : elems)
      if (restrict(best, extend_perm(s)) == best)
        local.push_back(Perm(extend_perm(s)));
    reps.push_back(best);
    out.push_back(Annotation{false, -1, best, group_from_closed_set(std::move(local), n + 1)});
  }
  return out;
}

std::string describe_annotation(const Symmetry& symm, const Annotation& a,
                                const std::function<std::string(int)>& name) {
  if (a.distinguished)
    return "reg " + name(a.reg);
  int star = a.structure.size() - 1;
  auto label = [&](int i) { return i == star ? std::string("*") : name(i); };
  std::vector<std::string> items;
  if (symm.backend() == Backend::Order) {
    int below = -1, above = -1;
    for (int i = 0; i < star; ++i) {
      if (a.structure.has(0, i, star) && (below < 0 || a.structure.has(0, below, i)))
        below = i;
      if (a.structure.has(0, star, i) && (above < 0 || a.structure.has(0, i, above)))
        above = i;
    }
    if (below >= 0)
      items.push_back(label(below) + "<*");
    if (above >= 0)
      items.push_back("*<" + label(above));
  } else if (symm.backend() == Backend::Graph) {
    for (int i = 0; i < star; ++i)
      if (a.structure.has(0, i, star))
        items.push_back("E(" + label(i) + ",*)");
  }
  std::string out = "ext{";
  for (std::size_t i = 0; i < items.size(); ++i)
    out += (i ? "; " : "") + items[i];
  return out + "}";
}

std::string describe_annotation(const Symmetry& symm, const Annotation& a) {
  return describe_annotation(symm, a, [](int i) { return std::to_string(i); });
}

NomSet FraisseDFA::config_space() const {
  NomSet out;
  out.symmetry = symmetry;
  for (const DfaState& s : states) {
    OrbitRepr o = s.orbit;
    o.name = s.name;
    out.orbits.push_back(std::move(o));
  }
  return out;
}

int FraisseDFA::state_index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (states[static_cast<std::size_t>(i)].name == name)
      return i;
  return -1;
}

void validate_dfa(const FraisseDFA& dfa) {
  if (!dfa.symmetry)
    throw ValidationError("automaton has no symmetry");
  if (dfa.states.empty())
    throw ValidationError("automaton has no states");
  if (dfa.initial < 0 || dfa.initial >= dfa.size())
    throw ValidationError("initial state out of range");
  if (static_cast<int>(dfa.accepting.size()) != dfa.size())
    throw ValidationError("acceptance vector has the wrong length");
  if (dfa.states[static_cast<std::size_t>(dfa.initial)].orbit.carrier() != 0)
    throw ValidationError("initial state '" + dfa.states[static_cast<std::size_t>(dfa.initial)].name +
                          "' must have no registers");
  for (const DfaState& s : dfa.states) {
    if (s.trans.size() != s.annotations.size())
      throw ValidationError("state '" + s.name + "' has " + std::to_string(s.trans.size()) +
                            " transitions for " + std::to_string(s.annotations.size()) + " annotations");
    for (std::size_t k = 0; k < s.trans.size(); ++k) {
      const DfaTransition& t = s.trans[k];
      const Annotation& a = s.annotations[k];
      std::string where = "state '" + s.name + "', annotation " +
                          describe_annotation(*dfa.symmetry, a);
      if (t.target < 0 || t.target >= dfa.size())
        throw ValidationError(where + ": target out of range");
      const OrbitRepr& tgt = dfa.states[static_cast<std::size_t>(t.target)].orbit;
      if (static_cast<int>(t.witness.size()) != tgt.carrier())
        throw ValidationError(where + ": assignment must cover all " +
                              std::to_string(tgt.carrier()) + " target registers");
      for (int w : t.witness)
        if (w < 0 || w >= a.carrier())
          throw ValidationError(where + ": assignment refers to an unknown register");
      if (!is_embedding(t.witness, tgt.shape, a.structure))
        throw ValidationError(where + ": assignment does not embed the target shape");
      if (!commutes(t.witness, a.local_sym, tgt.sym))
        throw ValidationError(where + ": assignment is not invariant under the local symmetry");
    }
  }
}

FraisseDFA build_dfa(const Symmetry& symm, std::vector<std::pair<std::string, OrbitRepr>> states,
                     int initial, std::vector<bool> accepting,
                     const std::function<DfaTransition(int, int, const Annotation&)>& trans_for) {
  FraisseDFA dfa;
  dfa.symmetry = &symm;
  dfa.initial = initial;
  dfa.accepting = std::move(accepting);
  for (auto& [name, orbit] : states) {
    if (make_orbit(symm, orbit.shape, orbit.sym) != orbit)
      throw ValidationError("state '" + name + "' is not in canonical form");
    DfaState s;
    s.name = name;
    s.orbit = orbit;
    s.orbit.name = name;
    s.annotations = enumerate_annotations(symm, s.orbit);
    dfa.states.push_back(std::move(s));
  }
  for (int q = 0; q < dfa.size(); ++q) {
    DfaState& s = dfa.states[static_cast<std::size_t>(q)];
    for (int k = 0; k < static_cast<int>(s.annotations.size()); ++k)
      s.trans.push_back(trans_for(q, k, s.annotations[static_cast<std::size_t>(k)]));
  }
  validate_dfa(dfa);
  return dfa;
}

Classified classify(const FraisseDFA& dfa, const Config& c, const DataValue& d) {
  const DfaState& s = dfa.states.at(static_cast<std::size_t>(c.orbit));
  const Valuation& v = c.valuation;
  const auto& elems = s.orbit.sym.elements();
  int i = index_of(v, d);
  if (i >= 0) {
    for (std::size_t k = 0; k < s.annotations.size(); ++k) {
      const Annotation& a = s.annotations[k];
      if (!a.distinguished)
        continue;
      for (const Perm& p : elems)
        if (p(a.reg) == i)
          return Classified{static_cast<int>(k), permute(v, p)};
    }
  } else {
    FinStruct e = dfa.symmetry->extension_type(v, d);
    for (const Perm& p : elems) {
      FinStruct ep = restrict(e, extend_perm(p));
      for (std::size_t k = 0; k < s.annotations.size(); ++k) {
        const Annotation& a = s.annotations[k];
        if (!a.distinguished && a.structure == ep) {
          Valuation g = permute(v, p);
          g.push_back(d);
          return Classified{static_cast<int>(k), std::move(g)};
        }
      }
    }
  }
  throw std::logic_error("letter " + d.to_string() + " matches no annotation of state '" + s.name + "'");
}

Config step(const FraisseDFA& dfa, const Config& c, const DataValue& d) {
  Classified cl = classify(dfa, c, d);
  const DfaTransition& t =
      dfa.states[static_cast<std::size_t>(c.orbit)].trans[static_cast<std::size_t>(cl.annotation)];
  Valuation next;
  next.reserve(t.witness.size());
  for (int w : t.witness)
    next.push_back(cl.annotated[static_cast<std::size_t>(w)]);
  const OrbitRepr& tgt = dfa.states[static_cast<std::size_t>(t.target)].orbit;
  return Config{t.target, canonical_valuation(tgt.sym, next)};
}

Config run_config(const FraisseDFA& dfa, const Word& word) {
  Config c = dfa.initial_config();
  for (const DataValue& d : word)
    c = step(dfa, c, d);
  return c;
}

bool run(const FraisseDFA& dfa, const Word& word) {
  return dfa.accepting[static_cast<std::size_t>(run_config(dfa, word).orbit)];
}

DataValue letter_for(const FraisseDFA& dfa, const Config& c, const Annotation& a) {
  if (a.distinguished)
    return c.valuation.at(static_cast<std::size_t>(a.reg));
  return dfa.symmetry->witness(a.structure, c.valuation, {});
}

namespace {

/// Breadth-first search over control states with one concrete configuration
/// and access word per visited state.
struct Explored {
  std::vector<int> order;
  std::vector<std::optional<std::pair<Config, Word>>> seen;
};

Explored explore(const FraisseDFA& dfa) {
  Explored ex;
  ex.seen.resize(static_cast<std::size_t>(dfa.size()));
  std::deque<int> queue{dfa.initial};
  ex.seen[static_cast<std::size_t>(dfa.initial)] = std::make_pair(dfa.initial_config(), Word{});
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    ex.order.push_back(q);
    auto [c, w] = *ex.seen[static_cast<std::size_t>(q)];
    for (const Annotation& a : dfa.states[static_cast<std::size_t>(q)].annotations) {
      DataValue d = letter_for(dfa, c, a);
      Config next = step(dfa, c, d);
      auto& slot = ex.seen[static_cast<std::size_t>(next.orbit)];
      if (slot)
        continue;
      Word w2 = w;
      w2.push_back(d);
      slot = std::make_pair(next, std::move(w2));
      queue.push_back(next.orbit);
    }
  }
  return ex;
}

} // namespace

std::set<int> reachable(const FraisseDFA& dfa) {
  Explored ex = explore(dfa);
  return std::set<int>(ex.order.begin(), ex.order.end());
}

FraisseDFA restrict_to_reachable(const FraisseDFA& dfa) {
  std::set<int> keep = reachable(dfa);
  if (static_cast<int>(keep.size()) == dfa.size())
    return dfa;
  std::vector<int> renum(static_cast<std::size_t>(dfa.size()), -1);
  int next = 0;
  for (int q : keep)
    renum[static_cast<std::size_t>(q)] = next++;
  FraisseDFA out;
  out.symmetry = dfa.symmetry;
  out.initial = renum[static_cast<std::size_t>(dfa.initial)];
  for (int q : keep) {
    DfaState s = dfa.states[static_cast<std::size_t>(q)];
    for (DfaTransition& t : s.trans)
      t.target = renum[static_cast<std::size_t>(t.target)];
    out.states.push_back(std::move(s));
    out.accepting.push_back(dfa.accepting[static_cast<std::size_t>(q)]);
  }
  return out;
}

FraisseDFA complement(const FraisseDFA& dfa) {
  FraisseDFA out = dfa;
  out.accepting.flip();
  return out;
}

BoolOp bool_op_named(const std::string& name) {
  if (name == "and" || name == "intersection")
    return BoolOp::And;
  if (name == "or" || name == "union")
    return BoolOp::Or;
  if (name == "xor" || name == "symdiff")
    return BoolOp::Xor;
  throw UsageError("unknown boolean operation '" + name + "' (expected and, or, xor)");
}

FraisseDFA product_dfa(const FraisseDFA& a, const FraisseDFA& b, BoolOp op) {
  if (a.symmetry != b.symmetry)
    throw UsageError("automata use different symmetries");
  const Symmetry& symm = *a.symmetry;
  ProductResult p = product(a.config_space(), b.config_space());
  Element start = pair(p, a.initial_config(), b.initial_config());

  std::vector<int> order{start.orbit};
  std::map<int, int> renum{{start.orbit, 0}};
  std::vector<std::vector<std::pair<int, std::vector<int>>>> edges;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int o = order[i];
    Element z = realize_element(p.set, o);
    auto [x, y] = unpair(p, z);
    std::vector<std::pair<int, std::vector<int>>> out;
    for (const Annotation& ann : enumerate_annotations(symm, p.set.orbit(o))) {
      DataValue d = ann.distinguished ? z.valuation[static_cast<std::size_t>(ann.reg)]
                                      : symm.witness(ann.structure, z.valuation, {});
      Element next = pair(p, step(a, x, d), step(b, y, d));
      if (!renum.count(next.orbit)) {
        renum[next.orbit] = static_cast<int>(order.size());
        order.push_back(next.orbit);
      }
      out.emplace_back(next.orbit, locate(next.valuation, annotated_valuation(z.valuation, ann, d)));
    }
    edges.push_back(std::move(out));
  }

  std::vector<std::pair<std::string, OrbitRepr>> states;
  std::vector<bool> acc;
  for (int o : order) {
    const ProductTag& tag = p.tags[static_cast<std::size_t>(o)];
    bool l = a.accepting[static_cast<std::size_t>(tag.left)];
    bool r = b.accepting[static_cast<std::size_t>(tag.right)];
    acc.push_back(op == BoolOp::And ? (l && r) : op == BoolOp::Or ? (l || r) : (l != r));
    states.emplace_back(p.set.orbit(o).name, p.set.orbit(o));
  }
  return build_dfa(symm, std::move(states), 0, std::move(acc),
                   [&](int q, int k, const Annotation&) {
                     const auto& [tgt, w] = edges[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
                     return DfaTransition{renum.at(tgt), w};
                   });
}

EmptinessResult emptiness(const FraisseDFA& dfa) {
  Explored ex = explore(dfa);
  for (int q : ex.order)
    if (dfa.accepting[static_cast<std::size_t>(q)])
      return EmptinessResult{false, ex.seen[static_cast<std::size_t>(q)]->second};
  return EmptinessResult{true, {}};
}

EquivalenceResult equivalent(const FraisseDFA& a, const FraisseDFA& b) {
  EmptinessResult e = emptiness(product_dfa(a, b, BoolOp::Xor));
  return EquivalenceResult{e.empty, std::move(e.witness)};
}

FraisseDFA minimize(const FraisseDFA& input) {
  FraisseDFA dfa = restrict_to_reachable(input);
  const Symmetry& symm = *dfa.symmetry;
  NomSet x = dfa.config_space();
  auto xx = std::make_shared<const ProductResult>(product(x, x));

  // Successor orbits of every pair orbit, over all letter types.
  int m = xx->set.size();
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(m));
  for (int o = 0; o < m; ++o) {
    Element z = realize_element(xx->set, o);
    auto [l, r] = unpair(*xx, z);
    for (const Annotation& ann : enumerate_annotations(symm, xx->set.orbit(o))) {
      DataValue d = ann.distinguished ? z.valuation[static_cast<std::size_t>(ann.reg)]
                                      : symm.witness(ann.structure, z.valuation, {});
      succ[static_cast<std::size_t>(o)].push_back(pair(*xx, step(dfa, l, d), step(dfa, r, d)).orbit);
    }
  }

  std::vector<bool> related(static_cast<std::size_t>(m));
  for (int o = 0; o < m; ++o) {
    const ProductTag& t = xx->tags[static_cast<std::size_t>(o)];
    related[static_cast<std::size_t>(o)] =
        dfa.accepting[static_cast<std::size_t>(t.left)] == dfa.accepting[static_cast<std::size_t>(t.right)];
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int o = 0; o < m; ++o) {
      if (!related[static_cast<std::size_t>(o)])
        continue;
      for (int s : succ[static_cast<std::size_t>(o)])
        if (!related[static_cast<std::size_t>(s)]) {
          related[static_cast<std::size_t>(o)] = false;
          changed = true;
          break;
        }
    }
  }
  EqRelation rel{xx, {}};
  for (int o = 0; o < m; ++o)
    if (related[static_cast<std::size_t>(o)])
      rel.members.members.insert(o);

  QuotientResult quo = quotient_unchecked(x, rel);
  std::vector<int> rep_of(static_cast<std::size_t>(quo.set.size()), -1);
  for (int o = 0; o < x.size(); ++o) {
    int t = quo.abstraction.entries[static_cast<std::size_t>(o)]->target;
    if (rep_of[static_cast<std::size_t>(t)] < 0)
      rep_of[static_cast<std::size_t>(t)] = o;
  }

  std::vector<std::pair<std::string, OrbitRepr>> states;
  std::vector<bool> acc;
  for (int s = 0; s < quo.set.size(); ++s) {
    states.emplace_back(quo.set.orbit(s).name, quo.set.orbit(s));
    acc.push_back(dfa.accepting[static_cast<std::size_t>(rep_of[static_cast<std::size_t>(s)])]);
  }
  int init = quo.abstraction.entries[static_cast<std::size_t>(dfa.initial)]->target;
  return build_dfa(symm, std::move(states), init, std::move(acc), [&](int s, int, const Annotation& ann) {
    Element y = realize_element(quo.set, s);
    DataValue d = ann.distinguished ? y.valuation[static_cast<std::size_t>(ann.reg)]
                                    : symm.witness(ann.structure, y.valuation, {});
    Valuation g = annotated_valuation(y.valuation, ann, d);
    int o = rep_of[static_cast<std::size_t>(s)];
    const MapEntry& e = *quo.abstraction.entries[static_cast<std::size_t>(o)];
    PartialValuation partial(static_cast<std::size_t>(x.orbit(o).carrier()));
    for (std::size_t k = 0; k < e.witness.size(); ++k)
      partial[static_cast<std::size_t>(e.witness[k])] = y.valuation[k];
    Valuation pre = extend_valuation(symm, x.orbit(o).shape, partial, g);
    Config c{o, canonical_valuation(x.orbit(o).sym, pre)};
    Element img = apply(quo.set, quo.abstraction, step(dfa, c, d));
    return DfaTransition{img.orbit, locate(img.valuation, g)};
  });
}

} // namespace nominal
