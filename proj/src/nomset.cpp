#include "nominal/nomset.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "nominal/errors.hpp"

namespace nominal {

namespace {

std::string orbit_label(const NomSet& set, int o) {
  const std::string& n = set.orbit(o).name;
  return n.empty() ? "o" + std::to_string(o) : n;
}

bool is_automorphism(const FinStruct& s, const Perm& p) {
  return restrict(s, p.images()) == s;
}

} // namespace

std::pair<OrbitRepr, Perm> make_orbit_relabeled(const Symmetry& symm, const FinStruct& shape,
                                                const PermGroup& sym, std::string name) {
  if (!symm.member(shape))
    throw ValidationError("shape " + (symm.describe(shape).empty() ? std::string("{}") : symm.describe(shape)) +
                          " is not a member of the " + symm.name() + " class");
  if (sym.carrier_size() != shape.size())
    throw UsageError("local symmetry acts on " + std::to_string(sym.carrier_size()) +
                     " points but the shape has " + std::to_string(shape.size()));
  for (const Perm& p : sym.elements())
    if (!is_automorphism(shape, p))
      throw ValidationError("local symmetry element " + p.to_cycles() +
                            " is not an automorphism of the shape");
  auto [canon, k] = symm.canonical_form(shape);
  OrbitRepr out{std::move(canon), conjugate(sym, k), std::move(name)};
  return {std::move(out), k};
}

OrbitRepr make_orbit(const Symmetry& symm, const FinStruct& shape, const PermGroup& sym,
                     std::string name) {
  return make_orbit_relabeled(symm, shape, sym, std::move(name)).first;
}

int NomSet::max_carrier() const {
  int m = 0;
  for (const OrbitRepr& o : orbits)
    m = std::max(m, o.carrier());
  return m;
}

NomSet disjoint_union(const NomSet& a, const NomSet& b) {
  if (a.symmetry != b.symmetry)
    throw UsageError("disjoint union of nominal sets over different symmetries");
  NomSet out{a.symmetry, a.orbits};
  out.orbits.insert(out.orbits.end(), b.orbits.begin(), b.orbits.end());
  return out;
}

Valuation canonical_valuation(const PermGroup& sym, const Valuation& values) {
  return canonical_under(sym, values).first;
}

std::optional<Element> element_in_orbit(const NomSet& set, int orbit, const Valuation& values) {
  const OrbitRepr& o = set.orbit(orbit);
  if (static_cast<int>(values.size()) != o.carrier())
    return std::nullopt;
  if (set.symmetry->induced_struct(values) != o.shape)
    return std::nullopt;
  return Element{orbit, canonical_valuation(o.sym, values)};
}

std::optional<Element> element_of(const NomSet& set, const Valuation& values) {
  for (int o = 0; o < set.size(); ++o)
    if (auto e = element_in_orbit(set, o, values))
      return e;
  return std::nullopt;
}

Element realize_element(const NomSet& set, int orbit, std::span<const DataValue> avoid) {
  const OrbitRepr& o = set.orbit(orbit);
  return Element{orbit, canonical_valuation(o.sym, realize(*set.symmetry, o.shape, avoid))};
}

std::set<DataValue> least_support(const Element& x) {
  return std::set<DataValue>(x.valuation.begin(), x.valuation.end());
}

std::string format_element(const NomSet& set, const Element& x) {
  std::string out = orbit_label(set, x.orbit);
  if (x.valuation.empty())
    return out;
  out += '(';
  for (std::size_t i = 0; i < x.valuation.size(); ++i) {
    if (i)
      out += ", ";
    out += x.valuation[i].to_string();
  }
  return out + ')';
}

bool commutes(const std::vector<int>& u, const PermGroup& src_sym, const PermGroup& tgt_sym) {
  for (const Perm& s : src_sym.elements()) {
    bool found = false;
    for (const Perm& t : tgt_sym.elements()) {
      bool ok = true;
      for (std::size_t b = 0; b < u.size() && ok; ++b)
        ok = s(u[b]) == u[static_cast<std::size_t>(t(static_cast<int>(b)))];
      if (ok) {
        found = true;
        break;
      }
    }
    if (!found)
      return false;
  }
  return true;
}

std::vector<int> canonical_witness(const std::vector<int>& u, const PermGroup& tgt_sym) {
  return canonical_under(tgt_sym, u).first;
}

EqMap make_eqmap(const NomSet& src, const NomSet& tgt, std::vector<std::optional<MapEntry>> entries) {
  if (static_cast<int>(entries.size()) != src.size())
    throw UsageError("equivariant map needs one entry per source orbit");
  for (int o = 0; o < src.size(); ++o) {
    auto& e = entries[static_cast<std::size_t>(o)];
    if (!e)
      continue;
    if (e->target < 0 || e->target >= tgt.size())
      throw UsageError("equivariant map: target orbit out of range");
    const OrbitRepr& a = src.orbit(o);
    const OrbitRepr& b = tgt.orbit(e->target);
    if (!is_embedding(e->witness, b.shape, a.shape))
      throw ValidationError("equivariant map witness for orbit " + orbit_label(src, o) +
                            " is not an embedding of the target shape");
    if (!commutes(e->witness, a.sym, b.sym))
      throw ValidationError("equivariant map witness for orbit " + orbit_label(src, o) +
                            " does not commute with the local symmetries");
    e->witness = canonical_witness(e->witness, b.sym);
  }
  return EqMap{std::move(entries)};
}

std::vector<std::vector<int>> hom_enumerate(const Symmetry& symm, const OrbitRepr& src,
                                            const OrbitRepr& tgt) {
  std::set<std::vector<int>> out;
  for (auto& u : symm.embeddings(tgt.shape, src.shape))
    if (commutes(u, src.sym, tgt.sym))
      out.insert(canonical_witness(u, tgt.sym));
  return {out.begin(), out.end()};
}

Element apply(const NomSet& tgt, const EqMap& map, const Element& x) {
  if (x.orbit < 0 || x.orbit >= static_cast<int>(map.entries.size()) ||
      !map.entries[static_cast<std::size_t>(x.orbit)])
    throw UsageError("partial map is undefined on orbit " + std::to_string(x.orbit));
  const MapEntry& e = *map.entries[static_cast<std::size_t>(x.orbit)];
  Valuation v;
  v.reserve(e.witness.size());
  for (int b : e.witness)
    v.push_back(x.valuation.at(static_cast<std::size_t>(b)));
  return Element{e.target, canonical_valuation(tgt.orbit(e.target).sym, v)};
}

const std::vector<int>& ProductResult::orbits_for(int l, int r) const {
  static const std::vector<int> none;
  auto it = index.find({l, r});
  return it == index.end() ? none : it->second;
}

namespace {

/// Injection of the right carrier into the amalgamated carrier for a given rho.
std::vector<int> right_layout(const std::vector<int>& rho, int nb) {
  int na = static_cast<int>(rho.size());
  std::vector<int> j(static_cast<std::size_t>(nb), -1);
  for (int a = 0; a < na; ++a)
    if (rho[static_cast<std::size_t>(a)] >= 0)
      j[static_cast<std::size_t>(rho[static_cast<std::size_t>(a)])] = a;
  int next = na;
  for (int b = 0; b < nb; ++b)
    if (j[static_cast<std::size_t>(b)] < 0)
      j[static_cast<std::size_t>(b)] = next++;
  return j;
}

void partial_injections(int na, int nb, std::vector<int>& rho, std::vector<char>& used,
                        std::vector<std::vector<int>>& out) {
  int a = static_cast<int>(rho.size());
  if (a == na) {
    out.push_back(rho);
    return;
  }
  rho.push_back(-1);
  partial_injections(na, nb, rho, used, out);
  for (int b = 0; b < nb; ++b) {
    if (used[static_cast<std::size_t>(b)])
      continue;
    used[static_cast<std::size_t>(b)] = 1;
    rho.back() = b;
    partial_injections(na, nb, rho, used, out);
    used[static_cast<std::size_t>(b)] = 0;
  }
  rho.pop_back();
}

struct Candidate {
  std::vector<int> rho;
  FinStruct amalgam;

  auto operator<=>(const Candidate&) const = default;
};

void extend_amalgams(const Symmetry& symm, const FinStruct& b, const std::vector<int>& j,
                     const FinStruct& cur, int total, std::vector<FinStruct>& out) {
  int p = cur.size();
  if (p == total) {
    out.push_back(cur);
    return;
  }
  std::vector<int> bs, js;
  for (int x = 0; x < b.size(); ++x)
    if (j[static_cast<std::size_t>(x)] <= p) {
      bs.push_back(x);
      js.push_back(j[static_cast<std::size_t>(x)]);
    }
  FinStruct want = restrict(b, bs);
  for (const FinStruct& ext : symm.one_point_extensions(cur))
    if (restrict(ext, js) == want)
      extend_amalgams(symm, b, j, ext, total, out);
}

Candidate act(const Candidate& c, const Perm& s, const Perm& t, int nb) {
  int na = static_cast<int>(c.rho.size());
  Perm tinv = t.inverse();
  std::vector<int> rho(static_cast<std::size_t>(na), -1);
  for (int a = 0; a < na; ++a) {
    int b = c.rho[static_cast<std::size_t>(s(a))];
    rho[static_cast<std::size_t>(a)] = b < 0 ? -1 : tinv(b);
  }
  std::vector<int> j_old = right_layout(c.rho, nb);
  std::vector<int> j_new = right_layout(rho, nb);
  std::vector<int> m(static_cast<std::size_t>(c.amalgam.size()), -1);
  for (int a = 0; a < na; ++a)
    m[static_cast<std::size_t>(a)] = s(a);
  for (int b = 0; b < nb; ++b)
    m[static_cast<std::size_t>(j_new[static_cast<std::size_t>(b)])] =
        j_old[static_cast<std::size_t>(t(b))];
  return Candidate{std::move(rho), restrict(c.amalgam, m)};
}

} // namespace

ProductResult product(const NomSet& x, const NomSet& y) {
  if (x.symmetry != y.symmetry)
    throw UsageError("product of nominal sets over different symmetries");
  const Symmetry& symm = *x.symmetry;
  ProductResult res;
  res.left = x;
  res.right = y;
  res.set.symmetry = x.symmetry;
  for (int l = 0; l < x.size(); ++l) {
    for (int r = 0; r < y.size(); ++r) {
      const OrbitRepr& A = x.orbit(l);
      const OrbitRepr& B = y.orbit(r);
      int na = A.carrier(), nb = B.carrier();
      std::vector<std::vector<int>> rhos;
      {
        std::vector<int> rho;
        std::vector<char> used(static_cast<std::size_t>(nb), 0);
        partial_injections(na, nb, rho, used, rhos);
      }
      std::vector<Candidate> cands;
      for (const auto& rho : rhos) {
        std::vector<int> as, bs;
        for (int a = 0; a < na; ++a)
          if (rho[static_cast<std::size_t>(a)] >= 0) {
            as.push_back(a);
            bs.push_back(rho[static_cast<std::size_t>(a)]);
          }
        if (restrict(A.shape, as) != restrict(B.shape, bs))
          continue;
        std::vector<int> j = right_layout(rho, nb);
        int total = na + nb - static_cast<int>(as.size());
        std::vector<FinStruct> amalgams;
        extend_amalgams(symm, B.shape, j, A.shape, total, amalgams);
        for (auto& c : amalgams)
          cands.push_back(Candidate{rho, std::move(c)});
      }
      std::set<Candidate> seen;
      std::vector<Candidate> reps;
      for (const Candidate& c : cands) {
        if (seen.count(c))
          continue;
        Candidate best = c;
        for (const Perm& s : A.sym.elements())
          for (const Perm& t : B.sym.elements()) {
            Candidate d = act(c, s, t, nb);
            if (d < best)
              best = d;
            seen.insert(std::move(d));
          }
        reps.push_back(std::move(best));
      }
      std::sort(reps.begin(), reps.end());
      std::vector<int>& idx = res.index[{l, r}];
      for (std::size_t k = 0; k < reps.size(); ++k) {
        const Candidate& c = reps[k];
        std::vector<int> j = right_layout(c.rho, nb);
        int m = c.amalgam.size();
        std::vector<Perm> usym;
        for (const Perm& s : A.sym.elements())
          for (const Perm& t : B.sym.elements()) {
            std::vector<int> pi(static_cast<std::size_t>(m), -1);
            for (int a = 0; a < na; ++a)
              pi[static_cast<std::size_t>(a)] = s(a);
            bool ok = true;
            for (int b = 0; b < nb && ok; ++b) {
              int from = j[static_cast<std::size_t>(b)];
              int to = j[static_cast<std::size_t>(t(b))];
              int& slot = pi[static_cast<std::size_t>(from)];
              if (slot >= 0 && slot != to)
                ok = false;
              slot = to;
            }
            if (!ok)
              continue;
            std::vector<char> hit(static_cast<std::size_t>(m), 0);
            for (int v : pi) {
              if (v < 0 || hit[static_cast<std::size_t>(v)]) {
                ok = false;
                break;
              }
              hit[static_cast<std::size_t>(v)] = 1;
            }
            if (!ok)
              continue;
            Perm p(pi);
            if (is_automorphism(c.amalgam, p))
              usym.push_back(std::move(p));
          }
        PermGroup u = group_from_closed_set(std::move(usym), m);
        auto [canon, kappa] = symm.canonical_form(c.amalgam);
        ProductTag tag;
        tag.left = l;
        tag.right = r;
        tag.rho = c.rho;
        for (int a = 0; a < na; ++a)
          tag.inj_left.push_back(kappa(a));
        for (int b = 0; b < nb; ++b)
          tag.inj_right.push_back(kappa(j[static_cast<std::size_t>(b)]));
        std::string name = orbit_label(x, l) + "*" + orbit_label(y, r);
        if (reps.size() > 1)
          name += "." + std::to_string(k);
        res.set.orbits.push_back(OrbitRepr{std::move(canon), conjugate(u, kappa), std::move(name)});
        idx.push_back(static_cast<int>(res.tags.size()));
        res.tags.push_back(std::move(tag));
      }
    }
  }
  return res;
}

Element pair(const ProductResult& p, const Element& x, const Element& y) {
  const OrbitRepr& A = p.left.orbit(x.orbit);
  const OrbitRepr& B = p.right.orbit(y.orbit);
  if (static_cast<int>(x.valuation.size()) != A.carrier() ||
      static_cast<int>(y.valuation.size()) != B.carrier())
    throw UsageError("pair: element does not belong to the component set");
  const Symmetry& symm = *p.set.symmetry;
  for (int o : p.orbits_for(x.orbit, y.orbit)) {
    const ProductTag& tag = p.tags[static_cast<std::size_t>(o)];
    const OrbitRepr& C = p.set.orbit(o);
    int m = C.carrier();
    for (const Perm& s : A.sym.elements())
      for (const Perm& t : B.sym.elements()) {
        std::vector<std::optional<DataValue>> g(static_cast<std::size_t>(m));
        for (int a = 0; a < A.carrier(); ++a)
          g[static_cast<std::size_t>(tag.inj_left[static_cast<std::size_t>(a)])] =
              x.valuation[static_cast<std::size_t>(s(a))];
        bool ok = true;
        for (int b = 0; b < B.carrier() && ok; ++b) {
          auto& slot = g[static_cast<std::size_t>(tag.inj_right[static_cast<std::size_t>(b)])];
          const DataValue& v = y.valuation[static_cast<std::size_t>(t(b))];
          if (slot && *slot != v)
            ok = false;
          slot = v;
        }
        if (!ok)
          continue;
        Valuation gv;
        gv.reserve(g.size());
        for (auto& v : g)
          gv.push_back(*v);
        Valuation sorted = gv;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
          continue;
        if (symm.induced_struct(gv) != C.shape)
          continue;
        return Element{o, canonical_valuation(C.sym, gv)};
      }
  }
  throw std::logic_error("pair: no product orbit matches " + format_element(p.left, x) + " and " +
                         format_element(p.right, y));
}

std::pair<Element, Element> unpair(const ProductResult& p, const Element& z) {
  const ProductTag& tag = p.tags.at(static_cast<std::size_t>(z.orbit));
  Valuation a, b;
  for (int i : tag.inj_left)
    a.push_back(z.valuation.at(static_cast<std::size_t>(i)));
  for (int i : tag.inj_right)
    b.push_back(z.valuation.at(static_cast<std::size_t>(i)));
  return {Element{tag.left, canonical_valuation(p.left.orbit(tag.left).sym, a)},
          Element{tag.right, canonical_valuation(p.right.orbit(tag.right).sym, b)}};
}

bool EqRelation::relates(const Element& x, const Element& y) const {
  return members.contains(pair(*base, x, y).orbit);
}

EquivalenceCheck check_equivalence(const EqRelation& r) {
  const ProductResult& xx = *r.base;
  const NomSet& x = xx.left;
  EquivalenceCheck out;
  for (int o = 0; o < x.size(); ++o) {
    Element e = realize_element(x, o);
    if (!r.relates(e, e)) {
      out.ok = false;
      out.failure = "not reflexive at " + format_element(x, e);
      out.counterexample = {e};
      return out;
    }
  }
  for (int m : r.members.members) {
    auto [a, b] = unpair(xx, realize_element(xx.set, m));
    if (!r.relates(b, a)) {
      out.ok = false;
      out.failure = "not symmetric at (" + format_element(x, a) + ", " + format_element(x, b) + ")";
      out.counterexample = {a, b};
      return out;
    }
  }
  ProductResult xxx = product(xx.set, x);
  for (int t = 0; t < xxx.set.size(); ++t) {
    auto [ab, c] = unpair(xxx, realize_element(xxx.set, t));
    if (!r.members.contains(ab.orbit))
      continue;
    auto [a, b] = unpair(xx, ab);
    if (r.relates(b, c) && !r.relates(a, c)) {
      out.ok = false;
      out.failure = "not transitive at (" + format_element(x, a) + ", " + format_element(x, b) +
                    ", " + format_element(x, c) + ")";
      out.counterexample = {a, b, c};
      return out;
    }
  }
  return out;
}

EqRelation diagonal_relation(std::shared_ptr<const ProductResult> xx) {
  EqRelation r{std::move(xx), {}};
  for (int o = 0; o < r.base->left.size(); ++o) {
    Element e = realize_element(r.base->left, o);
    r.members.members.insert(pair(*r.base, e, e).orbit);
  }
  return r;
}

QuotientResult quotient(const NomSet& x, const EqRelation& r) {
  EquivalenceCheck chk = check_equivalence(r);
  if (!chk.ok)
    throw ValidationError("relation is not an equivalence: " + chk.failure);
  return quotient_unchecked(x, r);
}

QuotientResult quotient_unchecked(const NomSet& x, const EqRelation& r) {
  const Symmetry& symm = *x.symmetry;
  const ProductResult& xx = *r.base;

  std::vector<int> parent(static_cast<std::size_t>(x.size()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a)
      a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    return a;
  };
  for (int m : r.members.members) {
    int a = find(xx.tags[static_cast<std::size_t>(m)].left);
    int b = find(xx.tags[static_cast<std::size_t>(m)].right);
    if (a != b)
      parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

  QuotientResult out;
  out.set.symmetry = x.symmetry;
  std::vector<std::optional<MapEntry>> entries(static_cast<std::size_t>(x.size()));
  for (int o = 0; o < x.size(); ++o) {
    if (find(o) != o)
      continue;
    const OrbitRepr& A = x.orbit(o);
    Element rep = realize_element(x, o);
    std::vector<int> keep;
    for (int k = 0; k < A.carrier(); ++k) {
      PartialValuation partial(rep.valuation.begin(), rep.valuation.end());
      partial[static_cast<std::size_t>(k)].reset();
      Valuation moved = extend_valuation(symm, A.shape, partial, rep.valuation);
      if (!r.relates(rep, Element{o, canonical_valuation(A.sym, moved)}))
        keep.push_back(k);
    }
    FinStruct reduced = restrict(A.shape, keep);
    auto [canon, kappa] = symm.canonical_form(reduced);
    Perm kinv = kappa.inverse();
    int nk = canon.size();
    // Register of the representative orbit behind each quotient register.
    std::vector<int> u(static_cast<std::size_t>(nk));
    for (int mm = 0; mm < nk; ++mm)
      u[static_cast<std::size_t>(mm)] = keep[static_cast<std::size_t>(kinv(mm))];
    std::vector<Perm> usym;
    PermGroup aut = symm.automorphisms(canon);
    for (const Perm& t : aut.elements()) {
      PartialValuation partial(static_cast<std::size_t>(A.carrier()));
      for (int mm = 0; mm < nk; ++mm)
        partial[static_cast<std::size_t>(u[static_cast<std::size_t>(mm)])] =
            rep.valuation[static_cast<std::size_t>(u[static_cast<std::size_t>(t(mm))])];
      Valuation moved = extend_valuation(symm, A.shape, partial, rep.valuation);
      if (r.relates(rep, Element{o, canonical_valuation(A.sym, moved)}))
        usym.push_back(t);
    }
    PermGroup ug = closure(usym, nk);
    if (ug.order() != usym.size())
      throw ValidationError("relation is not an equivalence: class symmetries do not form a group");
    int qo = out.set.size();
    out.set.orbits.push_back(OrbitRepr{canon, ug, A.name});
    entries[static_cast<std::size_t>(o)] = MapEntry{qo, canonical_witness(u, ug)};

    for (int o2 = o + 1; o2 < x.size(); ++o2) {
      if (find(o2) != o)
        continue;
      int link = -1;
      for (int m : xx.orbits_for(o, o2))
        if (r.members.contains(m)) {
          link = m;
          break;
        }
      if (link < 0)
        throw ValidationError("relation is not an equivalence: orbits " + orbit_label(x, o) +
                              " and " + orbit_label(x, o2) + " are only linked indirectly");
      auto [x1, y1] = unpair(xx, realize_element(xx.set, link));
      std::vector<int> u2;
      for (int mm = 0; mm < nk; ++mm) {
        const DataValue& v = x1.valuation[static_cast<std::size_t>(u[static_cast<std::size_t>(mm)])];
        auto it = std::find(y1.valuation.begin(), y1.valuation.end(), v);
        if (it == y1.valuation.end())
          throw ValidationError("relation is not an equivalence: class support is not shared by " +
                                orbit_label(x, o2));
        u2.push_back(static_cast<int>(it - y1.valuation.begin()));
      }
      entries[static_cast<std::size_t>(o2)] = MapEntry{qo, canonical_witness(u2, ug)};
    }
  }
  out.abstraction = make_eqmap(x, out.set, std::move(entries));
  return out;
}

} // namespace nominal
