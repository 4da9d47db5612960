#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nominal/concrete.hpp"
#include "nominal/perm.hpp"
#include "nominal/structure.hpp"
#include "nominal/symmetry.hpp"

namespace nominal {

/// A single-orbit nominal set: embeddings of shape into the limit, modulo sym.
struct OrbitRepr {
  FinStruct shape;
  PermGroup sym;
  std::string name;

  int carrier() const { return shape.size(); }
  bool operator==(const OrbitRepr& o) const { return shape == o.shape && sym == o.sym; }
};

/// Validates sym <= Aut(shape) and canonicalizes. The returned permutation
/// maps old carrier indices to canonical ones.
std::pair<OrbitRepr, Perm> make_orbit_relabeled(const Symmetry& symm, const FinStruct& shape,
                                                const PermGroup& sym, std::string name = "");
OrbitRepr make_orbit(const Symmetry& symm, const FinStruct& shape, const PermGroup& sym,
                     std::string name = "");

struct NomSet {
  const Symmetry* symmetry = nullptr;
  std::vector<OrbitRepr> orbits;

  int size() const { return static_cast<int>(orbits.size()); }
  const OrbitRepr& orbit(int i) const { return orbits.at(static_cast<std::size_t>(i)); }
  int max_carrier() const;
};

NomSet disjoint_union(const NomSet& a, const NomSet& b);

struct Element {
  int orbit = -1;
  Valuation valuation;

  auto operator<=>(const Element&) const = default;
};

/// Canonical valuation of the class [values] under sym.
Valuation canonical_valuation(const PermGroup& sym, const Valuation& values);

/// The canonical element for values if they embed the shape of orbit, else none.
std::optional<Element> element_in_orbit(const NomSet& set, int orbit, const Valuation& values);
std::optional<Element> element_of(const NomSet& set, const Valuation& values);

/// Some element of the orbit, built from witnesses.
Element realize_element(const NomSet& set, int orbit, std::span<const DataValue> avoid = {});

std::set<DataValue> least_support(const Element& x);

std::string format_element(const NomSet& set, const Element& x);

/// Equivariant function given orbit-wise by embeddings of the target shape
/// into the source shape (one optional entry per source orbit).
struct MapEntry {
  int target = -1;
  std::vector<int> witness;
};

struct EqMap {
  std::vector<std::optional<MapEntry>> entries;
};

/// True iff for all s in src_sym there is t in tgt_sym with s(u(b)) == u(t(b)).
bool commutes(const std::vector<int>& u, const PermGroup& src_sym, const PermGroup& tgt_sym);

/// Least u o t over t in tgt_sym.
std::vector<int> canonical_witness(const std::vector<int>& u, const PermGroup& tgt_sym);

/// Builds an EqMap, checking that witnesses are embeddings and commute.
EqMap make_eqmap(const NomSet& src, const NomSet& tgt, std::vector<std::optional<MapEntry>> entries);

/// All equivariant functions between two single orbits, as canonical witnesses.
std::vector<std::vector<int>> hom_enumerate(const Symmetry& symm, const OrbitRepr& src,
                                            const OrbitRepr& tgt);

Element apply(const NomSet& tgt, const EqMap& map, const Element& x);

/// Provenance of one orbit of a product.
struct ProductTag {
  int left = -1;
  int right = -1;
  /// rho[a] = b when left register a and right register b carry the same value, else -1.
  std::vector<int> rho;
  std::vector<int> inj_left;
  std::vector<int> inj_right;
};

struct ProductResult {
  NomSet left;
  NomSet right;
  NomSet set;
  std::vector<ProductTag> tags;
  std::map<std::pair<int, int>, std::vector<int>> index;

  const std::vector<int>& orbits_for(int l, int r) const;
};

ProductResult product(const NomSet& x, const NomSet& y);

Element pair(const ProductResult& p, const Element& x, const Element& y);
std::pair<Element, Element> unpair(const ProductResult& p, const Element& z);

struct EqSubset {
  std::set<int> members;
  bool contains(int o) const { return members.count(o) != 0; }
};

/// An equivariant relation on X, as a set of orbits of X x X.
struct EqRelation {
  std::shared_ptr<const ProductResult> base;
  EqSubset members;

  bool relates(const Element& x, const Element& y) const;
};

struct EquivalenceCheck {
  bool ok = true;
  std::string failure;
  std::vector<Element> counterexample;
};

EquivalenceCheck check_equivalence(const EqRelation& r);

struct QuotientResult {
  NomSet set;
  EqMap abstraction;
};

/// Classes of an equivariant equivalence relation, with the abstraction map.
QuotientResult quotient(const NomSet& x, const EqRelation& r);
/// As quotient, for relations already known to be equivalences.
QuotientResult quotient_unchecked(const NomSet& x, const EqRelation& r);

/// The diagonal relation on X.
EqRelation diagonal_relation(std::shared_ptr<const ProductResult> xx);

} // namespace nominal
