#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nominal/data_value.hpp"
#include "nominal/perm.hpp"
#include "nominal/structure.hpp"

namespace nominal {

struct RelationInfo {
  std::string name;
  int arity = 2;
};

/// A Fraisse class together with a concrete presentation of its limit.
///
/// Implementations are stateless singletons; obtain them through
/// symmetry_for() or symmetry_named().
class Symmetry {
public:
  virtual ~Symmetry() = default;

  virtual Backend backend() const = 0;
  const char* name() const { return backend_name(backend()); }
  virtual const std::vector<RelationInfo>& signature() const = 0;
  int relation_index(std::string_view name) const;

  virtual bool member(const FinStruct& s) const = 0;

  /// All members on carrier n+1 restricting to a on {0..n-1}; the new
  /// element is index n.
  virtual std::vector<FinStruct> one_point_extensions(const FinStruct& a) const = 0;

  virtual FinStruct induced_struct(std::span<const DataValue> values) const = 0;

  /// A value d outside valuation and forbidden with
  /// induced_struct(valuation + [d]) == a_star. Deterministic.
  virtual DataValue witness(const FinStruct& a_star, std::span<const DataValue> valuation,
                            std::span<const DataValue> forbidden) const = 0;

  /// Least relabeling of s (by fact list) and the relabeling that produced it.
  virtual std::pair<FinStruct, Perm> canonical_form(const FinStruct& s) const;

  virtual DataValue parse_value(std::string_view text) const = 0;

  /// Completes a user-supplied fact list (transitive closure for orders,
  /// symmetric closure for graphs).
  virtual FinStruct close_facts(int n, std::vector<Fact> facts) const = 0;

  /// Human-readable fact list such as "0<1<2" or "E(0,1); E(1,2)".
  virtual std::string describe(const FinStruct& s,
                               const std::function<std::string(int)>& name) const = 0;
  std::string describe(const FinStruct& s) const;

  /// Embeddings are restricted to the class, so a member check is included.
  PermGroup automorphisms(const FinStruct& s) const;
  std::vector<std::vector<int>> embeddings(const FinStruct& b, const FinStruct& a) const;

  /// Conservative extension type of d over valuation, i.e. the structure
  /// induced on valuation + [d].
  FinStruct extension_type(std::span<const DataValue> valuation, const DataValue& d) const;

  /// The induced structure with an extra candidate value appended.
  bool realizes(const FinStruct& a_star, std::span<const DataValue> valuation,
                const DataValue& d) const;
};

const Symmetry& symmetry_for(Backend b);
/// "equality", "order" or "graph"; throws UsageError otherwise.
const Symmetry& symmetry_named(std::string_view name);

/// Rado adjacency for distinct naturals: x < y adjacent iff bit x of y is set.
bool rado_adjacent(std::int64_t x, std::int64_t y);

} // namespace nominal
