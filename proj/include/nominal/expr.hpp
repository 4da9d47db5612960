#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nominal/nomset.hpp"

namespace nominal {

/// Nominal set expressions: atom, tuple(k), dtuple(k), set2, set(k),
/// otuple(k), prod(e, ...), sum(e, ...), struct(k[, facts]) and
/// sym(struct(...), generators).
struct Expr {
  enum class Kind { Atom, Tuple, DTuple, Set, OTuple, Prod, Sum, Struct };
  Kind kind = Kind::Atom;
  int k = 1;
  std::vector<Expr> children;
  /// Struct only: facts and generator text as written.
  std::string facts;
  std::string gens;
};

Expr parse_expr(std::string_view text);
std::string to_string(const Expr& e);

NomSet eval_expr(const Symmetry& symm, const Expr& e);

} // namespace nominal
