#pragma once

#include <string>
#include <vector>

#include "lexer.hpp"
#include "nominal/nomset.hpp"

namespace nominal::text {

/// Reads "symmetry NAME" (optional, default equality) followed by the kind
/// keyword; returns the index of the first body line.
std::size_t parse_header(const std::vector<Line>& lines, const std::string& keyword,
                         const Symmetry*& symm);

struct StateDecl {
  std::string name;
  FinStruct user_shape;
  OrbitRepr orbit;
  /// User register index -> canonical register index.
  Perm kappa;
  const Line* line = nullptr;
};

/// "state NAME registers K [rel "..."] [sym "..."]".
StateDecl parse_state_decl(const Symmetry& symm, const Line& l);

std::string write_state_decl(const Symmetry& symm, const OrbitRepr& o, const std::string& name);

const Token& expect_word(const Line& l, std::size_t i, const std::string& what);

} // namespace nominal::text
