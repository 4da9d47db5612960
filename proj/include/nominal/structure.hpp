#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "nominal/perm.hpp"

namespace nominal {

struct Fact {
  int rel = 0;
  std::vector<int> args;

  auto operator<=>(const Fact&) const = default;
};

/// A finite relational structure on the carrier {0..size-1}.
/// Facts are kept sorted and duplicate-free, so == is structural equality.
class FinStruct {
public:
  FinStruct() = default;
  explicit FinStruct(int size, std::vector<Fact> facts = {});

  int size() const { return size_; }
  const std::vector<Fact>& facts() const { return facts_; }
  bool has(const Fact& f) const;
  bool has(int rel, int a, int b) const { return has(Fact{rel, {a, b}}); }

  auto operator<=>(const FinStruct&) const = default;

private:
  int size_ = 0;
  std::vector<Fact> facts_;
};

/// Moves index a to map[a]; the result has carrier new_size (default: same).
FinStruct relabel(const FinStruct& s, std::span<const int> map, int new_size = -1);
inline FinStruct relabel(const FinStruct& s, const Perm& p) { return relabel(s, p.images()); }

/// Structure induced on the listed indices; new index k stands for indices[k].
FinStruct restrict(const FinStruct& s, std::span<const int> indices);

FinStruct restrict_prefix(const FinStruct& s, int n);

/// True iff map is injective and reflects/preserves every relation.
bool is_embedding(std::span<const int> map, const FinStruct& from, const FinStruct& into);

/// All embeddings of b into a, in lexicographic order of the map.
std::vector<std::vector<int>> embeddings(const FinStruct& b, const FinStruct& a);

PermGroup automorphisms(const FinStruct& s);

/// Lexicographically least relabeling over all permutations, with the first
/// witnessing relabeling. Brute force; intended for small carriers.
std::pair<FinStruct, Perm> canonical_form_bruteforce(const FinStruct& s);

} // namespace nominal
