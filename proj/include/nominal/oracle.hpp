#pragma once

#include <set>
#include <string>
#include <vector>

#include "nominal/dfa.hpp"
#include "nominal/expr.hpp"
#include "nominal/fma.hpp"
#include "nominal/nfa.hpp"

namespace nominal {

/// An explicit finite subset of the data domain.
struct FiniteDomain {
  const Symmetry* symmetry = nullptr;
  std::vector<DataValue> values;
};

/// 0..n-1 in the backend's value syntax.
FiniteDomain default_domain(const Symmetry& symm, int n);
FiniteDomain parse_domain(const Symmetry& symm, const std::string& text);

/// A finite automaton over the letters of a finite domain.
struct ClassicalAutomaton {
  std::vector<DataValue> alphabet;
  std::vector<std::string> labels;
  /// next[state][letter] lists the successors.
  std::vector<std::vector<std::vector<int>>> next;
  std::vector<int> initial;
  std::vector<bool> accepting;
  /// Number of letters; words are index sequences below this bound.
  int letters = 0;

  int size() const { return static_cast<int>(next.size()); }
  bool accepts(const std::vector<int>& word) const;
  bool accepts(const Word& word) const;
};

/// Every configuration with registers in dom, with transitions computed by
/// direct search over the automaton's annotation table.
ClassicalAutomaton restrict_dfa(const FraisseDFA& dfa, const FiniteDomain& dom);

/// dom plus 2k extra values per extension type over dom (k = largest carrier).
/// Graph extras are pairwise non-adjacent.
std::vector<DataValue> oracle_pool(const Symmetry& symm, const std::vector<DataValue>& dom, int k);

/// Every configuration with registers in the oracle pool; transitions decided
/// by matching the positional pattern of each concrete triple against the
/// rearranged representatives of the selected orbits. Epsilon moves are folded
/// into the letter transitions and the initial set.
ClassicalAutomaton restrict_nfa(const NominalNFA& a, const FiniteDomain& dom, const std::vector<Letter>& letters);

/// Every configuration with registers in dom plus 2n+1 extra values or
/// undefined; letters are (label, value) pairs, label-major.
ClassicalAutomaton restrict_fma(const FMA& m, const FiniteDomain& dom);

using LetterWord = std::vector<int>;

/// Accepted words of length at most len, as letter indices.
std::set<LetterWord> language_upto(const ClassicalAutomaton& a, int len);

/// Size of the minimal complete DFA for a deterministic classical automaton
/// (reachable part, Moore refinement).
int minimal_size(const ClassicalAutomaton& a);

/// Every word of length at most len over n letters, shortest first.
std::vector<LetterWord> all_words(int n, int len);

struct OrbitCount {
  std::size_t count = 0;
  /// Fewer domain values than positions plus two; the count may not have stabilized.
  bool domain_small = false;
};

/// Classes of concrete elements of e over dom, where two elements are
/// identified iff some rearrangement allowed by the expression makes their
/// value tuples positionally isomorphic.
OrbitCount orbit_count_bruteforce(const Symmetry& symm, const Expr& e, const FiniteDomain& dom);

} // namespace nominal
