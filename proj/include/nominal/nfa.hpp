#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nominal/nomset.hpp"

namespace nominal {

/// Orbit-finite nondeterministic automaton. Transitions are orbits of
/// (states x alphabet) x states; epsilon moves are orbits of states x states.
struct NominalNFA {
  const Symmetry* symmetry = nullptr;
  NomSet states;
  NomSet alphabet;
  EqSubset initial;
  EqSubset accepting;
  std::shared_ptr<const ProductResult> qa;
  std::shared_ptr<const ProductResult> qaq;
  std::shared_ptr<const ProductResult> qq;
  EqSubset trans;
  EqSubset eps;
};

/// Builds the products; all subsets start empty.
NominalNFA make_nfa(NomSet states, NomSet alphabet);

/// Alphabet {a, b, ...} x D with one single-register orbit per label.
NomSet labeled_alphabet(const Symmetry& symm, const std::vector<std::string>& labels);

/// Orbit of qaq containing the triple (p, letter, q).
int triple_orbit(const NominalNFA& a, const Element& p, const Element& letter, const Element& q);

struct Triple {
  Element src;
  Element letter;
  Element dst;
};
Triple realize_triple(const NominalNFA& a, int qaq_orbit, std::span<const DataValue> avoid = {});

/// Checks that every subset refers to valid orbits; throws ValidationError.
void validate_nfa(const NominalNFA& a);

using Letter = Element;
using LetterSeq = std::vector<Letter>;

enum class Verdict { Accept, Reject, Inconclusive };
const char* verdict_name(Verdict v);

struct MemberResult {
  Verdict verdict = Verdict::Reject;
  /// Largest number of distinct values held at once, including the word's letters.
  std::size_t pool = 0;
};

/// Pool cap from NOMINAL_POOL_CAP (default 256).
std::size_t default_pool_cap();

MemberResult nfa_member(const NominalNFA& a, const LetterSeq& word, std::size_t pool_cap = default_pool_cap());

/// Subset simulation over configurations whose registers hold either known
/// values or canonical fresh representatives.
class NfaSimulator {
public:
  NfaSimulator(const NominalNFA& a, std::vector<DataValue> known);

  std::set<Element> initial() const;
  std::set<Element> closure(std::set<Element> configs) const;
  /// Successors on a letter, epsilon-closed.
  std::set<Element> step(const std::set<Element>& configs, const Letter& letter) const;
  bool accepting(const std::set<Element>& configs) const;

  Element canonical(const Element& config) const;
  std::vector<Element> successors(const Element& config, const Letter& letter) const;
  std::vector<Element> eps_successors(const Element& config) const;

private:
  const NominalNFA& a_;
  std::vector<DataValue> known_;
  std::vector<std::vector<int>> trans_by_left_;
  std::vector<std::vector<int>> eps_by_left_;
};

/// Letters of the alphabet whose values all lie in dom.
std::vector<Letter> letters_over(const NomSet& alphabet, std::span<const DataValue> dom);

/// Accepted letter sequences of length at most len over the given letters,
/// as index sequences into letters.
std::set<std::vector<int>> nfa_language_upto(const NominalNFA& a, const std::vector<Letter>& letters,
                                             int len);

struct NfaEmptiness {
  bool empty = true;
  LetterSeq witness;
};
NfaEmptiness nfa_emptiness(const NominalNFA& a);

NominalNFA nfa_union(const NominalNFA& a, const NominalNFA& b);
NominalNFA nfa_concat(const NominalNFA& a, const NominalNFA& b);
NominalNFA eps_eliminate(const NominalNFA& a);

/// Accepts only the empty word.
NominalNFA epsilon_language(const NomSet& alphabet);

} // namespace nominal
