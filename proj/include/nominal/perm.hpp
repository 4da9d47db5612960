#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nominal {

/// A permutation of the carrier {0..n-1}; images()[i] is the image of i.
///
/// Composition is written left-to-right: compose(p, q) applies p first and
/// then q, so compose(p, q)(i) == q(p(i)). This matches right group actions
/// (x . (p q) == (x . p) . q) and is used consistently across the library.
class Perm {
public:
  Perm() = default;
  explicit Perm(std::vector<int> images);

  static Perm identity(int n);
  /// Parses cycle notation such as "(0 1)(2 3)"; "()" is the identity.
  static Perm from_cycles(std::string_view text, int n);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const;
  Perm inverse() const;

  /// Cycle notation; fixed points omitted, identity printed as "()".
  std::string to_cycles() const;

  auto operator<=>(const Perm&) const = default;

private:
  std::vector<int> images_;
};

/// Apply p first, then q.
Perm compose(const Perm& p, const Perm& q);

/// An explicit, closed group of permutations of a fixed carrier.
/// Elements are kept sorted; the identity is always the first element.
class PermGroup {
public:
  PermGroup() : PermGroup(trivial(0)) {}

  static PermGroup trivial(int carrier_size);
  static PermGroup symmetric(int carrier_size);

  int carrier_size() const { return carrier_size_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Perm>& elements() const { return elements_; }

  bool contains(const Perm& p) const;
  bool is_subgroup_of(const PermGroup& other) const;

  /// Minimal generators (greedy); used when serializing.
  std::vector<Perm> generators() const;

  bool operator==(const PermGroup&) const = default;

  friend PermGroup closure(std::span<const Perm> generators, int carrier_size);
  friend PermGroup group_from_closed_set(std::vector<Perm> elements, int carrier_size);

private:
  PermGroup(int n, std::vector<Perm> elems) : carrier_size_(n), elements_(std::move(elems)) {}

  int carrier_size_ = 0;
  std::vector<Perm> elements_;
};

/// Smallest group containing the generators (breadth-first closure).
PermGroup closure(std::span<const Perm> generators, int carrier_size);

/// Wraps an element set the caller knows to be closed; verified in debug builds.
PermGroup group_from_closed_set(std::vector<Perm> elements, int carrier_size);

/// {p^-1 s p : s in g}, i.e. i -> p(s(p^-1(i))).
PermGroup conjugate(const PermGroup& g, const Perm& p);

PermGroup intersect(const PermGroup& g, const PermGroup& h);

/// Lexicographically least sequence among {word o s : s in g}, where
/// (word o s)[i] == word[s(i)], together with the first (least) witnessing s.
template <typename T>
std::pair<std::vector<T>, Perm> canonical_under(const PermGroup& g, std::span<const T> word);

template <typename T>
std::pair<std::vector<T>, Perm> canonical_under(const PermGroup& g, const std::vector<T>& word) {
  return canonical_under<T>(g, std::span<const T>(word));
}

/// word o s.
template <typename T>
std::vector<T> permute(std::span<const T> word, const Perm& s) {
  std::vector<T> out;
  out.reserve(word.size());
  for (int i = 0; i < s.size(); ++i)
    out.push_back(word[static_cast<std::size_t>(s(i))]);
  return out;
}

template <typename T>
std::vector<T> permute(const std::vector<T>& word, const Perm& s) {
  return permute<T>(std::span<const T>(word), s);
}

} // namespace nominal

#include "nominal/errors.hpp"

namespace nominal {

template <typename T>
std::pair<std::vector<T>, Perm> canonical_under(const PermGroup& g, std::span<const T> word) {
  if (static_cast<int>(word.size()) != g.carrier_size())
    throw UsageError("canonical_under: word length " + std::to_string(word.size()) +
                     " does not match carrier size " + std::to_string(g.carrier_size()));
  const auto& elems = g.elements();
  std::vector<T> best(word.begin(), word.end());
  Perm witness = elems.front();
  for (std::size_t k = 1; k < elems.size(); ++k) {
    const Perm& s = elems[k];
    // Compare lazily; most candidates lose on an early position.
    bool smaller = false;
    for (int i = 0; i < s.size(); ++i) {
      const T& cand = word[static_cast<std::size_t>(s(i))];
      const T& cur = best[static_cast<std::size_t>(i)];
      if (cand < cur) {
        smaller = true;
        break;
      }
      if (cur < cand)
        break;
    }
    if (smaller) {
      best = permute(word, s);
      witness = s;
    }
  }
  return {std::move(best), std::move(witness)};
}

} // namespace nominal
