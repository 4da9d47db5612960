#include "nominal/perm.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "nominal/errors.hpp"

namespace nominal {

namespace {

void check_same_size(const Perm& p, const Perm& q, const char* op) {
  if (p.size() != q.size())
    throw UsageError(std::string(op) + ": permutation sizes differ (" + std::to_string(p.size()) +
                     " vs " + std::to_string(q.size()) + ")");
}

} // namespace

Perm::Perm(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || v >= static_cast<int>(images_.size()) || seen[static_cast<std::size_t>(v)])
      throw UsageError("not a permutation: image list is not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Perm Perm::identity(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    img[static_cast<std::size_t>(i)] = i;
  return Perm(std::move(img));
}

Perm Perm::from_cycles(std::string_view text, int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    img[static_cast<std::size_t>(i)] = i;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  skip_ws();
  while (pos < text.size()) {
    if (text[pos] != '(')
      throw UsageError("cycle notation: expected '(' in \"" + std::string(text) + "\"");
    ++pos;
    std::vector<int> cycle;
    for (;;) {
      skip_ws();
      if (pos >= text.size())
        throw UsageError("cycle notation: unterminated cycle in \"" + std::string(text) + "\"");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        throw UsageError("cycle notation: unexpected character in \"" + std::string(text) + "\"");
      int v = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        v = v * 10 + (text[pos] - '0');
        if (v > 1'000'000)
          throw UsageError("cycle notation: index too large");
        ++pos;
      }
      if (v >= n)
        throw UsageError("cycle notation: index " + std::to_string(v) +
                         " outside carrier of size " + std::to_string(n));
      if (used[static_cast<std::size_t>(v)])
        throw UsageError("cycle notation: index " + std::to_string(v) + " repeated");
      used[static_cast<std::size_t>(v)] = 1;
      cycle.push_back(v);
    }
    for (std::size_t k = 0; k < cycle.size(); ++k)
      img[static_cast<std::size_t>(cycle[k])] = cycle[(k + 1) % cycle.size()];
    skip_ws();
  }
  return Perm(std::move(img));
}

bool Perm::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (images_[static_cast<std::size_t>(i)] != i)
      return false;
  return true;
}

Perm Perm::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 0; i < size(); ++i)
    inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = i;
  return Perm(std::move(inv));
}

std::string Perm::to_cycles() const {
  std::string out;
  std::vector<char> done(images_.size(), 0);
  for (int i = 0; i < size(); ++i) {
    if (done[static_cast<std::size_t>(i)] || (*this)(i) == i)
      continue;
    out += '(';
    int j = i;
    bool first = true;
    while (!done[static_cast<std::size_t>(j)]) {
      done[static_cast<std::size_t>(j)] = 1;
      if (!first)
        out += ' ';
      out += std::to_string(j);
      first = false;
      j = (*this)(j);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Perm compose(const Perm& p, const Perm& q) {
  check_same_size(p, q, "compose");
  std::vector<int> img(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i)
    img[static_cast<std::size_t>(i)] = q(p(i));
  return Perm(std::move(img));
}

PermGroup PermGroup::trivial(int carrier_size) {
  return PermGroup(carrier_size, {Perm::identity(carrier_size)});
}

PermGroup PermGroup::symmetric(int carrier_size) {
  std::vector<int> img(static_cast<std::size_t>(carrier_size));
  for (int i = 0; i < carrier_size; ++i)
    img[static_cast<std::size_t>(i)] = i;
  std::vector<Perm> elems;
  do {
    elems.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return PermGroup(carrier_size, std::move(elems));
}

bool PermGroup::contains(const Perm& p) const {
  return std::binary_search(elements_.begin(), elements_.end(), p);
}

bool PermGroup::is_subgroup_of(const PermGroup& other) const {
  if (carrier_size_ != other.carrier_size_)
    return false;
  return std::all_of(elements_.begin(), elements_.end(),
                     [&](const Perm& p) { return other.contains(p); });
}

std::vector<Perm> PermGroup::generators() const {
  std::vector<Perm> gens;
  PermGroup generated = trivial(carrier_size_);
  for (const Perm& p : elements_) {
    if (generated.contains(p))
      continue;
    gens.push_back(p);
    generated = closure(gens, carrier_size_);
    if (generated.order() == order())
      break;
  }
  return gens;
}

PermGroup closure(std::span<const Perm> generators, int carrier_size) {
  for (const Perm& g : generators)
    if (g.size() != carrier_size)
      throw UsageError("closure: generator " + g.to_cycles() + " has size " +
                       std::to_string(g.size()) + ", expected " + std::to_string(carrier_size));
  std::set<Perm> seen{Perm::identity(carrier_size)};
  std::deque<Perm> frontier{Perm::identity(carrier_size)};
  while (!frontier.empty()) {
    Perm cur = std::move(frontier.front());
    frontier.pop_front();
    for (const Perm& g : generators) {
      Perm next = compose(cur, g);
      if (seen.insert(next).second)
        frontier.push_back(std::move(next));
    }
  }
  return PermGroup(carrier_size, std::vector<Perm>(seen.begin(), seen.end()));
}

PermGroup group_from_closed_set(std::vector<Perm> elements, int carrier_size) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (elements.empty() || !elements.front().is_identity())
    throw UsageError("group_from_closed_set: identity missing");
#ifndef NDEBUG
  for (const Perm& a : elements)
    for (const Perm& b : elements)
      if (!std::binary_search(elements.begin(), elements.end(), compose(a, b)))
        throw UsageError("group_from_closed_set: set not closed under composition");
#endif
  return PermGroup(carrier_size, std::move(elements));
}

PermGroup conjugate(const PermGroup& g, const Perm& p) {
  if (p.size() != g.carrier_size())
    throw UsageError("conjugate: permutation size does not match carrier size");
  Perm pinv = p.inverse();
  std::vector<Perm> out;
  out.reserve(g.order());
  for (const Perm& s : g.elements())
    out.push_back(compose(compose(pinv, s), p));
  return group_from_closed_set(std::move(out), g.carrier_size());
}

PermGroup intersect(const PermGroup& g, const PermGroup& h) {
  if (g.carrier_size() != h.carrier_size())
    throw UsageError("intersect: carrier sizes differ");
  std::vector<Perm> out;
  std::set_intersection(g.elements().begin(), g.elements().end(), h.elements().begin(),
                        h.elements().end(), std::back_inserter(out));
  return group_from_closed_set(std::move(out), g.carrier_size());
}

} // namespace nominal
