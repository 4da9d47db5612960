#include "nominal/structure.hpp"

#include <algorithm>
#include <numeric>

#include "nominal/errors.hpp"

namespace nominal {

FinStruct::FinStruct(int size, std::vector<Fact> facts) : size_(size), facts_(std::move(facts)) {
  if (size < 0)
    throw UsageError("structure carrier size must be non-negative");
  for (const Fact& f : facts_)
    for (int a : f.args)
      if (a < 0 || a >= size)
        throw UsageError("fact argument " + std::to_string(a) + " outside carrier of size " +
                         std::to_string(size));
  std::sort(facts_.begin(), facts_.end());
  facts_.erase(std::unique(facts_.begin(), facts_.end()), facts_.end());
}

bool FinStruct::has(const Fact& f) const {
  return std::binary_search(facts_.begin(), facts_.end(), f);
}

FinStruct relabel(const FinStruct& s, std::span<const int> map, int new_size) {
  if (static_cast<int>(map.size()) != s.size())
    throw UsageError("relabel: map length does not match carrier size");
  std::vector<Fact> out;
  out.reserve(s.facts().size());
  for (const Fact& f : s.facts()) {
    Fact g{f.rel, {}};
    g.args.reserve(f.args.size());
    for (int a : f.args)
      g.args.push_back(map[static_cast<std::size_t>(a)]);
    out.push_back(std::move(g));
  }
  return FinStruct(new_size < 0 ? s.size() : new_size, std::move(out));
}

FinStruct restrict(const FinStruct& s, std::span<const int> indices) {
  std::vector<int> back(static_cast<std::size_t>(s.size()), -1);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    int i = indices[k];
    if (i < 0 || i >= s.size())
      throw UsageError("restrict: index outside carrier");
    if (back[static_cast<std::size_t>(i)] != -1)
      throw UsageError("restrict: repeated index");
    back[static_cast<std::size_t>(i)] = static_cast<int>(k);
  }
  std::vector<Fact> out;
  for (const Fact& f : s.facts()) {
    Fact g{f.rel, {}};
    bool inside = true;
    for (int a : f.args) {
      int b = back[static_cast<std::size_t>(a)];
      if (b < 0) {
        inside = false;
        break;
      }
      g.args.push_back(b);
    }
    if (inside)
      out.push_back(std::move(g));
  }
  return FinStruct(static_cast<int>(indices.size()), std::move(out));
}

FinStruct restrict_prefix(const FinStruct& s, int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return restrict(s, idx);
}

bool is_embedding(std::span<const int> map, const FinStruct& from, const FinStruct& into) {
  if (static_cast<int>(map.size()) != from.size())
    return false;
  std::vector<char> used(static_cast<std::size_t>(into.size()), 0);
  for (int v : map) {
    if (v < 0 || v >= into.size() || used[static_cast<std::size_t>(v)])
      return false;
    used[static_cast<std::size_t>(v)] = 1;
  }
  return restrict(into, map) == from;
}

namespace {

void extend_embeddings(const FinStruct& b, const FinStruct& a, std::vector<int>& map,
                       std::vector<char>& used, std::vector<std::vector<int>>& out) {
  int k = static_cast<int>(map.size());
  if (k == b.size()) {
    out.push_back(map);
    return;
  }
  FinStruct bpre = restrict_prefix(b, k + 1);
  for (int v = 0; v < a.size(); ++v) {
    if (used[static_cast<std::size_t>(v)])
      continue;
    map.push_back(v);
    if (restrict(a, map) == bpre) {
      used[static_cast<std::size_t>(v)] = 1;
      extend_embeddings(b, a, map, used, out);
      used[static_cast<std::size_t>(v)] = 0;
    }
    map.pop_back();
  }
}

} // namespace

std::vector<std::vector<int>> embeddings(const FinStruct& b, const FinStruct& a) {
  std::vector<std::vector<int>> out;
  if (b.size() > a.size())
    return out;
  std::vector<int> map;
  std::vector<char> used(static_cast<std::size_t>(a.size()), 0);
  extend_embeddings(b, a, map, used, out);
  return out;
}

PermGroup automorphisms(const FinStruct& s) {
  std::vector<Perm> elems;
  for (auto& m : embeddings(s, s))
    elems.emplace_back(std::move(m));
  return group_from_closed_set(std::move(elems), s.size());
}

std::pair<FinStruct, Perm> canonical_form_bruteforce(const FinStruct& s) {
  std::vector<int> img(static_cast<std::size_t>(s.size()));
  std::iota(img.begin(), img.end(), 0);
  FinStruct best = s;
  std::vector<int> best_img = img;
  while (std::next_permutation(img.begin(), img.end())) {
    FinStruct cand = relabel(s, img);
    if (cand.facts() < best.facts()) {
      best = std::move(cand);
      best_img = img;
    }
  }
  return {std::move(best), Perm(std::move(best_img))};
}

} // namespace nominal
