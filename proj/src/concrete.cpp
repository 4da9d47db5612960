#include "nominal/concrete.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>

#include "nominal/errors.hpp"

namespace nominal {

namespace {

bool contains(std::span<const DataValue> vs, const DataValue& d) {
  return std::find(vs.begin(), vs.end(), d) != vs.end();
}

void check_partial(const Symmetry& sym, const FinStruct& shape, const PartialValuation& partial) {
  if (static_cast<int>(partial.size()) != shape.size())
    throw UsageError("partial valuation length does not match the shape");
  std::vector<int> pos;
  Valuation vals;
  for (int i = 0; i < shape.size(); ++i)
    if (partial[static_cast<std::size_t>(i)]) {
      pos.push_back(i);
      vals.push_back(*partial[static_cast<std::size_t>(i)]);
    }
  if (sym.induced_struct(vals) != restrict(shape, pos))
    throw UsageError("partial valuation is inconsistent with the shape");
}

/// Depth-first search for distinct vertices below 62 inducing the shape on
/// the given positions, within a step budget.
bool low_graph_realization(const FinStruct& shape, const std::vector<int>& pos, std::span<const DataValue> avoid,
                           long budget, std::vector<std::int64_t>& vals) {
  constexpr int kSmall = 62;
  vals.clear();
  std::function<bool()> go = [&]() -> bool {
    std::size_t k = vals.size();
    if (k == pos.size())
      return true;
    for (std::int64_t c = 0; c < kSmall; ++c) {
      if (--budget < 0)
        return false;
      if (std::find(vals.begin(), vals.end(), c) != vals.end() || contains(avoid, DataValue::vertex(c)))
        continue;
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i)
        ok = rado_adjacent(vals[i], c) == shape.has(0, pos[i], pos[k]);
      if (!ok)
        continue;
      vals.push_back(c);
      if (go())
        return true;
      vals.pop_back();
    }
    return false;
  };
  return go();
}

/// Vertices below 62 can still receive arbitrary new neighbours from above.
/// An independent set of positions may instead take values of at least 2^50,
/// whose low bits encode their neighbours; smaller independent sets are tried
/// first.
bool small_graph_realization(const FinStruct& shape, std::span<const DataValue> avoid, Valuation& out) {
  int n = shape.size();
  if (n > 16)
    return false;
  std::vector<unsigned> subsets(std::size_t{1} << n);
  std::iota(subsets.begin(), subsets.end(), 0u);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
  long budget = 200000;
  for (unsigned high : subsets) {
    bool independent = true;
    std::vector<int> low;
    for (int i = 0; i < n; ++i) {
      if (!((high >> i) & 1)) {
        low.push_back(i);
        continue;
      }
      for (int j = 0; j < i && independent; ++j)
        independent = !((high >> j) & 1) || !shape.has(0, i, j);
    }
    if (!independent)
      continue;
    std::vector<std::int64_t> vals;
    long attempt = std::min(budget, 5000L);
    if (!low_graph_realization(shape, low, avoid, attempt, vals)) {
      budget -= attempt;
      if (budget <= 0)
        return false;
      continue;
    }
    Valuation result(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < low.size(); ++k)
      result[static_cast<std::size_t>(low[k])] = DataValue::vertex(vals[k]);
    int top = 61;
    bool placed = true;
    for (int i = 0; i < n && placed; ++i) {
      if (!((high >> i) & 1))
        continue;
      std::int64_t required = 0;
      for (std::size_t k = 0; k < low.size(); ++k)
        if (shape.has(0, i, low[k]))
          required |= std::int64_t{1} << vals[k];
      std::int64_t d = -1;
      for (; top >= 50 && d < 0; --top) {
        std::int64_t c = required | (std::int64_t{1} << top);
        if (std::find(vals.begin(), vals.end(), top) == vals.end() && !contains(avoid, DataValue::vertex(c)))
          d = c;
      }
      placed = d >= 0;
      result[static_cast<std::size_t>(i)] = DataValue::vertex(d);
    }
    if (placed) {
      out = std::move(result);
      return true;
    }
  }
  return false;
}

} // namespace

Valuation realize(const Symmetry& sym, const FinStruct& shape, std::span<const DataValue> avoid) {
  if (sym.backend() == Backend::Graph) {
    Valuation out;
    if (small_graph_realization(shape, avoid, out))
      return out;
  }
  return extend_valuation(sym, shape, PartialValuation(static_cast<std::size_t>(shape.size())), avoid);
}

Valuation extend_valuation(const Symmetry& sym, const FinStruct& shape,
                           const PartialValuation& partial, std::span<const DataValue> avoid) {
  check_partial(sym, shape, partial);
  std::vector<int> pos;
  Valuation vals;
  for (int i = 0; i < shape.size(); ++i)
    if (partial[static_cast<std::size_t>(i)]) {
      pos.push_back(i);
      vals.push_back(*partial[static_cast<std::size_t>(i)]);
    }
  Valuation out(static_cast<std::size_t>(shape.size()));
  for (std::size_t k = 0; k < pos.size(); ++k)
    out[static_cast<std::size_t>(pos[k])] = vals[k];
  for (int i = 0; i < shape.size(); ++i) {
    if (partial[static_cast<std::size_t>(i)])
      continue;
    pos.push_back(i);
    DataValue d = sym.witness(restrict(shape, pos), vals, avoid);
    vals.push_back(d);
    out[static_cast<std::size_t>(i)] = d;
  }
  return out;
}

namespace {

struct Enumerator {
  const Symmetry& sym;
  const FinStruct& shape;
  std::span<const DataValue> known;
  const std::function<void(const Valuation&)>& visit;
  std::vector<int> free;
  std::vector<int> pos;
  Valuation vals;
  PartialValuation current;

  void go(std::size_t k) {
    if (k == free.size()) {
      Valuation out;
      out.reserve(current.size());
      for (auto& v : current)
        out.push_back(*v);
      visit(out);
      return;
    }
    int i = free[k];
    pos.push_back(i);
    FinStruct target = restrict(shape, pos);
    for (const DataValue& d : known) {
      if (contains(vals, d))
        continue;
      if (!sym.realizes(target, vals, d))
        continue;
      assign(i, d, k);
    }
    // Fresh values: one per extension type over known plus the assigned values.
    Valuation ctx(known.begin(), known.end());
    for (const DataValue& v : vals)
      if (!contains(ctx, v))
        ctx.push_back(v);
    std::vector<int> idx;
    for (const DataValue& v : vals)
      idx.push_back(static_cast<int>(std::find(ctx.begin(), ctx.end(), v) - ctx.begin()));
    idx.push_back(static_cast<int>(ctx.size()));
    FinStruct base = sym.induced_struct(ctx);
    for (const FinStruct& ext : sym.one_point_extensions(base)) {
      if (restrict(ext, idx) != target)
        continue;
      assign(i, sym.witness(ext, ctx, {}), k);
    }
    pos.pop_back();
  }

  void assign(int i, const DataValue& d, std::size_t k) {
    vals.push_back(d);
    current[static_cast<std::size_t>(i)] = d;
    go(k + 1);
    current[static_cast<std::size_t>(i)].reset();
    vals.pop_back();
  }
};

} // namespace

void for_each_valuation(const Symmetry& sym, const FinStruct& shape, const PartialValuation& partial,
                        std::span<const DataValue> known,
                        const std::function<void(const Valuation&)>& visit) {
  check_partial(sym, shape, partial);
  Enumerator e{sym, shape, known, visit, {}, {}, {}, partial};
  for (int i = 0; i < shape.size(); ++i) {
    if (partial[static_cast<std::size_t>(i)]) {
      e.pos.push_back(i);
      e.vals.push_back(*partial[static_cast<std::size_t>(i)]);
    } else {
      e.free.push_back(i);
    }
  }
  e.go(0);
}

Valuation canonicalize_fresh(const Symmetry& sym, std::span<const DataValue> valuation,
                             std::span<const DataValue> known) {
  Valuation orig_ctx(known.begin(), known.end());
  Valuation new_ctx(known.begin(), known.end());
  Valuation out;
  out.reserve(valuation.size());
  for (const DataValue& v : valuation) {
    if (contains(known, v)) {
      out.push_back(v);
      continue;
    }
    auto it = std::find(orig_ctx.begin(), orig_ctx.end(), v);
    if (it != orig_ctx.end()) {
      out.push_back(new_ctx[static_cast<std::size_t>(it - orig_ctx.begin())]);
      continue;
    }
    FinStruct type = sym.extension_type(orig_ctx, v);
    DataValue d = sym.witness(type, new_ctx, {});
    orig_ctx.push_back(v);
    new_ctx.push_back(d);
    out.push_back(d);
  }
  return out;
}

} // namespace nominal
