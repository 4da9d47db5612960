#include "nominal/symmetry.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

#include "nominal/errors.hpp"

namespace nominal {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

void check_distinct(std::span<const DataValue> values) {
  std::vector<DataValue> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw UsageError("induced_struct: values must be pairwise distinct");
}

void check_extension(const Symmetry& sym, const FinStruct& a_star,
                     std::span<const DataValue> valuation) {
  if (a_star.size() != static_cast<int>(valuation.size()) + 1)
    throw UsageError("witness: extension size does not match valuation length + 1");
  if (restrict_prefix(a_star, a_star.size() - 1) != sym.induced_struct(valuation))
    throw UsageError("witness: extension does not restrict to the valuation's structure");
}

bool contains(std::span<const DataValue> vs, const DataValue& d) {
  return std::find(vs.begin(), vs.end(), d) != vs.end();
}

class EqualitySymmetry final : public Symmetry {
public:
  Backend backend() const override { return Backend::Equality; }

  const std::vector<RelationInfo>& signature() const override {
    static const std::vector<RelationInfo> sig;
    return sig;
  }

  bool member(const FinStruct& s) const override { return s.facts().empty(); }

  std::vector<FinStruct> one_point_extensions(const FinStruct& a) const override {
    return {FinStruct(a.size() + 1)};
  }

  FinStruct induced_struct(std::span<const DataValue> values) const override {
    check_distinct(values);
    return FinStruct(static_cast<int>(values.size()));
  }

  DataValue witness(const FinStruct& a_star, std::span<const DataValue> valuation,
                    std::span<const DataValue> forbidden) const override {
    check_extension(*this, a_star, valuation);
    for (std::int64_t n = 0;; ++n) {
      DataValue d = DataValue::natural(n);
      if (!contains(valuation, d) && !contains(forbidden, d))
        return d;
    }
  }

  std::pair<FinStruct, Perm> canonical_form(const FinStruct& s) const override {
    return {s, Perm::identity(s.size())};
  }

  DataValue parse_value(std::string_view text) const override {
    return DataValue::natural(parse_int(text, "natural number"));
  }

  FinStruct close_facts(int n, std::vector<Fact> facts) const override {
    if (!facts.empty())
      throw UsageError("the equality symmetry has no relations");
    return FinStruct(n);
  }

  std::string describe(const FinStruct&, const std::function<std::string(int)>&) const override {
    return "";
  }
};

class OrderSymmetry final : public Symmetry {
public:
  Backend backend() const override { return Backend::Order; }

  const std::vector<RelationInfo>& signature() const override {
    static const std::vector<RelationInfo> sig{{"<", 2}};
    return sig;
  }

  bool member(const FinStruct& s) const override {
    int n = s.size();
    for (const Fact& f : s.facts())
      if (f.rel != 0 || f.args.size() != 2 || f.args[0] == f.args[1])
        return false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (s.has(0, i, j) == s.has(0, j, i))
          return false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (s.has(0, i, j) && s.has(0, j, k) && !s.has(0, i, k))
            return false;
    return true;
  }

  static std::vector<int> ranks(const FinStruct& s) {
    std::vector<int> r(static_cast<std::size_t>(s.size()), 0);
    for (const Fact& f : s.facts())
      ++r[static_cast<std::size_t>(f.args[1])];
    return r;
  }

  std::vector<FinStruct> one_point_extensions(const FinStruct& a) const override {
    int n = a.size();
    std::vector<int> r = ranks(a);
    std::vector<FinStruct> out;
    for (int p = 0; p <= n; ++p) {
      std::vector<Fact> facts = a.facts();
      for (int i = 0; i < n; ++i) {
        if (r[static_cast<std::size_t>(i)] < p)
          facts.push_back({0, {i, n}});
        else
          facts.push_back({0, {n, i}});
      }
      out.emplace_back(n + 1, std::move(facts));
    }
    return out;
  }

  FinStruct induced_struct(std::span<const DataValue> values) const override {
    check_distinct(values);
    std::vector<Fact> facts;
    int n = static_cast<int>(values.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (values[static_cast<std::size_t>(i)] < values[static_cast<std::size_t>(j)])
          facts.push_back({0, {i, j}});
    return FinStruct(n, std::move(facts));
  }

  DataValue witness(const FinStruct& a_star, std::span<const DataValue> valuation,
                    std::span<const DataValue> forbidden) const override {
    check_extension(*this, a_star, valuation);
    int n = static_cast<int>(valuation.size());
    const DataValue* lower = nullptr;
    const DataValue* upper = nullptr;
    for (int i = 0; i < n; ++i) {
      const DataValue& v = valuation[static_cast<std::size_t>(i)];
      if (a_star.has(0, i, n)) {
        if (!lower || *lower < v)
          lower = &v;
      } else if (!upper || v < *upper) {
        upper = &v;
      }
    }
    auto blocked = [&](const DataValue& d) {
      return contains(valuation, d) || contains(forbidden, d);
    };
    if (lower && upper) {
      DataValue hi = *upper;
      DataValue d = DataValue::midpoint(*lower, hi);
      while (blocked(d)) {
        hi = d;
        d = DataValue::midpoint(*lower, hi);
      }
      return d;
    }
    DataValue d = lower ? lower->plus_integer(1)
                        : (upper ? upper->plus_integer(-1) : DataValue::rational(0, 1));
    int step = upper && !lower ? -1 : 1;
    while (blocked(d))
      d = d.plus_integer(step);
    return d;
  }

  std::pair<FinStruct, Perm> canonical_form(const FinStruct& s) const override {
    std::vector<int> r = ranks(s);
    Perm k(r);
    return {relabel(s, k), k};
  }

  DataValue parse_value(std::string_view text) const override {
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
      return DataValue::rational(parse_int(text, "rational"), 1);
    return DataValue::rational(parse_int(text.substr(0, slash), "rational numerator"),
                               parse_int(text.substr(slash + 1), "rational denominator"));
  }

  FinStruct close_facts(int n, std::vector<Fact> facts) const override {
    std::vector<std::vector<char>> lt(static_cast<std::size_t>(n),
                                      std::vector<char>(static_cast<std::size_t>(n), 0));
    for (const Fact& f : facts) {
      if (f.rel != 0 || f.args.size() != 2)
        throw UsageError("the order symmetry has only the binary relation '<'");
      lt[static_cast<std::size_t>(f.args[0])][static_cast<std::size_t>(f.args[1])] = 1;
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (lt[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] &&
              lt[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)])
            lt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
    std::vector<Fact> out;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
          out.push_back({0, {i, j}});
    return FinStruct(n, std::move(out));
  }

  std::string describe(const FinStruct& s,
                       const std::function<std::string(int)>& name) const override {
    if (s.size() < 2)
      return "";
    std::vector<int> r = ranks(s);
    std::vector<int> by_rank(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      by_rank[static_cast<std::size_t>(r[i])] = static_cast<int>(i);
    std::string out;
    for (std::size_t k = 0; k < by_rank.size(); ++k) {
      if (k)
        out += '<';
      out += name(by_rank[k]);
    }
    return out;
  }
};

class GraphSymmetry final : public Symmetry {
public:
  Backend backend() const override { return Backend::Graph; }

  const std::vector<RelationInfo>& signature() const override {
    static const std::vector<RelationInfo> sig{{"E", 2}};
    return sig;
  }

  bool member(const FinStruct& s) const override {
    for (const Fact& f : s.facts()) {
      if (f.rel != 0 || f.args.size() != 2 || f.args[0] == f.args[1])
        return false;
      if (!s.has(0, f.args[1], f.args[0]))
        return false;
    }
    return true;
  }

  std::vector<FinStruct> one_point_extensions(const FinStruct& a) const override {
    int n = a.size();
    if (n >= 20)
      throw UsageError("graph one-point extensions: carrier too large");
    std::vector<FinStruct> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<Fact> facts = a.facts();
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          facts.push_back({0, {i, n}});
          facts.push_back({0, {n, i}});
        }
      out.emplace_back(n + 1, std::move(facts));
    }
    return out;
  }

  FinStruct induced_struct(std::span<const DataValue> values) const override {
    check_distinct(values);
    std::vector<Fact> facts;
    int n = static_cast<int>(values.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && rado_adjacent(values[static_cast<std::size_t>(i)].num(),
                                    values[static_cast<std::size_t>(j)].num()))
          facts.push_back({0, {i, j}});
    return FinStruct(n, std::move(facts));
  }

  DataValue witness(const FinStruct& a_star, std::span<const DataValue> valuation,
                    std::span<const DataValue> forbidden) const override {
    check_extension(*this, a_star, valuation);
    int n = static_cast<int>(valuation.size());
    std::int64_t top = -1;
    for (const DataValue& v : valuation)
      top = std::max(top, v.num());
    // Above every valuation value adjacency is read from the bits of d, so
    // d = 2^t + sum of required bits works for any free position t above them.
    std::int64_t constructive = -1;
    if (top < 62) {
      std::int64_t required = 0;
      for (int i = 0; i < n; ++i)
        if (a_star.has(0, i, n))
          required |= std::int64_t{1} << valuation[static_cast<std::size_t>(i)].num();
      for (int t = 0; t < 62 && constructive < 0; ++t) {
        std::int64_t d = required | (std::int64_t{1} << t);
        if ((required >> t) & 1 || (std::int64_t{1} << t) <= top)
          continue;
        bool taken = false;
        for (int i = 0; i < n; ++i)
          taken = taken || valuation[static_cast<std::size_t>(i)].num() == t;
        if (!taken && !contains(forbidden, DataValue::vertex(d)))
          constructive = d;
      }
    }
    const std::int64_t search_limit =
        constructive < 0 ? std::int64_t{1} << 20 : std::min<std::int64_t>(constructive, 1 << 20);
    for (std::int64_t c = 0; c < search_limit; ++c) {
      DataValue d = DataValue::vertex(c);
      if (contains(valuation, d) || contains(forbidden, d))
        continue;
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        ok = rado_adjacent(valuation[static_cast<std::size_t>(i)].num(), c) == a_star.has(0, i, n);
      if (ok)
        return d;
    }
    if (constructive < 0)
      throw std::overflow_error("graph witness: vertex encoding exceeds 62 bits");
    return DataValue::vertex(constructive);
  }

  DataValue parse_value(std::string_view text) const override {
    if (!text.empty() && text.front() == 'g')
      text.remove_prefix(1);
    return DataValue::vertex(parse_int(text, "graph vertex"));
  }

  FinStruct close_facts(int n, std::vector<Fact> facts) const override {
    std::vector<Fact> out;
    for (const Fact& f : facts) {
      if (f.rel != 0 || f.args.size() != 2)
        throw UsageError("the graph symmetry has only the binary relation 'E'");
      if (f.args[0] == f.args[1])
        throw UsageError("graph edges must join distinct vertices");
      out.push_back(f);
      out.push_back({0, {f.args[1], f.args[0]}});
    }
    return FinStruct(n, std::move(out));
  }

  std::string describe(const FinStruct& s,
                       const std::function<std::string(int)>& name) const override {
    std::string out;
    for (const Fact& f : s.facts()) {
      if (f.args[0] > f.args[1])
        continue;
      if (!out.empty())
        out += "; ";
      out += "E(" + name(f.args[0]) + "," + name(f.args[1]) + ")";
    }
    return out;
  }
};

} // namespace

bool rado_adjacent(std::int64_t x, std::int64_t y) {
  if (x == y)
    return false;
  if (x > y)
    std::swap(x, y);
  if (x >= 63)
    return false;
  return (y >> x) & 1;
}

int Symmetry::relation_index(std::string_view name) const {
  const auto& sig = signature();
  for (std::size_t i = 0; i < sig.size(); ++i)
    if (sig[i].name == name)
      return static_cast<int>(i);
  throw UsageError("unknown relation '" + std::string(name) + "' for the " + this->name() +
                   " symmetry");
}

std::pair<FinStruct, Perm> Symmetry::canonical_form(const FinStruct& s) const {
  return canonical_form_bruteforce(s);
}

std::string Symmetry::describe(const FinStruct& s) const {
  return describe(s, [](int i) { return std::to_string(i); });
}

PermGroup Symmetry::automorphisms(const FinStruct& s) const {
  if (!member(s))
    throw UsageError(std::string("automorphisms: structure is not in the ") + name() + " class");
  return nominal::automorphisms(s);
}

std::vector<std::vector<int>> Symmetry::embeddings(const FinStruct& b, const FinStruct& a) const {
  return nominal::embeddings(b, a);
}

FinStruct Symmetry::extension_type(std::span<const DataValue> valuation, const DataValue& d) const {
  std::vector<DataValue> all(valuation.begin(), valuation.end());
  all.push_back(d);
  return induced_struct(all);
}

bool Symmetry::realizes(const FinStruct& a_star, std::span<const DataValue> valuation,
                        const DataValue& d) const {
  if (contains(valuation, d))
    return false;
  return extension_type(valuation, d) == a_star;
}

const Symmetry& symmetry_for(Backend b) {
  static const EqualitySymmetry eq;
  static const OrderSymmetry ord;
  static const GraphSymmetry graph;
  switch (b) {
  case Backend::Equality:
    return eq;
  case Backend::Order:
    return ord;
  case Backend::Graph:
    return graph;
  }
  return eq;
}

const Symmetry& symmetry_named(std::string_view name) {
  if (name == "equality")
    return symmetry_for(Backend::Equality);
  if (name == "order")
    return symmetry_for(Backend::Order);
  if (name == "graph")
    return symmetry_for(Backend::Graph);
  throw UsageError("unknown symmetry '" + std::string(name) + "' (expected equality, order or graph)");
}

} // namespace nominal
