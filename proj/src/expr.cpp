#include "nominal/expr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "nominal/errors.hpp"
#include "nominal/io.hpp"

namespace nominal {

namespace {

class ExprParser {
public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size())
      error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& what) const {
    throw ParseError(what, 1, static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      error(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    if (b == pos_)
      error("expected an expression");
    return std::string(s_.substr(b, pos_ - b));
  }

  int number() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (b == pos_ || pos_ - b > 3)
      error("expected a small non-negative integer");
    return std::stoi(std::string(s_.substr(b, pos_ - b)));
  }

  /// Raw text up to the parenthesis closing the current call.
  std::string raw() {
    std::size_t b = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '(')
        ++depth;
      else if (c == ')') {
        if (depth == 0)
          break;
        --depth;
      }
      ++pos_;
    }
    return std::string(s_.substr(b, pos_ - b));
  }

  Expr expr() {
    std::size_t at = pos_;
    std::string name = ident();
    Expr e;
    auto sized = [&](Expr::Kind k) {
      expect('(');
      e.kind = k;
      e.k = number();
      expect(')');
    };
    if (name == "atom") {
      e.kind = Expr::Kind::Atom;
    } else if (name == "set2") {
      e.kind = Expr::Kind::Set;
      e.k = 2;
    } else if (name == "tuple") {
      sized(Expr::Kind::Tuple);
    } else if (name == "dtuple") {
      sized(Expr::Kind::DTuple);
    } else if (name == "otuple") {
      sized(Expr::Kind::OTuple);
    } else if (name == "set") {
      sized(Expr::Kind::Set);
    } else if (name == "prod" || name == "sum") {
      e.kind = name == "prod" ? Expr::Kind::Prod : Expr::Kind::Sum;
      expect('(');
      e.children.push_back(expr());
      while (accept(','))
        e.children.push_back(expr());
      expect(')');
      if (e.children.size() < 2)
        error(name + " needs at least two arguments");
    } else if (name == "struct") {
      e.kind = Expr::Kind::Struct;
      expect('(');
      e.k = number();
      if (accept(','))
        e.facts = text_trim(raw());
      expect(')');
    } else if (name == "sym") {
      expect('(');
      std::size_t inner = pos_;
      e = expr();
      if (e.kind != Expr::Kind::Struct) {
        pos_ = inner;
        error("sym(...) applies to a struct(...) expression");
      }
      expect(',');
      std::string g = text_trim(raw());
      e.gens = e.gens.empty() ? g : e.gens + "; " + g;
      expect(')');
    } else {
      pos_ = at;
      error("unknown expression '" + name + "'");
    }
    return e;
  }

  static std::string text_trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
  }
};

/// Every labeled member of the class on n points.
std::vector<FinStruct> labeled_members(const Symmetry& symm, int n) {
  std::vector<FinStruct> layer{FinStruct(0)};
  for (int i = 0; i < n; ++i) {
    std::vector<FinStruct> next;
    for (const FinStruct& a : layer)
      for (FinStruct& e : symm.one_point_extensions(a))
        next.push_back(std::move(e));
    layer = std::move(next);
  }
  return layer;
}

/// Restricted growth strings of length k.
void for_each_rgs(int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> cur;
  std::function<void(int)> go = [&](int top) {
    if (static_cast<int>(cur.size()) == k) {
      visit(cur);
      return;
    }
    for (int b = 0; b <= top; ++b) {
      cur.push_back(b);
      go(b == top ? top + 1 : top);
      cur.pop_back();
    }
  };
  go(0);
}

void check_size(int k) {
  if (k > 8)
    throw UsageError("expression arity " + std::to_string(k) + " exceeds the supported maximum of 8");
}

} // namespace

Expr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string to_string(const Expr& e) {
  auto n = [&](const char* f) { return std::string(f) + "(" + std::to_string(e.k) + ")"; };
  switch (e.kind) {
  case Expr::Kind::Atom:
    return "atom";
  case Expr::Kind::Tuple:
    return n("tuple");
  case Expr::Kind::DTuple:
    return n("dtuple");
  case Expr::Kind::OTuple:
    return n("otuple");
  case Expr::Kind::Set:
    return e.k == 2 ? "set2" : n("set");
  case Expr::Kind::Prod:
  case Expr::Kind::Sum: {
    std::string out = e.kind == Expr::Kind::Prod ? "prod(" : "sum(";
    for (std::size_t i = 0; i < e.children.size(); ++i)
      out += (i ? "," : "") + to_string(e.children[i]);
    return out + ")";
  }
  case Expr::Kind::Struct: {
    std::string s = "struct(" + std::to_string(e.k) + (e.facts.empty() ? "" : ", " + e.facts) + ")";
    return e.gens.empty() ? s : "sym(" + s + ", " + e.gens + ")";
  }
  }
  return "";
}

NomSet eval_expr(const Symmetry& symm, const Expr& e) {
  NomSet out;
  out.symmetry = &symm;
  auto add = [&](const FinStruct& shape, const PermGroup& sym) {
    out.orbits.push_back(make_orbit(symm, shape, sym));
  };
  switch (e.kind) {
  case Expr::Kind::Atom:
    add(FinStruct(1), PermGroup::trivial(1));
    break;
  case Expr::Kind::Tuple:
    check_size(e.k);
    for_each_rgs(e.k, [&](const std::vector<int>& rgs) {
      int m = rgs.empty() ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
      for (const FinStruct& s : labeled_members(symm, m))
        add(s, PermGroup::trivial(m));
    });
    break;
  case Expr::Kind::DTuple:
    check_size(e.k);
    for (const FinStruct& s : labeled_members(symm, e.k))
      add(s, PermGroup::trivial(e.k));
    break;
  case Expr::Kind::Set: {
    check_size(e.k);
    std::set<FinStruct> seen;
    for (const FinStruct& s : labeled_members(symm, e.k)) {
      FinStruct c = symm.canonical_form(s).first;
      if (seen.insert(c).second)
        add(c, symm.automorphisms(c));
    }
    break;
  }
  case Expr::Kind::OTuple: {
    check_size(e.k);
    if (symm.backend() != Backend::Order)
      throw UsageError("otuple(k) requires the order symmetry");
    std::vector<Fact> f;
    for (int i = 0; i < e.k; ++i)
      for (int j = i + 1; j < e.k; ++j)
        f.push_back({0, {i, j}});
    add(FinStruct(e.k, f), PermGroup::trivial(e.k));
    break;
  }
  case Expr::Kind::Prod: {
    NomSet acc = eval_expr(symm, e.children.front());
    for (std::size_t i = 1; i < e.children.size(); ++i)
      acc = product(acc, eval_expr(symm, e.children[i])).set;
    return acc;
  }
  case Expr::Kind::Sum: {
    NomSet acc = eval_expr(symm, e.children.front());
    for (std::size_t i = 1; i < e.children.size(); ++i)
      acc = disjoint_union(acc, eval_expr(symm, e.children[i]));
    return acc;
  }
  case Expr::Kind::Struct: {
    check_size(e.k);
    int k = e.k;
    FinStruct shape = symm.close_facts(k, parse_facts(symm, e.facts, [&](const std::string& s) {
      int v = -1;
      try {
        std::size_t used = 0;
        v = std::stoi(s, &used);
        if (used != s.size())
          v = -1;
      } catch (const std::exception&) {
      }
      if (v < 0 || v >= k)
        throw UsageError("struct index '" + s + "' outside 0.." + std::to_string(k - 1));
      return v;
    }));
    if (!symm.member(shape))
      throw UsageError("struct(" + std::to_string(k) + ", " + e.facts + ") is not a member of the " +
                       symm.name() + " class");
    std::vector<Perm> gens = parse_generators(e.gens, k);
    for (const Perm& g : gens)
      if (relabel(shape, g) != shape)
        throw ValidationError("sym generator " + g.to_cycles() + " is not an automorphism of the structure");
    add(shape, closure(gens, k));
    break;
  }
  }
  return out;
}

} // namespace nominal
