#include "doctest.h"

#include "nominal/errors.hpp"
#include "nominal/io.hpp"
#include "nominal/oracle.hpp"

using namespace nominal;

namespace {

const char* const kDfaFixtures[] = {"def_in_de.dfa",         "def_in_de_min.dfa",       "monotone.dfa",
                                    "monotone_alt.dfa",      "first_is_last.dfa",       "order_between.dfa",
                                    "graph_adjacent_path.dfa", "graph_def_edge.dfa", "graph_first_neighbors.dfa"};

const Symmetry& EQ = symmetry_for(Backend::Equality);
const Symmetry& ORD = symmetry_for(Backend::Order);
const Symmetry& GR = symmetry_for(Backend::Graph);

std::size_t brute(const Symmetry& s, const char* e, int n) {
  return orbit_count_bruteforce(s, parse_expr(e), default_domain(s, n)).count;
}

std::size_t symbolic(const Symmetry& s, const char* e) {
  return static_cast<std::size_t>(eval_expr(s, parse_expr(e)).size());
}

FraisseDFA load(const std::string& name) {
  return parse_dfa(read_text_file(std::string(NOMINAL_FIXTURES) + "/" + name));
}

} // namespace

TEST_CASE("expression parsing") {
  CHECK(to_string(parse_expr("prod( dtuple(2) , atom)")) == "prod(dtuple(2),atom)");
  CHECK(to_string(parse_expr("sym(struct(2), (0 1))")) == "sym(struct(2), (0 1))");
  CHECK(to_string(parse_expr("struct(3, E(0,1); E(1,2))")) == "struct(3, E(0,1); E(1,2))");
  CHECK_THROWS_AS(parse_expr("prod(atom)"), ParseError);
  CHECK_THROWS_AS(parse_expr("blob"), ParseError);
  CHECK_THROWS_AS(parse_expr("atom atom"), ParseError);
  CHECK_THROWS_AS(eval_expr(EQ, parse_expr("otuple(2)")), UsageError);
  CHECK_THROWS_AS(eval_expr(ORD, parse_expr("sym(struct(2, 0<1), (0 1))")), ValidationError);
}

TEST_CASE("pairs of data values") {
  CHECK(brute(EQ, "tuple(2)", 4) == 2);
  CHECK(brute(ORD, "tuple(2)", 4) == 3);
  CHECK(symbolic(EQ, "tuple(2)") == 2);
  CHECK(symbolic(ORD, "tuple(2)") == 3);
  CHECK(brute(EQ, "prod(dtuple(2), atom)", 5) == 3);
  CHECK(brute(EQ, "prod(set2, atom)", 5) == 2);
}

TEST_CASE("symbolic and brute-force orbit counts agree") {
  struct Case {
    const Symmetry* s;
    const char* e;
  };
  std::vector<Case> cases{
      {&EQ, "atom"},
      {&EQ, "tuple(3)"},
      {&EQ, "prod(dtuple(3), atom)"},
      {&EQ, "prod(set2, set2)"},
      {&EQ, "prod(set(3), atom)"},
      {&EQ, "sum(atom, prod(atom, atom))"},
      {&EQ, "prod(sym(struct(3), (0 1 2)), atom)"},
      {&ORD, "prod(otuple(2), otuple(2))"},
      {&ORD, "tuple(3)"},
      {&ORD, "prod(atom, atom, atom)"},
      {&GR, "prod(struct(2), atom)"},
      {&GR, "prod(sym(struct(2), (0 1)), atom)"},
      {&GR, "prod(set2, atom)"},
      {&GR, "tuple(3)"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.e);
    std::size_t sym = symbolic(*c.s, c.e);
    int n = c.s->backend() == Backend::Graph ? 6 : 5;
    CHECK(brute(*c.s, c.e, n) == sym);
    CHECK(brute(*c.s, c.e, n + 1) == sym);
  }
}

TEST_CASE("small domains are reported") {
  auto r = orbit_count_bruteforce(EQ, parse_expr("dtuple(4)"), default_domain(EQ, 3));
  CHECK(r.count == 0);
  CHECK(r.domain_small);
  CHECK_FALSE(orbit_count_bruteforce(EQ, parse_expr("atom"), default_domain(EQ, 3)).domain_small);
}

TEST_CASE("restricted automata agree with symbolic runs") {
  for (const char* f : kDfaFixtures) {
    CAPTURE(f);
    FraisseDFA d = load(f);
    FiniteDomain dom = default_domain(*d.symmetry, d.symmetry->backend() == Backend::Order ? 4 : 3);
    ClassicalAutomaton c = restrict_dfa(d, dom);
    for (const LetterWord& w : all_words(static_cast<int>(dom.values.size()), 5)) {
      Word word;
      for (int x : w)
        word.push_back(dom.values[static_cast<std::size_t>(x)]);
      CHECK(run(d, word) == c.accepts(w));
    }
  }
}

TEST_CASE("monotone words over three values") {
  FraisseDFA d = load("monotone.dfa");
  std::set<LetterWord> lang = language_upto(restrict_dfa(d, default_domain(ORD, 3)), 4);
  std::set<LetterWord> expect{{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  CHECK(lang == expect);
}

TEST_CASE("classical minimal size never exceeds restricted configurations") {
  FraisseDFA d = load("def_in_de.dfa");
  FraisseDFA m = minimize(d);
  for (int n = 2; n <= 4; ++n) {
    ClassicalAutomaton cd = restrict_dfa(d, default_domain(EQ, n));
    ClassicalAutomaton cm = restrict_dfa(m, default_domain(EQ, n));
    CHECK(minimal_size(cd) <= cm.size());
    CHECK(minimal_size(cd) == minimal_size(cm));
    CHECK(cm.size() < cd.size());
  }
}
