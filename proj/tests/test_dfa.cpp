#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "nominal/dfa.hpp"
#include "nominal/errors.hpp"
#include "nominal/io.hpp"

using namespace nominal;

namespace {

const char* const kDfaFixtures[] = {"def_in_de.dfa",         "def_in_de_min.dfa",       "monotone.dfa",
                                    "monotone_alt.dfa",      "first_is_last.dfa",       "order_between.dfa",
                                    "graph_adjacent_path.dfa", "graph_def_edge.dfa", "graph_first_neighbors.dfa"};

const Symmetry& EQ = symmetry_for(Backend::Equality);
const Symmetry& ORD = symmetry_for(Backend::Order);
const Symmetry& GR = symmetry_for(Backend::Graph);

FraisseDFA load(const std::string& name) {
  return parse_dfa(read_text_file(std::string(NOMINAL_FIXTURES) + "/" + name));
}

Word nats(std::initializer_list<int> xs) {
  Word w;
  for (int x : xs)
    w.push_back(DataValue::natural(x));
  return w;
}

Word rats(std::initializer_list<int> xs) {
  Word w;
  for (int x : xs)
    w.push_back(DataValue::rational(x, 1));
  return w;
}

std::string parse_error(const std::string& src) {
  try {
    parse_dfa(src);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("annotation counts") {
  OrbitRepr ord2 = make_orbit(ORD, FinStruct(2, {{0, {0, 1}}}), PermGroup::trivial(2));
  CHECK(enumerate_annotations(ORD, ord2).size() == 5);
  OrbitRepr set2 = make_orbit(EQ, FinStruct(2), PermGroup::symmetric(2));
  auto anns = enumerate_annotations(EQ, set2);
  REQUIRE(anns.size() == 2);
  CHECK(anns[0].distinguished);
  CHECK(anns[0].local_sym.order() == 1);
  CHECK(anns[1].local_sym.order() == 2);
  for (const Symmetry* s : {&EQ, &ORD, &GR})
    CHECK(enumerate_annotations(*s, make_orbit(*s, FinStruct(0), PermGroup::trivial(0))).size() == 1);
  OrbitRepr gpair = make_orbit(GR, FinStruct(2), PermGroup::trivial(2));
  CHECK(enumerate_annotations(GR, gpair).size() == 6);
  OrbitRepr gswap = make_orbit(GR, FinStruct(2), PermGroup::symmetric(2));
  CHECK(enumerate_annotations(GR, gswap).size() == 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK(enumerate_annotations(EQ, make_orbit(EQ, FinStruct(k), PermGroup::trivial(k))).size() ==
          static_cast<std::size_t>(k + 1));
    std::vector<Fact> chain;
    for (int i = 0; i + 1 < k; ++i)
      for (int j = i + 1; j < k; ++j)
        chain.push_back({0, {i, j}});
    CHECK(enumerate_annotations(ORD, make_orbit(ORD, FinStruct(k, chain), PermGroup::trivial(k))).size() ==
          static_cast<std::size_t>(2 * k + 1));
  }
}

TEST_CASE("annotation descriptions") {
  OrbitRepr ord2 = make_orbit(ORD, FinStruct(2, {{0, {0, 1}}}), PermGroup::trivial(2));
  std::vector<std::string> got;
  for (const Annotation& a : enumerate_annotations(ORD, ord2))
    got.push_back(describe_annotation(ORD, a));
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::string>{"ext{*<0}", "ext{0<*; *<1}", "ext{1<*}", "reg 0", "reg 1"});
}

TEST_CASE("words with a repeated first or second letter in third position") {
  FraisseDFA d = load("def_in_de.dfa");
  CHECK(d.size() == 6);
  CHECK(run(d, nats({1, 2, 1})));
  CHECK(run(d, nats({1, 2, 2})));
  CHECK_FALSE(run(d, nats({1, 2, 3})));
  CHECK(run(d, nats({1, 1, 1})));
  CHECK_FALSE(run(d, nats({1, 1, 2})));
  CHECK_FALSE(run(d, {}));
  CHECK_FALSE(run(d, nats({1, 2, 1, 1})));

  Config c = step(d, d.initial_config(), DataValue::natural(1));
  CHECK(d.states[static_cast<std::size_t>(c.orbit)].name == "one");
  CHECK(c.valuation == nats({1}));
  Config p = run_config(d, nats({1, 2}));
  CHECK(d.states[static_cast<std::size_t>(p.orbit)].name == "pair");
  CHECK(d.states[static_cast<std::size_t>(step(d, p, DataValue::natural(2)).orbit)].name == "yes");
  Config top = run_config(d, nats({1, 2, 2}));
  CHECK(d.states[static_cast<std::size_t>(step(d, top, DataValue::natural(9)).orbit)].name == "no");
}

TEST_CASE("reachability, complement and emptiness") {
  FraisseDFA d = load("def_in_de.dfa");
  CHECK(reachable(d).size() == 6);
  FraisseDFA c = complement(d);
  CHECK_FALSE(run(c, nats({1, 2, 1})));
  CHECK(run(c, nats({1, 2, 3})));
  CHECK(complement(c).accepting == d.accepting);
  EmptinessResult e = emptiness(d);
  CHECK_FALSE(e.empty);
  CHECK(e.witness.size() == 3);
  CHECK(run(d, e.witness));
  CHECK(emptiness(product_dfa(d, c, BoolOp::And)).empty);
  FraisseDFA all = product_dfa(d, c, BoolOp::Or);
  CHECK(emptiness(complement(all)).empty);
}

TEST_CASE("isolated and unreachable states") {
  FraisseDFA d = parse_dfa(R"(dfa
state s registers 0
state lost registers 0
initial s
accept lost
on s ext{} -> s []
on lost ext{} -> s []
)");
  CHECK(reachable(d) == std::set<int>{0});
  CHECK(emptiness(d).empty);
  CHECK(restrict_to_reachable(d).size() == 1);
  FraisseDFA none = parse_dfa("dfa\nstate s registers 0\ninitial s\non s ext{} -> s []\n");
  CHECK(emptiness(none).empty);
  CHECK(run(complement(none), {}));
}

TEST_CASE("minimization of the ordered-pair automaton") {
  FraisseDFA d = load("def_in_de.dfa");
  FraisseDFA m = minimize(d);
  CHECK(m.size() == 6);
  int two = -1;
  for (int q = 0; q < m.size(); ++q)
    if (m.states[static_cast<std::size_t>(q)].orbit.carrier() == 2)
      two = q;
  REQUIRE(two >= 0);
  CHECK(m.states[static_cast<std::size_t>(two)].orbit.sym.order() == 2);
  CHECK(equivalent(d, m).equivalent);
  FraisseDFA given = load("def_in_de_min.dfa");
  CHECK(equivalent(d, given).equivalent);
  CHECK(minimize(given).size() == 6);
  EquivalenceResult ne = equivalent(d, complement(d));
  CHECK_FALSE(ne.equivalent);
  CHECK(run(d, ne.counterexample) != run(complement(d), ne.counterexample));
}

TEST_CASE("bisimilar states merge") {
  FraisseDFA d = parse_dfa(R"(symmetry equality
dfa
state s registers 0
state a registers 1
state b registers 1
initial s
accept a b
on s ext{} -> a [0:=*]
on a reg 0 -> b [0:=0]
on a ext{} -> b [0:=*]
on b reg 0 -> a [0:=0]
on b ext{} -> a [0:=*]
)");
  FraisseDFA m = minimize(d);
  CHECK(m.size() == 2);
  CHECK(equivalent(d, m).equivalent);
}

TEST_CASE("registers that never matter are dropped") {
  FraisseDFA d = parse_dfa(R"(dfa
state s registers 0
state a registers 1
initial s
accept a
on s ext{} -> a [0:=*]
on a reg 0 -> a [0:=0]
on a ext{} -> a [0:=*]
)");
  FraisseDFA m = minimize(d);
  CHECK(m.size() == 2);
  for (const DfaState& s : m.states)
    CHECK(s.orbit.carrier() == 0);
  CHECK(equivalent(d, m).equivalent);
}

TEST_CASE("monotone words") {
  FraisseDFA a = load("monotone.dfa");
  FraisseDFA b = load("monotone_alt.dfa");
  CHECK(run(a, rats({1, 2, 3})));
  CHECK_FALSE(run(a, rats({1, 1})));
  CHECK_FALSE(run(a, rats({2, 1})));
  CHECK(run(a, {}));
  CHECK(run(b, rats({0, 5, 7, 9})));
  CHECK_FALSE(run(b, rats({0, 5, 3})));
  CHECK(equivalent(a, b).equivalent);
  FraisseDFA mb = minimize(b);
  CHECK(mb.size() == 3);
  CHECK(equivalent(a, mb).equivalent);
  FraisseDFA ma = minimize(a);
  CHECK(ma.size() == a.size());
  CHECK(minimize(ma).size() == ma.size());
}

TEST_CASE("further fixture languages") {
  FraisseDFA first = load("first_is_last.dfa");
  CHECK(run(first, nats({1, 2, 1})));
  CHECK(run(first, nats({1})));
  CHECK_FALSE(run(first, nats({1, 2})));
  CHECK_FALSE(run(first, nats({})));

  FraisseDFA between = load("order_between.dfa");
  CHECK(run(between, rats({1, 3, 2})));
  CHECK(run(between, rats({3, 1, 2, 7})));
  CHECK_FALSE(run(between, rats({1, 2, 3})));
  CHECK_FALSE(run(between, rats({1, 1, 1})));

  // Vertices 0 and 1 are adjacent, 1 and 2 are adjacent, 0 and 2 are not.
  FraisseDFA path = load("graph_adjacent_path.dfa");
  CHECK(run(path, nats({0, 1, 2})));
  CHECK_FALSE(run(path, nats({0, 2})));
  CHECK_FALSE(run(path, nats({1, 1})));

  FraisseDFA edge = load("graph_def_edge.dfa");
  CHECK(run(edge, nats({0, 2, 1})));
  CHECK(run(edge, nats({2, 0, 1})));
  CHECK_FALSE(run(edge, nats({0, 1, 2})));
  CHECK_FALSE(run(edge, nats({0, 2, 1, 0})));

  FraisseDFA hub = load("graph_first_neighbors.dfa");
  CHECK(run(hub, nats({1, 0, 2, 0})));
  CHECK_FALSE(run(hub, nats({0, 1, 2})));
}

TEST_CASE("write and parse round trip") {
  for (const char* f : kDfaFixtures) {
    FraisseDFA d = load(f);
    for (const FraisseDFA& x : {d, minimize(d), product_dfa(d, complement(d), BoolOp::Or)}) {
      std::string text = write_dfa(x);
      FraisseDFA back = parse_dfa(text);
      CHECK(back.size() == x.size());
      CHECK(write_dfa(back) == text);
      CHECK(equivalent(back, x).equivalent);
    }
  }
}

TEST_CASE("user register order is respected") {
  // The shape is declared as 1<0, so register 0 holds the larger letter.
  FraisseDFA d = parse_dfa(R"(symmetry order
dfa
state s registers 0
state a registers 1
state b registers 2 rel "1<0"
state yes registers 0
state no registers 0
initial s
accept yes
on s ext{} -> a [0:=*]
on a ext{*<0} -> b [0:=0, 1:=*]
on a ext{0<*} -> b [0:=*, 1:=0]
on a reg 0 -> no []
on b reg 0 -> yes []
on b reg 1 -> no []
on b ext{*<1} -> no []
on b ext{1<*; *<0} -> no []
on b ext{0<*} -> no []
on yes ext{} -> no []
on no ext{} -> no []
)");
  CHECK(run(d, rats({1, 2, 2})));
  CHECK(run(d, rats({2, 1, 2})));
  CHECK_FALSE(run(d, rats({2, 1, 1})));
  CHECK_FALSE(run(d, rats({1, 2, 1})));
}

TEST_CASE("load errors") {
  std::string missing = parse_error("dfa\nstate s registers 0\nstate a registers 1\ninitial s\n"
                                    "on s ext{} -> a [0:=*]\non a ext{} -> a [0:=*]\n");
  CHECK(missing.find("line 3") != std::string::npos);
  CHECK(missing.find("no transition for annotation reg 0") != std::string::npos);
  std::string badsym = parse_error("symmetry order\ndfa\nstate s registers 2 rel \"0<1\" sym \"(0 1)\"\n");
  CHECK(badsym.find("not an automorphism") != std::string::npos);
  CHECK(badsym.find("line 3") != std::string::npos);
  CHECK(parse_error("dfa\nstate s registers 1\ninitial s\n").find("no registers") != std::string::npos);
  CHECK(parse_error("dfa\nstate s registers 0\ninitial t\n").find("unknown state 't'") != std::string::npos);
  CHECK(parse_error("symmetry order\ndfa\nstate s registers 0\nstate a registers 2\ninitial s\n")
            .find("not a member") != std::string::npos);
  std::string partial = parse_error("symmetry order\ndfa\nstate s registers 0\nstate a registers 2 rel \"0<1\"\n"
                                    "initial s\non a ext{0<*} -> s []\n");
  CHECK(partial.find("does not determine") != std::string::npos);
  std::string noncommuting = parse_error(R"X(dfa
state s registers 0
state p registers 2 sym "(0 1)"
state a registers 1
initial s
on s ext{} -> s []
on p reg 0 -> a [0:=0]
on p ext{} -> a [0:=0]
on a reg 0 -> a [0:=0]
on a ext{} -> a [0:=0]
)X");
  CHECK(noncommuting.find("local symmetry") != std::string::npos);
  CHECK(parse_error("dfa\nstate s registers 0\ninitial s\non s ext{} -> s []\non s ext{} -> s []\n")
            .find("duplicate") != std::string::npos);
}

TEST_CASE("acceptance depends only on the word's induced structure") {
  std::mt19937 rng(11);
  FraisseDFA d = load("def_in_de.dfa");
  FraisseDFA m = load("monotone_alt.dfa");
  for (int trial = 0; trial < 300; ++trial) {
    int len = static_cast<int>(rng() % 5);
    Word w, w2, o, o2;
    std::vector<int> perm(10);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < len; ++i) {
      int x = static_cast<int>(rng() % 4);
      w.push_back(DataValue::natural(x));
      w2.push_back(DataValue::natural(perm[static_cast<std::size_t>(x)] + 100));
      o.push_back(DataValue::rational(x, 1));
      o2.push_back(DataValue::rational(3 * x + 1, 2));
    }
    CHECK(run(d, w) == run(d, w2));
    CHECK(run(m, o) == run(m, o2));
  }
}
