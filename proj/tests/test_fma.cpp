#include "doctest.h"

#include <random>

#include "nominal/errors.hpp"
#include "nominal/io.hpp"
#include "nominal/oracle.hpp"

using namespace nominal;

namespace {

const Symmetry& EQ = symmetry_for(Backend::Equality);

FMA load(const std::string& name) {
  return parse_fma(read_text_file(std::string(NOMINAL_FIXTURES) + "/" + name));
}

const char* const kFixtures[] = {"repeated.fma", "store_match.fma", "two_reg.fma", "fresh_guess.fma"};

/// Letters (label, value), label-major, matching the oracle's numbering.
std::vector<FmaLetter> fma_letters(const FMA& m, const FiniteDomain& dom) {
  std::vector<FmaLetter> out;
  for (int l = 0; l < static_cast<int>(m.labels.size()); ++l)
    for (const DataValue& d : dom.values)
      out.push_back({l, d});
  return out;
}

std::set<LetterWord> fma_language(const FMA& m, const FiniteDomain& dom, int len) {
  std::vector<FmaLetter> letters = fma_letters(m, dom);
  std::set<LetterWord> out;
  for (const LetterWord& w : all_words(static_cast<int>(letters.size()), len)) {
    FmaWord fw;
    for (int i : w)
      fw.push_back(letters[static_cast<std::size_t>(i)]);
    if (fma_accepts(m, fw))
      out.insert(w);
  }
  return out;
}

std::set<LetterWord> nfa_language(const NominalNFA& a, const FiniteDomain& dom, int len) {
  return nfa_language_upto(a, letters_over(a.alphabet, dom.values), len);
}

bool accepts(const FMA& m, const char* w) { return fma_accepts(m, parse_fma_word(m, w)); }

RegName before(int i) { return {RegName::Part::Before, i}; }
RegName after(int i) { return {RegName::Part::After, i}; }
const RegName kInput{RegName::Part::Input, 0};

Constraint random_constraint(std::mt19937& rng, int n, int depth) {
  auto pick = [&](int k) { return std::uniform_int_distribution<int>(0, k - 1)(rng); };
  auto name = [&]() -> RegName {
    int r = pick(2 * n + 1);
    if (r == 2 * n)
      return kInput;
    return r < n ? before(r) : after(r - n);
  };
  int kind = depth == 0 ? pick(2) : pick(5);
  switch (kind) {
  case 0:
    return Constraint::eq(name(), name());
  case 1:
    return Constraint::neq(name(), name());
  case 2:
    return Constraint::negate(random_constraint(rng, n, depth - 1));
  case 3:
    return Constraint::all({random_constraint(rng, n, depth - 1), random_constraint(rng, n, depth - 1)});
  default:
    return Constraint::any({random_constraint(rng, n, depth - 1), random_constraint(rng, n, depth - 1)});
  }
}

FMA random_fma(std::mt19937& rng) {
  auto pick = [&](int k) { return std::uniform_int_distribution<int>(0, k - 1)(rng); };
  FMA m;
  m.labels = {"atom"};
  m.registers = 1 + pick(2);
  m.controls = {"p", "q"};
  m.initial = {0};
  m.accepting = {pick(2)};
  if (pick(3) == 0)
    m.accepting.insert(1 - *m.accepting.begin());
  int nt = 2 + pick(3);
  for (int i = 0; i < nt; ++i)
    m.trans.push_back({pick(2), 0, random_constraint(rng, m.registers, 2), pick(2)});
  return m;
}

} // namespace

TEST_CASE("constraint syntax") {
  Constraint c = parse_constraint("input != before.0 && (after.0 == input || !(before.1 == before.1))", 2);
  CHECK(to_string(c) == "input != before.0 && (after.0 == input || !(before.1 == before.1))");
  CHECK(to_string(parse_constraint("true", 0)) == "true");
  CHECK(to_string(parse_constraint("!false || input == input", 0)) == "!false || input == input");
  CHECK_THROWS_AS(parse_constraint("before.2 == input", 2), ParseError);
  CHECK_THROWS_AS(parse_constraint("input = before.0", 1), ParseError);
  CHECK_THROWS_AS(parse_constraint("reg.0 == input", 1), ParseError);
  CHECK_THROWS_AS(parse_constraint("(input == input", 1), ParseError);
}

TEST_CASE("constraint semantics") {
  Partial none(2), one{DataValue::natural(5), std::nullopt};
  DataValue five = DataValue::natural(5), six = DataValue::natural(6);
  CHECK_FALSE(satisfies(Constraint::eq(before(0), kInput), none, five, none));
  CHECK_FALSE(satisfies(Constraint::neq(before(0), kInput), none, five, none));
  CHECK(satisfies(Constraint::eq(before(0), kInput), one, five, none));
  CHECK(satisfies(Constraint::neq(before(0), kInput), one, six, none));
  CHECK(satisfies(Constraint::undefined(before(1)), one, six, none));
  CHECK_FALSE(satisfies(parse_constraint("false", 2), one, six, one));
}

TEST_CASE("constraint satisfaction is invariant under renaming values") {
  std::mt19937 rng(3);
  for (int i = 0; i < 300; ++i) {
    Constraint c = random_constraint(rng, 2, 3);
    auto partial = [&] {
      Partial p;
      for (int r = 0; r < 2; ++r) {
        int v = std::uniform_int_distribution<int>(-1, 4)(rng);
        p.push_back(v < 0 ? std::nullopt : std::optional<DataValue>(DataValue::natural(v)));
      }
      return p;
    };
    Partial b = partial(), a = partial();
    DataValue in = DataValue::natural(std::uniform_int_distribution<int>(0, 4)(rng));
    std::vector<int> pi{0, 1, 2, 3, 4};
    std::shuffle(pi.begin(), pi.end(), rng);
    auto move = [&](const DataValue& d) { return DataValue::natural(pi[static_cast<std::size_t>(d.num())] + 10); };
    auto move_all = [&](Partial p) {
      for (auto& x : p)
        if (x)
          x = move(*x);
      return p;
    };
    CHECK(satisfies(c, b, in, a) == satisfies(c, move_all(b), move(in), move_all(a)));
  }
}

TEST_CASE("steps") {
  FMA m = load("store_match.fma");
  DataValue five = DataValue::natural(5);
  auto next = fma_step(m, FmaConfig{0, {std::nullopt}}, FmaLetter{0, five});
  CHECK(next.size() == 1);
  CHECK(next.count(FmaConfig{1, {five}}));
  auto matched = fma_step(m, FmaConfig{1, {five}}, FmaLetter{1, five});
  CHECK(matched.count(FmaConfig{2, {std::nullopt}}));
  CHECK(fma_step(m, FmaConfig{0, {std::nullopt}}, FmaLetter{1, five}).empty());
  CHECK_THROWS_AS(fma_step(m, FmaConfig{0, {std::nullopt}}, FmaLetter{7, five}), UsageError);
  FMA never = m;
  for (FmaTransition& t : never.trans)
    t.guard = parse_constraint("false", 1);
  CHECK(fma_step(never, FmaConfig{0, {std::nullopt}}, FmaLetter{0, five}).empty());

  FMA guess = load("fresh_guess.fma");
  auto guesses = fma_step(guess, FmaConfig{0, {std::nullopt}}, FmaLetter{0, five});
  CHECK(guesses.size() == 1);
}

TEST_CASE("acceptance") {
  FMA rep = load("repeated.fma");
  CHECK(accepts(rep, "1 2 1"));
  CHECK_FALSE(accepts(rep, "1 2 3"));
  CHECK_FALSE(accepts(rep, ""));
  FMA two = load("two_reg.fma");
  CHECK(accepts(two, "1 2 2"));
  CHECK(accepts(two, "1 1 1"));
  CHECK_FALSE(accepts(two, "1 2 3"));
  CHECK_FALSE(accepts(two, "1 2 2 1"));
  FMA sm = load("store_match.fma");
  CHECK(accepts(sm, "a:1 b:2 b:1"));
  CHECK_FALSE(accepts(sm, "a:1 b:2 a:1"));
  CHECK_THROWS_AS(parse_fma_word(sm, "1"), UsageError);
  FMA guess = load("fresh_guess.fma");
  CHECK(accepts(guess, "1 2"));
  CHECK_FALSE(accepts(guess, "1 1 1"));
}

TEST_CASE("symbolic acceptance agrees with the oracle") {
  for (const char* f : kFixtures) {
    std::string name = f;
    CAPTURE(name);
    FMA m = load(f);
    FiniteDomain dom = default_domain(EQ, 3);
    CHECK(fma_language(m, dom, 5) == language_upto(restrict_fma(m, dom), 5));
  }
}

TEST_CASE("translation to an NFA") {
  FMA one;
  one.labels = {"atom"};
  one.registers = 1;
  one.controls = {"c"};
  one.initial = {0};
  one.accepting = {0};
  one.trans.push_back({0, 0, parse_constraint("before.0 != input", 1), 0});
  NominalNFA a = fma_to_nfa(one);
  CHECK(a.states.size() == 2);
  bool distinguished_overlap = false;
  for (int t : a.trans.members) {
    Triple tr = realize_triple(a, t);
    if (!tr.src.valuation.empty() && tr.src.valuation.front() == tr.letter.valuation.front())
      distinguished_overlap = true;
  }
  CHECK_FALSE(distinguished_overlap);

  for (const char* f : kFixtures) {
    std::string name = f;
    CAPTURE(name);
    FMA m = load(f);
    FiniteDomain dom = default_domain(EQ, 3);
    NominalNFA n = fma_to_nfa(m);
    auto lang = fma_language(m, dom, 5);
    CHECK(nfa_language(n, dom, 5) == lang);
    FMA back = nfa_to_fma(n);
    validate_fma(back);
    CHECK(fma_language(back, dom, 4) == fma_language(m, dom, 4));
  }
}

TEST_CASE("random automata survive both translations") {
  std::mt19937 rng(2024);
  FiniteDomain dom = default_domain(EQ, 3);
  for (int i = 0; i < 20; ++i) {
    CAPTURE(i);
    FMA m = random_fma(rng);
    auto lang = language_upto(restrict_fma(m, dom), 4);
    NominalNFA n = fma_to_nfa(m);
    CHECK(nfa_language(n, dom, 4) == lang);
    FMA back = nfa_to_fma(n);
    CHECK(language_upto(restrict_fma(back, dom), 4) == lang);
  }
}

TEST_CASE("NFA fixtures as finite memory automata") {
  for (const char* f : {"repeated_letter.nfa", "last_is_new.nfa", "labeled.nfa", "guess_fresh.nfa"}) {
    std::string name = f;
    CAPTURE(name);
    NominalNFA a = parse_nfa(read_text_file(std::string(NOMINAL_FIXTURES) + "/" + name));
    FMA m = nfa_to_fma(a);
    FiniteDomain dom = default_domain(EQ, 3);
    CHECK(fma_language(m, dom, 4) == nfa_language(a, dom, 4));
  }
  NominalNFA order = parse_nfa(read_text_file(std::string(NOMINAL_FIXTURES) + "/order_some_descent.nfa"));
  CHECK_THROWS_AS(nfa_to_fma(order), UsageError);
}

TEST_CASE("unordered register pairs are flattened") {
  const char* src = R"X(
nfa
alphabet atom
state start registers 0
state one registers 1
state pair registers 2 sym "(0 1)"
state yes registers 0
initial start
accept yes
trans (start, atom, one) overlap{in=dst.0}
trans (one, atom, pair) overlap{src.0=dst.0; in=dst.1}
trans (pair, atom, yes) overlap{src.0=in}
)X";
  NominalNFA a = parse_nfa(src);
  FMA m = nfa_to_fma(a);
  CHECK(m.registers == 2);
  FiniteDomain dom = default_domain(EQ, 3);
  CHECK(fma_language(m, dom, 4) == nfa_language(a, dom, 4));
  CHECK(accepts(m, "1 2 2"));
  CHECK(accepts(m, "1 2 1"));
  CHECK_FALSE(accepts(m, "1 2 3"));
}

TEST_CASE("register-free NFA gives a classical automaton") {
  const char* src = R"X(
nfa
alphabet atom
state even registers 0
state odd registers 0
initial even
accept even
trans (even, atom, odd) overlap{}
trans (odd, atom, even) overlap{}
)X";
  FMA m = nfa_to_fma(parse_nfa(src));
  CHECK(m.registers == 0);
  CHECK(m.controls.size() == 2);
  CHECK(accepts(m, "1 2"));
  CHECK_FALSE(accepts(m, "1 2 3"));
}

TEST_CASE("deterministic translation of DFAs") {
  for (const char* f : {"def_in_de.dfa", "def_in_de_min.dfa"}) {
    std::string name = f;
    CAPTURE(name);
    FraisseDFA d = parse_dfa(read_text_file(std::string(NOMINAL_FIXTURES) + "/" + name));
    FMA m = dfa_to_det_fma(d);
    CHECK(m.registers == 2);
    FiniteDomain dom = default_domain(EQ, 4);
    CHECK(fma_language(m, dom, 4) == language_upto(restrict_dfa(d, dom), 4));

    std::mt19937 rng(5);
    for (int i = 0; i < 300; ++i) {
      FmaConfig c{std::uniform_int_distribution<int>(0, static_cast<int>(m.controls.size()) - 1)(rng), {}};
      for (int r = 0; r < m.registers; ++r) {
        int v = std::uniform_int_distribution<int>(-1, 3)(rng);
        c.regs.push_back(v < 0 ? std::nullopt : std::optional<DataValue>(DataValue::natural(v)));
      }
      FmaLetter l{0, DataValue::natural(std::uniform_int_distribution<int>(0, 4)(rng))};
      CHECK(fma_step(m, c, l).size() == 1);
    }
  }
  FraisseDFA mono = parse_dfa(read_text_file(std::string(NOMINAL_FIXTURES) + "/monotone.dfa"));
  CHECK_THROWS_AS(dfa_to_det_fma(mono), UsageError);

  const char* parity = R"X(
dfa
state even registers 0
state odd registers 0
initial even
accept even
on even ext{} -> odd []
on odd ext{} -> even []
)X";
  FMA m = dfa_to_det_fma(parse_dfa(parity));
  CHECK(m.registers == 0);
  CHECK(accepts(m, "4 4"));
  CHECK_FALSE(accepts(m, "4"));
}

TEST_CASE("write and parse round trip") {
  for (const char* f : kFixtures) {
    FMA m = load(f);
    std::string text = write_fma(m);
    CHECK(write_fma(parse_fma(text)) == text);
  }
  FMA det = dfa_to_det_fma(parse_dfa(read_text_file(std::string(NOMINAL_FIXTURES) + "/def_in_de.dfa")));
  std::string text = write_fma(det);
  CHECK(write_fma(parse_fma(text)) == text);
}

TEST_CASE("load errors") {
  auto err = [](const std::string& src) {
    try {
      parse_fma(src);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  std::string head = "fma\nregisters 1\ncontrol a b\ninitial a\n";
  CHECK(err(head + "trans a atom \"before.3 == input\" b").find("line 5, column 15") != std::string::npos);
  CHECK(err(head + "trans a atom \"true\" c").find("unknown control 'c'") != std::string::npos);
  CHECK(err(head + "trans a x \"true\" b").find("unknown label 'x'") != std::string::npos);
  CHECK(err(head + "trans a atom true b").find("expected 'trans") != std::string::npos);
  CHECK(err("symmetry order\nfma\ncontrol a\n").find("equality") != std::string::npos);
  CHECK(err("fma\nregisters 1\n").find("no controls") != std::string::npos);
}
