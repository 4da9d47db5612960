#include "doctest.h"

#include <random>

#include "nominal/errors.hpp"
#include "nominal/io.hpp"
#include "nominal/oracle.hpp"

using namespace nominal;

namespace {

NominalNFA load(const std::string& name) {
  return parse_nfa(read_text_file(std::string(NOMINAL_FIXTURES) + "/" + name));
}

LetterSeq word(const NominalNFA& a, const char* text) { return parse_letters(a.alphabet, text); }

bool accepts(const NominalNFA& a, const char* text) {
  MemberResult r = nfa_member(a, word(a, text));
  REQUIRE(r.verdict != Verdict::Inconclusive);
  return r.verdict == Verdict::Accept;
}

int domain_size(const NominalNFA& a) { return a.symmetry->backend() == Backend::Order ? 4 : 3; }

const char* const kFixtures[] = {"repeated_letter.nfa", "last_is_new.nfa", "order_some_descent.nfa",
                                 "graph_some_edge.nfa", "labeled.nfa", "guess_fresh.nfa"};

const char* const kRepeated = R"X(
nfa
alphabet atom
state idle registers 0
state hold registers 1
state done registers 0
initial idle
accept done
)X";

} // namespace

TEST_CASE("repeated letter membership") {
  NominalNFA a = load("repeated_letter.nfa");
  CHECK(a.states.size() == 3);
  CHECK(accepts(a, "1 2 1"));
  CHECK_FALSE(accepts(a, "1 2 3"));
  CHECK(accepts(a, "5 5"));
  CHECK_FALSE(accepts(a, ""));
  CHECK(accepts(a, "7 1 2 3 2 9"));
}

TEST_CASE("fixture languages") {
  NominalNFA last = load("last_is_new.nfa");
  CHECK(accepts(last, "1 2 3"));
  CHECK_FALSE(accepts(last, "1 2 1"));
  CHECK_FALSE(accepts(last, ""));

  NominalNFA desc = load("order_some_descent.nfa");
  CHECK(accepts(desc, "1 3 2"));
  CHECK_FALSE(accepts(desc, "1 2 2 3"));
  CHECK(accepts(desc, "1/2 0"));

  NominalNFA lab = load("labeled.nfa");
  CHECK(accepts(lab, "a:1 b:2 b:1"));
  CHECK_FALSE(accepts(lab, "b:1 a:1"));
  CHECK_FALSE(accepts(lab, "a:1 a:1"));

  NominalNFA guess = load("guess_fresh.nfa");
  CHECK(accepts(guess, "1 1 2"));
  CHECK_FALSE(accepts(guess, "1 1 1"));
  CHECK_FALSE(accepts(guess, "1"));

  NominalNFA edge = load("graph_some_edge.nfa");
  // 1 is adjacent to 3 (bit 1 of 3), 2 and 3 are not adjacent.
  CHECK(accepts(edge, "3 2 1"));
  CHECK_FALSE(accepts(edge, "2 3"));
}

TEST_CASE("symbolic membership agrees with the oracle") {
  for (const char* f : kFixtures) {
    std::string name = f;
    CAPTURE(name);
    NominalNFA a = load(f);
    FiniteDomain dom = default_domain(*a.symmetry, domain_size(a));
    std::vector<Letter> letters = letters_over(a.alphabet, dom.values);
    CHECK(nfa_language_upto(a, letters, 5) == language_upto(restrict_nfa(a, dom, letters), 5));
  }
}

TEST_CASE("guessing a fresh value agrees with the oracle on five values") {
  NominalNFA a = load("guess_fresh.nfa");
  FiniteDomain dom = default_domain(*a.symmetry, 5);
  std::vector<Letter> letters = letters_over(a.alphabet, dom.values);
  auto lang = nfa_language_upto(a, letters, 4);
  CHECK(lang == language_upto(restrict_nfa(a, dom, letters), 4));
  CHECK(lang.size() == 5 * 4 + 5 * (5 * 5 - 1) + 5 * (5 * 5 * 5 - 1));
}

TEST_CASE("write and parse round trip") {
  for (const char* f : kFixtures) {
    std::string name = f;
    CAPTURE(name);
    NominalNFA a = load(f);
    std::string text = write_nfa(a);
    NominalNFA b = parse_nfa(text);
    CHECK(write_nfa(b) == text);
    CHECK(b.trans.members == a.trans.members);
    CHECK(b.eps.members == a.eps.members);
    std::string head = text.substr(0, text.find("\ntrans") + 1);
    std::size_t pos = head.size();
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos) + 1;
      std::string line = text.substr(pos, end - pos);
      CAPTURE(line);
      NominalNFA one = parse_nfa(head + line);
      CHECK(one.trans.members.size() + one.eps.members.size() == 1);
      pos = end;
    }
  }
}

TEST_CASE("expression alphabets and letter declarations") {
  const char* src = R"X(
symmetry equality
nfa
alphabet expr "prod(dtuple(2), atom)"
state s registers 0
initial s
accept s
trans (s, o0, s) overlap{}
)X";
  NominalNFA a = parse_nfa(src);
  CHECK(a.alphabet.size() == 3);
  std::string text = write_nfa(a);
  CHECK(text.find("letter o0 registers 3") != std::string::npos);
  CHECK(write_nfa(parse_nfa(text)) == text);
  CHECK(parse_letter(a.alphabet, "o0:1,2,3").orbit == 0);
  CHECK_THROWS_AS(parse_letter(a.alphabet, "1,2,3"), UsageError);
  CHECK_THROWS_AS(parse_letter(a.alphabet, "o0:1,1,3"), UsageError);
}

TEST_CASE("union, concatenation and epsilon elimination") {
  for (const char* f : kFixtures) {
    std::string name = f;
    CAPTURE(name);
    NominalNFA a = load(f);
    FiniteDomain dom = default_domain(*a.symmetry, 3);
    std::vector<Letter> letters = letters_over(a.alphabet, dom.values);
    auto lang = nfa_language_upto(a, letters, 4);
    CHECK(nfa_language_upto(nfa_union(a, a), letters, 4) == lang);
    CHECK(nfa_language_upto(nfa_concat(epsilon_language(a.alphabet), a), letters, 4) == lang);
    CHECK(nfa_language_upto(nfa_concat(a, epsilon_language(a.alphabet)), letters, 4) == lang);
  }
}

TEST_CASE("union and concatenation of different languages") {
  NominalNFA rep = load("repeated_letter.nfa");
  NominalNFA last = load("last_is_new.nfa");
  NominalNFA u = nfa_union(rep, last);
  CHECK(accepts(u, "1 2 1"));
  CHECK(accepts(u, "1 2"));
  CHECK_FALSE(accepts(u, ""));
  NominalNFA c = nfa_concat(rep, last);
  CHECK(accepts(c, "1 1 2"));
  CHECK_FALSE(accepts(c, "1 1"));
  CHECK_FALSE(accepts(c, "1 2 3"));
  for (const NominalNFA& x : {u, c}) {
    std::string text = write_nfa(x);
    CHECK(text.find("state l.idle ") != std::string::npos);
    CHECK(write_nfa(parse_nfa(text)) == text);
  }
  CHECK_THROWS_AS(nfa_union(rep, load("labeled.nfa")), UsageError);
  CHECK_THROWS_AS(nfa_union(rep, load("order_some_descent.nfa")), UsageError);
}

TEST_CASE("epsilon elimination preserves membership on random words") {
  std::mt19937 rng(11);
  for (const char* f : {"last_is_new.nfa", "repeated_letter.nfa"}) {
    NominalNFA a = load(f);
    NominalNFA c = nfa_concat(a, a);
    NominalNFA e = eps_eliminate(c);
    CHECK(e.eps.members.empty());
    FiniteDomain dom = default_domain(*a.symmetry, 4);
    std::vector<Letter> letters = letters_over(a.alphabet, dom.values);
    for (int i = 0; i < 500; ++i) {
      LetterSeq w(std::uniform_int_distribution<std::size_t>(0, 6)(rng));
      for (Letter& l : w)
        l = letters[std::uniform_int_distribution<std::size_t>(0, letters.size() - 1)(rng)];
      CHECK(nfa_member(c, w).verdict == nfa_member(e, w).verdict);
    }
  }
}

TEST_CASE("emptiness") {
  for (const char* f : kFixtures) {
    std::string name = f;
    CAPTURE(name);
    NominalNFA a = load(f);
    NfaEmptiness r = nfa_emptiness(a);
    REQUIRE_FALSE(r.empty);
    CHECK(nfa_member(a, r.witness).verdict == Verdict::Accept);
  }
  NominalNFA none = parse_nfa(kRepeated);
  CHECK(nfa_emptiness(none).empty);
  CHECK(nfa_emptiness(nfa_concat(load("repeated_letter.nfa"), none)).empty);
  NfaEmptiness r = nfa_emptiness(load("repeated_letter.nfa"));
  CHECK(r.witness.size() == 2);
}

TEST_CASE("pool cap yields an inconclusive verdict") {
  NominalNFA a = load("guess_fresh.nfa");
  LetterSeq w = word(a, "1 2 3");
  CHECK(nfa_member(a, w, 3).verdict == Verdict::Inconclusive);
  MemberResult r = nfa_member(a, w, 100);
  CHECK(r.verdict == Verdict::Accept);
  CHECK(r.pool == 4);
}

TEST_CASE("load errors") {
  auto err = [](const std::string& body) {
    try {
      parse_nfa(std::string(kRepeated) + body);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(err("trans (idle, atom, nowhere) overlap{}").find("unknown state 'nowhere'") != std::string::npos);
  CHECK(err("trans (idle, letter, hold) overlap{}").find("unknown alphabet orbit") != std::string::npos);
  CHECK(err("trans (idle, atom, hold) overlap{src.0=in}").find("out of range") != std::string::npos);
  CHECK(err("trans (idle, atom, hold) overlap{in<dst.0}").find("no relations") != std::string::npos);
  CHECK(err("trans (idle, atom, hold) overlap{*; in=dst.0}").find("cannot be combined") != std::string::npos);
  CHECK(err("trans (idle, atom, hold) overlap{foo.0=in}").find("unknown position") != std::string::npos);
  CHECK(err("trans (idle, atom)").find("expected") != std::string::npos);
  CHECK(err("frobnicate").find("line 9") != std::string::npos);
  CHECK_THROWS_AS(parse_nfa("nfa\nstate s registers 0\n"), ParseError);
  const char* inconsistent = R"X(
symmetry order
nfa
alphabet atom
state s registers 1
trans (s, atom, s) overlap{src.0<in; in<src.0}
)X";
  CHECK_THROWS_AS(parse_nfa(inconsistent), ParseError);
}
