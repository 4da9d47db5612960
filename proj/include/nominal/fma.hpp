#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nominal/dfa.hpp"
#include "nominal/nfa.hpp"

namespace nominal {

/// A register before the step, the input value, or a register after the step.
struct RegName {
  enum class Part { Before, Input, After };
  Part part = Part::Input;
  int reg = 0;

  auto operator<=>(const RegName&) const = default;
};

/// Boolean combination of equality constraints. An atom holds only when
/// both of its sides are defined.
struct Constraint {
  enum class Kind { True, False, Eq, Neq, Not, And, Or };
  Kind kind = Kind::True;
  RegName lhs, rhs;
  std::vector<Constraint> kids;

  static Constraint eq(RegName a, RegName b) { return {Kind::Eq, a, b, {}}; }
  static Constraint neq(RegName a, RegName b) { return {Kind::Neq, a, b, {}}; }
  static Constraint negate(Constraint c) { return {Kind::Not, {}, {}, {std::move(c)}}; }
  static Constraint all(std::vector<Constraint> cs);
  static Constraint any(std::vector<Constraint> cs);
  /// before.r or after.r holds a value.
  static Constraint defined(RegName r) { return eq(r, r); }
  static Constraint undefined(RegName r) { return negate(defined(r)); }
};

Constraint parse_constraint(std::string_view text, int registers);
std::string to_string(const Constraint& c);

using Partial = std::vector<std::optional<DataValue>>;

bool satisfies(const Constraint& c, const Partial& before, const DataValue& input, const Partial& after);

struct FmaTransition {
  int from = 0;
  int label = 0;
  Constraint guard;
  int to = 0;
};

struct FMA {
  std::vector<std::string> labels;
  std::vector<std::string> controls;
  int registers = 0;
  std::set<int> initial;
  std::set<int> accepting;
  std::vector<FmaTransition> trans;

  int control_index(const std::string& name) const;
  int label_index(const std::string& name) const;
};

/// Throws ValidationError on out-of-range references.
void validate_fma(const FMA& m);

struct FmaConfig {
  int control = 0;
  Partial regs;

  auto operator<=>(const FmaConfig&) const = default;
};

struct FmaLetter {
  int label = 0;
  DataValue value;
};
using FmaWord = std::vector<FmaLetter>;

/// Successors whose registers hold values of the configuration, the input,
/// or up to registers-many fresh values.
std::set<FmaConfig> fma_step(const FMA& m, const FmaConfig& c, const FmaLetter& letter);

bool fma_accepts(const FMA& m, const FmaWord& word);

/// NFA letters as FMA letters; the alphabet must consist of single-register orbits.
FmaWord to_fma_word(const NomSet& alphabet, const LetterSeq& w);

/// One state orbit per control and register pattern (which registers are
/// defined and which of them are equal).
NominalNFA fma_to_nfa(const FMA& m);

/// Equality symmetry; every alphabet orbit must be a single register.
/// Epsilon moves are eliminated first. One control per state orbit, plus an
/// entry control when the initial states are not a single register-free orbit.
FMA nfa_to_fma(const NominalNFA& a);

/// Deterministic FMA with one control per state plus a rejecting sink for
/// configurations that do not encode a state.
FMA dfa_to_det_fma(const FraisseDFA& d);

} // namespace nominal
