#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nominal/nomset.hpp"

namespace nominal {

/// How an input letter relates to the registers of a state, up to the
/// state's local symmetry: either equal to a register (distinguished) or a
/// fresh value of a given one-point extension type.
struct Annotation {
  bool distinguished = false;
  int reg = -1;
  /// The state shape itself (distinguished) or its one-point extension.
  FinStruct structure;
  PermGroup local_sym;

  int carrier() const { return structure.size(); }
  /// Index of the letter inside the annotated carrier.
  int letter_index() const { return distinguished ? reg : structure.size() - 1; }
};

/// Complete, duplicate-free annotation list of an orbit: distinguished
/// register classes first (by least register), then extension classes in
/// the backend's extension order.
std::vector<Annotation> enumerate_annotations(const Symmetry& symm, const OrbitRepr& state);

/// Text form: "reg 0" or "ext{0<*; *<1}"; name maps register indices to text.
std::string describe_annotation(const Symmetry& symm, const Annotation& a,
                                const std::function<std::string(int)>& name);
std::string describe_annotation(const Symmetry& symm, const Annotation& a);

struct DfaTransition {
  int target = -1;
  /// Embedding of the target shape into the annotated carrier.
  std::vector<int> witness;
};

struct DfaState {
  std::string name;
  OrbitRepr orbit;
  std::vector<Annotation> annotations;
  std::vector<DfaTransition> trans;
};

using Config = Element;
using Word = std::vector<DataValue>;

class FraisseDFA {
public:
  const Symmetry* symmetry = nullptr;
  std::vector<DfaState> states;
  int initial = 0;
  std::vector<bool> accepting;

  int size() const { return static_cast<int>(states.size()); }
  /// Nominal set of configurations: one orbit per control state.
  NomSet config_space() const;
  int state_index(const std::string& name) const;
  Config initial_config() const { return Config{initial, {}}; }
};

/// Assembles a DFA, computing annotations and asking trans_for for each one.
/// Validates the initial shape, witness embeddings and commuting conditions.
FraisseDFA build_dfa(const Symmetry& symm, std::vector<std::pair<std::string, OrbitRepr>> states,
                     int initial, std::vector<bool> accepting,
                     const std::function<DfaTransition(int, int, const Annotation&)>& trans_for);

/// Checks every invariant of an assembled DFA; throws ValidationError.
void validate_dfa(const FraisseDFA& dfa);

/// The annotation a letter falls into at a configuration, and the annotated
/// valuation realizing it.
struct Classified {
  int annotation = -1;
  Valuation annotated;
};
Classified classify(const FraisseDFA& dfa, const Config& c, const DataValue& d);

Config step(const FraisseDFA& dfa, const Config& c, const DataValue& d);
Config run_config(const FraisseDFA& dfa, const Word& word);
bool run(const FraisseDFA& dfa, const Word& word);

/// A concrete letter realizing annotation a at configuration c.
DataValue letter_for(const FraisseDFA& dfa, const Config& c, const Annotation& a);

std::set<int> reachable(const FraisseDFA& dfa);
FraisseDFA restrict_to_reachable(const FraisseDFA& dfa);
FraisseDFA complement(const FraisseDFA& dfa);

enum class BoolOp { And, Or, Xor };
BoolOp bool_op_named(const std::string& name);
FraisseDFA product_dfa(const FraisseDFA& a, const FraisseDFA& b, BoolOp op);

struct EmptinessResult {
  bool empty = true;
  Word witness;
};
EmptinessResult emptiness(const FraisseDFA& dfa);

struct EquivalenceResult {
  bool equivalent = true;
  Word counterexample;
};
EquivalenceResult equivalent(const FraisseDFA& a, const FraisseDFA& b);

FraisseDFA minimize(const FraisseDFA& dfa);

} // namespace nominal
