#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nominal/dfa.hpp"
#include "nominal/fma.hpp"
#include "nominal/nfa.hpp"

namespace nominal {

std::string read_text_file(const std::string& path);

enum class FileKind { Dfa, Nfa, Fma };

/// Kind of an automaton file, from its first directives.
FileKind detect_kind(std::string_view text);

/// Parses "0<1<2" or "E(0,1); E(1,2)" style fact lists (items separated by
/// ';'); index maps a name token to a carrier index or throws UsageError.
std::vector<Fact> parse_facts(const Symmetry& symm, std::string_view text,
                              const std::function<int(const std::string&)>& index);

/// Parses "(0 1); (1 2)" into group generators on carrier n.
std::vector<Perm> parse_generators(std::string_view text, int n);

FraisseDFA parse_dfa(std::string_view text);
std::string write_dfa(const FraisseDFA& dfa);

/// Space- or comma-separated value literals in the backend's syntax.
Word parse_word(const Symmetry& symm, std::string_view text);
std::string format_word(const Word& w);

NominalNFA parse_nfa(std::string_view text);
std::string write_nfa(const NominalNFA& a);

/// Name used to refer to an alphabet orbit (its name, or o<i>).
std::string letter_orbit_name(const NomSet& alphabet, int orbit);

/// "[orbit:]v1,v2" with values in the orbit's register order; the orbit may
/// be omitted when the alphabet has a single orbit.
Letter parse_letter(const NomSet& alphabet, std::string_view text);
std::string format_letter(const NomSet& alphabet, const Letter& l);

FMA parse_fma(std::string_view text);
std::string write_fma(const FMA& m);

/// "label:value" letters separated by whitespace; the label may be omitted
/// when there is only one.
FmaWord parse_fma_word(const FMA& m, std::string_view text);
std::string format_fma_word(const FMA& m, const FmaWord& w);

/// Letters separated by whitespace.
LetterSeq parse_letters(const NomSet& alphabet, std::string_view text);
std::string format_letters(const NomSet& alphabet, const LetterSeq& w);

} // namespace nominal
