#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nominal/errors.hpp"

namespace nominal::text {

enum class TokenKind { Word, String, Bracket, Paren, Arrow };

struct Token {
  TokenKind kind = TokenKind::Word;
  std::string text;
  int line = 0;
  int column = 0;
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

/// Splits text into non-empty lines of tokens. '#' starts a comment outside
/// quotes; a word may carry a braced suffix such as ext{0<*; *<1}.
std::vector<Line> lex(std::string_view text);

[[noreturn]] inline void fail(const Token& t, const std::string& what) {
  throw ParseError(what, t.line, t.column);
}

[[noreturn]] inline void fail(const Line& l, const std::string& what) {
  throw ParseError(what, l.number, l.tokens.empty() ? 1 : l.tokens.front().column);
}

/// Parses a non-negative integer token or fails at its position.
int to_index(const Token& t, const std::string& what);

/// Splits on any of the separator characters, trimming whitespace and
/// dropping empty pieces.
std::vector<std::string> split(std::string_view s, std::string_view seps);

std::string trim(std::string_view s);

} // namespace nominal::text
