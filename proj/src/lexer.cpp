#include "lexer.hpp"

#include <cctype>

namespace nominal::text {

namespace {

bool word_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '"' && c != '[' && c != ']' &&
         c != '(' && c != ')' && c != '#';
}

} // namespace

std::vector<Line> lex(std::string_view text) {
  std::vector<Line> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    Line l{line_no, {}};
    std::size_t i = 0;
    auto col = [&](std::size_t p) { return static_cast<int>(p) + 1; };
    while (i < line.size()) {
      char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '#')
        break;
      std::size_t begin = i;
      if (c == '"' || c == '[' || c == '(') {
        char close = c == '"' ? '"' : c == '[' ? ']' : ')';
        std::size_t j = line.find(close, i + 1);
        if (j == std::string_view::npos)
          throw ParseError(std::string("missing closing ") + close, line_no, col(i));
        TokenKind kind = c == '"' ? TokenKind::String : c == '[' ? TokenKind::Bracket : TokenKind::Paren;
        l.tokens.push_back({kind, std::string(line.substr(i + 1, j - i - 1)), line_no, col(begin)});
        i = j + 1;
        continue;
      }
      if (c == ']' || c == ')')
        throw ParseError(std::string("unexpected '") + c + "'", line_no, col(i));
      if (line.substr(i, 2) == "->") {
        l.tokens.push_back({TokenKind::Arrow, "->", line_no, col(i)});
        i += 2;
        continue;
      }
      std::string word;
      while (i < line.size() && word_char(line[i])) {
        if (line[i] == '{') {
          std::size_t j = line.find('}', i);
          if (j == std::string_view::npos)
            throw ParseError("missing closing }", line_no, col(i));
          word += line.substr(i, j - i + 1);
          i = j + 1;
          continue;
        }
        word += line[i++];
      }
      l.tokens.push_back({TokenKind::Word, std::move(word), line_no, col(begin)});
    }
    if (!l.tokens.empty())
      out.push_back(std::move(l));
    if (end == text.size())
      break;
    start = end + 1;
  }
  return out;
}

int to_index(const Token& t, const std::string& what) {
  const std::string& s = t.text;
  if (s.empty() || s.size() > 6)
    fail(t, "expected " + what + ", got '" + s + "'");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(t, "expected " + what + ", got '" + s + "'");
  return std::stoi(s);
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, std::string_view seps) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || seps.find(s[i]) != std::string_view::npos) {
      std::string piece = trim(s.substr(start, i - start));
      if (!piece.empty())
        out.push_back(std::move(piece));
      start = i + 1;
    }
  }
  return out;
}

} // namespace nominal::text
