#include "io_common.hpp"
#include "nominal/io.hpp"

namespace nominal {

using text::fail;
using text::Line;
using text::Token;
using text::TokenKind;

FMA parse_fma(std::string_view src) {
  std::vector<Line> lines = text::lex(src);
  const Symmetry* symm = nullptr;
  std::size_t i = text::parse_header(lines, "fma", symm);
  if (symm->backend() != Backend::Equality)
    throw ParseError("finite memory automata use the equality symmetry", lines.front().number, 1);
  FMA m;
  bool have_labels = false, have_registers = false;
  std::vector<const Token*> initial, accepts;
  std::vector<const Line*> trans;
  for (; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const Token& key = l.tokens.front();
    if (key.text == "labels") {
      if (have_labels)
        fail(key, "labels already declared");
      have_labels = true;
      for (std::size_t k = 1; k < l.tokens.size(); ++k) {
        const Token& t = text::expect_word(l, k, "a label");
        if (m.label_index(t.text) >= 0)
          fail(t, "label '" + t.text + "' declared twice");
        m.labels.push_back(t.text);
      }
      if (m.labels.empty())
        fail(key, "expected at least one label");
    } else if (key.text == "registers") {
      if (have_registers)
        fail(key, "registers already declared");
      have_registers = true;
      const Token& t = text::expect_word(l, 1, "a register count");
      m.registers = text::to_index(t, "a register count");
      if (m.registers > 8)
        fail(t, "at most 8 registers are supported");
      if (l.tokens.size() > 2)
        fail(l.tokens[2], "unexpected token after the register count");
    } else if (key.text == "control") {
      for (std::size_t k = 1; k < l.tokens.size(); ++k) {
        const Token& t = text::expect_word(l, k, "a control name");
        if (m.control_index(t.text) >= 0)
          fail(t, "control '" + t.text + "' declared twice");
        m.controls.push_back(t.text);
      }
    } else if (key.text == "initial" || key.text == "accept") {
      for (std::size_t k = 1; k < l.tokens.size(); ++k)
        (key.text == "initial" ? initial : accepts).push_back(&text::expect_word(l, k, "a control name"));
    } else if (key.text == "trans") {
      trans.push_back(&l);
    } else {
      fail(key, "unknown directive '" + key.text + "'");
    }
  }
  int last = lines.empty() ? 1 : lines.back().number;
  if (m.controls.empty())
    throw ParseError("no controls declared", last, 1);
  if (!have_labels)
    m.labels.push_back("atom");
  auto control = [&](const Token& t) {
    int c = m.control_index(t.text);
    if (c < 0)
      fail(t, "unknown control '" + t.text + "'");
    return c;
  };
  for (const Token* t : initial)
    m.initial.insert(control(*t));
  for (const Token* t : accepts)
    m.accepting.insert(control(*t));
  for (const Line* l : trans) {
    if (l->tokens.size() != 5 || l->tokens[3].kind != TokenKind::String)
      fail(*l, "expected 'trans FROM LABEL \"constraint\" TO'");
    FmaTransition t;
    t.from = control(l->tokens[1]);
    t.label = m.label_index(l->tokens[2].text);
    if (t.label < 0)
      fail(l->tokens[2], "unknown label '" + l->tokens[2].text + "'");
    const Token& g = l->tokens[3];
    try {
      t.guard = parse_constraint(g.text, m.registers);
    } catch (const ParseError& e) {
      throw ParseError(e.message(), g.line, g.column + e.column());
    }
    t.to = control(l->tokens[4]);
    m.trans.push_back(std::move(t));
  }
  return m;
}

std::string write_fma(const FMA& m) {
  std::string out = "fma\n";
  if (!(m.labels.size() == 1 && m.labels.front() == "atom")) {
    out += "labels";
    for (const std::string& l : m.labels)
      out += " " + l;
    out += "\n";
  }
  out += "registers " + std::to_string(m.registers) + "\ncontrol";
  for (const std::string& c : m.controls)
    out += " " + c;
  out += "\n";
  auto list = [&](const char* key, const std::set<int>& s) {
    if (s.empty())
      return;
    out += key;
    for (int c : s)
      out += " " + m.controls[static_cast<std::size_t>(c)];
    out += "\n";
  };
  list("initial", m.initial);
  list("accept", m.accepting);
  for (const FmaTransition& t : m.trans)
    out += "trans " + m.controls[static_cast<std::size_t>(t.from)] + " " + m.labels[static_cast<std::size_t>(t.label)] +
           " \"" + to_string(t.guard) + "\" " + m.controls[static_cast<std::size_t>(t.to)] + "\n";
  return out;
}

FmaWord parse_fma_word(const FMA& m, std::string_view src) {
  const Symmetry& eq = symmetry_for(Backend::Equality);
  FmaWord w;
  for (const std::string& item : text::split(src, " \t")) {
    FmaLetter l;
    std::string value = item;
    if (auto colon = item.find(':'); colon != std::string::npos) {
      l.label = m.label_index(item.substr(0, colon));
      if (l.label < 0)
        throw UsageError("unknown label '" + item.substr(0, colon) + "'");
      value = item.substr(colon + 1);
    } else if (m.labels.size() != 1) {
      throw UsageError("letter '" + item + "' needs a label prefix such as " + m.labels.front() + ":");
    }
    l.value = eq.parse_value(value);
    w.push_back(l);
  }
  return w;
}

std::string format_fma_word(const FMA& m, const FmaWord& w) {
  std::string out;
  for (const FmaLetter& l : w) {
    out += out.empty() ? "" : " ";
    if (m.labels.size() != 1)
      out += m.labels[static_cast<std::size_t>(l.label)] + ":";
    out += l.value.to_string();
  }
  return out;
}

} // namespace nominal
