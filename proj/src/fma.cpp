#include "nominal/fma.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "nominal/errors.hpp"

namespace nominal {

namespace {

/// Flattens nested nodes of the given kind and drops its neutral element;
/// an absorbing element collapses the whole list.
Constraint combine(Constraint::Kind kind, std::vector<Constraint> cs) {
  using Kind = Constraint::Kind;
  Kind neutral = kind == Kind::And ? Kind::True : Kind::False;
  Kind absorbing = kind == Kind::And ? Kind::False : Kind::True;
  std::vector<Constraint> flat;
  for (Constraint& c : cs) {
    if (c.kind == absorbing)
      return Constraint{absorbing, {}, {}, {}};
    if (c.kind == neutral)
      continue;
    if (c.kind == kind)
      for (Constraint& k : c.kids)
        flat.push_back(std::move(k));
    else
      flat.push_back(std::move(c));
  }
  if (flat.empty())
    return Constraint{neutral, {}, {}, {}};
  if (flat.size() == 1)
    return std::move(flat.front());
  return Constraint{kind, {}, {}, std::move(flat)};
}

} // namespace

Constraint Constraint::all(std::vector<Constraint> cs) { return combine(Kind::And, std::move(cs)); }

Constraint Constraint::any(std::vector<Constraint> cs) { return combine(Kind::Or, std::move(cs)); }

namespace {

class ConstraintParser {
public:
  ConstraintParser(std::string_view s, int registers) : s_(s), registers_(registers) {}

  Constraint parse() {
    Constraint c = disjunction();
    skip();
    if (pos_ != s_.size())
      error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return c;
  }

private:
  std::string_view s_;
  int registers_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& what) const {
    throw ParseError(what, 1, static_cast<int>(pos_) + 1);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool accept(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Constraint disjunction() {
    std::vector<Constraint> cs{conjunction()};
    while (accept("||"))
      cs.push_back(conjunction());
    return cs.size() == 1 ? std::move(cs.front()) : Constraint{Constraint::Kind::Or, {}, {}, std::move(cs)};
  }

  Constraint conjunction() {
    std::vector<Constraint> cs{unary()};
    while (accept("&&"))
      cs.push_back(unary());
    return cs.size() == 1 ? std::move(cs.front()) : Constraint{Constraint::Kind::And, {}, {}, std::move(cs)};
  }

  Constraint unary() {
    skip();
    if (s_.substr(pos_, 2) != "!=" && accept("!"))
      return Constraint::negate(unary());
    if (accept("(")) {
      Constraint c = disjunction();
      if (!accept(")"))
        error("expected ')'");
      return c;
    }
    std::size_t at = pos_;
    std::string w = word();
    if (w == "true")
      return Constraint{};
    if (w == "false")
      return Constraint{Constraint::Kind::False, {}, {}, {}};
    pos_ = at;
    RegName a = name();
    bool eq;
    if (accept("=="))
      eq = true;
    else if (accept("!="))
      eq = false;
    else
      error("expected '==' or '!='");
    RegName b = name();
    return eq ? Constraint::eq(a, b) : Constraint::neq(a, b);
  }

  std::string word() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.'))
      ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  RegName name() {
    skip();
    std::size_t at = pos_;
    std::string w = word();
    if (w == "input")
      return {RegName::Part::Input, 0};
    RegName r;
    std::string digits;
    if (w.rfind("before.", 0) == 0) {
      r.part = RegName::Part::Before;
      digits = w.substr(7);
    } else if (w.rfind("after.", 0) == 0) {
      r.part = RegName::Part::After;
      digits = w.substr(6);
    } else {
      pos_ = at;
      error(w.empty() ? "expected a name (before.i, input or after.i)" : "unknown name '" + w + "'");
    }
    if (digits.empty() || digits.size() > 3 || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      pos_ = at;
      error("expected a register index in '" + w + "'");
    }
    r.reg = std::stoi(digits);
    if (r.reg >= registers_) {
      pos_ = at;
      error("register " + digits + " outside 0.." + std::to_string(registers_ - 1));
    }
    return r;
  }
};

std::string name_text(const RegName& r) {
  switch (r.part) {
  case RegName::Part::Before:
    return "before." + std::to_string(r.reg);
  case RegName::Part::Input:
    return "input";
  case RegName::Part::After:
    return "after." + std::to_string(r.reg);
  }
  return "";
}

int precedence(const Constraint& c) {
  switch (c.kind) {
  case Constraint::Kind::Or:
    return 0;
  case Constraint::Kind::And:
    return 1;
  case Constraint::Kind::Eq:
  case Constraint::Kind::Neq:
    return 2;
  default:
    return 3;
  }
}

} // namespace

Constraint parse_constraint(std::string_view text, int registers) {
  return ConstraintParser(text, registers).parse();
}

std::string to_string(const Constraint& c) {
  auto sub = [](const Constraint& k, int min_prec) {
    std::string s = to_string(k);
    return precedence(k) < min_prec ? "(" + s + ")" : s;
  };
  switch (c.kind) {
  case Constraint::Kind::True:
    return "true";
  case Constraint::Kind::False:
    return "false";
  case Constraint::Kind::Eq:
    return name_text(c.lhs) + " == " + name_text(c.rhs);
  case Constraint::Kind::Neq:
    return name_text(c.lhs) + " != " + name_text(c.rhs);
  case Constraint::Kind::Not:
    return "!" + sub(c.kids.front(), 3);
  case Constraint::Kind::And:
  case Constraint::Kind::Or: {
    bool conj = c.kind == Constraint::Kind::And;
    std::string out;
    for (const Constraint& k : c.kids)
      out += (out.empty() ? "" : conj ? " && " : " || ") + sub(k, conj ? 2 : 1);
    return out;
  }
  }
  return "";
}

bool satisfies(const Constraint& c, const Partial& before, const DataValue& input, const Partial& after) {
  auto get = [&](const RegName& r) -> std::optional<DataValue> {
    switch (r.part) {
    case RegName::Part::Before:
      return before[static_cast<std::size_t>(r.reg)];
    case RegName::Part::Input:
      return input;
    case RegName::Part::After:
      return after[static_cast<std::size_t>(r.reg)];
    }
    return std::nullopt;
  };
  switch (c.kind) {
  case Constraint::Kind::True:
    return true;
  case Constraint::Kind::False:
    return false;
  case Constraint::Kind::Eq:
  case Constraint::Kind::Neq: {
    auto a = get(c.lhs);
    auto b = get(c.rhs);
    if (!a || !b)
      return false;
    return (*a == *b) == (c.kind == Constraint::Kind::Eq);
  }
  case Constraint::Kind::Not:
    return !satisfies(c.kids.front(), before, input, after);
  case Constraint::Kind::And:
    return std::all_of(c.kids.begin(), c.kids.end(),
                       [&](const Constraint& k) { return satisfies(k, before, input, after); });
  case Constraint::Kind::Or:
    return std::any_of(c.kids.begin(), c.kids.end(),
                       [&](const Constraint& k) { return satisfies(k, before, input, after); });
  }
  return false;
}

int FMA::control_index(const std::string& name) const {
  auto it = std::find(controls.begin(), controls.end(), name);
  return it == controls.end() ? -1 : static_cast<int>(it - controls.begin());
}

int FMA::label_index(const std::string& name) const {
  auto it = std::find(labels.begin(), labels.end(), name);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

void validate_fma(const FMA& m) {
  int nc = static_cast<int>(m.controls.size());
  auto control = [&](int c, const char* what) {
    if (c < 0 || c >= nc)
      throw ValidationError(std::string(what) + " refers to control " + std::to_string(c) + " outside 0.." +
                            std::to_string(nc - 1));
  };
  for (int c : m.initial)
    control(c, "initial set");
  for (int c : m.accepting)
    control(c, "accepting set");
  std::function<void(const Constraint&)> names = [&](const Constraint& c) {
    for (const RegName* r : {&c.lhs, &c.rhs})
      if (r->part != RegName::Part::Input && (r->reg < 0 || r->reg >= m.registers))
        throw ValidationError("constraint names register " + std::to_string(r->reg) + " but the automaton has " +
                              std::to_string(m.registers));
    for (const Constraint& k : c.kids)
      names(k);
  };
  for (const FmaTransition& t : m.trans) {
    control(t.from, "transition");
    control(t.to, "transition");
    if (t.label < 0 || t.label >= static_cast<int>(m.labels.size()))
      throw ValidationError("transition refers to an unknown label");
    names(t.guard);
  }
}

namespace {

/// Every register assignment over pool plus undefined.
void for_each_partial(int n, const std::vector<DataValue>& pool, const std::function<void(const Partial&)>& visit) {
  Partial cur;
  std::function<void()> go = [&] {
    if (static_cast<int>(cur.size()) == n) {
      visit(cur);
      return;
    }
    cur.push_back(std::nullopt);
    go();
    cur.pop_back();
    for (const DataValue& d : pool) {
      cur.push_back(d);
      go();
      cur.pop_back();
    }
  };
  go();
}

std::set<FmaConfig> step_over(const FMA& m, const FmaConfig& c, const FmaLetter& letter,
                              const std::vector<DataValue>& pool) {
  if (letter.label < 0 || letter.label >= static_cast<int>(m.labels.size()))
    throw UsageError("unknown label");
  std::set<FmaConfig> out;
  std::vector<const FmaTransition*> live;
  for (const FmaTransition& t : m.trans)
    if (t.from == c.control && t.label == letter.label)
      live.push_back(&t);
  if (live.empty())
    return out;
  for_each_partial(m.registers, pool, [&](const Partial& after) {
    for (const FmaTransition* t : live)
      if (satisfies(t->guard, c.regs, letter.value, after))
        out.insert(FmaConfig{t->to, after});
  });
  return out;
}

/// n naturals avoiding the given values.
std::vector<DataValue> fresh_naturals(const std::vector<DataValue>& avoid, int n) {
  std::vector<DataValue> out;
  for (std::int64_t k = 0; static_cast<int>(out.size()) < n; ++k) {
    DataValue d = DataValue::natural(k);
    if (std::find(avoid.begin(), avoid.end(), d) == avoid.end())
      out.push_back(d);
  }
  return out;
}

void add_distinct(std::vector<DataValue>& into, const DataValue& d) {
  if (std::find(into.begin(), into.end(), d) == into.end())
    into.push_back(d);
}

} // namespace

std::set<FmaConfig> fma_step(const FMA& m, const FmaConfig& c, const FmaLetter& letter) {
  std::vector<DataValue> pool;
  for (const auto& r : c.regs)
    if (r)
      add_distinct(pool, *r);
  add_distinct(pool, letter.value);
  std::vector<DataValue> fresh = fresh_naturals(pool, m.registers);
  pool.insert(pool.end(), fresh.begin(), fresh.end());
  return step_over(m, c, letter, pool);
}

bool fma_accepts(const FMA& m, const FmaWord& word) {
  std::vector<DataValue> seen;
  for (const FmaLetter& l : word) {
    if (l.value.backend() != Backend::Equality)
      throw UsageError("finite memory automata read equality data");
    add_distinct(seen, l.value);
  }
  std::vector<DataValue> fresh = fresh_naturals(seen, 2 * m.registers);
  std::vector<DataValue> pool = seen;
  pool.insert(pool.end(), fresh.begin(), fresh.end());
  auto canonical = [&](FmaConfig c) {
    std::map<DataValue, DataValue> rename;
    for (auto& r : c.regs) {
      if (!r || std::find(seen.begin(), seen.end(), *r) != seen.end())
        continue;
      auto it = rename.find(*r);
      if (it == rename.end())
        it = rename.emplace(*r, fresh[rename.size()]).first;
      r = it->second;
    }
    return c;
  };
  std::set<FmaConfig> cur;
  for (int c : m.initial)
    cur.insert(FmaConfig{c, Partial(static_cast<std::size_t>(m.registers))});
  for (const FmaLetter& l : word) {
    std::set<FmaConfig> next;
    for (const FmaConfig& c : cur)
      for (const FmaConfig& n : step_over(m, c, l, pool))
        next.insert(canonical(n));
    cur = std::move(next);
  }
  return std::any_of(cur.begin(), cur.end(), [&](const FmaConfig& c) { return m.accepting.count(c.control) > 0; });
}

FmaWord to_fma_word(const NomSet& alphabet, const LetterSeq& w) {
  FmaWord out;
  for (const Letter& l : w) {
    if (alphabet.orbit(l.orbit).carrier() != 1)
      throw UsageError("finite memory automata read single data values");
    out.push_back(FmaLetter{l.orbit, l.valuation.front()});
  }
  return out;
}

namespace {

/// Register patterns: -1 for undefined, otherwise a class id in restricted growth order.
std::vector<std::vector<int>> register_patterns(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> go = [&](int top) {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int b = -1; b <= top; ++b) {
      cur.push_back(b);
      go(b == top ? top + 1 : top);
      cur.pop_back();
    }
  };
  go(0);
  return out;
}

std::string pattern_text(const std::vector<int>& p) {
  std::string s;
  for (int b : p)
    s += b < 0 ? '_' : static_cast<char>('0' + b);
  return s;
}

void require_equality(const Symmetry* s) {
  if (!s || s->backend() != Backend::Equality)
    throw UsageError("finite memory automata are defined over the equality symmetry only");
}

std::string unique_name(const std::vector<std::string>& taken, const std::string& base) {
  std::string n = base;
  for (int k = 1; std::find(taken.begin(), taken.end(), n) != taken.end(); ++k)
    n = base + std::to_string(k);
  return n;
}

} // namespace

NominalNFA fma_to_nfa(const FMA& m) {
  validate_fma(m);
  const Symmetry& eq = symmetry_for(Backend::Equality);
  std::vector<std::vector<int>> patterns = register_patterns(m.registers);
  NomSet states;
  states.symmetry = &eq;
  std::vector<std::pair<int, const std::vector<int>*>> info;
  for (int c = 0; c < static_cast<int>(m.controls.size()); ++c)
    for (const std::vector<int>& p : patterns) {
      int k = 0;
      for (int b : p)
        k = std::max(k, b + 1);
      states.orbits.push_back(make_orbit(eq, FinStruct(k), PermGroup::trivial(k),
                                         m.controls[static_cast<std::size_t>(c)] + "." + pattern_text(p)));
      info.emplace_back(c, &p);
    }
  NominalNFA a = make_nfa(std::move(states), labeled_alphabet(eq, m.labels));
  int np = static_cast<int>(patterns.size());
  for (int c : m.initial)
    a.initial.members.insert(c * np);
  for (int c : m.accepting)
    for (int p = 0; p < np; ++p)
      a.accepting.members.insert(c * np + p);

  std::map<std::tuple<int, int, int>, std::vector<const Constraint*>> guards;
  for (const FmaTransition& t : m.trans)
    guards[{t.from, t.label, t.to}].push_back(&t.guard);
  auto partial = [&](const Element& e) {
    const std::vector<int>& p = *info[static_cast<std::size_t>(e.orbit)].second;
    Partial out;
    for (int b : p)
      out.push_back(b < 0 ? std::nullopt : std::optional<DataValue>(e.valuation[static_cast<std::size_t>(b)]));
    return out;
  };
  for (int t = 0; t < a.qaq->set.size(); ++t) {
    const ProductTag& tag = a.qaq->tags[static_cast<std::size_t>(t)];
    const ProductTag& inner = a.qa->tags[static_cast<std::size_t>(tag.left)];
    auto it = guards.find({info[static_cast<std::size_t>(inner.left)].first, inner.right,
                           info[static_cast<std::size_t>(tag.right)].first});
    if (it == guards.end())
      continue;
    Triple tr = realize_triple(a, t);
    Partial before = partial(tr.src), after = partial(tr.dst);
    for (const Constraint* g : it->second)
      if (satisfies(*g, before, tr.letter.valuation.front(), after)) {
        a.trans.members.insert(t);
        break;
      }
  }
  return a;
}

namespace {

/// Conjunction fixing the equality type of the listed positions.
Constraint equality_type(const std::vector<RegName>& names, const Valuation& vals) {
  std::vector<Constraint> cs;
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      cs.push_back(vals[i] == vals[j] ? Constraint::eq(names[i], names[j]) : Constraint::neq(names[i], names[j]));
  if (names.size() == 1)
    cs.push_back(Constraint::defined(names.front()));
  return Constraint::all(std::move(cs));
}

} // namespace

FMA nfa_to_fma(const NominalNFA& input) {
  require_equality(input.symmetry);
  for (const OrbitRepr& o : input.alphabet.orbits)
    if (o.carrier() != 1)
      throw UsageError("nfa_to_fma needs an alphabet of labels times data values");
  NominalNFA elim;
  const NominalNFA* src = &input;
  if (!input.eps.members.empty()) {
    elim = eps_eliminate(input);
    src = &elim;
  }
  const NominalNFA& a = *src;
  FMA m;
  m.registers = a.states.max_carrier();
  for (int o = 0; o < a.alphabet.size(); ++o) {
    const std::string& n = a.alphabet.orbit(o).name;
    m.labels.push_back(n.empty() ? "o" + std::to_string(o) : n);
  }
  for (int q = 0; q < a.states.size(); ++q)
    m.controls.push_back(a.states.orbit(q).name.empty() ? "q" + std::to_string(q) : a.states.orbit(q).name);
  for (int q : a.accepting.members)
    m.accepting.insert(q);

  bool entry = !(a.initial.members.size() == 1 && a.states.orbit(*a.initial.members.begin()).carrier() == 0);
  int init = -1;
  if (entry) {
    init = static_cast<int>(m.controls.size());
    m.controls.push_back(unique_name(m.controls, "init"));
    m.initial.insert(init);
    for (int q : a.initial.members)
      if (a.accepting.contains(q))
        m.accepting.insert(init);
  } else {
    m.initial.insert(*a.initial.members.begin());
  }

  std::map<std::tuple<int, int, int>, std::set<std::string>> seen;
  std::map<std::tuple<int, int, int>, std::vector<Constraint>> cases;
  auto add_case = [&](int from, int label, int to, Constraint c) {
    std::string key = to_string(c);
    if (seen[{from, label, to}].insert(key).second)
      cases[{from, label, to}].push_back(std::move(c));
  };
  for (int t : a.trans.members) {
    Triple tr = realize_triple(a, t);
    const OrbitRepr& P = a.states.orbit(tr.src.orbit);
    const OrbitRepr& Q = a.states.orbit(tr.dst.orbit);
    std::vector<Constraint> cleared;
    for (int r = Q.carrier(); r < m.registers; ++r)
      cleared.push_back(Constraint::undefined({RegName::Part::After, r}));
    for (const Perm& sp : P.sym.elements())
      for (const Perm& sq : Q.sym.elements()) {
        std::vector<RegName> names;
        Valuation vals;
        for (int i = 0; i < P.carrier(); ++i) {
          names.push_back({RegName::Part::Before, i});
          vals.push_back(tr.src.valuation[static_cast<std::size_t>(sp(i))]);
        }
        std::size_t own = names.size();
        names.push_back({RegName::Part::Input, 0});
        vals.push_back(tr.letter.valuation.front());
        for (int i = 0; i < Q.carrier(); ++i) {
          names.push_back({RegName::Part::After, i});
          vals.push_back(tr.dst.valuation[static_cast<std::size_t>(sq(i))]);
        }
        std::vector<Constraint> full = cleared;
        full.push_back(equality_type(names, vals));
        add_case(tr.src.orbit, tr.letter.orbit, tr.dst.orbit, Constraint::all(std::move(full)));
        if (entry && a.initial.contains(tr.src.orbit)) {
          std::vector<RegName> tail(names.begin() + static_cast<std::ptrdiff_t>(own), names.end());
          Valuation tail_vals(vals.begin() + static_cast<std::ptrdiff_t>(own), vals.end());
          std::vector<Constraint> part = cleared;
          part.push_back(equality_type(tail, tail_vals));
          add_case(init, tr.letter.orbit, tr.dst.orbit, Constraint::all(std::move(part)));
        }
      }
  }
  for (auto& [key, cs] : cases)
    m.trans.push_back(FmaTransition{std::get<0>(key), std::get<1>(key), Constraint::any(std::move(cs)), std::get<2>(key)});
  return m;
}

FMA dfa_to_det_fma(const FraisseDFA& d) {
  require_equality(d.symmetry);
  FMA m;
  m.labels = {"atom"};
  m.registers = 0;
  for (const DfaState& s : d.states) {
    m.controls.push_back(s.name);
    m.registers = std::max(m.registers, s.orbit.carrier());
  }
  int sink = static_cast<int>(m.controls.size());
  m.controls.push_back(unique_name(m.controls, "sink"));
  m.initial.insert(d.initial);
  for (int q = 0; q < d.size(); ++q)
    if (d.accepting[static_cast<std::size_t>(q)])
      m.accepting.insert(q);
  int n = m.registers;
  auto before = [](int i) { return RegName{RegName::Part::Before, i}; };
  auto after = [](int i) { return RegName{RegName::Part::After, i}; };
  const RegName input{RegName::Part::Input, 0};
  std::vector<Constraint> all_cleared;
  for (int r = 0; r < n; ++r)
    all_cleared.push_back(Constraint::undefined(after(r)));

  for (int q = 0; q < d.size(); ++q) {
    const DfaState& s = d.states[static_cast<std::size_t>(q)];
    int k = s.orbit.carrier();
    std::vector<Constraint> valid;
    for (int i = 0; i < n; ++i)
      valid.push_back(i < k ? Constraint::defined(before(i)) : Constraint::undefined(before(i)));
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        valid.push_back(Constraint::neq(before(i), before(j)));
    Constraint ok = Constraint::all(valid);

    auto emit = [&](const Annotation& a, const DfaTransition& t, const Perm& sigma, Constraint guard) {
      int kt = d.states[static_cast<std::size_t>(t.target)].orbit.carrier();
      std::vector<Constraint> cs{ok, std::move(guard)};
      for (int b = 0; b < n; ++b) {
        if (b >= kt) {
          cs.push_back(Constraint::undefined(after(b)));
          continue;
        }
        int w = t.witness[static_cast<std::size_t>(b)];
        bool is_input = !a.distinguished && w == a.letter_index();
        cs.push_back(Constraint::eq(after(b), is_input ? input : before(sigma(w))));
      }
      m.trans.push_back(FmaTransition{q, 0, Constraint::all(std::move(cs)), t.target});
    };
    for (std::size_t ai = 0; ai < s.annotations.size(); ++ai) {
      const Annotation& a = s.annotations[ai];
      const DfaTransition& t = s.trans[ai];
      if (a.distinguished) {
        for (int i = 0; i < k; ++i)
          for (const Perm& sg : s.orbit.sym.elements())
            if (sg(a.reg) == i) {
              emit(a, t, sg, Constraint::eq(input, before(i)));
              break;
            }
      } else {
        std::vector<Constraint> fresh;
        for (int i = 0; i < k; ++i)
          fresh.push_back(Constraint::neq(input, before(i)));
        emit(a, t, Perm::identity(k), Constraint::all(std::move(fresh)));
      }
    }
    std::vector<Constraint> bad{Constraint::negate(ok)};
    bad.insert(bad.end(), all_cleared.begin(), all_cleared.end());
    m.trans.push_back(FmaTransition{q, 0, Constraint::all(std::move(bad)), sink});
  }
  m.trans.push_back(FmaTransition{sink, 0, Constraint::all(all_cleared), sink});
  return m;
}

} // namespace nominal
