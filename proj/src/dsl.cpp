#include "ck/dsl.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>

#include "ck/error.hpp"

namespace ck {

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

constexpr std::array kKeywords = {
    "scenario", "agents",     "values",    "colors",    "naturals", "positive",
    "announce", "atleast",    "exactly",   "maxdiff",   "atmost",   "consecutive",
    "sop",      "sumin",      "zeroone",   "sight",     "full",     "blind",
    "nearcircle", "farcircle", "nearline", "actual",    "sweep",    "protocol",
    "simultaneous", "circular", "order",   "rounds",    "bound",    "cap",
    "growth",
};

}  // namespace

SyntaxError::SyntaxError(SourceSpan span, std::vector<std::string> expected, std::string found)
    : std::runtime_error("expected " +
                         (expected.size() == 1 ? expected.front()
                                               : "one of " + join(expected, ", ")) +
                         ", found " + found),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

SemanticError::SemanticError(SourceSpan span, std::string rule)
    : std::runtime_error(std::move(rule)), span_(span) {}

std::string format_diagnostic(std::string_view file, const SourceSpan& span,
                              std::string_view message) {
  std::string out(file);
  out += ':' + std::to_string(span.line) + ':' + std::to_string(span.column) + ": error: ";
  out += message;
  return out;
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::End:
      return "end of input";
    case Token::Kind::String:
      return "string \"" + t.text + "\"";
    case Token::Kind::Int:
      return "integer " + t.text;
    case Token::Kind::Punct:
      return "'" + t.text + "'";
    case Token::Kind::Ident:
      break;
  }
  return (is_keyword(t.text) ? "keyword '" : "identifier '") + t.text + "'";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.span = {line, col, i, 0};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j < text.size() && (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        while (j < text.size() && ident_char(text[j])) ++j;
        t.span.length = j - i;
        throw SyntaxError(t.span, {"integer", "identifier"},
                          "'" + std::string(text.substr(i, j - i)) + "'");
      }
      t.kind = Token::Kind::Int;
      t.text = std::string(text.substr(i, j - i));
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(text.substr(i, j - i));
    } else if (c == '"') {
      std::size_t j = i + 1;
      std::string value;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') {
        if (text[j] == '\\' && j + 1 < text.size()) ++j;
        value += text[j++];
      }
      if (j >= text.size() || text[j] != '"') {
        t.span.length = j - i;
        throw SyntaxError(t.span, {"closing '\"'"}, "end of line");
      }
      t.kind = Token::Kind::String;
      t.text = value;
      t.span.length = j + 1 - i;
      advance(j + 1 - i);
      out.push_back(std::move(t));
      continue;
    } else if (std::string_view("{}[];:=+*,").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
    } else {
      t.span.length = 1;
      throw SyntaxError(t.span, {"token"}, "character '" + std::string(1, c) + "'");
    }
    t.span.length = t.text.size();
    advance(t.text.size());
    out.push_back(std::move(t));
  }
  Token end;
  end.span = {line, col, i, 0};
  out.push_back(end);
  return out;
}

std::optional<Value> parse_value(const ValueAlphabet& alphabet, const std::string& token) {
  if (alphabet.kind == ValueAlphabet::Kind::Colors) return alphabet.color_code(token);
  Value v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  if (!alphabet.admits(v)) return std::nullopt;
  return v;
}

namespace {

struct Located {
  std::string text;
  SourceSpan span;
};

struct RawScenario {
  std::string name;
  std::optional<SourceSpan> agents_at;
  std::vector<Located> agent_names;
  std::optional<std::size_t> agent_count;
  std::optional<SourceSpan> values_at;
  ValueAlphabet alphabet;
  std::optional<SourceSpan> announce_at;
  std::string announce_kind;
  std::optional<Located> announce_color;
  std::vector<Value> announce_ints;
  std::optional<SourceSpan> sight_at;
  std::string sight_kind;
  std::vector<Located> blind;
  std::optional<SourceSpan> actual_at;
  bool sweep = false;
  std::vector<Located> actual;
  std::optional<SourceSpan> protocol_at;
  bool circular = false;
  std::vector<Located> order;
  SourceSpan order_at;
  std::size_t rounds = 0;
  SourceSpan rounds_at;
  std::optional<SourceSpan> bound_at;
  BoundConfig bound;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  RawScenario parse() {
    RawScenario raw;
    keyword("scenario");
    raw.name = take(Token::Kind::String, "scenario name").text;
    punct("{");
    while (!at_punct("}")) statement(raw);
    punct("}");
    if (peek().kind != Token::Kind::End) fail({"end of input"});
    return raw;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().span, std::move(expected), describe(peek()));
  }

  bool at_punct(std::string_view p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  bool at_keyword(std::string_view k) const {
    return peek().kind == Token::Kind::Ident && peek().text == k;
  }
  bool at_name() const { return peek().kind == Token::Kind::Ident && !is_keyword(peek().text); }

  void punct(std::string_view p) {
    if (!at_punct(p)) fail({"'" + std::string(p) + "'"});
    next();
  }
  const Token& keyword(std::string_view k) {
    if (!at_keyword(k)) fail({"'" + std::string(k) + "'"});
    return next();
  }
  const Token& take(Token::Kind kind, const std::string& what) {
    if (peek().kind != kind) fail({what});
    return next();
  }
  Located name(const std::string& what) {
    if (!at_name()) fail({what});
    const Token& t = next();
    return {t.text, t.span};
  }
  std::size_t integer(const std::string& what) {
    const Token& t = take(Token::Kind::Int, what);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || v > 0xffffffffu) throw SemanticError(t.span, "integer out of range");
    return v;
  }
  std::vector<Located> names(const std::string& what) {
    std::vector<Located> out{name(what)};
    while (at_name()) out.push_back(name(what));
    return out;
  }
  // One of the given keywords.
  const Token& choice(std::initializer_list<const char*> options) {
    for (const char* o : options)
      if (at_keyword(o)) return next();
    std::vector<std::string> expected;
    for (const char* o : options) expected.push_back("'" + std::string(o) + "'");
    fail(expected);
  }

  static void once(std::optional<SourceSpan>& slot, const Token& t) {
    if (slot) throw SemanticError(t.span, "duplicate '" + t.text + "' statement");
    slot = t.span;
  }

  void statement(RawScenario& raw) {
    const Token& head = choice({"agents", "values", "announce", "sight", "actual", "sweep",
                                "protocol", "bound"});
    const std::string& h = head.text;
    if (h == "agents") {
      once(raw.agents_at, head);
      if (peek().kind == Token::Kind::Int) {
        raw.agent_count = integer("agent count");
      } else {
        raw.agent_names = names("agent name or count");
      }
    } else if (h == "values") {
      once(raw.values_at, head);
      const Token& kind = choice({"colors", "naturals", "positive"});
      if (kind.text == "colors") {
        punct("{");
        std::vector<std::string> colors;
        for (auto& c : names("color name")) colors.push_back(c.text);
        punct("}");
        raw.alphabet = ValueAlphabet::hats(std::move(colors));
      } else {
        raw.alphabet = kind.text == "naturals" ? ValueAlphabet::naturals() : ValueAlphabet::positive();
      }
    } else if (h == "announce") {
      once(raw.announce_at, head);
      const Token& kind =
          choice({"atleast", "exactly", "maxdiff", "consecutive", "sop", "sumin", "zeroone"});
      raw.announce_kind = kind.text;
      if (kind.text == "atleast" || kind.text == "exactly") {
        raw.announce_color = name("color name");
        raw.announce_ints.push_back(static_cast<Value>(integer("count")));
      } else if (kind.text == "maxdiff") {
        if (at_keyword("atmost")) {
          next();
          raw.announce_kind = "maxdiff atmost";
        }
        raw.announce_ints.push_back(static_cast<Value>(integer("difference")));
      } else if (kind.text == "sop") {
        raw.announce_ints.push_back(static_cast<Value>(integer("announced number")));
      } else if (kind.text == "sumin") {
        punct("{");
        raw.announce_ints.push_back(static_cast<Value>(integer("sum")));
        while (peek().kind == Token::Kind::Int) raw.announce_ints.push_back(static_cast<Value>(integer("sum")));
        punct("}");
      }
    } else if (h == "sight") {
      once(raw.sight_at, head);
      const Token& kind = choice({"full", "blind", "nearcircle", "farcircle", "nearline"});
      raw.sight_kind = kind.text;
      if (kind.text == "blind") raw.blind = names("agent name");
    } else if (h == "actual" || h == "sweep") {
      if (raw.actual_at)
        throw SemanticError(head.span, "only one of 'actual' or 'sweep' may appear");
      raw.actual_at = head.span;
      if (h == "sweep") {
        raw.sweep = true;
      } else {
        punct("[");
        do {
          if (peek().kind != Token::Kind::Int && !at_name()) fail({"value"});
          const Token& t = next();
          raw.actual.push_back({t.text, t.span});
        } while (!at_punct("]"));
        punct("]");
      }
    } else if (h == "protocol") {
      once(raw.protocol_at, head);
      const Token& kind = choice({"simultaneous", "circular"});
      if (kind.text == "circular") {
        raw.circular = true;
        raw.order_at = keyword("order").span;
        punct("[");
        raw.order = names("agent name");
        punct("]");
      }
      raw.rounds_at = keyword("rounds").span;
      raw.rounds = integer("round count");
    } else {
      once(raw.bound_at, head);
      keyword("cap");
      raw.bound.cap = static_cast<Value>(integer("cap"));
      if (at_keyword("growth")) {
        next();
        raw.bound.growth_step = static_cast<Value>(integer("growth step"));
      }
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

Scenario build(const RawScenario& raw, const SourceSpan& whole) {
  Scenario s;
  s.name = raw.name;
  if (!raw.agents_at) throw SemanticError(whole, "missing 'agents' statement");
  if (raw.agent_count) {
    for (std::size_t i = 1; i <= *raw.agent_count; ++i) s.agent_names.push_back("p" + std::to_string(i));
  } else {
    std::set<std::string> seen;
    for (const auto& n : raw.agent_names) {
      if (!seen.insert(n.text).second) throw SemanticError(n.span, "duplicate agent '" + n.text + "'");
      s.agent_names.push_back(n.text);
    }
  }
  const std::size_t n = s.agent_names.size();
  if (n < 2) throw SemanticError(*raw.agents_at, "at least two agents are required");
  auto agent_id = [&](const Located& l) -> AgentId {
    auto it = std::find(s.agent_names.begin(), s.agent_names.end(), l.text);
    if (it == s.agent_names.end()) throw SemanticError(l.span, "unknown agent '" + l.text + "'");
    return static_cast<AgentId>(it - s.agent_names.begin());
  };

  if (!raw.values_at) throw SemanticError(whole, "missing 'values' statement");
  s.alphabet = raw.alphabet;
  if (s.alphabet.kind == ValueAlphabet::Kind::Colors) {
    std::set<std::string> seen;
    for (const auto& c : s.alphabet.colors)
      if (!seen.insert(c).second) throw SemanticError(*raw.values_at, "duplicate color '" + c + "'");
    if (s.alphabet.colors.size() < 2) throw SemanticError(*raw.values_at, "at least two colors are required");
  }

  if (!raw.announce_at) throw SemanticError(whole, "missing 'announce' statement");
  const auto& at = *raw.announce_at;
  auto require = [&](ValueAlphabet::Kind k, const char* what) {
    if (s.alphabet.kind != k)
      throw SemanticError(at, std::string("'") + raw.announce_kind + "' requires values " + what);
  };
  const std::string& kind = raw.announce_kind;
  if (kind == "atleast" || kind == "exactly") {
    require(ValueAlphabet::Kind::Colors, "colors");
    const auto code = s.alphabet.color_code(raw.announce_color->text);
    if (!code) throw SemanticError(raw.announce_color->span, "unknown color '" + raw.announce_color->text + "'");
    const std::size_t count = raw.announce_ints.front();
    if (count > n) throw SemanticError(at, "more hats announced than agents");
    if (kind == "atleast") s.constraint = HatsAtLeast{*code, count, s.alphabet.colors.size()};
    else s.constraint = HatsExactly{*code, count, s.alphabet.colors.size()};
  } else if (kind == "maxdiff" || kind == "maxdiff atmost") {
    require(ValueAlphabet::Kind::Naturals, "naturals");
    s.constraint = MaxDiff{raw.announce_ints.front(), std::nullopt, kind == "maxdiff"};
  } else if (kind == "consecutive") {
    require(ValueAlphabet::Kind::Naturals, "naturals");
    s.constraint = Consecutive{};
  } else if (kind == "sop") {
    require(ValueAlphabet::Kind::Positive, "positive");
    if (raw.announce_ints.front() < 1) throw SemanticError(at, "announced number must be positive");
    s.constraint = SumOrProduct{raw.announce_ints.front()};
  } else if (kind == "sumin") {
    require(ValueAlphabet::Kind::Positive, "positive");
    s.constraint = SumInSet{raw.announce_ints};
  } else {
    require(ValueAlphabet::Kind::Naturals, "naturals");
    s.constraint = ZeroOne{};
  }

  if (!raw.sight_at) throw SemanticError(whole, "missing 'sight' statement");
  if (raw.sight_kind == "full") s.sight = FullSight{};
  else if (raw.sight_kind == "nearcircle") s.sight = NearCircle{};
  else if (raw.sight_kind == "farcircle") s.sight = FarCircle{};
  else if (raw.sight_kind == "nearline") s.sight = NearLine{};
  else {
    BlindSight b;
    for (const auto& l : raw.blind) {
      const AgentId id = agent_id(l);
      if (std::find(b.blind.begin(), b.blind.end(), id) != b.blind.end())
        throw SemanticError(l.span, "agent listed twice");
      b.blind.push_back(id);
    }
    s.sight = b;
  }
  try {
    gen_visibility(s.sight, n);
  } catch (const GenerationError& e) {
    throw SemanticError(*raw.sight_at, e.what());
  }

  if (!raw.protocol_at) throw SemanticError(whole, "missing 'protocol' statement");
  if (raw.rounds < 1) throw SemanticError(raw.rounds_at, "rounds must be at least 1");
  if (raw.circular) {
    std::vector<AgentId> order;
    for (const auto& l : raw.order) {
      const AgentId id = agent_id(l);
      if (std::find(order.begin(), order.end(), id) != order.end())
        throw SemanticError(l.span, "agent listed twice in order");
      order.push_back(id);
    }
    if (order.size() != n) throw SemanticError(raw.order_at, "circular order must list every agent");
    s.protocol = Protocol::circular(std::move(order), raw.rounds);
  } else {
    s.protocol = Protocol::simultaneous(raw.rounds);
  }

  if (!raw.actual_at) throw SemanticError(whole, "missing 'actual' or 'sweep' statement");
  if (raw.bound_at) {
    if (!needs_cap(s.constraint)) throw SemanticError(*raw.bound_at, "this family needs no cap");
    if (raw.bound.growth_step < 1) throw SemanticError(*raw.bound_at, "growth must be at least 1");
    s.bound = raw.bound;
  } else if (raw.sweep && needs_cap(s.constraint)) {
    throw SemanticError(*raw.actual_at, "sweeping an unbounded family needs 'bound cap'");
  }
  if (!raw.sweep) {
    if (raw.actual.size() != n)
      throw SemanticError(*raw.actual_at, "actual world has " + std::to_string(raw.actual.size()) +
                                              " values for " + std::to_string(n) + " agents");
    World w;
    for (const auto& l : raw.actual) {
      const auto v = parse_value(s.alphabet, l.text);
      if (!v) throw SemanticError(l.span, "'" + l.text + "' is not a value of the declared alphabet");
      w.push_back(*v);
    }
    s.actual = w;
    UniverseConstraint c = s.constraint;
    try {
      if (needs_cap(c)) c = with_cap(c, *effective_cap(s));
    } catch (const GenerationError& e) {
      throw SemanticError(raw.bound_at ? *raw.bound_at : *raw.actual_at, e.what());
    }
    if (!satisfies(c, n, w))
      throw SemanticError(*raw.actual_at, "actual world violates the announcement");
  }
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

bool default_names(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] != "p" + std::to_string(i + 1)) return false;
  return true;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Parser p(text);
  const RawScenario raw = p.parse();
  return build(raw, SourceSpan{1, 1, 0, text.size()});
}

std::string print_scenario(const Scenario& s) {
  std::string out = "scenario " + quote(s.name) + " {\n";
  out += "  agents";
  if (default_names(s.agent_names)) {
    out += ' ' + std::to_string(s.agent_names.size());
  } else {
    for (const auto& n : s.agent_names) out += ' ' + n;
  }
  out += "\n  values ";
  switch (s.alphabet.kind) {
    case ValueAlphabet::Kind::Colors: {
      out += "colors {";
      for (std::size_t i = 0; i < s.alphabet.colors.size(); ++i)
        out += (i ? " " : "") + s.alphabet.colors[i];
      out += "}";
      break;
    }
    case ValueAlphabet::Kind::Naturals:
      out += "naturals";
      break;
    case ValueAlphabet::Kind::Positive:
      out += "positive";
      break;
  }
  out += "\n  announce ";
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, HatsAtLeast>) {
          out += "atleast " + s.alphabet.format(c.color) + ' ' + std::to_string(c.count);
        } else if constexpr (std::is_same_v<T, HatsExactly>) {
          out += "exactly " + s.alphabet.format(c.color) + ' ' + std::to_string(c.count);
        } else if constexpr (std::is_same_v<T, MaxDiff>) {
          out += std::string("maxdiff ") + (c.exact ? "" : "atmost ") + std::to_string(c.diff);
        } else if constexpr (std::is_same_v<T, Consecutive>) {
          out += "consecutive";
        } else if constexpr (std::is_same_v<T, SumOrProduct>) {
          out += "sop " + std::to_string(c.target);
        } else if constexpr (std::is_same_v<T, SumInSet>) {
          out += "sumin {";
          for (std::size_t i = 0; i < c.sums.size(); ++i) out += (i ? " " : "") + std::to_string(c.sums[i]);
          out += "}";
        } else {
          out += "zeroone";
        }
      },
      s.constraint);
  out += "\n  sight ";
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, FullSight>) out += "full";
        else if constexpr (std::is_same_v<T, NearCircle>) out += "nearcircle";
        else if constexpr (std::is_same_v<T, FarCircle>) out += "farcircle";
        else if constexpr (std::is_same_v<T, NearLine>) out += "nearline";
        else {
          out += "blind";
          for (AgentId a : m.blind) out += ' ' + s.agent_names.at(a);
        }
      },
      s.sight);
  if (s.actual) {
    out += "\n  actual [";
    for (std::size_t i = 0; i < s.actual->size(); ++i)
      out += (i ? " " : "") + s.alphabet.format((*s.actual)[i]);
    out += "]";
  } else {
    out += "\n  sweep";
  }
  out += "\n  protocol ";
  if (s.protocol.kind == Protocol::Kind::Circular) {
    out += "circular order [";
    for (std::size_t i = 0; i < s.protocol.order.size(); ++i)
      out += (i ? " " : "") + s.agent_names.at(s.protocol.order[i]);
    out += "]";
  } else {
    out += "simultaneous";
  }
  out += " rounds " + std::to_string(s.protocol.max_rounds);
  if (s.bound)
    out += "\n  bound cap " + std::to_string(s.bound->cap) + " growth " +
           std::to_string(s.bound->growth_step);
  out += "\n}\n";
  return out;
}

}  // namespace ck
