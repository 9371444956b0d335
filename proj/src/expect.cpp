#include "ck/expect.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>

#include "ck/error.hpp"
#include "ck/streaming.hpp"

namespace ck {

namespace {

class ExpectParser {
 public:
  explicit ExpectParser(std::string_view text) : tokens_(tokenize(text)) {}

  Expectation parse() {
    Expectation e;
    while (peek().kind != Token::Kind::End) statement(e);
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw SyntaxError(peek().span, std::move(expected), describe(peek()));
  }
  bool at_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Punct && peek(ahead).text == p;
  }
  void punct(std::string_view p) {
    if (!at_punct(p)) fail({"'" + std::string(p) + "'"});
    next();
  }
  const Token& ident(const std::string& what) {
    if (peek().kind != Token::Kind::Ident) fail({what});
    return next();
  }
  std::size_t integer(const std::string& what) {
    if (peek().kind != Token::Kind::Int) fail({what});
    const Token& t = next();
    std::size_t v = 0;
    std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    return v;
  }
  std::string value() {
    if (peek().kind != Token::Kind::Int && peek().kind != Token::Kind::Ident) fail({"value"});
    return next().text;
  }

  Pattern pattern() {
    punct("[");
    Pattern p(1);
    while (!at_punct("]")) {
      if (at_punct(";")) {
        if (p.back().empty()) fail({"YES", "NO", "'*'"});
        next();
        p.emplace_back();
        continue;
      }
      if (at_punct("*")) {
        next();
        p.back().push_back(Cell::Either);
      } else if (peek().kind == Token::Kind::Ident && (peek().text == "YES" || peek().text == "NO")) {
        p.back().push_back(next().text == "YES" ? Cell::Yes : Cell::No);
      } else {
        fail({"YES", "NO", "'*'", "';'", "']'"});
      }
    }
    if (p.back().empty()) fail({"YES", "NO", "'*'"});
    punct("]");
    return p;
  }

  std::vector<std::vector<std::string>> world_set() {
    punct("{");
    std::vector<std::vector<std::string>> out;
    while (!at_punct("}")) {
      punct("[");
      std::vector<std::string> w{value()};
      while (!at_punct("]")) w.push_back(value());
      punct("]");
      out.push_back(std::move(w));
    }
    punct("}");
    return out;
  }

  EventualExpect outcome(const Token& agent) {
    EventualExpect x;
    x.agent = agent.text;
    x.span = agent.span;
    const Token& t = ident("outcome");
    const std::string& w = t.text;
    auto numbered = [&](std::string_view prefix) -> std::optional<std::size_t> {
      if (w.size() <= prefix.size() || w.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
      std::size_t v = 0;
      auto [ptr, ec] = std::from_chars(w.data() + prefix.size(), w.data() + w.size(), v);
      if (ec != std::errc() || ptr != w.data() + w.size() || v == 0) return std::nullopt;
      return v;
    };
    if (w == "never") x.kind = EventualExpect::Kind::Never;
    else if (w == "unknown") x.kind = EventualExpect::Kind::Unknown;
    else if (w == "any") x.kind = EventualExpect::Kind::Any;
    else if (w == "learns") x.kind = EventualExpect::Kind::Learns;
    else if (auto r = numbered("round")) {
      x.n = *r;
      x.kind = EventualExpect::Kind::Round;
      if (at_punct("+")) {
        next();
        x.kind = EventualExpect::Kind::RoundAtLeast;
      }
    } else if (auto k = numbered("turn")) {
      x.n = *k;
      x.kind = EventualExpect::Kind::Turn;
    } else {
      throw SyntaxError(t.span, {"never", "unknown", "any", "learns", "roundK", "roundK+", "turnK"},
                        describe(t));
    }
    return x;
  }

  void statement(Expectation& e) {
    const Token& head = ident("expectation keyword");
    const std::string& h = head.text;
    if (h == "eventual") {
      punct(":");
      if (!(peek().kind == Token::Kind::Ident && at_punct("=", 1))) fail({"agent=outcome"});
      while (peek().kind == Token::Kind::Ident && at_punct("=", 1)) {
        const Token& agent = next();
        next();
        e.eventual.push_back(outcome(agent));
      }
    } else if (h == "rounds") {
      punct(":");
      e.rounds = pattern();
    } else if (h == "round1") {
      punct(":");
      punct("{");
      e.round1.emplace();
      while (!at_punct("}")) e.round1->push_back(ident("agent name").text);
      punct("}");
    } else if (h == "worlds") {
      WorldSetExpect w;
      w.span = head.span;
      w.prefix = pattern();
      punct("=");
      w.worlds = world_set();
      e.worlds.push_back(std::move(w));
    } else if (h == "values") {
      ValueSetExpect v;
      v.span = head.span;
      v.agent = ident("agent name").text;
      v.prefix = pattern();
      punct("=");
      punct("{");
      while (!at_punct("}")) v.values.push_back(value());
      punct("}");
      e.values.push_back(std::move(v));
    } else if (h == "stable") {
      e.stable = true;
    } else if (h == "slow") {
      e.slow = true;
    } else if (h == "orbit") {
      e.orbit = true;
    } else if (h == "sweep") {
      punct(":");
      while (peek().kind == Token::Kind::Ident &&
             (at_punct("=", 1) || peek().text == "orbit")) {
        const Token& key = next();
        if (key.text == "orbit") {
          e.orbit = true;
          continue;
        }
        next();
        const std::size_t v = integer("count");
        if (key.text == "min_learners") e.min_learners = v;
        else if (key.text == "max_learners") e.max_learners = v;
        else if (key.text == "unstable") e.unstable = v;
        else throw SyntaxError(key.span, {"min_learners", "max_learners", "unstable", "orbit"}, describe(key));
      }
    } else if (h == "argmin" || h == "argmax") {
      punct(":");
      (h == "argmin" ? e.argmin : e.argmax) = world_set();
    } else {
      throw SyntaxError(head.span,
                        {"eventual", "rounds", "round1", "worlds", "values", "stable", "slow",
                         "sweep", "argmin", "argmax"},
                        describe(head));
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

bool cell_matches(Cell c, Answer a) {
  return c == Cell::Either || (c == Cell::Yes) == (a == Answer::Yes);
}

bool prefix_matches(const Pattern& p, const std::vector<AnswerVector>& rounds) {
  if (rounds.size() < p.size()) return false;
  for (std::size_t r = 0; r < p.size(); ++r) {
    if (p[r].size() != rounds[r].size()) return false;
    for (std::size_t k = 0; k < p[r].size(); ++k)
      if (!cell_matches(p[r][k], rounds[r][k])) return false;
  }
  return true;
}

std::string describe_eventual(const Eventual& e) {
  if (e.learns()) return "round" + std::to_string(e.round) + " (turn" + std::to_string(e.turn) + ")";
  return to_string(e);
}

std::string describe_expect(const EventualExpect& x) {
  switch (x.kind) {
    case EventualExpect::Kind::Never:
      return "never";
    case EventualExpect::Kind::Unknown:
      return "unknown";
    case EventualExpect::Kind::Round:
      return "round" + std::to_string(x.n);
    case EventualExpect::Kind::RoundAtLeast:
      return "round" + std::to_string(x.n) + "+";
    case EventualExpect::Kind::Turn:
      return "turn" + std::to_string(x.n);
    case EventualExpect::Kind::Learns:
      return "learns";
    case EventualExpect::Kind::Any:
      break;
  }
  return "any";
}

bool satisfied(const EventualExpect& x, const Eventual& e) {
  switch (x.kind) {
    case EventualExpect::Kind::Never:
      return e.status == Eventual::Status::Never;
    case EventualExpect::Kind::Unknown:
      return e.status == Eventual::Status::Unknown;
    case EventualExpect::Kind::Round:
      return e.learns() && e.round == x.n;
    case EventualExpect::Kind::RoundAtLeast:
      return e.learns() && e.round >= x.n;
    case EventualExpect::Kind::Turn:
      return e.learns() && e.turn == x.n;
    case EventualExpect::Kind::Learns:
      return e.learns();
    case EventualExpect::Kind::Any:
      break;
  }
  return true;
}

std::string rows_to_string(const std::vector<AnswerVector>& rows) {
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r) out += "; ";
    for (std::size_t k = 0; k < rows[r].size(); ++k) out += (k ? " " : "") + std::string(to_string(rows[r][k]));
  }
  return out + "]";
}

template <class T>
std::string set_to_string(const std::set<T>& items, const std::function<std::string(const T&)>& fmt) {
  std::string out = "{";
  bool first = true;
  for (const auto& i : items) {
    out += (first ? "" : " ") + fmt(i);
    first = false;
  }
  return out + "}";
}

}  // namespace

Expectation parse_expected(std::string_view text) { return ExpectParser(text).parse(); }

bool matches(const Pattern& p, const std::vector<AnswerVector>& rounds) {
  return rounds.size() == p.size() && prefix_matches(p, rounds);
}

std::string to_string(const Pattern& p) {
  std::string out = "[";
  for (std::size_t r = 0; r < p.size(); ++r) {
    if (r) out += "; ";
    for (std::size_t k = 0; k < p[r].size(); ++k) {
      if (k) out += ' ';
      out += p[r][k] == Cell::Yes ? "YES" : p[r][k] == Cell::No ? "NO" : "*";
    }
  }
  return out + "]";
}

std::vector<std::string> verify(const Scenario& s, const Expectation& e, const VerifyOptions&) {
  std::vector<std::string> failures;
  const std::size_t n = s.agent_count();
  auto agent_id = [&](const std::string& name, const SourceSpan& span) -> AgentId {
    auto it = std::find(s.agent_names.begin(), s.agent_names.end(), name);
    if (it == s.agent_names.end()) throw SemanticError(span, "unknown agent '" + name + "'");
    return static_cast<AgentId>(it - s.agent_names.begin());
  };
  auto to_world = [&](const std::vector<std::string>& tokens, const SourceSpan& span) {
    if (tokens.size() != n) throw SemanticError(span, "world has the wrong number of values");
    World w;
    for (const auto& t : tokens) {
      const auto v = parse_value(s.alphabet, t);
      if (!v) throw SemanticError(span, "'" + t + "' is not a value of the declared alphabet");
      w.push_back(*v);
    }
    return w;
  };
  const std::function<std::string(const World&)> fmt_world = [&](const World& w) {
    return s.format_world(w);
  };

  std::optional<Transcript> t;
  const bool needs_actual = !e.eventual.empty() || e.rounds || e.round1 || e.stable;
  if (needs_actual) {
    if (!s.actual) {
      failures.push_back("expectation needs an actual world but the scenario is a sweep");
      return failures;
    }
    if (e.slow) {
      UniverseConstraint c = s.constraint;
      if (needs_cap(c)) c = with_cap(c, *effective_cap(s));
      t = run_streamed(c, n, gen_visibility(s.sight, n), s.protocol, *s.actual);
    } else {
      t = run(s);
    }
  }

  for (const auto& x : e.eventual) {
    const AgentId a = agent_id(x.agent, x.span);
    if (!satisfied(x, t->eventual[a]))
      failures.push_back("eventual " + x.agent + ": expected " + describe_expect(x) + ", got " +
                         describe_eventual(t->eventual[a]));
  }
  if (e.rounds) {
    const auto got = compressed_pattern(*t);
    if (!matches(*e.rounds, got))
      failures.push_back("rounds: expected " + to_string(*e.rounds) + ", got " + rows_to_string(got));
  }
  if (e.round1) {
    std::set<std::string> want(e.round1->begin(), e.round1->end()), got;
    for (const auto& name : want) agent_id(name, {});
    for (const auto& ev : t->events)
      if (ev.round == 1 && ev.answer == Answer::Yes) got.insert(s.agent_names[ev.agent]);
    const std::function<std::string(const std::string&)> id = [](const std::string& x) { return x; };
    if (want != got)
      failures.push_back("round1: expected " + set_to_string(want, id) + ", got " + set_to_string(got, id));
  }
  if (e.stable) {
    if (!needs_cap(s.constraint)) {
      failures.push_back("stable: family needs no cap");
    } else {
      const Value cap = *effective_cap(s);
      const Value growth = s.bound ? s.bound->growth_step : 10;
      const auto r = stability_check(s, cap, cap + growth);
      if (!r.pass)
        failures.push_back("stable: cap " + std::to_string(cap) + " vs " + std::to_string(cap + growth) +
                           ": " + r.detail);
    }
  }

  if (!e.worlds.empty() || !e.values.empty()) {
    const Game game = build_game(s);
    const auto all = run_all(game);
    // Worlds near the cap behave like boundary artifacts; leave them out.
    const auto stable = stable_rows(s, game, all);
    auto selected = [&](const Pattern& prefix) {
      std::set<World> out;
      for (std::size_t i = 0; i < all.size(); ++i)
        if (stable[i] && prefix_matches(prefix, padded_answers(all[i], std::max(prefix.size(), all[i].rounds()))))
          out.insert(World(game.universe.world(i).begin(), game.universe.world(i).end()));
      return out;
    };
    for (const auto& w : e.worlds) {
      std::set<World> want;
      for (const auto& tokens : w.worlds) want.insert(to_world(tokens, w.span));
      const auto got = selected(w.prefix);
      if (want != got)
        failures.push_back("worlds " + to_string(w.prefix) + ": expected " + set_to_string(want, fmt_world) +
                           ", got " + set_to_string(got, fmt_world));
    }
    for (const auto& v : e.values) {
      const AgentId a = agent_id(v.agent, v.span);
      std::set<Value> want, got;
      for (const auto& tok : v.values) {
        const auto x = parse_value(s.alphabet, tok);
        if (!x) throw SemanticError(v.span, "'" + tok + "' is not a value of the declared alphabet");
        want.insert(*x);
      }
      for (const auto& w : selected(v.prefix)) got.insert(w[a]);
      const std::function<std::string(const Value&)> fmt = [&](const Value& x) { return s.alphabet.format(x); };
      if (want != got)
        failures.push_back("values " + v.agent + " " + to_string(v.prefix) + ": expected " +
                           set_to_string(want, fmt) + ", got " + set_to_string(got, fmt));
    }
  }

  const bool sweep_checks = e.min_learners || e.max_learners || e.unstable || e.argmin || e.argmax;
  if (sweep_checks) {
    if (s.actual) {
      failures.push_back("sweep expectations need a 'sweep' scenario");
      return failures;
    }
    SweepOptions opts;
    opts.orbit = e.orbit;
    const SweepReport r = sweep(s, opts);
    auto check_count = [&](const char* what, const std::optional<std::size_t>& want, std::size_t got) {
      if (want && *want != got)
        failures.push_back(std::string(what) + ": expected " + std::to_string(*want) + ", got " +
                           std::to_string(got));
    };
    check_count("min_learners", e.min_learners, r.min_learners);
    check_count("max_learners", e.max_learners, r.max_learners);
    check_count("unstable", e.unstable, r.unstable);
    auto check_set = [&](const char* what, const std::optional<std::vector<std::vector<std::string>>>& want,
                         const std::vector<std::size_t>& rows) {
      if (!want) return;
      std::set<World> w, g;
      for (const auto& tokens : *want) {
        World x = to_world(tokens, {});
        w.insert(e.orbit ? canonical_rotation(x) : x);
      }
      for (auto i : rows) g.insert(r.rows[i].world);
      if (w != g)
        failures.push_back(std::string(what) + ": expected " + set_to_string(w, fmt_world) + ", got " +
                           set_to_string(g, fmt_world));
    };
    check_set("argmin", e.argmin, r.argmin);
    check_set("argmax", e.argmax, r.argmax);
  }
  return failures;
}

}  // namespace ck
