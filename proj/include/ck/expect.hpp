#pragma once

// Expectation files (.expect) paired with scenario files.
//
//   eventual: alice=never bob=round2 carol=round3+ dave=turn4 eve=any
//   rounds: [NO NO; YES *; YES YES]
//   round1: {bob carol}
//   worlds [NO NO] = {[25 2] [25 25]}
//   values bob [NO NO] = {2 25}
//   stable
//   sweep: min_learners=8 max_learners=10 orbit
//   argmin: {[R B R R B B B B B B] ...}
//   slow
//
// Patterns compare against the transcript with trailing repeats of the last
// round dropped; `*` matches either answer. `worlds`/`values` select every
// world of the universe whose first rounds match the given prefix.

#include <optional>
#include <string>
#include <vector>

#include "ck/dsl.hpp"
#include "ck/scenario.hpp"

namespace ck {

enum class Cell : std::uint8_t { No, Yes, Either };
using Pattern = std::vector<std::vector<Cell>>;

struct EventualExpect {
  enum class Kind : std::uint8_t { Never, Unknown, Round, RoundAtLeast, Turn, Learns, Any };
  std::string agent;
  Kind kind = Kind::Any;
  std::size_t n = 0;
  SourceSpan span;
};

struct WorldSetExpect {
  Pattern prefix;
  std::vector<std::vector<std::string>> worlds;
  SourceSpan span;
};

struct ValueSetExpect {
  std::string agent;
  Pattern prefix;
  std::vector<std::string> values;
  SourceSpan span;
};

struct Expectation {
  std::vector<EventualExpect> eventual;
  std::optional<Pattern> rounds;
  std::optional<std::vector<std::string>> round1;
  std::vector<WorldSetExpect> worlds;
  std::vector<ValueSetExpect> values;
  bool stable = false;
  bool slow = false;
  // Sweep families.
  bool orbit = false;
  std::optional<std::size_t> min_learners;
  std::optional<std::size_t> max_learners;
  std::optional<std::size_t> unstable;
  std::optional<std::vector<std::vector<std::string>>> argmin;
  std::optional<std::vector<std::vector<std::string>>> argmax;
};

Expectation parse_expected(std::string_view text);

bool matches(const Pattern& p, const std::vector<AnswerVector>& rounds);
std::string to_string(const Pattern& p);

struct VerifyOptions {
  // Large universes run through the streaming engine.
  std::size_t stream_above = 5'000'000;
};

// Runs the scenario and returns one line per failed check (empty on success).
// Throws SemanticError if the expectation names unknown agents or values.
std::vector<std::string> verify(const Scenario& s, const Expectation& e,
                                const VerifyOptions& options = {});

}  // namespace ck
