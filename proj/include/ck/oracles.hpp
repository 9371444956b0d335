#pragma once

// Closed-form predictions for the puzzle families, written from the published
// case analyses without consulting the engine. cross_check compares one
// against a transcript and lists every disagreement.

#include <optional>
#include <string>
#include <vector>

#include "ck/engine.hpp"

namespace ck {

struct Expected {
  enum class Kind : std::uint8_t { Learns, Never, Any };
  Kind kind = Kind::Any;
  std::size_t round = 0;             // 0: any round
  std::optional<std::size_t> turn;   // checked when present

  static Expected learns(std::size_t round = 0, std::optional<std::size_t> turn = std::nullopt) {
    return {Kind::Learns, round, turn};
  }
  static Expected never() { return {Kind::Never, 0, std::nullopt}; }
  static Expected any() { return {Kind::Any, 0, std::nullopt}; }

  friend bool operator==(const Expected&, const Expected&) = default;
};

std::string to_string(const Expected& e);

struct OraclePrediction {
  std::string label;
  std::vector<Expected> agents;
  std::optional<std::vector<AgentId>> round1_yes;
  // Compressed answer pattern, speaking order within a round.
  std::optional<std::vector<AnswerVector>> pattern;
  // Everyone answers YES on their first turn.
  std::optional<bool> all_yes_first_round;
};

struct Mismatch {
  std::string field;
  std::string expected;
  std::string actual;

  friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

std::string to_string(const Mismatch& m);

std::vector<Mismatch> cross_check(const OraclePrediction& oracle, const Transcript& transcript);

// Hats (red = colour 0). Reds learn in round r, blues one round later.
OraclePrediction predict_hats_simultaneous(WorldView hats, Value red = 0);

// The last red to speak learns on their first turn, and so does everyone
// speaking after them; the rest never learn.
OraclePrediction predict_hats_circular(WorldView hats, const std::vector<AgentId>& order,
                                       Value red = 0);

// Two players, Alice (agent 0) speaking first in the circular game.
OraclePrediction predict_maxdiff_two(Value alice, Value bob, Value diff, Protocol::Kind kind);

// Consecutive distinct numbers, N = D + 1 >= 3. Circular predictions cover the
// three-player branches and the four-player all-YES characterization.
OraclePrediction predict_consecutive(WorldView numbers, const Protocol& protocol);

// Max difference exactly 1, simultaneous: maxima learn in round m(N-1)+P,
// minima one round later.
OraclePrediction predict_d1_multiset(WorldView numbers);

// Sum-or-product, two players. Bullet indices refer to the summary lists in
// reading order; a consistent (A, B, M) should match exactly one.
std::vector<int> sop_two_bullets(Value a, Value b, Value m, Protocol::Kind kind);
OraclePrediction predict_sop_two(Value a, Value b, Value m, Protocol::Kind kind);

// Sum-or-product with prime M, N >= 3. Circular order is the agent order.
OraclePrediction predict_sop_prime(WorldView numbers, Value m, Protocol::Kind kind);

// Sum-or-product with M = pq, N >= 3, simultaneous.
OraclePrediction predict_sop_semiprime(WorldView numbers, Value m);

// Near-sighted circle, one red hat at 1-based seat r, circular identity order.
// Only the eventual learner set is predicted.
OraclePrediction predict_ns_circular(std::size_t agents, std::size_t red_seat);

bool is_prime(Value n);
// {p, q} with p < q if n is a product of two distinct primes.
std::optional<std::pair<Value, Value>> semiprime_factors(Value n);

}  // namespace ck
