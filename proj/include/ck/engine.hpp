#pragma once

// Announcement protocols driven to a fixpoint.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ck/universe.hpp"
#include "ck/worlds.hpp"

namespace ck {

struct Protocol {
  enum class Kind : std::uint8_t { Simultaneous, Circular };

  Kind kind = Kind::Simultaneous;
  std::vector<AgentId> order;  // speaking order; only used by circular games
  std::size_t max_rounds = 1;

  static Protocol simultaneous(std::size_t max_rounds);
  static Protocol circular(std::vector<AgentId> order, std::size_t max_rounds);
  static Protocol circular_identity(std::size_t agents, std::size_t max_rounds);

  // Throws ContractViolation unless the order is a permutation of [0, agents)
  // and max_rounds >= 1.
  void validate(std::size_t agents) const;

  friend bool operator==(const Protocol&, const Protocol&) = default;
};

struct Event {
  std::size_t round = 0;  // 1-based
  // Circular: (round - 1) * N + position + 1. Simultaneous: equals round.
  std::size_t turn = 0;
  AgentId agent = 0;
  Answer answer = Answer::No;
  std::size_t state_size = 0;  // after the filter this event belongs to

  friend bool operator==(const Event&, const Event&) = default;
};

struct Eventual {
  enum class Status : std::uint8_t { Learns, Never, Unknown };
  Status status = Status::Unknown;
  std::size_t round = 0;  // set when Learns
  std::size_t turn = 0;   // set when Learns

  static Eventual learns(std::size_t round, std::size_t turn) {
    return {Status::Learns, round, turn};
  }
  static Eventual never() { return {Status::Never, 0, 0}; }
  static Eventual unknown() { return {Status::Unknown, 0, 0}; }
  bool learns() const { return status == Status::Learns; }

  friend bool operator==(const Eventual&, const Eventual&) = default;
};

std::string to_string(const Eventual& e);

struct Transcript {
  Protocol::Kind kind = Protocol::Kind::Simultaneous;
  std::size_t agents = 0;
  std::vector<Event> events;
  std::vector<Eventual> eventual;
  // Round after which nothing changed any more; nullopt if the horizon was hit
  // first.
  std::optional<std::size_t> stabilized_at;

  std::size_t rounds() const { return events.empty() ? 0 : events.back().round; }
  // answers()[r][k]: the k-th answer given in round r+1 (speaking order for
  // circular games, agent order for simultaneous ones).
  std::vector<AnswerVector> answers() const;
  // Per round, indexed by agent.
  std::vector<AnswerVector> answers_by_agent() const;
  std::vector<AgentId> learners() const;
  std::uint64_t digest() const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// Everything a run needs besides the actual world.
struct Game {
  KnowledgeState universe;
  Visibility sight;
  Protocol protocol;
};

struct RunOptions {
  // When false the run continues to max_rounds even after a fixpoint; used to
  // verify that extra rounds change nothing.
  bool stop_at_fixpoint = true;
  // Called with the state after every filter step.
  std::function<void(const KnowledgeState&)> on_state;
};

Transcript run(const Game& game, WorldView actual, const RunOptions& options = {});

std::vector<Eventual> eventual_knowledge(const Game& game, WorldView actual);

// Rounds padded to `horizon` by repeating the final round of a stabilized
// transcript. Rounds beyond a horizon-terminated transcript stay absent.
std::vector<AnswerVector> padded_answers(const Transcript& t, std::size_t horizon);

// Same answers over the first `horizon` rounds and same eventual
// classification. State sizes are not compared: they depend on the cap.
bool same_behaviour(const Transcript& a, const Transcript& b, std::size_t horizon);

// Drops trailing repeats of the final round ("show the last new round").
std::vector<AnswerVector> compressed_pattern(const Transcript& t);

}  // namespace ck
