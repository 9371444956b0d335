#pragma once

// Worlds, observations and announcement-driven filtering.
//
// A world assigns a value to every agent. A knowledge state is the set of
// worlds compatible with everything announced so far; it is stored as a flat,
// lexicographically sorted array so that dumps and transcripts are
// reproducible bit for bit.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ck {

using Value = std::uint32_t;
using AgentId = std::size_t;
using World = std::vector<Value>;
using WorldView = std::span<const Value>;

enum class Answer : std::uint8_t { No = 0, Yes = 1 };
using AnswerVector = std::vector<Answer>;

inline const char* to_string(Answer a) { return a == Answer::Yes ? "YES" : "NO"; }

// Who sees whom. sees(i) never contains i.
class Visibility {
 public:
  Visibility() = default;
  explicit Visibility(std::vector<std::vector<AgentId>> sees);

  std::size_t agent_count() const { return sees_.size(); }
  std::span<const AgentId> sees(AgentId agent) const;
  bool can_see(AgentId observer, AgentId target) const;
  bool is_full() const;

  friend bool operator==(const Visibility&, const Visibility&) = default;

 private:
  std::vector<std::vector<AgentId>> sees_;
};

// Identity-keyed restriction of a world to what one agent sees.
struct Observation {
  std::vector<std::pair<AgentId, Value>> entries;  // sorted by agent id

  friend bool operator==(const Observation&, const Observation&) = default;
};

class KnowledgeState {
 public:
  KnowledgeState() = default;
  explicit KnowledgeState(std::size_t agents) : agents_(agents) {}

  // Sorts and deduplicates.
  static KnowledgeState from_worlds(std::size_t agents, std::vector<World> worlds);
  // `flat` must already be sorted lexicographically and duplicate free.
  static KnowledgeState from_sorted_flat(std::size_t agents, std::vector<Value> flat,
                                         std::size_t generation = 0);

  std::size_t agent_count() const { return agents_; }
  std::size_t size() const { return agents_ == 0 ? 0 : flat_.size() / agents_; }
  bool empty() const { return flat_.empty(); }
  WorldView world(std::size_t index) const {
    return {flat_.data() + index * agents_, agents_};
  }
  bool contains(WorldView w) const;
  std::optional<std::size_t> find(WorldView w) const;
  Value max_value() const;

  // Number of announcements applied since the universe was generated.
  std::size_t generation() const { return generation_; }

  std::vector<World> worlds() const;
  const std::vector<Value>& flat() const { return flat_; }

  friend bool operator==(const KnowledgeState& a, const KnowledgeState& b) {
    return a.agents_ == b.agents_ && a.flat_ == b.flat_;
  }

 private:
  std::size_t agents_ = 0;
  std::vector<Value> flat_;
  std::size_t generation_ = 0;
};

// Maps each observation of one agent to the own-values compatible with it.
// The agent knows its value in a world iff that world's observation maps to a
// single own-value. Observation keys are bit-packed into 64 bits when they fit.
class OwnValueIndex {
 public:
  OwnValueIndex(const Visibility& vis, AgentId agent, Value max_value);

  void add(WorldView w);
  // Undefined for worlds whose observation was never added.
  bool knows(WorldView w) const;
  std::size_t key_count() const;

 private:
  struct Entry {
    Value own;
    bool ambiguous;
  };
  std::uint64_t packed_key(WorldView w) const;
  std::string wide_key(WorldView w) const;
  static void merge(Entry& e, Value own);

  std::vector<AgentId> seen_;
  AgentId agent_;
  unsigned bits_;
  bool packed_;
  std::unordered_map<std::uint64_t, Entry> packed_entries_;
  std::unordered_map<std::string, Entry> wide_entries_;
};

// One OwnValueIndex per agent, all over the same state.
class StateAnswers {
 public:
  StateAnswers(const KnowledgeState& state, const Visibility& vis);
  Answer answer(AgentId agent, WorldView w) const;
  AnswerVector answers(WorldView w) const;

 private:
  std::vector<OwnValueIndex> indexes_;
};

Observation observe(AgentId agent, WorldView world, const Visibility& vis);

Answer knows_own(AgentId agent, WorldView world, const KnowledgeState& state,
                 const Visibility& vis);

AnswerVector answer_vector(const KnowledgeState& state, WorldView world,
                           const Visibility& vis);

// Keeps the worlds whose hypothetical answer vector (computed against `state`)
// equals `announced`. Throws ContractViolation if nothing survives.
KnowledgeState filter_simultaneous(const KnowledgeState& state,
                                   const AnswerVector& announced,
                                   const Visibility& vis);

// Keeps the worlds in which `agent` would have given `answer`.
KnowledgeState filter_turn(const KnowledgeState& state, AgentId agent, Answer answer,
                           const Visibility& vis);

}  // namespace ck
