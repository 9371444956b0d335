#pragma once

// Simultaneous games under full sight over a permutation-invariant universe
// can be played on multisets instead of worlds: every holder of the same value
// in the same multiset answers alike, and a holder of v in S considers S - v + x
// possible iff x's holder and every other value's holders would have answered
// the same way so far. This keeps large max-difference sweeps cheap.

#include <map>

#include "ck/engine.hpp"
#include "ck/universe.hpp"

namespace ck {

class SymmetricGame {
 public:
  // `constraint` must be symmetric and, if unbounded, capped.
  SymmetricGame(const UniverseConstraint& constraint, std::size_t agents, std::size_t horizon);

  std::size_t agents() const { return agents_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t multiset_count() const { return multisets_.size(); }
  const World& multiset(std::size_t i) const { return multisets_[i]; }
  std::optional<std::size_t> find(WorldView world) const;  // any ordering

  // answers(s, v)[r] is the round r+1 answer of every holder of v in multiset s.
  const std::vector<Answer>& answers(std::size_t s, Value v) const;

  // Per-agent answers and first-YES rounds for one actual world. Eventual
  // knowledge is Unknown for agents without a YES inside the horizon; state
  // sizes are not tracked.
  Transcript transcript(WorldView actual) const;

  // first_yes_counts(s)[r] = number of agents whose first YES is in round r+1.
  std::vector<std::size_t> first_yes_counts(std::size_t s) const;

 private:
  std::size_t slot(std::size_t s, Value v) const;

  std::size_t agents_;
  std::size_t horizon_;
  std::vector<World> multisets_;
  std::map<World, std::size_t> index_;
  std::vector<std::vector<Value>> distinct_;           // per multiset
  std::vector<std::vector<std::vector<Answer>>> hist_;  // [s][distinct slot][round]
};

}  // namespace ck
