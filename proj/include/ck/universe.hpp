#pragma once

// Universe constraints, sight models, and world enumeration.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ck/worlds.hpp"

namespace ck {

// Hat games: values are color codes in [0, palette).
struct HatsAtLeast {
  Value color = 0;
  std::size_t count = 1;
  std::size_t palette = 2;
  friend bool operator==(const HatsAtLeast&, const HatsAtLeast&) = default;
};

struct HatsExactly {
  Value color = 0;
  std::size_t count = 1;
  std::size_t palette = 2;
  friend bool operator==(const HatsExactly&, const HatsExactly&) = default;
};

// Non-negative integers whose max - min equals `diff` (or is at most `diff`
// when `exact` is false). Infinite without a cap.
struct MaxDiff {
  Value diff = 1;
  std::optional<Value> cap;
  bool exact = true;
  friend bool operator==(const MaxDiff&, const MaxDiff&) = default;
};

// N distinct consecutive non-negative integers. Infinite without a cap.
struct Consecutive {
  std::optional<Value> cap;
  friend bool operator==(const Consecutive&, const Consecutive&) = default;
};

// Positive integers whose sum or product is `target`.
struct SumOrProduct {
  Value target = 1;
  friend bool operator==(const SumOrProduct&, const SumOrProduct&) = default;
};

// Positive integers whose sum lies in `sums`.
struct SumInSet {
  std::vector<Value> sums;
  friend bool operator==(const SumInSet&, const SumInSet&) = default;
};

// Values in {0, 1} with at least one zero.
struct ZeroOne {
  friend bool operator==(const ZeroOne&, const ZeroOne&) = default;
};

using UniverseConstraint =
    std::variant<HatsAtLeast, HatsExactly, MaxDiff, Consecutive, SumOrProduct, SumInSet, ZeroOne>;

// Difference bound of a capped family (D for max-difference, N-1 for
// consecutive numbers); nullopt for finite families.
std::optional<Value> cap_step(const UniverseConstraint& c, std::size_t agents);
bool needs_cap(const UniverseConstraint& c);
std::optional<Value> cap_of(const UniverseConstraint& c);
UniverseConstraint with_cap(const UniverseConstraint& c, Value cap);

// True if every permutation of a member world is also a member.
bool is_symmetric(const UniverseConstraint& c);

bool satisfies(const UniverseConstraint& c, std::size_t agents, WorldView w);

// Visits every world of the constraint in lexicographic order. The callback
// returns false to stop early.
void enumerate_worlds(const UniverseConstraint& c, std::size_t agents,
                      const std::function<bool(WorldView)>& visit);

KnowledgeState gen_universe(const UniverseConstraint& c, std::size_t agents);

using WorldPredicate = std::function<bool(WorldView)>;

// Streams the worlds of the constraint passing every predicate, in canonical
// order, without materializing the universe.
void stream_worlds(const UniverseConstraint& c, std::size_t agents,
                   const std::vector<WorldPredicate>& predicates,
                   const std::function<void(WorldView)>& visit);

std::size_t count_worlds(const UniverseConstraint& c, std::size_t agents,
                         const std::vector<WorldPredicate>& predicates = {});

// Sight models.
struct FullSight {
  friend bool operator==(const FullSight&, const FullSight&) = default;
};
struct BlindSight {
  std::vector<AgentId> blind;
  friend bool operator==(const BlindSight&, const BlindSight&) = default;
};
struct NearCircle {
  friend bool operator==(const NearCircle&, const NearCircle&) = default;
};
struct FarCircle {
  friend bool operator==(const FarCircle&, const FarCircle&) = default;
};
struct NearLine {
  friend bool operator==(const NearLine&, const NearLine&) = default;
};
using SightModel = std::variant<FullSight, BlindSight, NearCircle, FarCircle, NearLine>;

Visibility gen_visibility(const SightModel& model, std::size_t agents);

// Finite stand-in for an unbounded value domain.
struct BoundConfig {
  Value cap = 0;
  Value growth_step = 10;
  friend bool operator==(const BoundConfig&, const BoundConfig&) = default;
};

// actual_max + (max_rounds + 2) * step
Value default_cap(Value actual_max, std::size_t max_rounds, Value step);

}  // namespace ck
