#pragma once

// A puzzle instance: who plays, what is announced, who sees whom, and how they
// speak. Scenarios without an actual world describe a family to sweep.

#include <optional>
#include <string>
#include <vector>

#include "ck/engine.hpp"
#include "ck/universe.hpp"

namespace ck {

struct ValueAlphabet {
  enum class Kind : std::uint8_t { Colors, Naturals, Positive };
  Kind kind = Kind::Naturals;
  std::vector<std::string> colors;  // Colors only; index = value code

  static ValueAlphabet hats(std::vector<std::string> colors) {
    return {Kind::Colors, std::move(colors)};
  }
  static ValueAlphabet naturals() { return {Kind::Naturals, {}}; }
  static ValueAlphabet positive() { return {Kind::Positive, {}}; }

  std::string format(Value v) const;
  std::optional<Value> color_code(const std::string& name) const;
  bool admits(Value v) const;

  friend bool operator==(const ValueAlphabet&, const ValueAlphabet&) = default;
};

struct Scenario {
  std::string name;
  std::vector<std::string> agent_names;
  ValueAlphabet alphabet;
  UniverseConstraint constraint;
  SightModel sight;
  Protocol protocol;
  std::optional<World> actual;  // nullopt for sweep families
  std::optional<BoundConfig> bound;

  std::size_t agent_count() const { return agent_names.size(); }
  std::string format_world(WorldView w) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Cap used for capped families: the explicit bound if present, otherwise
// actual_max + (max_rounds + 2) * D. Throws GenerationError if the cap is below
// actual_max + D or if a sweep family has no explicit bound.
std::optional<Value> effective_cap(const Scenario& s);

Game build_game(const Scenario& s, std::optional<Value> cap_override = std::nullopt);

Transcript run(const Scenario& s);

struct StabilityResult {
  bool pass = false;
  Value cap = 0;
  Value bigger_cap = 0;
  std::size_t horizon = 0;
  std::string detail;
};

// Runs the scenario under both caps and compares behaviour over the protocol
// horizon. Throws GenerationError if the family needs no cap.
StabilityResult stability_check(const Scenario& s, Value cap, Value bigger_cap);

// Runs every world of the universe at once by partition refinement; entry i
// equals run(game, universe.world(i)).
std::vector<Transcript> run_all(const Game& game);

// stable[i]: world i of game.universe behaves the same under cap + growth
// (all true for families without a cap).
std::vector<bool> stable_rows(const Scenario& s, const Game& game, const std::vector<Transcript>& transcripts,
                              std::optional<Value> growth = std::nullopt);

struct SweepRow {
  World world;
  Transcript transcript;
  std::vector<AgentId> learners;
  std::uint64_t digest = 0;
  bool stable = true;           // transcript unchanged under cap + growth
  std::size_t orbit_size = 1;   // rotation class size when orbits are merged
};

struct SweepOptions {
  bool orbit = false;
  // Capped families are re-run at cap + growth; unstable worlds are flagged and
  // excluded from the extremes. Defaults to the scenario's growth step.
  std::optional<Value> growth;
  // Restricts which actual worlds are reported (e.g. values <= 5).
  WorldPredicate include;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::size_t min_learners = 0;
  std::size_t max_learners = 0;
  std::vector<std::size_t> argmin;  // row indices
  std::vector<std::size_t> argmax;
  std::size_t unstable = 0;
  bool orbit = false;
};

SweepReport sweep(const Scenario& family, const SweepOptions& options = {});

// Lexicographically smallest rotation.
World canonical_rotation(WorldView w);

}  // namespace ck
