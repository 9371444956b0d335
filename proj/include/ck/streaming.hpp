#pragma once

// Runs over universes too large to hold in memory. The knowledge state is kept
// as the generator plus a chain of answer predicates; each announcement costs
// one pass to build the speaker's observation index and one to count the
// survivors. Once the state is small enough it is materialized and the run
// continues on the explicit engine path.

#include <functional>

#include "ck/engine.hpp"
#include "ck/universe.hpp"

namespace ck {

struct StreamOptions {
  std::size_t materialize_below = 1u << 20;
  // Called after every announcement with (turn, state size).
  std::function<void(std::size_t, std::size_t)> progress;
};

// Same semantics as run(Game, actual). The protocol must carry an explicit
// horizon.
Transcript run_streamed(const UniverseConstraint& constraint, std::size_t agents,
                        const Visibility& sight, const Protocol& protocol, WorldView actual,
                        const StreamOptions& options = {});

// Largest value any world of the family can hold. Requires a cap for
// unbounded families.
Value value_bound(const UniverseConstraint& c, std::size_t agents);

}  // namespace ck
