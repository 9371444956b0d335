#pragma once

#include <stdexcept>
#include <string>

namespace ck {

// A caller broke an operation's precondition (world not in state, agent out of
// range, inconsistent announcement).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A universe could not be generated as requested (missing cap, bad agent
// count, cap too small for the actual world).
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ck
