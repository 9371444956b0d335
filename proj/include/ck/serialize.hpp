#pragma once

// Canonical JSON: sorted keys, integers only, two-space indent, trailing
// newline. Every document carries "format": 1.

#include <string>
#include <string_view>
#include <vector>

#include "ck/oracles.hpp"
#include "ck/scenario.hpp"

namespace ck {

std::string serialize_transcript(const Transcript& t);
// Inverse of serialize_transcript. Throws std::invalid_argument on malformed
// input.
Transcript parse_transcript(std::string_view json);

std::string serialize_sweep(const Scenario& family, const SweepReport& report);

std::string serialize_mismatches(const std::string& label, const std::vector<Mismatch>& mismatches);

std::string hex_digest(std::uint64_t digest);

}  // namespace ck
