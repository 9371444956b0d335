#include "doctest.h"

#include <json.hpp>

#include "ck/dsl.hpp"
#include "ck/serialize.hpp"

using namespace ck;

namespace {

Transcript intro_transcript() {
  const Game g{gen_universe(HatsAtLeast{0, 1, 2}, 3), gen_visibility(FullSight{}, 3), Protocol::simultaneous(5)};
  return run(g, World{0, 0, 1});
}

}  // namespace

TEST_CASE("transcript json is canonical and round trips") {
  const Transcript t = intro_transcript();
  const std::string text = serialize_transcript(t);
  CHECK(text.back() == '\n');
  CHECK(text == serialize_transcript(t));
  const auto j = nlohmann::json::parse(text);
  CHECK(j["format"] == 1);
  CHECK(j["kind"] == "simultaneous");
  CHECK(j["events"].size() == 9);
  CHECK(j["stabilized_at"] == 3);
  CHECK(j["digest"] == hex_digest(t.digest()));
  CHECK(hex_digest(t.digest()).size() == 16);
  CHECK(parse_transcript(text) == t);
}

TEST_CASE("horizon-terminated transcripts round trip") {
  const Game g{gen_universe(HatsAtLeast{0, 1, 2}, 4), gen_visibility(FullSight{}, 4), Protocol::circular_identity(4, 1)};
  const Transcript t = run(g, World{0, 0, 0, 1});
  const std::string text = serialize_transcript(t);
  CHECK(text.find("\"horizon\"") != std::string::npos);
  CHECK(parse_transcript(text) == t);
}

TEST_CASE("malformed transcripts are rejected") {
  const std::string good = serialize_transcript(intro_transcript());
  auto edited = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  CHECK_THROWS_AS(parse_transcript("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_transcript("[]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_transcript(edited("\"format\": 1", "\"format\": 2")), std::invalid_argument);
  CHECK_THROWS_AS(parse_transcript(edited("\"simultaneous\"", "\"parallel\"")), std::invalid_argument);
  CHECK_THROWS_AS(parse_transcript(edited("\"NO\"", "\"MAYBE\"")), std::invalid_argument);
  CHECK_THROWS_AS(parse_transcript(edited("\"state_size\": 4", "\"state_size\": 5")), std::invalid_argument);
}

TEST_CASE("sweep and mismatch documents") {
  const Scenario s = parse_scenario(
      "scenario \"ns\" { agents 4 values colors {R B} announce exactly R 1 sight nearcircle sweep "
      "protocol circular order [p1 p2 p3 p4] rounds 8 }");
  const auto j = nlohmann::json::parse(serialize_sweep(s, sweep(s)));
  CHECK(j["format"] == 1);
  CHECK(j.contains("rows"));
  const auto m = nlohmann::json::parse(serialize_mismatches("case", {{"agent 0", "never", "round1"}}));
  CHECK(m["format"] == 1);
}
