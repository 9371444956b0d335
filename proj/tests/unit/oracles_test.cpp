#include "doctest.h"

#include "../support/brute.hpp"
#include "ck/engine.hpp"
#include "ck/error.hpp"
#include "ck/oracles.hpp"

using namespace ck;

namespace {

Game sop_two(Value m, Protocol p) {
  return {gen_universe(SumOrProduct{m}, 2), gen_visibility(FullSight{}, 2), std::move(p)};
}

}  // namespace

TEST_CASE("number helpers") {
  CHECK(is_prime(2));
  CHECK(is_prime(97));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
  CHECK(semiprime_factors(15) == std::optional<std::pair<Value, Value>>({3, 5}));
  CHECK_FALSE(semiprime_factors(9).has_value());
  CHECK_FALSE(semiprime_factors(30).has_value());
  CHECK_FALSE(semiprime_factors(7).has_value());
}

TEST_CASE("hat predictions match the engine") {
  const Game g{gen_universe(HatsAtLeast{0, 1, 2}, 5), gen_visibility(FullSight{}, 5), Protocol::simultaneous(8)};
  for (const auto& w : g.universe.worlds())
    CHECK(cross_check(predict_hats_simultaneous(w), run(g, w)).empty());
  CHECK_THROWS_AS(predict_hats_simultaneous(World{1, 1}), ContractViolation);
}

TEST_CASE("cross_check reports each disagreement") {
  const Game g{gen_universe(HatsAtLeast{0, 1, 2}, 3), gen_visibility(FullSight{}, 3), Protocol::simultaneous(5)};
  OraclePrediction wrong;
  wrong.agents = {Expected::never(), Expected::learns(2), Expected::learns(3, 4)};
  wrong.round1_yes = std::vector<AgentId>{1};
  const auto m = cross_check(wrong, run(g, World{0, 0, 1}));
  REQUIRE(m.size() == 3);
  CHECK(m[0].field == "agent 0");
  CHECK(to_string(m[0]) == "agent 0: expected never, got round2 turn2");
  CHECK(m[1].field == "agent 2");
  CHECK(m[2].field == "round-1 YES set");

  OraclePrediction short_one;
  short_one.agents = {Expected::any()};
  CHECK(cross_check(short_one, run(g, World{0, 0, 1})).front().field == "agent count");
}

TEST_CASE("two-player sum or product, simultaneous bullets partition every case") {
  for (Value m = 1; m <= 40; ++m)
    for (Value a = 1; a <= m; ++a)
      for (Value b = 1; b <= m; ++b) {
        if (a + b != m && a * b != m) continue;
        CHECK_MESSAGE(sop_two_bullets(a, b, m, Protocol::Kind::Simultaneous).size() == 1,
                      "a=" << a << " b=" << b << " m=" << m);
      }
}

TEST_CASE("two-player sum or product examples") {
  // Fifty: 25 and 25 say NO twice then YES.
  const Game g = sop_two(50, Protocol::simultaneous(10));
  const Transcript t = run(g, World{25, 25});
  CHECK(cross_check(predict_sop_two(25, 25, 50, Protocol::Kind::Simultaneous), t).empty());
  CHECK(t.eventual[0] == Eventual::learns(3, 3));
  CHECK_THROWS_AS(predict_sop_two(3, 3, 50, Protocol::Kind::Simultaneous), ContractViolation);
}

TEST_CASE("alice learns on turn three with four and two against six") {
  // Derived from the reference model, not from a closed form.
  std::vector<brute::World> worlds;
  for (unsigned a = 1; a <= 6; ++a)
    for (unsigned b = 1; b <= 6; ++b)
      if (a + b == 6 || a * b == 6) worlds.push_back({a, b});
  const auto ref = brute::play(worlds, brute::full(2), {4, 2}, {0, 1}, 20);
  REQUIRE(ref.first_yes_turn[0].has_value());
  CHECK(*ref.first_yes_turn[0] == 3);

  const Transcript t = run(sop_two(6, Protocol::circular_identity(2, 20)), World{4, 2});
  CHECK(t.eventual[0] == Eventual::learns(2, 3));
  CHECK(t.eventual[1].learns() == ref.first_yes_round[1].has_value());
}

TEST_CASE("max difference oracles validate input") {
  CHECK_THROWS_AS(predict_maxdiff_two(3, 3, 1, Protocol::Kind::Simultaneous), ContractViolation);
  CHECK_THROWS_AS(predict_maxdiff_two(3, 4, 0, Protocol::Kind::Circular), ContractViolation);
  const auto p = predict_maxdiff_two(2, 3, 1, Protocol::Kind::Circular);
  CHECK(p.agents[1] == Expected::learns(2, 4));
  CHECK(p.agents[0] == Expected::learns(3, 5));
}

TEST_CASE("circular max difference prediction matches the engine") {
  const Game g{gen_universe(MaxDiff{2, 60, true}, 2), gen_visibility(FullSight{}, 2),
               Protocol::circular_identity(2, 40)};
  for (Value a = 0; a <= 12; ++a)
    for (Value b : {a + 2, a >= 2 ? a - 2 : a + 2}) {
      const World w{a, b};
      CHECK_MESSAGE(cross_check(predict_maxdiff_two(a, b, 2, Protocol::Kind::Circular), run(g, w)).empty(),
                    "a=" << a << " b=" << b);
    }
}

TEST_CASE("near-sighted circle learner sets") {
  const std::size_t n = 5;
  const Game g{gen_universe(HatsExactly{0, 1, 2}, n), gen_visibility(NearCircle{}, n),
               Protocol::circular_identity(n, 30)};
  for (std::size_t r = 1; r <= n; ++r) {
    World w(n, 1);
    w[r - 1] = 0;
    CHECK(cross_check(predict_ns_circular(n, r), run(g, w)).empty());
  }
}
