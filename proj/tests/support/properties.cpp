#include "properties.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "brute.hpp"
#include "ck/engine.hpp"
#include "ck/serialize.hpp"
#include "ck/universe.hpp"

namespace props {

namespace {

using namespace ck;

struct Case {
  Game game;
  World actual;
  std::vector<std::vector<AgentId>> sees;
  std::string label;
};

std::vector<World> all_tuples(std::size_t n, Value k) {
  std::vector<World> out;
  for (const auto& w : brute::tuples(n, 0, k - 1, [](const brute::World&) { return true; }))
    out.emplace_back(w.begin(), w.end());
  return out;
}

Case random_case(std::mt19937_64& rng) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  Case c;
  const std::size_t n = pick(2, 5);
  const Value k = static_cast<Value>(pick(2, 3));
  std::ostringstream label;
  label << "n=" << n << " k=" << k;

  std::vector<World> worlds;
  switch (pick(0, 4)) {
    case 0: {
      const Value red = static_cast<Value>(pick(0, k - 1));
      const std::size_t count = pick(1, n);
      worlds = gen_universe(HatsAtLeast{red, count, k}, n).worlds();
      label << " atleast " << red << 'x' << count;
      break;
    }
    case 1: {
      const std::size_t count = pick(1, n);
      worlds = gen_universe(HatsExactly{0, count, k}, n).worlds();
      label << " exactly " << count;
      break;
    }
    case 2: {
      const Value diff = static_cast<Value>(pick(1, k - 1));
      const bool exact = pick(0, 1) == 1;
      worlds = gen_universe(MaxDiff{diff, k - 1, exact}, n).worlds();
      label << " maxdiff " << diff << (exact ? "" : " atmost");
      break;
    }
    default: {
      const double density = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
      std::bernoulli_distribution keep(density);
      for (auto& w : all_tuples(n, k))
        if (keep(rng)) worlds.push_back(std::move(w));
      if (worlds.empty()) worlds.push_back(World(n, 0));
      label << " random " << worlds.size();
      break;
    }
  }

  std::vector<std::vector<AgentId>> sees(n);
  switch (pick(0, 3)) {
    case 0:
      for (AgentId i = 0; i < n; ++i)
        for (AgentId j = 0; j < n; ++j)
          if (i != j) sees[i].push_back(j);
      label << " full";
      break;
    case 1: {
      const auto s = n >= 3 ? brute::ring(n, pick(0, 1) == 1) : brute::full(n);
      for (AgentId i = 0; i < n; ++i) sees[i].assign(s[i].begin(), s[i].end());
      label << " ring";
      break;
    }
    case 2: {
      const auto s = brute::line(n);
      for (AgentId i = 0; i < n; ++i) sees[i].assign(s[i].begin(), s[i].end());
      label << " line";
      break;
    }
    default:
      for (AgentId i = 0; i < n; ++i)
        for (AgentId j = 0; j < n; ++j)
          if (i != j && pick(0, 2) != 0) sees[i].push_back(j);
      label << " graph";
      break;
  }

  c.game.universe = KnowledgeState::from_worlds(n, worlds);
  c.game.sight = Visibility(sees);
  const std::size_t horizon = c.game.universe.size() + 2;
  if (pick(0, 1) == 0) {
    c.game.protocol = Protocol::simultaneous(horizon);
    label << " simultaneous";
  } else {
    std::vector<AgentId> order(n);
    std::iota(order.begin(), order.end(), AgentId{0});
    std::shuffle(order.begin(), order.end(), rng);
    c.game.protocol = Protocol::circular(order, horizon);
    label << " circular";
  }
  const auto w = c.game.universe.world(pick(0, c.game.universe.size() - 1));
  c.actual.assign(w.begin(), w.end());
  c.sees = sees;
  label << " actual";
  for (Value v : c.actual) label << ' ' << v;
  c.label = label.str();
  return c;
}

using Check = std::function<std::string(const Case&, std::mt19937_64&)>;

std::string retention(const Case& c, std::mt19937_64&) {
  std::string err;
  RunOptions opts;
  opts.on_state = [&](const KnowledgeState& s) {
    if (err.empty() && !s.contains(c.actual)) err = "actual world eliminated";
  };
  run(c.game, c.actual, opts);
  return err;
}

std::string monotone_shrink(const Case& c, std::mt19937_64&) {
  std::string err;
  KnowledgeState prev = c.game.universe;
  RunOptions opts;
  opts.on_state = [&](const KnowledgeState& s) {
    if (!err.empty()) return;
    if (s.size() > prev.size()) err = "state grew";
    for (std::size_t i = 0; i < s.size() && err.empty(); ++i)
      if (!prev.contains(s.world(i))) err = "state gained a world";
    prev = s;
  };
  run(c.game, c.actual, opts);
  return err;
}

std::string yes_permanence(const Case& c, std::mt19937_64&) {
  RunOptions opts;
  opts.stop_at_fixpoint = false;
  const auto rounds = run(c.game, c.actual, opts).answers_by_agent();
  for (std::size_t r = 1; r < rounds.size(); ++r)
    for (AgentId a = 0; a < rounds[r].size(); ++a)
      if (rounds[r - 1][a] == Answer::Yes && rounds[r][a] == Answer::No)
        return "agent " + std::to_string(a) + " went from YES to NO in round " + std::to_string(r + 1);
  return {};
}

std::string relabeling(const Case& c, std::mt19937_64& rng) {
  const std::size_t n = c.actual.size();
  std::vector<AgentId> pi(n);
  std::iota(pi.begin(), pi.end(), AgentId{0});
  std::shuffle(pi.begin(), pi.end(), rng);
  const Value top = c.game.universe.max_value();
  std::vector<Value> sigma(top + 1);
  std::iota(sigma.begin(), sigma.end(), Value{0});
  std::shuffle(sigma.begin(), sigma.end(), rng);

  auto map_world = [&](WorldView w) {
    World out(n);
    for (AgentId i = 0; i < n; ++i) out[pi[i]] = sigma[w[i]];
    return out;
  };
  Game g;
  std::vector<World> worlds;
  for (std::size_t i = 0; i < c.game.universe.size(); ++i) worlds.push_back(map_world(c.game.universe.world(i)));
  g.universe = KnowledgeState::from_worlds(n, worlds);
  std::vector<std::vector<AgentId>> sees(n);
  for (AgentId i = 0; i < n; ++i)
    for (AgentId j : c.sees[i]) sees[pi[i]].push_back(pi[j]);
  g.sight = Visibility(sees);
  g.protocol = c.game.protocol;
  for (auto& a : g.protocol.order) a = pi[a];

  const Transcript a = run(c.game, c.actual);
  const Transcript b = run(g, map_world(c.actual));
  if (a.stabilized_at != b.stabilized_at) return "stabilization round differs";
  if (a.events.size() != b.events.size()) return "event count differs";
  const auto ra = a.answers_by_agent(), rb = b.answers_by_agent();
  for (std::size_t r = 0; r < ra.size(); ++r)
    for (AgentId i = 0; i < n; ++i)
      if (ra[r][i] != rb[r][pi[i]]) return "answer differs in round " + std::to_string(r + 1);
  for (std::size_t e = 0; e < a.events.size(); ++e)
    if (a.events[e].state_size != b.events[e].state_size)
      return "state size differs at event " + std::to_string(e);
  for (AgentId i = 0; i < n; ++i)
    if (!(a.eventual[i] == b.eventual[pi[i]])) return "eventual outcome differs";
  return {};
}

std::string fixpoint_soundness(const Case& c, std::mt19937_64&) {
  const Transcript t = run(c.game, c.actual);
  if (!t.stabilized_at) return "no fixpoint within |U| + 2 rounds";
  Game longer = c.game;
  longer.protocol.max_rounds = *t.stabilized_at + 2;
  RunOptions opts;
  opts.stop_at_fixpoint = false;
  const Transcript x = run(longer, c.actual, opts);
  const auto rounds = x.answers();
  const auto last = rounds[*t.stabilized_at - 1];
  for (std::size_t r = *t.stabilized_at; r < rounds.size(); ++r)
    if (rounds[r] != last) return "answers changed after the fixpoint";
  for (const auto& e : x.events) {
    if (e.round > *t.stabilized_at && e.state_size != t.events.back().state_size)
      return "state shrank after the fixpoint";
    if (e.answer == Answer::Yes && t.eventual[e.agent].status == Eventual::Status::Never)
      return "agent classified never said YES later";
  }
  return {};
}

std::string json_round_trip(const Case& c, std::mt19937_64&) {
  const Transcript t = run(c.game, c.actual);
  const std::string text = serialize_transcript(t);
  const Transcript back = parse_transcript(text);
  if (!(back == t)) return "parsed transcript differs";
  if (serialize_transcript(back) != text) return "re-serialized text differs";
  return {};
}

std::string matches_reference(const Case& c, std::mt19937_64&) {
  const std::size_t n = c.actual.size();
  std::vector<brute::World> worlds;
  for (std::size_t i = 0; i < c.game.universe.size(); ++i) {
    auto w = c.game.universe.world(i);
    worlds.emplace_back(w.begin(), w.end());
  }
  brute::Sees sees(n);
  for (AgentId i = 0; i < n; ++i) sees[i].assign(c.sees[i].begin(), c.sees[i].end());
  std::vector<std::size_t> order(c.game.protocol.order.begin(), c.game.protocol.order.end());
  const auto ref = brute::play(worlds, sees, brute::World(c.actual.begin(), c.actual.end()), order,
                               c.game.protocol.max_rounds);
  const Transcript t = run(c.game, c.actual);
  const auto got = t.answers();
  if (got.size() != ref.said.size()) return "round count differs from the reference";
  for (std::size_t r = 0; r < got.size(); ++r)
    for (std::size_t k = 0; k < n; ++k)
      if ((got[r][k] == Answer::Yes) != ref.said[r][k]) return "answer differs from the reference";
  for (AgentId a = 0; a < n; ++a) {
    const auto& e = t.eventual[a];
    if (e.learns() != ref.first_yes_round[a].has_value()) return "learner set differs from the reference";
    if (e.learns() && (e.round != *ref.first_yes_round[a] || e.turn != *ref.first_yes_turn[a]))
      return "first YES differs from the reference";
  }
  return {};
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CK_SEED")) return std::strtoull(env, nullptr, 10);
  return 20261016;
}

std::vector<Outcome> run_all(std::uint64_t seed, std::size_t cases) {
  const std::vector<std::pair<std::string, Check>> checks = {
      {"retention", retention},
      {"monotone shrink", monotone_shrink},
      {"YES permanence", yes_permanence},
      {"relabeling equivalence", relabeling},
      {"fixpoint soundness", fixpoint_soundness},
      {"JSON round trip", json_round_trip},
      {"matches reference model", matches_reference},
  };
  std::vector<Outcome> out;
  for (std::size_t p = 0; p < checks.size(); ++p) {
    std::mt19937_64 rng(seed + 7919 * p);
    Outcome o{checks[p].first, cases, 0, {}};
    for (std::size_t i = 0; i < cases; ++i) {
      const Case c = random_case(rng);
      std::string err;
      try {
        err = checks[p].second(c, rng);
      } catch (const std::exception& e) {
        err = std::string("exception: ") + e.what();
      }
      if (!err.empty() && o.failures++ == 0)
        o.first_failure = "case " + std::to_string(i) + " (" + c.label + "): " + err;
    }
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace props
