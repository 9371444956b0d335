#include "ck/engine.hpp"

#include <algorithm>
#include <numeric>

#include "ck/error.hpp"

namespace ck {

Protocol Protocol::simultaneous(std::size_t max_rounds) {
  return {Kind::Simultaneous, {}, max_rounds};
}

Protocol Protocol::circular(std::vector<AgentId> order, std::size_t max_rounds) {
  return {Kind::Circular, std::move(order), max_rounds};
}

Protocol Protocol::circular_identity(std::size_t agents, std::size_t max_rounds) {
  std::vector<AgentId> order(agents);
  std::iota(order.begin(), order.end(), AgentId{0});
  return circular(std::move(order), max_rounds);
}

void Protocol::validate(std::size_t agents) const {
  if (max_rounds < 1) throw ContractViolation("max_rounds must be at least 1");
  if (kind == Kind::Simultaneous) return;
  if (order.size() != agents) throw ContractViolation("circular order must list every agent once");
  std::vector<bool> seen(agents, false);
  for (AgentId a : order) {
    if (a >= agents || seen[a]) throw ContractViolation("circular order is not a permutation");
    seen[a] = true;
  }
}

std::string to_string(const Eventual& e) {
  switch (e.status) {
    case Eventual::Status::Learns:
      return "round" + std::to_string(e.round);
    case Eventual::Status::Never:
      return "never";
    case Eventual::Status::Unknown:
      break;
  }
  return "unknown";
}

std::vector<AnswerVector> Transcript::answers() const {
  std::vector<AnswerVector> rounds;
  for (const auto& e : events) {
    if (rounds.size() < e.round) rounds.resize(e.round);
    rounds[e.round - 1].push_back(e.answer);
  }
  return rounds;
}

std::vector<AnswerVector> Transcript::answers_by_agent() const {
  std::vector<AnswerVector> rounds;
  for (const auto& e : events) {
    if (rounds.size() < e.round) rounds.resize(e.round, AnswerVector(agents, Answer::No));
    rounds[e.round - 1][e.agent] = e.answer;
  }
  return rounds;
}

std::vector<AgentId> Transcript::learners() const {
  std::vector<AgentId> out;
  for (AgentId a = 0; a < eventual.size(); ++a)
    if (eventual[a].learns()) out.push_back(a);
  return out;
}

std::uint64_t Transcript::digest() const {
  // FNV-1a over the event fields.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (const auto& e : events) {
    mix(e.round);
    mix(e.turn);
    mix(e.agent);
    mix(static_cast<std::uint64_t>(e.answer));
    mix(e.state_size);
  }
  return h;
}

namespace {

struct Stepper {
  KnowledgeState state;
  const Visibility& sight;

  AnswerVector simultaneous_step(WorldView actual) {
    StateAnswers answers(state, sight);
    const AnswerVector announced = answers.answers(actual);
    const auto n = state.agent_count();
    std::vector<Value> kept;
    for (std::size_t i = 0; i < state.size(); ++i) {
      auto w = state.world(i);
      bool match = true;
      for (AgentId a = 0; a < n && match; ++a) match = answers.answer(a, w) == announced[a];
      if (match) kept.insert(kept.end(), w.begin(), w.end());
    }
    state = KnowledgeState::from_sorted_flat(n, std::move(kept), state.generation() + 1);
    return announced;
  }

  Answer turn_step(AgentId agent, WorldView actual) {
    OwnValueIndex idx(sight, agent, state.max_value());
    for (std::size_t i = 0; i < state.size(); ++i) idx.add(state.world(i));
    const bool knows = idx.knows(actual);
    std::vector<Value> kept;
    for (std::size_t i = 0; i < state.size(); ++i) {
      auto w = state.world(i);
      if (idx.knows(w) == knows) kept.insert(kept.end(), w.begin(), w.end());
    }
    state = KnowledgeState::from_sorted_flat(state.agent_count(), std::move(kept),
                                             state.generation() + 1);
    return knows ? Answer::Yes : Answer::No;
  }
};

}  // namespace

Transcript run(const Game& game, WorldView actual, const RunOptions& options) {
  const auto n = game.universe.agent_count();
  game.protocol.validate(n);
  if (game.sight.agent_count() != n) throw ContractViolation("visibility/agent count mismatch");
  if (!game.universe.contains(actual))
    throw ContractViolation("actual world is not in the universe");

  Transcript t;
  t.kind = game.protocol.kind;
  t.agents = n;
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> first_yes(n);
  Stepper step{game.universe, game.sight};

  for (std::size_t round = 1; round <= game.protocol.max_rounds; ++round) {
    const auto before = step.state.size();
    if (game.protocol.kind == Protocol::Kind::Simultaneous) {
      const AnswerVector said = step.simultaneous_step(actual);
      if (options.on_state) options.on_state(step.state);
      for (AgentId a = 0; a < n; ++a) {
        t.events.push_back({round, round, a, said[a], step.state.size()});
        if (said[a] == Answer::Yes && !first_yes[a]) first_yes[a] = {round, round};
      }
    } else {
      for (std::size_t pos = 0; pos < n; ++pos) {
        const AgentId a = game.protocol.order[pos];
        const std::size_t turn = (round - 1) * n + pos + 1;
        const Answer said = step.turn_step(a, actual);
        if (options.on_state) options.on_state(step.state);
        t.events.push_back({round, turn, a, said, step.state.size()});
        if (said == Answer::Yes && !first_yes[a]) first_yes[a] = {round, turn};
      }
    }
    if (step.state.size() == before && !t.stabilized_at) {
      t.stabilized_at = round;
      if (options.stop_at_fixpoint) break;
    }
  }

  t.eventual.resize(n);
  for (AgentId a = 0; a < n; ++a) {
    if (first_yes[a]) t.eventual[a] = Eventual::learns(first_yes[a]->first, first_yes[a]->second);
    else t.eventual[a] = t.stabilized_at ? Eventual::never() : Eventual::unknown();
  }
  return t;
}

std::vector<Eventual> eventual_knowledge(const Game& game, WorldView actual) {
  return run(game, actual).eventual;
}

std::vector<AnswerVector> padded_answers(const Transcript& t, std::size_t horizon) {
  auto rounds = t.answers();
  if (rounds.size() > horizon) rounds.resize(horizon);
  if (t.stabilized_at && !rounds.empty())
    while (rounds.size() < horizon) rounds.push_back(rounds.back());
  return rounds;
}

namespace {
Eventual within(const Transcript& t, AgentId a, std::size_t horizon) {
  const auto& e = t.eventual[a];
  if (e.learns()) return e.round <= horizon ? e : Eventual::unknown();
  if (e.status == Eventual::Status::Never && t.stabilized_at && *t.stabilized_at <= horizon)
    return e;
  return Eventual::unknown();
}
}  // namespace

bool same_behaviour(const Transcript& a, const Transcript& b, std::size_t horizon) {
  if (a.agents != b.agents || a.kind != b.kind) return false;
  if (padded_answers(a, horizon) != padded_answers(b, horizon)) return false;
  for (AgentId i = 0; i < a.agents; ++i)
    if (!(within(a, i, horizon) == within(b, i, horizon))) return false;
  return true;
}

std::vector<AnswerVector> compressed_pattern(const Transcript& t) {
  auto rounds = t.answers();
  while (rounds.size() >= 2 && rounds[rounds.size() - 1] == rounds[rounds.size() - 2])
    rounds.pop_back();
  return rounds;
}

}  // namespace ck
