#include <algorithm>
#include <map>

#include "ck/error.hpp"
#include "ck/parallel.hpp"
#include "ck/scenario.hpp"

namespace ck {

std::string ValueAlphabet::format(Value v) const {
  if (kind == Kind::Colors && v < colors.size()) return colors[v];
  return std::to_string(v);
}

std::optional<Value> ValueAlphabet::color_code(const std::string& name) const {
  auto it = std::find(colors.begin(), colors.end(), name);
  if (it == colors.end()) return std::nullopt;
  return static_cast<Value>(it - colors.begin());
}

bool ValueAlphabet::admits(Value v) const {
  switch (kind) {
    case Kind::Colors:
      return v < colors.size();
    case Kind::Positive:
      return v >= 1;
    case Kind::Naturals:
      break;
  }
  return true;
}

std::string Scenario::format_world(WorldView w) const {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += alphabet.format(w[i]);
  }
  return out + "]";
}

std::optional<Value> effective_cap(const Scenario& s) {
  if (!needs_cap(s.constraint)) return std::nullopt;
  const Value step = *cap_step(s.constraint, s.agent_count());
  if (!s.actual) {
    if (!s.bound) throw GenerationError("a sweep over a capped family needs an explicit bound");
    return s.bound->cap;
  }
  const Value actual_max = *std::max_element(s.actual->begin(), s.actual->end());
  const Value cap = s.bound ? s.bound->cap
                            : default_cap(actual_max, s.protocol.max_rounds, step);
  if (cap < actual_max + step)
    throw GenerationError("cap " + std::to_string(cap) + " is below actual max + " +
                          std::to_string(step));
  return cap;
}

Game build_game(const Scenario& s, std::optional<Value> cap_override) {
  const auto n = s.agent_count();
  UniverseConstraint c = s.constraint;
  if (needs_cap(c)) {
    const auto cap = cap_override ? cap_override : effective_cap(s);
    c = with_cap(c, *cap);
  }
  if (s.actual && !satisfies(c, n, *s.actual))
    throw GenerationError("actual world violates the announced constraint");
  Game g{gen_universe(c, n), gen_visibility(s.sight, n), s.protocol};
  if (g.protocol.max_rounds == 0) g.protocol.max_rounds = g.universe.size() + 2;
  g.protocol.validate(n);
  return g;
}

Transcript run(const Scenario& s) {
  if (!s.actual) throw ContractViolation("scenario has no actual world");
  return run(build_game(s), *s.actual);
}

StabilityResult stability_check(const Scenario& s, Value cap, Value bigger_cap) {
  if (!needs_cap(s.constraint)) throw GenerationError("scenario family needs no cap");
  if (!s.actual) throw ContractViolation("stability check needs an actual world");
  const Transcript small = run(build_game(s, cap), *s.actual);
  const Transcript large = run(build_game(s, bigger_cap), *s.actual);
  StabilityResult r;
  r.cap = cap;
  r.bigger_cap = bigger_cap;
  r.horizon = s.protocol.max_rounds;
  r.pass = same_behaviour(small, large, r.horizon);
  if (!r.pass) {
    const auto a = padded_answers(small, r.horizon), b = padded_answers(large, r.horizon);
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    r.detail = k < std::max(a.size(), b.size())
                   ? "answers differ in round " + std::to_string(k + 1)
                   : "eventual classifications differ";
  }
  return r;
}

namespace {

struct Cell {
  std::vector<std::size_t> members;  // ascending universe indices
};

KnowledgeState sub_state(const KnowledgeState& u, const std::vector<std::size_t>& members) {
  std::vector<Value> flat;
  flat.reserve(members.size() * u.agent_count());
  for (auto i : members) {
    auto w = u.world(i);
    flat.insert(flat.end(), w.begin(), w.end());
  }
  return KnowledgeState::from_sorted_flat(u.agent_count(), std::move(flat));
}

// Splits `members` by a per-world key, preserving ascending order inside parts.
template <class Key>
std::vector<std::vector<std::size_t>> split_by(const std::vector<std::size_t>& members,
                                               const std::vector<Key>& keys) {
  std::map<Key, std::vector<std::size_t>> parts;
  for (std::size_t k = 0; k < members.size(); ++k) parts[keys[k]].push_back(members[k]);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(parts.size());
  for (auto& [_, v] : parts) out.push_back(std::move(v));
  return out;
}

// One round of refinement for one cell. Appends events to the member
// transcripts and returns the resulting cells.
std::vector<std::vector<std::size_t>> refine_round(const Game& game, const Cell& cell,
                                                   std::size_t round,
                                                   std::vector<Transcript>& out) {
  const auto& u = game.universe;
  const auto n = u.agent_count();
  if (game.protocol.kind == Protocol::Kind::Simultaneous) {
    const KnowledgeState state = sub_state(u, cell.members);
    StateAnswers answers(state, game.sight);
    std::vector<AnswerVector> keys(cell.members.size());
    for (std::size_t k = 0; k < cell.members.size(); ++k)
      keys[k] = answers.answers(state.world(k));
    auto parts = split_by(cell.members, keys);
    for (const auto& part : parts) {
      const AnswerVector said = answers.answers(u.world(part.front()));
      for (auto i : part)
        for (AgentId a = 0; a < n; ++a)
          out[i].events.push_back({round, round, a, said[a], part.size()});
    }
    return parts;
  }
  std::vector<std::vector<std::size_t>> parts{cell.members};
  for (std::size_t pos = 0; pos < n; ++pos) {
    const AgentId a = game.protocol.order[pos];
    const std::size_t turn = (round - 1) * n + pos + 1;
    std::vector<std::vector<std::size_t>> next;
    for (const auto& part : parts) {
      OwnValueIndex idx(game.sight, a, u.max_value());
      for (auto i : part) idx.add(u.world(i));
      std::vector<int> keys(part.size());
      for (std::size_t k = 0; k < part.size(); ++k) keys[k] = idx.knows(u.world(part[k])) ? 1 : 0;
      for (auto& sub : split_by(part, keys)) {
        const Answer said = idx.knows(u.world(sub.front())) ? Answer::Yes : Answer::No;
        for (auto i : sub) out[i].events.push_back({round, turn, a, said, sub.size()});
        next.push_back(std::move(sub));
      }
    }
    parts = std::move(next);
  }
  return parts;
}

}  // namespace

std::vector<Transcript> run_all(const Game& game) {
  const auto& u = game.universe;
  const auto n = u.agent_count();
  game.protocol.validate(n);
  std::vector<Transcript> out(u.size());
  for (auto& t : out) {
    t.kind = game.protocol.kind;
    t.agents = n;
  }
  std::vector<Cell> active(1);
  active[0].members.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) active[0].members[i] = i;

  for (std::size_t round = 1; round <= game.protocol.max_rounds && !active.empty(); ++round) {
    std::vector<std::vector<std::vector<std::size_t>>> results(active.size());
    parallel_for(active.size(), [&](std::size_t c) {
      results[c] = refine_round(game, active[c], round, out);
    });
    std::vector<Cell> next;
    for (std::size_t c = 0; c < active.size(); ++c) {
      auto& parts = results[c];
      if (parts.size() == 1 && parts[0].size() == active[c].members.size()) {
        for (auto i : parts[0]) out[i].stabilized_at = round;
        continue;
      }
      for (auto& p : parts) next.push_back(Cell{std::move(p)});
    }
    active = std::move(next);
  }

  for (auto& t : out) {
    t.eventual.assign(n, t.stabilized_at ? Eventual::never() : Eventual::unknown());
    for (const auto& e : t.events)
      if (e.answer == Answer::Yes && !t.eventual[e.agent].learns())
        t.eventual[e.agent] = Eventual::learns(e.round, e.turn);
  }
  return out;
}

World canonical_rotation(WorldView w) {
  World best(w.begin(), w.end());
  World rot = best;
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

std::vector<bool> stable_rows(const Scenario& s, const Game& game, const std::vector<Transcript>& transcripts,
                              std::optional<Value> growth) {
  std::vector<bool> stable(game.universe.size(), true);
  if (!needs_cap(s.constraint)) return stable;
  const Value cap = *effective_cap(s);
  const Game bigger = build_game(s, cap + (growth ? *growth : (s.bound ? s.bound->growth_step : 10)));
  const auto wide = run_all(bigger);
  for (std::size_t i = 0; i < game.universe.size(); ++i) {
    const auto j = bigger.universe.find(game.universe.world(i));
    stable[i] = j && same_behaviour(transcripts[i], wide[*j], s.protocol.max_rounds);
  }
  return stable;
}

SweepReport sweep(const Scenario& family, const SweepOptions& options) {
  const Game game = build_game(family);
  const auto transcripts = run_all(game);
  const auto stable = stable_rows(family, game, transcripts, options.growth);

  SweepReport report;
  report.orbit = options.orbit;
  std::map<World, std::size_t> orbit_row;
  for (std::size_t i = 0; i < game.universe.size(); ++i) {
    auto w = game.universe.world(i);
    if (options.include && !options.include(w)) continue;
    if (options.orbit) {
      World rep = canonical_rotation(w);
      auto it = orbit_row.find(rep);
      if (it != orbit_row.end()) {
        report.rows[it->second].orbit_size++;
        report.rows[it->second].stable = report.rows[it->second].stable && stable[i];
        continue;
      }
      if (!std::equal(rep.begin(), rep.end(), w.begin())) {
        // Representative comes later in lexicographic order only if w is not
        // canonical; record under the representative with its own transcript.
        const std::size_t lo = *game.universe.find(rep);
        orbit_row.emplace(rep, report.rows.size());
        report.rows.push_back({rep, transcripts[lo], transcripts[lo].learners(),
                               transcripts[lo].digest(), stable[i] && stable[lo], 1});
        continue;
      }
      orbit_row.emplace(rep, report.rows.size());
    }
    report.rows.push_back({World(w.begin(), w.end()), transcripts[i], transcripts[i].learners(),
                           transcripts[i].digest(), stable[i], 1});
  }

  bool first = true;
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const auto& row = report.rows[r];
    if (!row.stable) {
      ++report.unstable;
      continue;
    }
    const auto k = row.learners.size();
    if (first || k < report.min_learners) {
      report.min_learners = k;
      report.argmin.clear();
    }
    if (first || k > report.max_learners) {
      report.max_learners = k;
      report.argmax.clear();
    }
    first = false;
    if (k == report.min_learners) report.argmin.push_back(r);
    if (k == report.max_learners) report.argmax.push_back(r);
  }
  return report;
}

}  // namespace ck
