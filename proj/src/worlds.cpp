#include "ck/worlds.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "ck/error.hpp"

namespace ck {

Visibility::Visibility(std::vector<std::vector<AgentId>> sees) : sees_(std::move(sees)) {
  const auto n = sees_.size();
  for (AgentId i = 0; i < n; ++i) {
    auto& s = sees_[i];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (AgentId j : s) {
      if (j >= n) throw ContractViolation("visibility refers to an unknown agent");
      if (j == i) throw ContractViolation("an agent cannot see its own value");
    }
  }
}

std::span<const AgentId> Visibility::sees(AgentId agent) const {
  if (agent >= sees_.size()) throw ContractViolation("agent index out of range");
  return sees_[agent];
}

bool Visibility::can_see(AgentId observer, AgentId target) const {
  auto s = sees(observer);
  return std::binary_search(s.begin(), s.end(), target);
}

bool Visibility::is_full() const {
  for (const auto& s : sees_)
    if (s.size() + 1 != sees_.size()) return false;
  return true;
}

KnowledgeState KnowledgeState::from_worlds(std::size_t agents, std::vector<World> worlds) {
  for (const auto& w : worlds)
    if (w.size() != agents) throw ContractViolation("world length differs from agent count");
  std::sort(worlds.begin(), worlds.end());
  worlds.erase(std::unique(worlds.begin(), worlds.end()), worlds.end());
  KnowledgeState s(agents);
  s.flat_.reserve(worlds.size() * agents);
  for (const auto& w : worlds) s.flat_.insert(s.flat_.end(), w.begin(), w.end());
  return s;
}

KnowledgeState KnowledgeState::from_sorted_flat(std::size_t agents, std::vector<Value> flat,
                                                std::size_t generation) {
  if (agents == 0 || flat.size() % agents != 0)
    throw ContractViolation("flat world storage does not match agent count");
  KnowledgeState s(agents);
  s.flat_ = std::move(flat);
  s.generation_ = generation;
  return s;
}

std::optional<std::size_t> KnowledgeState::find(WorldView w) const {
  if (w.size() != agents_) return std::nullopt;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto m = world(mid);
    if (std::lexicographical_compare(m.begin(), m.end(), w.begin(), w.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && std::equal(w.begin(), w.end(), world(lo).begin())) return lo;
  return std::nullopt;
}

bool KnowledgeState::contains(WorldView w) const { return find(w).has_value(); }

Value KnowledgeState::max_value() const {
  return flat_.empty() ? 0 : *std::max_element(flat_.begin(), flat_.end());
}

std::vector<World> KnowledgeState::worlds() const {
  std::vector<World> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto w = world(i);
    out.emplace_back(w.begin(), w.end());
  }
  return out;
}

OwnValueIndex::OwnValueIndex(const Visibility& vis, AgentId agent, Value max_value)
    : seen_(vis.sees(agent).begin(), vis.sees(agent).end()),
      agent_(agent),
      bits_(std::max(1u, static_cast<unsigned>(std::bit_width(max_value)))),
      packed_(seen_.size() * bits_ <= 64) {}

std::uint64_t OwnValueIndex::packed_key(WorldView w) const {
  std::uint64_t key = 0;
  for (AgentId j : seen_) key = (key << bits_) | w[j];
  return key;
}

std::string OwnValueIndex::wide_key(WorldView w) const {
  std::string key(seen_.size() * sizeof(Value), '\0');
  for (std::size_t k = 0; k < seen_.size(); ++k)
    std::memcpy(key.data() + k * sizeof(Value), &w[seen_[k]], sizeof(Value));
  return key;
}

void OwnValueIndex::merge(Entry& e, Value own) {
  if (e.own != own) e.ambiguous = true;
}

void OwnValueIndex::add(WorldView w) {
  const Value own = w[agent_];
  if (packed_) {
    auto [it, inserted] = packed_entries_.try_emplace(packed_key(w), Entry{own, false});
    if (!inserted) merge(it->second, own);
  } else {
    auto [it, inserted] = wide_entries_.try_emplace(wide_key(w), Entry{own, false});
    if (!inserted) merge(it->second, own);
  }
}

bool OwnValueIndex::knows(WorldView w) const {
  if (packed_) {
    auto it = packed_entries_.find(packed_key(w));
    return it != packed_entries_.end() && !it->second.ambiguous;
  }
  auto it = wide_entries_.find(wide_key(w));
  return it != wide_entries_.end() && !it->second.ambiguous;
}

std::size_t OwnValueIndex::key_count() const {
  return packed_ ? packed_entries_.size() : wide_entries_.size();
}

StateAnswers::StateAnswers(const KnowledgeState& state, const Visibility& vis) {
  const auto n = state.agent_count();
  if (vis.agent_count() != n) throw ContractViolation("visibility/agent count mismatch");
  const Value maxv = state.max_value();
  indexes_.reserve(n);
  for (AgentId a = 0; a < n; ++a) indexes_.emplace_back(vis, a, maxv);
  for (std::size_t i = 0; i < state.size(); ++i) {
    auto w = state.world(i);
    for (auto& idx : indexes_) idx.add(w);
  }
}

Answer StateAnswers::answer(AgentId agent, WorldView w) const {
  return indexes_.at(agent).knows(w) ? Answer::Yes : Answer::No;
}

AnswerVector StateAnswers::answers(WorldView w) const {
  AnswerVector v(indexes_.size());
  for (AgentId a = 0; a < indexes_.size(); ++a) v[a] = answer(a, w);
  return v;
}

Observation observe(AgentId agent, WorldView world, const Visibility& vis) {
  if (agent >= world.size() || vis.agent_count() != world.size())
    throw ContractViolation("agent index out of range");
  Observation obs;
  for (AgentId j : vis.sees(agent)) obs.entries.emplace_back(j, world[j]);
  return obs;
}

Answer knows_own(AgentId agent, WorldView world, const KnowledgeState& state,
                 const Visibility& vis) {
  if (agent >= state.agent_count()) throw ContractViolation("agent index out of range");
  if (!state.contains(world)) throw ContractViolation("world is not in the knowledge state");
  OwnValueIndex idx(vis, agent, state.max_value());
  for (std::size_t i = 0; i < state.size(); ++i) idx.add(state.world(i));
  return idx.knows(world) ? Answer::Yes : Answer::No;
}

AnswerVector answer_vector(const KnowledgeState& state, WorldView world,
                           const Visibility& vis) {
  if (!state.contains(world)) throw ContractViolation("world is not in the knowledge state");
  return StateAnswers(state, vis).answers(world);
}

KnowledgeState filter_simultaneous(const KnowledgeState& state,
                                   const AnswerVector& announced,
                                   const Visibility& vis) {
  const auto n = state.agent_count();
  if (announced.size() != n) throw ContractViolation("answer vector length differs from N");
  StateAnswers answers(state, vis);
  std::vector<Value> kept;
  for (std::size_t i = 0; i < state.size(); ++i) {
    auto w = state.world(i);
    bool match = true;
    for (AgentId a = 0; a < n && match; ++a) match = answers.answer(a, w) == announced[a];
    if (match) kept.insert(kept.end(), w.begin(), w.end());
  }
  if (kept.empty()) throw ContractViolation("announcement eliminated every world");
  return KnowledgeState::from_sorted_flat(n, std::move(kept), state.generation() + 1);
}

KnowledgeState filter_turn(const KnowledgeState& state, AgentId agent, Answer answer,
                           const Visibility& vis) {
  const auto n = state.agent_count();
  if (agent >= n) throw ContractViolation("agent index out of range");
  OwnValueIndex idx(vis, agent, state.max_value());
  for (std::size_t i = 0; i < state.size(); ++i) idx.add(state.world(i));
  std::vector<Value> kept;
  for (std::size_t i = 0; i < state.size(); ++i) {
    auto w = state.world(i);
    if ((idx.knows(w) ? Answer::Yes : Answer::No) == answer)
      kept.insert(kept.end(), w.begin(), w.end());
  }
  if (kept.empty()) throw ContractViolation("announcement eliminated every world");
  return KnowledgeState::from_sorted_flat(n, std::move(kept), state.generation() + 1);
}

}  // namespace ck
