#include "ck/streaming.hpp"

#include <algorithm>
#include <memory>

#include "ck/error.hpp"

namespace ck {

Value value_bound(const UniverseConstraint& c, std::size_t agents) {
  if (auto h = std::get_if<HatsAtLeast>(&c)) return static_cast<Value>(h->palette - 1);
  if (auto h = std::get_if<HatsExactly>(&c)) return static_cast<Value>(h->palette - 1);
  if (auto s = std::get_if<SumOrProduct>(&c)) return s->target;
  if (auto s = std::get_if<SumInSet>(&c)) {
    const Value top = s->sums.empty() ? 0 : *std::max_element(s->sums.begin(), s->sums.end());
    return top >= agents ? top - static_cast<Value>(agents - 1) : 1;
  }
  if (std::holds_alternative<ZeroOne>(c)) return 1;
  if (auto cap = cap_of(c)) return *cap;
  throw GenerationError("unbounded family needs a cap");
}

namespace {

// Knowledge state that is either a predicate chain over the generator or an
// explicit world set.
class StreamState {
 public:
  StreamState(const UniverseConstraint& c, std::size_t agents, Value bound)
      : constraint_(c), agents_(agents), bound_(bound) {}

  bool materialized() const { return materialized_; }
  std::size_t size() const { return size_; }

  template <class Fn>
  void for_each(Fn&& fn) const {
    if (materialized_) {
      for (std::size_t i = 0; i < explicit_.size(); ++i) fn(explicit_.world(i));
    } else {
      stream_worlds(constraint_, agents_, chain_, [&](WorldView w) { fn(w); });
    }
  }

  void init(std::size_t threshold) {
    size_ = count_worlds(constraint_, agents_, chain_);
    if (size_ < threshold) materialize();
  }

  // Narrows the state to the worlds passing `keep`.
  void narrow(WorldPredicate keep, std::size_t threshold) {
    if (materialized_) {
      std::vector<Value> flat;
      for (std::size_t i = 0; i < explicit_.size(); ++i) {
        auto w = explicit_.world(i);
        if (keep(w)) flat.insert(flat.end(), w.begin(), w.end());
      }
      explicit_ = KnowledgeState::from_sorted_flat(agents_, std::move(flat));
      size_ = explicit_.size();
      return;
    }
    chain_.push_back(std::move(keep));
    std::vector<Value> flat;
    std::size_t n = 0;
    stream_worlds(constraint_, agents_, chain_, [&](WorldView w) {
      if (++n < threshold) flat.insert(flat.end(), w.begin(), w.end());
    });
    size_ = n;
    if (n < threshold) {
      explicit_ = KnowledgeState::from_sorted_flat(agents_, std::move(flat));
      materialized_ = true;
      chain_.clear();
    }
  }

  Value bound() const { return bound_; }

 private:
  void materialize() {
    std::vector<Value> flat;
    flat.reserve(size_ * agents_);
    for_each([&](WorldView w) { flat.insert(flat.end(), w.begin(), w.end()); });
    explicit_ = KnowledgeState::from_sorted_flat(agents_, std::move(flat));
    materialized_ = true;
    chain_.clear();
  }

  UniverseConstraint constraint_;
  std::size_t agents_;
  Value bound_;
  std::vector<WorldPredicate> chain_;
  KnowledgeState explicit_;
  bool materialized_ = false;
  std::size_t size_ = 0;
};

}  // namespace

Transcript run_streamed(const UniverseConstraint& constraint, std::size_t agents,
                        const Visibility& sight, const Protocol& protocol, WorldView actual,
                        const StreamOptions& options) {
  protocol.validate(agents);
  if (sight.agent_count() != agents) throw ContractViolation("visibility/agent count mismatch");
  if (!satisfies(constraint, agents, actual))
    throw ContractViolation("actual world is not in the universe");
  if (needs_cap(constraint) && !cap_of(constraint))
    throw GenerationError("unbounded family needs a cap");

  const std::size_t threshold = std::max<std::size_t>(options.materialize_below, 1);
  StreamState state(constraint, agents, value_bound(constraint, agents));
  state.init(threshold);

  Transcript t;
  t.kind = protocol.kind;
  t.agents = agents;
  std::vector<Eventual> first(agents, Eventual::unknown());
  const World actual_copy(actual.begin(), actual.end());

  auto speak = [&](std::size_t round, std::size_t turn, const std::vector<AgentId>& speakers) {
    // Pass 1: one observation index per speaker over the current state.
    auto indexes = std::make_shared<std::vector<OwnValueIndex>>();
    indexes->reserve(speakers.size());
    for (AgentId a : speakers) indexes->emplace_back(sight, a, state.bound());
    state.for_each([&](WorldView w) {
      for (auto& idx : *indexes) idx.add(w);
    });
    std::vector<bool> said(speakers.size());
    for (std::size_t k = 0; k < speakers.size(); ++k) said[k] = (*indexes)[k].knows(actual_copy);
    // Pass 2: keep the worlds that would have produced the same answers.
    state.narrow(
        [indexes, said](WorldView w) {
          for (std::size_t k = 0; k < said.size(); ++k)
            if ((*indexes)[k].knows(w) != said[k]) return false;
          return true;
        },
        threshold);
    if (options.progress) options.progress(turn, state.size());
    for (std::size_t k = 0; k < speakers.size(); ++k) {
      const Answer ans = said[k] ? Answer::Yes : Answer::No;
      t.events.push_back({round, turn, speakers[k], ans, state.size()});
      if (ans == Answer::Yes && !first[speakers[k]].learns())
        first[speakers[k]] = Eventual::learns(round, turn);
    }
  };

  std::vector<AgentId> everyone(agents);
  for (AgentId a = 0; a < agents; ++a) everyone[a] = a;

  for (std::size_t round = 1; round <= protocol.max_rounds; ++round) {
    const auto before = state.size();
    if (protocol.kind == Protocol::Kind::Simultaneous) {
      speak(round, round, everyone);
    } else {
      for (std::size_t pos = 0; pos < agents; ++pos)
        speak(round, (round - 1) * agents + pos + 1, {protocol.order[pos]});
    }
    if (state.size() == before) {
      t.stabilized_at = round;
      break;
    }
  }

  t.eventual.resize(agents);
  for (AgentId a = 0; a < agents; ++a)
    t.eventual[a] = first[a].learns() ? first[a]
                                      : (t.stabilized_at ? Eventual::never() : Eventual::unknown());
  return t;
}

}  // namespace ck
