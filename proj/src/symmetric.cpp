#include "ck/symmetric.hpp"

#include <algorithm>

#include "ck/error.hpp"
#include "ck/parallel.hpp"
#include "ck/streaming.hpp"

namespace ck {

namespace {

// Sorted worlds only, with a cheap prefix prune per family.
void enumerate_multisets(const UniverseConstraint& c, std::size_t agents, Value top,
                         std::vector<World>& out) {
  World cur;
  std::uint64_t sum = 0, product = 1;
  auto viable = [&](Value x) {
    if (cur.empty()) return true;
    if (auto m = std::get_if<MaxDiff>(&c)) return x - cur.front() <= m->diff;
    if (std::holds_alternative<Consecutive>(c)) return x - cur.front() + 1 <= agents;
    if (auto s = std::get_if<SumOrProduct>(&c)) return sum + x <= s->target || product * x <= s->target;
    if (auto s = std::get_if<SumInSet>(&c))
      return sum + x * (agents - cur.size()) <= *std::max_element(s->sums.begin(), s->sums.end());
    return true;
  };
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == agents) {
      if (satisfies(c, agents, cur)) out.push_back(cur);
      return;
    }
    for (Value x = cur.empty() ? 0 : cur.back(); x <= top; ++x) {
      if (!viable(x)) break;
      cur.push_back(x);
      sum += x;
      const auto saved = product;
      product = std::min<std::uint64_t>(product * x, std::uint64_t{1} << 40);
      self(self);
      product = saved;
      sum -= x;
      cur.pop_back();
    }
  };
  rec(rec);
}

}  // namespace

SymmetricGame::SymmetricGame(const UniverseConstraint& constraint, std::size_t agents,
                             std::size_t horizon)
    : agents_(agents), horizon_(horizon) {
  if (!is_symmetric(constraint)) throw ContractViolation("universe is not permutation invariant");
  const Value top = value_bound(constraint, agents);
  enumerate_multisets(constraint, agents, top, multisets_);
  if (multisets_.empty()) throw GenerationError("constraint admits no world");

  distinct_.resize(multisets_.size());
  hist_.resize(multisets_.size());
  for (std::size_t s = 0; s < multisets_.size(); ++s) {
    index_.emplace(multisets_[s], s);
    auto& d = distinct_[s];
    d = multisets_[s];
    d.erase(std::unique(d.begin(), d.end()), d.end());
    hist_[s].assign(d.size(), {});
  }

  // Replace one v by x and keep the result sorted.
  auto swap_in = [](const World& base, Value v, Value x) {
    World out = base;
    out.erase(std::find(out.begin(), out.end(), v));
    out.insert(std::upper_bound(out.begin(), out.end(), x), x);
    return out;
  };

  for (std::size_t round = 0; round < horizon; ++round) {
    std::vector<std::vector<Answer>> next(multisets_.size());
    parallel_for(multisets_.size(), [&](std::size_t s) {
      const auto& d = distinct_[s];
      next[s].resize(d.size());
      for (std::size_t k = 0; k < d.size(); ++k) {
        const Value v = d[k];
        const auto& mine = hist_[s][k];
        bool alone = true;
        for (Value x = 0; x <= top && alone; ++x) {
          if (x == v) continue;
          auto it = index_.find(swap_in(multisets_[s], v, x));
          if (it == index_.end()) continue;
          const std::size_t t = it->second;
          if (answers(t, x) != mine) continue;
          bool same = true;
          for (std::size_t j = 0; j < d.size() && same; ++j) {
            if (j == k) continue;
            same = answers(t, d[j]) == hist_[s][j];
          }
          // The remaining holders of v itself (if v repeats) must also match.
          if (same && std::count(multisets_[s].begin(), multisets_[s].end(), v) > 1)
            same = answers(t, v) == mine;
          if (same) alone = false;
        }
        next[s][k] = alone ? Answer::Yes : Answer::No;
      }
    });
    for (std::size_t s = 0; s < multisets_.size(); ++s)
      for (std::size_t k = 0; k < distinct_[s].size(); ++k) hist_[s][k].push_back(next[s][k]);
  }
}

std::optional<std::size_t> SymmetricGame::find(WorldView world) const {
  World key(world.begin(), world.end());
  std::sort(key.begin(), key.end());
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SymmetricGame::slot(std::size_t s, Value v) const {
  const auto& d = distinct_[s];
  auto it = std::lower_bound(d.begin(), d.end(), v);
  if (it == d.end() || *it != v) throw ContractViolation("value not present in multiset");
  return static_cast<std::size_t>(it - d.begin());
}

const std::vector<Answer>& SymmetricGame::answers(std::size_t s, Value v) const {
  return hist_[s][slot(s, v)];
}

Transcript SymmetricGame::transcript(WorldView actual) const {
  const auto s = find(actual);
  if (!s) throw ContractViolation("actual world is not in the universe");
  Transcript t;
  t.kind = Protocol::Kind::Simultaneous;
  t.agents = agents_;
  t.eventual.assign(agents_, Eventual::unknown());
  for (std::size_t r = 0; r < horizon_; ++r) {
    for (AgentId a = 0; a < agents_; ++a) {
      const Answer ans = answers(*s, actual[a])[r];
      t.events.push_back({r + 1, r + 1, a, ans, 0});
      if (ans == Answer::Yes && !t.eventual[a].learns()) t.eventual[a] = Eventual::learns(r + 1, r + 1);
    }
  }
  return t;
}

std::vector<std::size_t> SymmetricGame::first_yes_counts(std::size_t s) const {
  std::vector<std::size_t> counts(horizon_, 0);
  const auto& m = multisets_[s];
  for (std::size_t k = 0; k < distinct_[s].size(); ++k) {
    const auto& h = hist_[s][k];
    auto it = std::find(h.begin(), h.end(), Answer::Yes);
    if (it == h.end()) continue;
    counts[static_cast<std::size_t>(it - h.begin())] +=
        static_cast<std::size_t>(std::count(m.begin(), m.end(), distinct_[s][k]));
  }
  return counts;
}

}  // namespace ck
