#include "ck/universe.hpp"

#include <algorithm>
#include <cstdint>
#include <type_traits>

#include "ck/error.hpp"

namespace ck {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Visit = std::function<bool(WorldView)>;

// Depth-first lexicographic enumeration. A policy supplies, per depth, the
// admissible value range given the prefix, whether a candidate keeps the
// prefix viable, and whether a full world is accepted.
template <class Policy>
class Walker {
 public:
  Walker(Policy& policy, std::size_t agents, const Visit& visit)
      : policy_(policy), world_(agents), visit_(visit) {}

  void run() {
    if (world_.empty()) return;
    descend(0);
  }

 private:
  void descend(std::size_t depth) {
    const auto [lo, hi] = policy_.range(depth, world_);
    for (std::uint64_t v = lo; v <= hi && !stopped_; ++v) {
      world_[depth] = static_cast<Value>(v);
      if (!policy_.viable(depth, world_)) continue;
      if (depth + 1 == world_.size()) {
        if (policy_.accept(world_) && !visit_(world_)) stopped_ = true;
      } else {
        policy_.push(depth, world_);
        descend(depth + 1);
      }
    }
  }

  Policy& policy_;
  World world_;
  const Visit& visit_;
  bool stopped_ = false;
};

struct HatPolicy {
  Value color;
  std::size_t count;
  std::size_t palette;
  bool exact;
  std::size_t n;
  std::vector<std::size_t> matches;  // matches among positions [0, depth]

  std::pair<std::uint64_t, std::uint64_t> range(std::size_t, const World&) const {
    return {0, palette - 1};
  }
  std::size_t so_far(std::size_t depth, const World& w) const {
    return (depth == 0 ? 0 : matches[depth - 1]) + (w[depth] == color ? 1 : 0);
  }
  bool viable(std::size_t depth, const World& w) const {
    const auto m = so_far(depth, w);
    const auto remaining = n - depth - 1;
    if (m + remaining < count) return false;
    return !exact || m <= count;
  }
  void push(std::size_t depth, const World& w) { matches[depth] = so_far(depth, w); }
  bool accept(const World&) const { return true; }
};

struct MaxDiffPolicy {
  Value diff;
  Value cap;
  bool exact;
  bool consecutive;  // distinct values on top of the window constraint
  std::vector<Value> lo_so_far, hi_so_far;

  std::pair<std::uint64_t, std::uint64_t> range(std::size_t depth, const World&) const {
    if (depth == 0) return {0, cap};
    const Value lo = lo_so_far[depth - 1], hi = hi_so_far[depth - 1];
    const std::uint64_t a = hi >= diff ? hi - diff : 0;
    const std::uint64_t b = std::min<std::uint64_t>(cap, std::uint64_t{lo} + diff);
    return {a, b};
  }
  bool viable(std::size_t depth, const World& w) const {
    if (!consecutive) return true;
    for (std::size_t k = 0; k < depth; ++k)
      if (w[k] == w[depth]) return false;
    return true;
  }
  void push(std::size_t depth, const World& w) {
    const Value v = w[depth];
    lo_so_far[depth] = depth == 0 ? v : std::min(lo_so_far[depth - 1], v);
    hi_so_far[depth] = depth == 0 ? v : std::max(hi_so_far[depth - 1], v);
  }
  bool accept(const World& w) const {
    auto [mn, mx] = std::minmax_element(w.begin(), w.end());
    return exact ? *mx - *mn == diff : *mx - *mn <= diff;
  }
};

struct SumOrProductPolicy {
  std::uint64_t target;
  std::size_t n;
  std::vector<std::uint64_t> sums, products;

  std::uint64_t sum_before(std::size_t d) const { return d == 0 ? 0 : sums[d - 1]; }
  std::uint64_t product_before(std::size_t d) const { return d == 0 ? 1 : products[d - 1]; }

  std::pair<std::uint64_t, std::uint64_t> range(std::size_t depth, const World&) const {
    const auto remaining_after = n - depth - 1;
    const auto s = sum_before(depth);
    std::uint64_t hi = 0;
    if (s + 1 + remaining_after <= target) hi = target - s - remaining_after;
    hi = std::max(hi, target / product_before(depth));
    return {1, hi};
  }
  bool sum_ok(std::size_t depth, Value v) const {
    return sum_before(depth) + v + (n - depth - 1) <= target;
  }
  bool product_ok(std::size_t depth, Value v) const {
    const auto p = product_before(depth) * v;
    return p <= target && target % p == 0;
  }
  bool viable(std::size_t depth, const World& w) const {
    return sum_ok(depth, w[depth]) || product_ok(depth, w[depth]);
  }
  void push(std::size_t depth, const World& w) {
    sums[depth] = sum_before(depth) + w[depth];
    // Saturate once the product path is dead; target + 1 never divides target.
    products[depth] = product_ok(depth, w[depth]) ? product_before(depth) * w[depth] : target + 1;
  }
  bool accept(const World& w) const {
    std::uint64_t s = 0, p = 1;
    for (Value v : w) {
      s += v;
      p = std::min<std::uint64_t>(p * v, target + 1);
    }
    return s == target || p == target;
  }
};

struct SumInSetPolicy {
  std::vector<Value> sums_allowed;  // sorted
  std::size_t n;
  std::vector<std::uint64_t> sums;

  std::uint64_t sum_before(std::size_t d) const { return d == 0 ? 0 : sums[d - 1]; }
  std::pair<std::uint64_t, std::uint64_t> range(std::size_t depth, const World&) const {
    const std::uint64_t top = sums_allowed.back();
    const auto s = sum_before(depth);
    const auto need = s + (n - depth - 1);
    if (need + 1 > top) return {1, 0};
    if (depth + 1 == n) {
      // Last position: only values landing on an allowed sum.
      const std::uint64_t low = sums_allowed.front() > s ? sums_allowed.front() - s : 1;
      return {std::max<std::uint64_t>(low, 1), top - s};
    }
    return {1, top - need};
  }
  bool viable(std::size_t depth, const World& w) const {
    if (depth + 1 != n) return true;
    const auto total = sum_before(depth) + w[depth];
    return std::binary_search(sums_allowed.begin(), sums_allowed.end(), total);
  }
  void push(std::size_t depth, const World& w) { sums[depth] = sum_before(depth) + w[depth]; }
  bool accept(const World&) const { return true; }
};

template <class Policy>
void walk(Policy policy, std::size_t agents, const Visit& visit) {
  Walker<Policy> w(policy, agents, visit);
  w.run();
}

void require_cap(const std::optional<Value>& cap, const char* family) {
  if (!cap) throw GenerationError(std::string(family) + " universe is infinite; a cap is required");
}

}  // namespace

std::optional<Value> cap_step(const UniverseConstraint& c, std::size_t agents) {
  return std::visit(overloaded{
                        [](const MaxDiff& m) -> std::optional<Value> { return std::max<Value>(m.diff, 1); },
                        [&](const Consecutive&) -> std::optional<Value> {
                          return static_cast<Value>(agents > 1 ? agents - 1 : 1);
                        },
                        [](const auto&) -> std::optional<Value> { return std::nullopt; },
                    },
                    c);
}

bool needs_cap(const UniverseConstraint& c) {
  return std::holds_alternative<MaxDiff>(c) || std::holds_alternative<Consecutive>(c);
}

std::optional<Value> cap_of(const UniverseConstraint& c) {
  if (auto m = std::get_if<MaxDiff>(&c)) return m->cap;
  if (auto k = std::get_if<Consecutive>(&c)) return k->cap;
  return std::nullopt;
}

UniverseConstraint with_cap(const UniverseConstraint& c, Value cap) {
  UniverseConstraint out = c;
  if (auto m = std::get_if<MaxDiff>(&out)) m->cap = cap;
  else if (auto k = std::get_if<Consecutive>(&out)) k->cap = cap;
  else throw GenerationError("constraint family does not take a cap");
  return out;
}

bool is_symmetric(const UniverseConstraint&) {
  // Every family here is defined by a symmetric predicate (counts, sums,
  // products, min/max).
  return true;
}

bool satisfies(const UniverseConstraint& c, std::size_t agents, WorldView w) {
  if (w.size() != agents) return false;
  return std::visit(
      overloaded{
          [&](const HatsAtLeast& h) {
            for (Value v : w)
              if (v >= h.palette) return false;
            return static_cast<std::size_t>(std::count(w.begin(), w.end(), h.color)) >= h.count;
          },
          [&](const HatsExactly& h) {
            for (Value v : w)
              if (v >= h.palette) return false;
            return static_cast<std::size_t>(std::count(w.begin(), w.end(), h.color)) == h.count;
          },
          [&](const MaxDiff& m) {
            auto [mn, mx] = std::minmax_element(w.begin(), w.end());
            if (m.cap && *mx > *m.cap) return false;
            return m.exact ? *mx - *mn == m.diff : *mx - *mn <= m.diff;
          },
          [&](const Consecutive& k) {
            std::vector<Value> s(w.begin(), w.end());
            std::sort(s.begin(), s.end());
            if (k.cap && s.back() > *k.cap) return false;
            for (std::size_t i = 1; i < s.size(); ++i)
              if (s[i] != s[i - 1] + 1) return false;
            return true;
          },
          [&](const SumOrProduct& sp) {
            std::uint64_t s = 0, p = 1;
            for (Value v : w) {
              if (v == 0) return false;
              s += v;
              p = std::min<std::uint64_t>(p * v, std::uint64_t{sp.target} + 1);
            }
            return s == sp.target || p == sp.target;
          },
          [&](const SumInSet& si) {
            std::uint64_t s = 0;
            for (Value v : w) {
              if (v == 0) return false;
              s += v;
            }
            return std::find(si.sums.begin(), si.sums.end(), s) != si.sums.end();
          },
          [&](const ZeroOne&) {
            bool zero = false;
            for (Value v : w) {
              if (v > 1) return false;
              zero = zero || v == 0;
            }
            return zero;
          },
      },
      c);
}

void enumerate_worlds(const UniverseConstraint& c, std::size_t agents, const Visit& visit) {
  if (agents == 0) return;
  std::visit(overloaded{
                 [&](const HatsAtLeast& h) {
                   if (h.palette == 0) throw GenerationError("empty color palette");
                   walk(HatPolicy{h.color, h.count, h.palette, false, agents,
                                  std::vector<std::size_t>(agents)},
                        agents, visit);
                 },
                 [&](const HatsExactly& h) {
                   if (h.palette == 0) throw GenerationError("empty color palette");
                   walk(HatPolicy{h.color, h.count, h.palette, true, agents,
                                  std::vector<std::size_t>(agents)},
                        agents, visit);
                 },
                 [&](const MaxDiff& m) {
                   require_cap(m.cap, "max-difference");
                   walk(MaxDiffPolicy{m.diff, *m.cap, m.exact, false, std::vector<Value>(agents),
                                      std::vector<Value>(agents)},
                        agents, visit);
                 },
                 [&](const Consecutive& k) {
                   require_cap(k.cap, "consecutive-numbers");
                   walk(MaxDiffPolicy{static_cast<Value>(agents - 1), *k.cap, true, true,
                                      std::vector<Value>(agents), std::vector<Value>(agents)},
                        agents, visit);
                 },
                 [&](const SumOrProduct& sp) {
                   if (sp.target == 0) throw GenerationError("sum-or-product target must be positive");
                   walk(SumOrProductPolicy{sp.target, agents, std::vector<std::uint64_t>(agents),
                                           std::vector<std::uint64_t>(agents)},
                        agents, visit);
                 },
                 [&](const SumInSet& si) {
                   if (si.sums.empty()) throw GenerationError("empty sum set");
                   std::vector<Value> sorted = si.sums;
                   std::sort(sorted.begin(), sorted.end());
                   sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
                   walk(SumInSetPolicy{sorted, agents, std::vector<std::uint64_t>(agents)}, agents,
                        visit);
                 },
                 [&](const ZeroOne&) {
                   walk(HatPolicy{0, 1, 2, false, agents, std::vector<std::size_t>(agents)}, agents,
                        visit);
                 },
             },
             c);
}

KnowledgeState gen_universe(const UniverseConstraint& c, std::size_t agents) {
  if (agents < 2) throw GenerationError("at least two agents are required");
  std::vector<Value> flat;
  enumerate_worlds(c, agents, [&](WorldView w) {
    flat.insert(flat.end(), w.begin(), w.end());
    return true;
  });
  if (flat.empty()) throw GenerationError("constraint admits no world");
  return KnowledgeState::from_sorted_flat(agents, std::move(flat));
}

void stream_worlds(const UniverseConstraint& c, std::size_t agents,
                   const std::vector<WorldPredicate>& predicates,
                   const std::function<void(WorldView)>& visit) {
  enumerate_worlds(c, agents, [&](WorldView w) {
    for (const auto& p : predicates)
      if (!p(w)) return true;
    visit(w);
    return true;
  });
}

std::size_t count_worlds(const UniverseConstraint& c, std::size_t agents,
                         const std::vector<WorldPredicate>& predicates) {
  std::size_t n = 0;
  stream_worlds(c, agents, predicates, [&](WorldView) { ++n; });
  return n;
}

Visibility gen_visibility(const SightModel& model, std::size_t n) {
  if (n < 2) throw GenerationError("at least two agents are required");
  std::vector<std::vector<AgentId>> sees(n);
  auto all_but = [&](AgentId i, std::initializer_list<AgentId> excluded) {
    std::vector<AgentId> s;
    for (AgentId j = 0; j < n; ++j)
      if (j != i && std::find(excluded.begin(), excluded.end(), j) == excluded.end())
        s.push_back(j);
    return s;
  };
  std::visit(overloaded{
                 [&](const FullSight&) {
                   for (AgentId i = 0; i < n; ++i) sees[i] = all_but(i, {});
                 },
                 [&](const BlindSight& b) {
                   for (AgentId a : b.blind)
                     if (a >= n) throw GenerationError("blind agent index out of range");
                   for (AgentId i = 0; i < n; ++i) {
                     const bool blind = std::find(b.blind.begin(), b.blind.end(), i) != b.blind.end();
                     if (!blind) sees[i] = all_but(i, {});
                   }
                 },
                 [&](const NearCircle&) {
                   if (n < 3) throw GenerationError("near-sighted circle needs at least 3 agents");
                   for (AgentId i = 0; i < n; ++i) sees[i] = {(i + n - 1) % n, (i + 1) % n};
                 },
                 [&](const FarCircle&) {
                   if (n < 3) throw GenerationError("far-sighted circle needs at least 3 agents");
                   for (AgentId i = 0; i < n; ++i) sees[i] = all_but(i, {(i + n - 1) % n, (i + 1) % n});
                 },
                 [&](const NearLine&) {
                   for (AgentId i = 0; i < n; ++i) {
                     if (i > 0) sees[i].push_back(i - 1);
                     if (i + 1 < n) sees[i].push_back(i + 1);
                   }
                 },
             },
             model);
  return Visibility(std::move(sees));
}

Value default_cap(Value actual_max, std::size_t max_rounds, Value step) {
  return actual_max + static_cast<Value>((max_rounds + 2) * step);
}

}  // namespace ck
