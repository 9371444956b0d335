#pragma once

// Reference model written straight from the definitions: a state is a plain
// list of worlds, and an agent knows its value when every world agreeing with
// what it sees agrees on its own value. Quadratic and slow on purpose; the
// engine is checked against it.

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

namespace brute {

using World = std::vector<unsigned>;
using Sees = std::vector<std::vector<std::size_t>>;  // sees[i]: agents i observes

inline std::vector<World> tuples(std::size_t n, unsigned lo, unsigned hi,
                                 const std::function<bool(const World&)>& keep) {
  std::vector<World> out;
  World w(n, lo);
  while (true) {
    if (keep(w)) out.push_back(w);
    std::size_t i = n;
    while (i > 0 && w[i - 1] == hi) w[--i] = lo;
    if (i == 0) break;
    ++w[i - 1];
  }
  return out;
}

inline Sees full(std::size_t n) {
  Sees s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s[i].push_back(j);
  return s;
}

inline Sees ring(std::size_t n, bool near) {
  Sees s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t d = std::min((i + n - j) % n, (j + n - i) % n);
      if ((d == 1) == near) s[i].push_back(j);
    }
  return s;
}

inline Sees line(std::size_t n) {
  Sees s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) s[i].push_back(i - 1);
    if (i + 1 < n) s[i].push_back(i + 1);
  }
  return s;
}

inline bool knows(std::size_t agent, const World& w, const std::vector<World>& state, const Sees& sees) {
  for (const auto& u : state) {
    bool same_view = true;
    for (auto j : sees[agent]) same_view = same_view && u[j] == w[j];
    if (same_view && u[agent] != w[agent]) return false;
  }
  return true;
}

struct Result {
  std::vector<std::vector<bool>> said;  // [round][speaking position]
  std::vector<std::optional<std::size_t>> first_yes_round;
  std::vector<std::optional<std::size_t>> first_yes_turn;
  bool fixpoint = false;
};

// order empty: simultaneous. Stops after the first round that removes no world.
inline Result play(std::vector<World> state, const Sees& sees, const World& actual,
                   const std::vector<std::size_t>& order, std::size_t max_rounds) {
  const std::size_t n = actual.size();
  Result r;
  r.first_yes_round.resize(n);
  r.first_yes_turn.resize(n);
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    const std::size_t before = state.size();
    std::vector<bool> said;
    if (order.empty()) {
      std::vector<bool> announced(n);
      for (std::size_t a = 0; a < n; ++a) announced[a] = knows(a, actual, state, sees);
      std::vector<World> kept;
      for (const auto& w : state) {
        bool same = true;
        for (std::size_t a = 0; a < n && same; ++a) same = knows(a, w, state, sees) == announced[a];
        if (same) kept.push_back(w);
      }
      state = kept;
      said = announced;
      for (std::size_t a = 0; a < n; ++a)
        if (announced[a] && !r.first_yes_round[a]) {
          r.first_yes_round[a] = round;
          r.first_yes_turn[a] = round;
        }
    } else {
      for (std::size_t pos = 0; pos < n; ++pos) {
        const auto a = order[pos];
        const bool k = knows(a, actual, state, sees);
        std::vector<World> kept;
        for (const auto& w : state)
          if (knows(a, w, state, sees) == k) kept.push_back(w);
        state = kept;
        said.push_back(k);
        if (k && !r.first_yes_round[a]) {
          r.first_yes_round[a] = round;
          r.first_yes_turn[a] = (round - 1) * n + pos + 1;
        }
      }
    }
    r.said.push_back(said);
    if (state.size() == before) {
      r.fixpoint = true;
      break;
    }
  }
  return r;
}

}  // namespace brute
