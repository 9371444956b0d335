#include "ck/oracles.hpp"

#include <algorithm>
#include <sstream>

#include "ck/error.hpp"

namespace ck {

std::string to_string(const Expected& e) {
  switch (e.kind) {
    case Expected::Kind::Learns: {
      std::string s = e.round ? "round" + std::to_string(e.round) : "learns";
      if (e.turn) s += " turn" + std::to_string(*e.turn);
      return s;
    }
    case Expected::Kind::Never:
      return "never";
    case Expected::Kind::Any:
      break;
  }
  return "any";
}

std::string to_string(const Mismatch& m) {
  return m.field + ": expected " + m.expected + ", got " + m.actual;
}

namespace {

std::string describe(const Eventual& e) {
  if (e.learns()) return "round" + std::to_string(e.round) + " turn" + std::to_string(e.turn);
  return to_string(e);
}

std::string describe(const std::vector<AnswerVector>& rows) {
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r) out += "; ";
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      if (k) out += ' ';
      out += to_string(rows[r][k]);
    }
  }
  return out + "]";
}

std::string describe(const std::vector<AgentId>& agents) {
  std::string out = "{";
  for (std::size_t k = 0; k < agents.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(agents[k]);
  }
  return out + "}";
}

// "NO,NO;YES,YES" -> rows of answers.
std::vector<AnswerVector> pattern(const std::string& text) {
  std::vector<AnswerVector> rows(1);
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    rows.back().push_back(word == "YES" ? Answer::Yes : Answer::No);
    word.clear();
  };
  for (char c : text) {
    if (c == ',') flush();
    else if (c == ';') {
      flush();
      rows.emplace_back();
    } else if (c != ' ') word += c;
  }
  flush();
  return rows;
}

// Per-agent outcomes implied by a compressed pattern (agent order = speaking
// order): a final NO means the agent never learns.
std::vector<Expected> outcomes_from_pattern(const std::vector<AnswerVector>& rows,
                                            Protocol::Kind kind) {
  const std::size_t n = rows.front().size();
  std::vector<Expected> out(n, Expected::never());
  for (AgentId a = 0; a < n; ++a) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r][a] != Answer::Yes) continue;
      const std::size_t turn = kind == Protocol::Kind::Simultaneous ? r + 1 : r * n + a + 1;
      out[a] = Expected::learns(r + 1, turn);
      break;
    }
  }
  return out;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

std::vector<Mismatch> cross_check(const OraclePrediction& oracle, const Transcript& t) {
  std::vector<Mismatch> out;
  if (!oracle.agents.empty()) {
    if (oracle.agents.size() != t.eventual.size()) {
      out.push_back({"agent count", std::to_string(oracle.agents.size()),
                     std::to_string(t.eventual.size())});
      return out;
    }
    for (AgentId a = 0; a < oracle.agents.size(); ++a) {
      const auto& e = oracle.agents[a];
      const auto& got = t.eventual[a];
      bool ok = true;
      switch (e.kind) {
        case Expected::Kind::Learns:
          ok = got.learns() && (!e.round || e.round == got.round) && (!e.turn || *e.turn == got.turn);
          break;
        case Expected::Kind::Never:
          ok = got.status == Eventual::Status::Never;
          break;
        case Expected::Kind::Any:
          break;
      }
      if (!ok) out.push_back({"agent " + std::to_string(a), to_string(e), describe(got)});
    }
  }
  if (oracle.round1_yes) {
    std::vector<AgentId> yes;
    for (const auto& ev : t.events)
      if (ev.round == 1 && ev.answer == Answer::Yes) yes.push_back(ev.agent);
    std::sort(yes.begin(), yes.end());
    if (yes != *oracle.round1_yes)
      out.push_back({"round-1 YES set", describe(*oracle.round1_yes), describe(yes)});
  }
  if (oracle.pattern) {
    const auto got = compressed_pattern(t);
    if (got != *oracle.pattern) out.push_back({"pattern", describe(*oracle.pattern), describe(got)});
  }
  if (oracle.all_yes_first_round) {
    std::size_t yes = 0, seen = 0;
    for (const auto& ev : t.events)
      if (ev.round == 1) {
        ++seen;
        yes += ev.answer == Answer::Yes;
      }
    const bool all = seen == t.agents && yes == seen;
    if (all != *oracle.all_yes_first_round)
      out.push_back({"all YES in round 1", *oracle.all_yes_first_round ? "yes" : "no",
                     all ? "yes" : "no"});
  }
  return out;
}

OraclePrediction predict_hats_simultaneous(WorldView hats, Value red) {
  const auto r = static_cast<std::size_t>(std::count(hats.begin(), hats.end(), red));
  if (r == 0) throw ContractViolation("at least one red hat is required");
  OraclePrediction p;
  p.label = "reds round " + std::to_string(r);
  for (Value h : hats)
    p.agents.push_back(h == red ? Expected::learns(r, r) : Expected::learns(r + 1, r + 1));
  return p;
}

OraclePrediction predict_hats_circular(WorldView hats, const std::vector<AgentId>& order,
                                       Value red) {
  if (order.size() != hats.size()) throw ContractViolation("order must list every agent");
  std::optional<std::size_t> last;
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    if (hats[order[pos]] == red) last = pos;
  if (!last) throw ContractViolation("at least one red hat is required");
  OraclePrediction p;
  p.label = "last red speaks at position " + std::to_string(*last + 1);
  p.agents.assign(hats.size(), Expected::never());
  for (std::size_t pos = *last; pos < order.size(); ++pos)
    p.agents[order[pos]] = Expected::learns(1, pos + 1);
  return p;
}

OraclePrediction predict_maxdiff_two(Value alice, Value bob, Value diff, Protocol::Kind kind) {
  if (diff < 1) throw ContractViolation("difference must be positive");
  if ((alice > bob ? alice - bob : bob - alice) != diff)
    throw ContractViolation("numbers must differ by exactly the announced difference");
  const std::size_t m = std::max(alice, bob);
  const std::size_t d = diff;
  const bool alice_max = alice > bob;
  OraclePrediction p;
  p.agents.resize(2);
  if (kind == Protocol::Kind::Circular) {
    if (alice_max) {
      const std::size_t k = ceil_div(m + 1, 2 * d);
      p.label = "circular, Alice max, k=" + std::to_string(k);
      p.agents[0] = Expected::learns(k, 2 * k - 1);
      p.agents[1] = Expected::learns(k, 2 * k);
    } else {
      const std::size_t k = ceil_div(m + 1 - d, 2 * d);
      p.label = "circular, Bob max, k=" + std::to_string(k);
      p.agents[1] = Expected::learns(k, 2 * k);
      p.agents[0] = Expected::learns(k + 1, 2 * k + 1);
    }
  } else {
    // M in [(k-1)D, kD-1]
    const std::size_t k = m / d + 1;
    p.label = "simultaneous, k=" + std::to_string(k);
    p.agents[alice_max ? 0 : 1] = Expected::learns(k, k);
    p.agents[alice_max ? 1 : 0] = Expected::learns(k + 1, k + 1);
  }
  return p;
}

OraclePrediction predict_consecutive(WorldView numbers, const Protocol& protocol) {
  const std::size_t n = numbers.size();
  if (n < 3) throw ContractViolation("consecutive games need at least three players");
  World sorted(numbers.begin(), numbers.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < n; ++i)
    if (sorted[i] != sorted[i - 1] + 1) throw ContractViolation("numbers are not consecutive");
  const Value lo = sorted.front(), hi = sorted.back();
  const Value d = static_cast<Value>(n - 1);

  OraclePrediction p;
  p.agents.resize(n);
  if (protocol.kind == Protocol::Kind::Simultaneous) {
    p.label = hi == d ? "Case 1" : "Case 2";
    for (AgentId a = 0; a < n; ++a) {
      const Value v = numbers[a];
      if (v != lo && v != hi) p.agents[a] = Expected::learns(1, 1);
      else if (hi == d) p.agents[a] = Expected::learns(v == hi ? 1 : 2);
      else p.agents[a] = Expected::learns(2, 2);
    }
    return p;
  }

  const auto& order = protocol.order;
  const AgentId first = order.at(0);
  const Value v0 = numbers[first];
  if (n == 3) {
    const bool extreme = v0 == lo || v0 == hi;
    const bool knows = !extreme || (v0 == hi && lo == 0);
    for (std::size_t pos = 0; pos < n; ++pos) p.agents[order[pos]] = Expected::learns(1, pos + 1);
    if (!knows) {
      p.label = "first speaker says NO";
      p.agents[first] = Expected::never();
    } else if (v0 != 2) {
      p.label = "first speaker says YES without a 2";
    } else {
      p.label = "first speaker says YES holding 2";
      for (std::size_t pos = 1; pos < n; ++pos)
        if (numbers[order[pos]] != 1) p.agents[order[pos]] = Expected::never();
    }
    return p;
  }
  if (n != 4) throw ContractViolation("circular consecutive predictions cover three or four players");
  auto pos_of = [&](Value v) {
    for (std::size_t pos = 0; pos < n; ++pos)
      if (numbers[order[pos]] == v) return pos;
    return n;
  };
  const bool all_yes = (lo == 0 && v0 == 1) || (lo == 0 && v0 == 3 && pos_of(1) < pos_of(0)) ||
                       (lo == 2 && v0 == 3 && pos_of(4) < pos_of(5));
  p.label = all_yes ? "four players, all YES" : "four players, not all YES";
  p.all_yes_first_round = all_yes;
  for (std::size_t pos = 0; pos < n; ++pos)
    p.agents[order[pos]] = all_yes ? Expected::learns(1, pos + 1) : Expected::any();
  return p;
}

OraclePrediction predict_d1_multiset(WorldView numbers) {
  const auto [lo_it, hi_it] = std::minmax_element(numbers.begin(), numbers.end());
  const Value lo = *lo_it, hi = *hi_it;
  if (hi != lo + 1) throw ContractViolation("values must span exactly two consecutive numbers");
  const std::size_t n = numbers.size();
  const auto count_max = static_cast<std::size_t>(std::count(numbers.begin(), numbers.end(), hi));
  const std::size_t round = lo * (n - 1) + count_max;
  OraclePrediction p;
  p.label = "m=" + std::to_string(lo) + " P=" + std::to_string(count_max);
  for (Value v : numbers)
    p.agents.push_back(v == hi ? Expected::learns(round, round) : Expected::learns(round + 1, round + 1));
  return p;
}

std::vector<int> sop_two_bullets(Value a, Value b, Value m, Protocol::Kind kind) {
  auto div = [&](Value x) { return m % x == 0; };
  const bool both_mid = a > 1 && b > 1 && m > 4 && div(a) && div(b) && 2 * a != m && 2 * b != m;
  std::vector<bool> hit;
  if (kind == Protocol::Kind::Simultaneous) {
    hit = {
        (a == 1 && b == 1 && m == 1) || (!div(a) && !div(b)) || (m == 4 && a == 2 && b == 2),
        a == 1 && m > 2,
        b == 1 && m > 2,
        (a == 1 && b == 1 && m == 2) || both_mid,
        (a == 1 && b == 2 && m == 2) || (a > 1 && m > 4 && div(a) && !div(b)),
        (b == 1 && a == 2 && m == 2) || (b > 1 && m > 4 && div(b) && !div(a)),
        m > 2 && m != 4 && 2 * a == m && 2 * b == m,
        m > 4 && 2 * a == m && b == 2,
        m > 4 && a == 2 && 2 * b == m,
    };
  } else {
    hit = {
        (a == 1 && b == 1 && m == 1) || (m == 4 && a == 2 && b == 2) ||
            (a == 1 && b == 2 && m == 2) || (a > 1 && !div(b)),
        a == 1 && m > 2,
        (b == 1 && m >= 2) || (b > 1 && div(b) && !div(a)) || both_mid,
        m > 4 && 2 * a == m,
        m > 4 && a == 2 && 2 * b == m,
    };
  }
  std::vector<int> out;
  for (std::size_t k = 0; k < hit.size(); ++k)
    if (hit[k]) out.push_back(static_cast<int>(k + 1));
  return out;
}

OraclePrediction predict_sop_two(Value a, Value b, Value m, Protocol::Kind kind) {
  if (a < 1 || b < 1 || (a + b != m && a * b != m))
    throw ContractViolation("numbers are inconsistent with the announcement");
  static const char* const simultaneous[] = {
      "YES,YES",        "YES,NO",         "NO,YES",
      "NO,NO;YES,YES",  "YES,NO;YES,YES", "NO,YES;YES,YES",
      "NO,NO;NO,NO;YES,YES", "NO,NO;YES,NO;YES,YES", "NO,NO;NO,YES;YES,YES",
  };
  static const char* const circular[] = {
      "YES,YES", "YES,NO", "NO,YES", "NO,NO;YES,NO", "NO,YES;YES,YES",
  };
  const auto bullets = sop_two_bullets(a, b, m, kind);
  OraclePrediction p;
  if (bullets.size() != 1) {
    p.label = bullets.empty() ? "unclassified" : "ambiguous";
    return p;
  }
  const int k = bullets.front();
  const char* text = kind == Protocol::Kind::Simultaneous ? simultaneous[k - 1] : circular[k - 1];
  p.label = std::string(kind == Protocol::Kind::Simultaneous ? "simultaneous" : "circular") +
            " bullet " + std::to_string(k) + ": " + text;
  p.pattern = pattern(text);
  p.agents = outcomes_from_pattern(*p.pattern, kind);
  return p;
}

OraclePrediction predict_sop_prime(WorldView numbers, Value m, Protocol::Kind kind) {
  if (!is_prime(m)) throw ContractViolation("announced number must be prime");
  const std::size_t n = numbers.size();
  std::uint64_t sum = 0, product = 1;
  for (Value v : numbers) {
    sum += v;
    product = std::min<std::uint64_t>(product * v, std::uint64_t{1} << 40);
  }
  if (sum != m && product != m) throw ContractViolation("numbers are inconsistent with the announcement");

  std::vector<AgentId> non_ones;
  for (AgentId a = 0; a < n; ++a)
    if (numbers[a] != 1) non_ones.push_back(a);

  const bool circular = kind == Protocol::Kind::Circular;
  auto first_turn = [&](AgentId a) {
    return circular ? Expected::learns(1, a + 1) : Expected::learns(1, 1);
  };
  OraclePrediction p;
  p.agents.resize(n);
  if (non_ones.size() >= 2) {
    p.label = "at least two non-ones";
    for (AgentId a = 0; a < n; ++a) p.agents[a] = first_turn(a);
  } else if (non_ones.size() == 1) {
    const AgentId h = non_ones.front();
    for (AgentId a = 0; a < n; ++a) p.agents[a] = first_turn(a);
    if (n > m) {
      p.label = "exactly one non-one, it must be the product";
    } else {
      p.label = "exactly one non-one";
      p.agents[h] = Expected::never();
    }
  } else {
    p.label = "all ones";
    for (AgentId a = 0; a < n; ++a)
      p.agents[a] = circular ? (a == 0 ? Expected::never() : first_turn(a)) : Expected::learns(2, 2);
  }
  return p;
}

OraclePrediction predict_sop_semiprime(WorldView numbers, Value m) {
  const auto f = semiprime_factors(m);
  if (!f) throw ContractViolation("announced number must be a product of two distinct primes");
  const auto [pf, qf] = *f;
  const std::size_t n = numbers.size();
  if (n < 3) throw ContractViolation("semiprime analysis needs at least three players");
  std::uint64_t sum = 0, product = 1;
  for (Value v : numbers) {
    sum += v;
    product = std::min<std::uint64_t>(product * v, std::uint64_t{1} << 40);
  }
  if (sum != m && product != m) throw ContractViolation("numbers are inconsistent with the announcement");

  auto proper = [&](Value v) { return v == 1 || v == pf || v == qf; };
  std::vector<AgentId> outside;
  for (AgentId a = 0; a < n; ++a)
    if (!proper(numbers[a])) outside.push_back(a);
  const auto cp = static_cast<std::size_t>(std::count(numbers.begin(), numbers.end(), pf));
  const auto cq = static_cast<std::size_t>(std::count(numbers.begin(), numbers.end(), qf));

  OraclePrediction p;
  p.agents.assign(n, Expected::learns(1, 1));
  auto all_round = [&](std::size_t r) { p.agents.assign(n, Expected::learns(r, r)); };

  const auto whole = std::find(numbers.begin(), numbers.end(), m);
  if (whole != numbers.end()) {
    // M itself with ones: not one of the listed cases. The holder hesitates
    // between M and M - N + 1; only an alternative made of proper divisors
    // changes what the others say in round 1.
    const auto h = static_cast<AgentId>(whole - numbers.begin());
    p.label = "M with ones";
    if (n > m) return p;
    const Value alt = m - static_cast<Value>(n) + 1;
    p.agents[h] = proper(alt) ? Expected::learns(2, 2) : Expected::never();
    return p;
  }
  if (outside.size() >= 2) {
    p.label = "Case 1";
    return p;
  }
  if (outside.size() == 1) {
    const AgentId h = outside.front();
    if (cp >= 2 || cq >= 2) {
      p.label = "Case 2, repeated prime seen";
    } else if (cp == 0 && cq == 0) {
      p.label = "Subcase 2a";
      p.agents[h] = Expected::never();
    } else if (cp + cq == 1) {
      p.label = "Subcase 2b";
      p.agents[h] = Expected::learns(2, 2);
    } else {
      p.label = "Subcase 2c";
      p.agents[h] = Expected::learns(2, 2);
    }
    return p;
  }
  if (cp >= 3 || cq >= 3 || (cp >= 2 && cq >= 2)) {
    p.label = "Case 3, repeated primes";
  } else if ((cp == 2 && cq == 1) || (cp == 1 && cq == 2)) {
    p.label = "Subcase 3a";
    const Value twice = cp == 2 ? pf : qf;
    for (AgentId a = 0; a < n; ++a)
      if (numbers[a] == twice) p.agents[a] = Expected::learns(2, 2);
  } else if ((cp == 2 && cq == 0) || (cp == 0 && cq == 2)) {
    p.label = "Subcase 3b";
    const Value twice = cp == 2 ? pf : qf;
    for (AgentId a = 0; a < n; ++a)
      if (numbers[a] == twice) p.agents[a] = Expected::learns(2, 2);
  } else if (cp == 1 && cq == 1) {
    p.label = "Subcase 3c";
    if (n < static_cast<std::size_t>(pf * qf - pf - qf + 2)) all_round(2);
  } else if (cp + cq == 1) {
    p.label = "Subcase 3d";
    all_round(2);
  } else {
    p.label = "Subcase 3e";
    all_round(2);
  }
  p.round1_yes.emplace();
  for (AgentId a = 0; a < n; ++a)
    if (p.agents[a].round == 1) p.round1_yes->push_back(a);
  return p;
}

OraclePrediction predict_ns_circular(std::size_t agents, std::size_t r) {
  if (agents < 3 || r < 1 || r > agents) throw ContractViolation("seat out of range");
  const std::size_t n = agents;
  std::vector<bool> learns(n + 1, false);  // 1-based seats
  OraclePrediction p;
  if (n == 3) {
    p.label = "N=3";
    std::fill(learns.begin() + 1, learns.end(), true);
  } else if (r == 2 || r == n) {
    p.label = "r=2 or r=N";
    std::fill(learns.begin() + 1, learns.end(), true);
    learns[2] = learns[n] = false;
  } else if (r % 2 == 1 && n % 2 == 0) {
    p.label = "r odd, N even";
    for (std::size_t s = 2; s <= n; s += 2) learns[s] = true;
  } else if (r % 2 == 0) {
    p.label = "r even, interior";
    std::fill(learns.begin() + 1, learns.end(), true);
  } else {
    p.label = "r odd, N odd";
    for (std::size_t s = 2; s <= n; s += 2) learns[s] = true;
    learns[n] = true;
  }
  for (std::size_t s = 1; s <= n; ++s)
    p.agents.push_back(learns[s] ? Expected::learns() : Expected::never());
  return p;
}

bool is_prime(Value n) {
  if (n < 2) return false;
  for (Value d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::optional<std::pair<Value, Value>> semiprime_factors(Value n) {
  for (Value d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    const Value e = n / d;
    if (e != d && is_prime(d) && is_prime(e)) return std::pair{d, e};
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace ck
