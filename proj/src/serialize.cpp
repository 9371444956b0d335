#include "ck/serialize.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace ck {

using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const char* kind_name(Protocol::Kind k) {
  return k == Protocol::Kind::Simultaneous ? "simultaneous" : "circular";
}

json eventual_json(const Eventual& e, AgentId agent) {
  json j;
  j["agent"] = agent;
  switch (e.status) {
    case Eventual::Status::Learns:
      j["status"] = "learns";
      j["round"] = e.round;
      j["turn"] = e.turn;
      break;
    case Eventual::Status::Never:
      j["status"] = "never";
      break;
    case Eventual::Status::Unknown:
      j["status"] = "unknown";
      break;
  }
  return j;
}

json transcript_json(const Transcript& t) {
  json j;
  j["format"] = 1;
  j["kind"] = kind_name(t.kind);
  j["agents"] = t.agents;
  j["events"] = json::array();
  for (const auto& e : t.events) {
    j["events"].push_back({{"agent", e.agent},
                           {"answer", to_string(e.answer)},
                           {"round", e.round},
                           {"state_size", e.state_size},
                           {"turn", e.turn}});
  }
  j["eventual"] = json::array();
  for (AgentId a = 0; a < t.eventual.size(); ++a) j["eventual"].push_back(eventual_json(t.eventual[a], a));
  if (t.stabilized_at) j["stabilized_at"] = *t.stabilized_at;
  else j["stabilized_at"] = "horizon";
  j["digest"] = hex_digest(t.digest());
  return j;
}

}  // namespace

std::string hex_digest(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

std::string serialize_transcript(const Transcript& t) { return dump(transcript_json(t)); }

Transcript parse_transcript(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(e.what());
  }
  try {
    if (j.at("format").get<int>() != 1) throw std::invalid_argument("unsupported format");
    Transcript t;
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "simultaneous" && kind != "circular") throw std::invalid_argument("bad kind");
    t.kind = kind == "simultaneous" ? Protocol::Kind::Simultaneous : Protocol::Kind::Circular;
    t.agents = j.at("agents").get<std::size_t>();
    for (const auto& e : j.at("events")) {
      const auto answer = e.at("answer").get<std::string>();
      if (answer != "YES" && answer != "NO") throw std::invalid_argument("bad answer");
      t.events.push_back({e.at("round").get<std::size_t>(), e.at("turn").get<std::size_t>(),
                          e.at("agent").get<AgentId>(), answer == "YES" ? Answer::Yes : Answer::No,
                          e.at("state_size").get<std::size_t>()});
    }
    for (const auto& e : j.at("eventual")) {
      const auto status = e.at("status").get<std::string>();
      if (status == "learns")
        t.eventual.push_back(Eventual::learns(e.at("round").get<std::size_t>(), e.at("turn").get<std::size_t>()));
      else if (status == "never") t.eventual.push_back(Eventual::never());
      else if (status == "unknown") t.eventual.push_back(Eventual::unknown());
      else throw std::invalid_argument("bad status");
    }
    const auto& st = j.at("stabilized_at");
    if (st.is_number_unsigned()) t.stabilized_at = st.get<std::size_t>();
    else if (st != "horizon") throw std::invalid_argument("bad stabilized_at");
    if (j.at("digest").get<std::string>() != hex_digest(t.digest()))
      throw std::invalid_argument("digest does not match events");
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(e.what());
  }
}

std::string serialize_sweep(const Scenario& family, const SweepReport& report) {
  json j;
  j["format"] = 1;
  j["scenario"] = family.name;
  j["orbit"] = report.orbit;
  j["min_learners"] = report.min_learners;
  j["max_learners"] = report.max_learners;
  j["unstable"] = report.unstable;
  auto worlds = [&](const std::vector<std::size_t>& rows) {
    json a = json::array();
    for (auto i : rows) a.push_back(family.format_world(report.rows[i].world));
    return a;
  };
  j["argmin"] = worlds(report.argmin);
  j["argmax"] = worlds(report.argmax);
  j["rows"] = json::array();
  for (const auto& row : report.rows) {
    json learners = json::array();
    for (AgentId a : row.learners) learners.push_back(family.agent_names.at(a));
    j["rows"].push_back({{"world", family.format_world(row.world)},
                         {"learners", learners},
                         {"learner_count", row.learners.size()},
                         {"digest", hex_digest(row.digest)},
                         {"stable", row.stable},
                         {"orbit_size", row.orbit_size}});
  }
  return dump(j);
}

std::string serialize_mismatches(const std::string& label, const std::vector<Mismatch>& mismatches) {
  json j;
  j["format"] = 1;
  j["label"] = label;
  j["mismatches"] = json::array();
  for (const auto& m : mismatches)
    j["mismatches"].push_back({{"field", m.field}, {"expected", m.expected}, {"actual", m.actual}});
  return dump(j);
}

}  // namespace ck
