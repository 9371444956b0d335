#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ck/dsl.hpp"
#include "ck/error.hpp"
#include "ck/expect.hpp"
#include "ck/parallel.hpp"
#include "ck/serialize.hpp"
#include "ck/streaming.hpp"

namespace fs = std::filesystem;

namespace ck::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Universes above this size are run through the streaming engine.
constexpr std::size_t kStreamAbove = 5'000'000;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

// Prints a diagnostic for known error types and returns the exit code.
int report(const std::string& path, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SyntaxError& e) {
    err << format_diagnostic(path, e.span(), e.what()) << "\n";
  } catch (const SemanticError& e) {
    err << format_diagnostic(path, e.span(), e.what()) << "\n";
  } catch (const InputError& e) {
    err << e.what() << "\n";
  } catch (const GenerationError& e) {
    err << path << ": error: " << e.what() << "\n";
  } catch (const ContractViolation& e) {
    err << path << ": error: " << e.what() << "\n";
  }
  return kUsage;
}

bool large_universe(const Scenario& s) {
  UniverseConstraint c = s.constraint;
  if (needs_cap(c)) c = with_cap(c, *effective_cap(s));
  std::size_t n = 0;
  enumerate_worlds(c, s.agent_count(), [&](WorldView) { return ++n <= kStreamAbove; });
  return n > kStreamAbove;
}

Transcript run_any(const Scenario& s) {
  if (!large_universe(s)) return run(s);
  UniverseConstraint c = s.constraint;
  if (needs_cap(c)) c = with_cap(c, *effective_cap(s));
  return run_streamed(c, s.agent_count(), gen_visibility(s.sight, s.agent_count()), s.protocol, *s.actual);
}

void print_text(const Scenario& s, const Transcript& t, std::ostream& out) {
  const std::size_t n = s.agent_count();
  std::size_t width = 5;
  for (const auto& name : s.agent_names) width = std::max(width, name.size() + 1);
  out << "scenario " << s.name << " (" << (t.kind == Protocol::Kind::Simultaneous ? "simultaneous" : "circular")
      << ")\n";
  if (s.actual) out << "actual " << s.format_world(*s.actual) << "\n";
  std::vector<AgentId> cols(n);
  for (AgentId a = 0; a < n; ++a) cols[a] = t.kind == Protocol::Kind::Circular ? s.protocol.order[a] : a;
  out << std::left << std::setw(7) << "round";
  for (AgentId a : cols) out << std::setw(static_cast<int>(width)) << s.agent_names[a];
  out << "worlds\n";
  std::size_t r = 0;
  std::size_t size = 0;
  std::vector<std::string> row;
  auto flush = [&] {
    out << std::setw(7) << r;
    for (const auto& cell : row) out << std::setw(static_cast<int>(width)) << cell;
    out << size << "\n";
    row.clear();
  };
  for (const auto& e : t.events) {
    if (e.round != r) {
      if (r) flush();
      r = e.round;
    }
    row.push_back(to_string(e.answer));
    size = e.state_size;
  }
  if (r) flush();
  out << "eventual:";
  for (AgentId a = 0; a < n; ++a) {
    out << ' ' << s.agent_names[a] << '=' << to_string(t.eventual[a]);
    if (t.eventual[a].learns() && t.kind == Protocol::Kind::Circular) out << "@turn" << t.eventual[a].turn;
  }
  out << "\n";
  if (t.stabilized_at) out << "stabilized after round " << *t.stabilized_at << "\n";
  else out << "horizon reached\n";
}

int cmd_run(const std::string& path, const std::string& format, std::optional<std::size_t> max_rounds,
            std::ostream& out, std::ostream& err) {
  return report(path, err, [&] {
    Scenario s = load_scenario(path);
    if (!s.actual) {
      err << path << ": error: 'run' needs an actual world; use 'sweep' for families\n";
      return kUsage;
    }
    if (max_rounds) {
      if (*max_rounds < 1) {
        err << "--max-rounds must be at least 1\n";
        return kUsage;
      }
      s.protocol.max_rounds = *max_rounds;
    }
    const Transcript t = run_any(s);
    if (format == "json") out << serialize_transcript(t);
    else print_text(s, t, out);
    return kOk;
  });
}

struct FixtureResult {
  std::string text;
  int code = kOk;
};

FixtureResult verify_one(const fs::path& ck_path, bool slow) {
  FixtureResult r;
  std::ostringstream out, err;
  const std::string name = ck_path.stem().string();
  fs::path expect_path = ck_path;
  expect_path.replace_extension(".expect");
  r.code = report(ck_path.string(), err, [&] {
    const Scenario s = load_scenario(ck_path.string());
    if (!fs::exists(expect_path)) throw InputError(expect_path.string() + ": missing expectation file");
    Expectation e;
    try {
      e = parse_expected(read_file(expect_path.string()));
    } catch (const SyntaxError& x) {
      err << format_diagnostic(expect_path.string(), x.span(), x.what()) << "\n";
      return kUsage;
    }
    if (e.slow && !slow) {
      out << "SKIP " << name << " (needs --slow)\n";
      return kOk;
    }
    std::vector<std::string> failures;
    try {
      failures = verify(s, e);
    } catch (const SemanticError& x) {
      err << format_diagnostic(expect_path.string(), x.span(), x.what()) << "\n";
      return kUsage;
    }
    if (failures.empty()) {
      out << "PASS " << name << "\n";
      return kOk;
    }
    out << "FAIL " << name << "\n";
    for (const auto& f : failures) out << "  " << f << "\n";
    return kFailed;
  });
  if (r.code == kUsage) out << "ERROR " << name << "\n";
  r.text = out.str() + err.str();
  return r;
}

int cmd_verify(const std::string& dir, bool slow, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    err << dir << ": not a directory\n";
    return kUsage;
  }
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ck") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    err << dir << ": no .ck fixtures to verify\n";
    return kUsage;
  }
  std::vector<FixtureResult> results(files.size());
  parallel_for(files.size(), [&](std::size_t i) { results[i] = verify_one(files[i], slow); });
  std::size_t passed = 0, failed = 0, broken = 0;
  for (const auto& r : results) {
    out << r.text;
    if (r.code == kOk) ++passed;
    else if (r.code == kFailed) ++failed;
    else ++broken;
  }
  out << passed << " passed, " << failed << " failed, " << broken << " malformed\n";
  if (broken) return kUsage;
  return failed ? kFailed : kOk;
}

int cmd_sweep(const std::string& path, const std::string& metric, bool orbit, const std::string& format,
              std::ostream& out, std::ostream& err) {
  return report(path, err, [&] {
    if (metric != "learners") {
      err << "unknown metric '" << metric << "'\n";
      return kUsage;
    }
    const Scenario s = load_scenario(path);
    if (s.actual) {
      err << path << ": error: 'sweep' needs a family ('sweep' instead of 'actual')\n";
      return kUsage;
    }
    if (large_universe(s)) {
      err << path << ": error: family is too large to sweep without streaming\n";
      return kUsage;
    }
    SweepOptions opts;
    opts.orbit = orbit;
    const SweepReport r = sweep(s, opts);
    if (format == "json") {
      out << serialize_sweep(s, r);
      return kOk;
    }
    std::size_t width = 8;
    for (const auto& row : r.rows) width = std::max(width, s.format_world(row.world).size() + 2);
    out << std::left << std::setw(static_cast<int>(width)) << "world" << std::setw(10) << "learners"
        << (orbit ? "orbit  " : "") << "who\n";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const auto& row = r.rows[i];
      out << std::setw(static_cast<int>(width)) << s.format_world(row.world) << std::setw(10)
          << row.learners.size();
      if (orbit) out << std::setw(7) << row.orbit_size;
      std::string who;
      for (AgentId a : row.learners) who += (who.empty() ? "" : ",") + s.agent_names[a];
      out << (who.empty() ? "-" : who);
      if (!row.stable) out << "  [unstable]";
      else if (std::count(r.argmin.begin(), r.argmin.end(), i)) out << "  [min]";
      else if (std::count(r.argmax.begin(), r.argmax.end(), i)) out << "  [max]";
      out << "\n";
    }
    out << "min learners " << r.min_learners << " at " << r.argmin.size() << " configuration(s); max "
        << r.max_learners << "; unstable " << r.unstable << "\n";
    return kOk;
  });
}

int cmd_stability(const std::string& path, std::optional<Value> growth, std::ostream& out,
                  std::ostream& err) {
  return report(path, err, [&] {
    const Scenario s = load_scenario(path);
    if (!needs_cap(s.constraint)) {
      err << path << ": error: this family needs no cap\n";
      return kUsage;
    }
    if (!s.actual) {
      err << path << ": error: stability needs an actual world\n";
      return kUsage;
    }
    const Value cap = *effective_cap(s);
    const Value step = growth ? *growth : (s.bound ? s.bound->growth_step : 10);
    if (step < 1) {
      err << "--growth must be at least 1\n";
      return kUsage;
    }
    const auto r = stability_check(s, cap, cap + step);
    out << (r.pass ? "PASS" : "FAIL") << " cap " << r.cap << " vs " << r.bigger_cap << " over " << r.horizon
        << " rounds";
    if (!r.pass) out << ": " << r.detail;
    out << "\n";
    return r.pass ? kOk : kFailed;
  });
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checker for common-knowledge puzzles", "ck"};
  app.require_subcommand(1);

  std::string path, format = "text", metric = "learners";
  std::optional<std::size_t> max_rounds;
  std::optional<Value> growth;
  bool slow = false, orbit = false;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and print its transcript");
  run_cmd->add_option("file", path, "Scenario file (.ck)")->required();
  run_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_option("--max-rounds", max_rounds, "Override the protocol horizon");

  auto* verify_cmd = app.add_subcommand("verify", "Check every .ck/.expect pair in a directory");
  verify_cmd->add_option("dir", path, "Fixture directory")->required();
  verify_cmd->add_flag("--slow", slow, "Include fixtures marked slow");

  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate every actual world of a family");
  sweep_cmd->add_option("file", path, "Scenario file with 'sweep'")->required();
  sweep_cmd->add_option("--metric", metric, "Reduction metric (learners)");
  sweep_cmd->add_flag("--orbit", orbit, "Merge rotations of the circle");
  sweep_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* stab_cmd = app.add_subcommand("stability", "Compare a capped scenario at cap and cap + growth");
  stab_cmd->add_option("file", path, "Scenario file (.ck)")->required();
  stab_cmd->add_option("--growth", growth, "Cap increment (default: the scenario's growth step)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (run_cmd->parsed()) return cmd_run(path, format, max_rounds, out, err);
  if (verify_cmd->parsed()) return cmd_verify(path, slow, out, err);
  if (sweep_cmd->parsed()) return cmd_sweep(path, metric, orbit, format, out, err);
  return cmd_stability(path, growth, out, err);
}

}  // namespace ck::cli
