// phaseweb: scenario runner and verification suites.
// Exit codes: 0 ok, 1 property violation, 2 usage or validation error.

#include "phaseweb/hierarchy.hpp"
#include "phaseweb/ladder.hpp"
#include "phaseweb/report_json.hpp"
#include "phaseweb/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;
using namespace phaseweb;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

int cmd_run(const std::string& path, std::optional<Tick> ticks, std::optional<std::uint64_t> seed,
            const std::string& trace_path) {
  Scenario s = load_scenario(path);
  if (ticks) s.ticks = *ticks;
  if (seed) s.env.seed = *seed;
  validate(s);
  const RunResult r = run_scenario(s);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) throw ValidationError("--trace: cannot write '" + trace_path + "'");
    for (const auto& line : r.world.trace) out << line << '\n';
  }
  std::cout << to_json(r.summary).dump(2) << '\n';
  return kOk;
}

int cmd_verify_algebra(const std::vector<int>& ns) {
  json reports = json::array();
  bool ok = true;
  for (int n : ns) {
    const LadderReport ladder = verify_ladder(n);
    const IdentityReport ids = verify_identities(n);
    json j = to_json(ladder);
    j["identities"] = {{"rotation_cases", ids.rotation_cases},
                       {"sandwich_cases", ids.sandwich_cases},
                       {"bivector_square_cases", ids.bivector_square_cases},
                       {"boundary_identity_cases", ids.boundary_identity_cases},
                       {"nilpotent_cases", ids.nilpotent_cases},
                       {"failures", ids.failures}};
    ok = ok && ladder.ok() && ids.ok();
    reports.push_back(std::move(j));
  }
  std::cout << json{{"suite", "algebra"}, {"reports", reports}, {"ok", ok}}.dump(2) << '\n';
  return ok ? kOk : kViolation;
}

int cmd_verify_sync(const std::vector<std::string>& paths) {
  json reports = json::array();
  bool ok = true;
  for (const auto& p : paths) {
    const auto net = load_net(p);
    const auto verdict = verify_net(net);
    ok = ok && verdict.ok();
    reports.push_back(to_json(net, verdict));
  }
  std::cout << json{{"suite", "sync"}, {"reports", reports}, {"ok", ok}}.dump(2) << '\n';
  return ok ? kOk : kViolation;
}

int cmd_dump(const std::string& path, Tick at) {
  if (at < 0) throw ValidationError("--at-tick: must be >= 0");
  const Scenario s = load_scenario(path);
  const WorldState w = run_for(s, at);
  std::cout << hierarchy_dump(w).dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phaseweb: anticipatory engine runner and verifier"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario and print its summary");
  std::string scenario_path, trace_path;
  std::optional<Tick> ticks;
  std::optional<std::uint64_t> seed;
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--ticks", ticks, "tick budget override");
  run->add_option("--seed", seed, "environment seed override");
  run->add_option("--trace", trace_path, "write the event trace here");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->require_subcommand(1);
  auto* algebra = verify->add_subcommand("algebra", "ladder and identity checks over Cl(n)");
  std::vector<int> ns;
  algebra->add_option("--n", ns, "dimension(s); default 2..6")
      ->check(CLI::Range(kLadderMinDimension, kLadderMaxDimension));
  auto* sync_cmd = verify->add_subcommand("sync", "model-check semaphore nets");
  std::vector<std::string> nets;
  sync_cmd->add_option("nets", nets, "net JSON file(s)")->required()->check(CLI::ExistingFile);
  auto* all = verify->add_subcommand("all", "algebra for n = 2..6 plus the given nets");
  std::vector<std::string> all_nets;
  all->add_option("nets", all_nets, "net JSON file(s)")->check(CLI::ExistingFile);

  auto* dump = app.add_subcommand("dump-hierarchy", "print the hierarchy after some ticks");
  std::string dump_path;
  Tick at_tick = 0;
  dump->add_option("scenario", dump_path, "scenario JSON file")->required();
  dump->add_option("--at-tick", at_tick, "ticks to run first")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(scenario_path, ticks, seed, trace_path);
    if (*algebra) {
      if (ns.empty()) ns = {2, 3, 4, 5, 6};
      return cmd_verify_algebra(ns);
    }
    if (*sync_cmd) return cmd_verify_sync(nets);
    if (*all) {
      const int a = cmd_verify_algebra({2, 3, 4, 5, 6});
      const int s = all_nets.empty() ? kOk : cmd_verify_sync(all_nets);
      return std::max(a, s);
    }
    if (*dump) return cmd_dump(dump_path, at_tick);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolation;
  }
  return kUsage;
}
