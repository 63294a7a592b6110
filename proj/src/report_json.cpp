#include "phaseweb/report_json.hpp"

#include <fstream>

namespace phaseweb {

using nlohmann::json;

json to_json(const LadderReport& r) {
  json exact = json::array();
  for (bool b : r.exact) exact.push_back(b);
  json twisted = json::array();
  for (bool b : r.twisted) twisted.push_back(b);
  return {{"n", r.n},
          {"dims", r.dims},
          {"boundary_ranks", r.boundary_ranks},
          {"coboundary_ranks", r.coboundary_ranks},
          {"kernel_dims", r.kernel_dims},
          {"boundary_squares_to_zero", r.boundary_squares_to_zero},
          {"coboundary_squares_to_zero", r.coboundary_squares_to_zero},
          {"transpose_pairing", r.transpose_pairing},
          {"exact", exact},
          {"twisted", twisted},
          {"ok", r.ok()}};
}

namespace {

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(where + "." + key + ": missing");
  return j.at(key);
}

int orientation(const json& j, const std::string& where) {
  if (!j.is_number_integer() || (j.get<int>() != 1 && j.get<int>() != -1))
    throw std::invalid_argument(where + ": orientation must be +1 or -1");
  return j.get<int>();
}

std::optional<bool> flag(const json& j, const std::string& key) {
  if (!j.contains(key)) return std::nullopt;
  if (!j[key].is_boolean()) throw std::invalid_argument("expect." + key + ": expected a boolean");
  return j[key].get<bool>();
}

}  // namespace

sync::SyncNet parse_net(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("net: expected a JSON object");
  sync::SyncNet net;
  net.name = j.value("name", "unnamed");
  for (const auto& s : field(j, "semaphores", "net")) {
    const std::string init = field(s, "initial", "semaphores[]").get<std::string>();
    if (init != "open" && init != "closed")
      throw std::invalid_argument("semaphores[].initial: expected \"open\" or \"closed\"");
    net.semaphores.push_back({field(s, "id", "semaphores[]").get<std::string>(),
                              init == "open" ? sync::SemState::open : sync::SemState::closed});
  }
  for (const auto& p : field(j, "processes", "net")) {
    sync::ProcessDef def;
    def.id = field(p, "id", "processes[]").get<std::string>();
    for (const auto& step : field(p, "program", "processes[" + def.id + "]"))
      def.program.push_back(sync::parse_step(step.get<std::string>()));
    if (p.contains("sticks"))
      for (const auto& pc : p["sticks"]) def.sticks.insert(pc.get<std::size_t>());
    net.processes.push_back(std::move(def));
  }
  if (j.contains("variables"))
    for (const auto& v : j["variables"])
      net.variables.push_back({field(v, "id", "variables[]").get<std::string>(),
                               orientation(field(v, "initial", "variables[]"), "variables[].initial")});
  if (j.contains("declared_sticks")) {
    if (!j["declared_sticks"].is_number_integer() || j["declared_sticks"].get<int>() < 0)
      throw std::invalid_argument("declared_sticks: expected an integer >= 0");
    net.declared_sticks = j["declared_sticks"].get<int>();
  }
  if (j.contains("target")) {
    sync::VariableAssignment t;
    for (const auto& [k, v] : j["target"].items()) t[k] = orientation(v, "target." + k);
    net.target = t;
  }
  if (j.contains("expect")) {
    const auto& e = j["expect"];
    net.expect.target_reachable = flag(e, "target_reachable");
    net.expect.target_decays = flag(e, "target_decays");
    net.expect.deadlock_free = flag(e, "deadlock_free");
  }
  net.validate();
  return net;
}

sync::SyncNet load_net(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("net: cannot open '" + path.string() + "'");
  try {
    return parse_net(json::parse(in));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("net: ") + e.what());
  }
}

SyncVerdict verify_net(const sync::SyncNet& net) {
  SyncVerdict v;
  v.reach = sync::enumerate_reachable(net);
  if (v.reach.truncated) v.violations.push_back("state bound exceeded");
  if (net.declared_sticks) {
    v.sticks = sync::check_stick_invariant(net, v.reach);
    if (!v.sticks->holds)
      v.violations.push_back("stick count " + std::to_string(v.sticks->observed) + " != declared " +
                             std::to_string(*net.declared_sticks));
  }
  const auto& e = net.expect;
  if (e.target_reachable && *e.target_reachable != v.reach.target_reachable())
    v.violations.push_back(std::string("target ") + (v.reach.target_reachable() ? "reachable" : "unreachable"));
  if (e.target_decays && *e.target_decays != !v.reach.decay_states.empty())
    v.violations.push_back(std::string("decay states ") + (v.reach.decay_states.empty() ? "absent" : "present"));
  if (e.deadlock_free && *e.deadlock_free != v.reach.deadlocks.empty())
    v.violations.push_back(std::string("deadlocks ") + (v.reach.deadlocks.empty() ? "absent" : "present"));
  return v;
}

namespace {

json trace_json(const sync::SyncNet& net, const sync::ReachabilityReport& r, std::size_t state) {
  json out = json::array();
  for (const auto& s : r.trace_to(net, state)) out.push_back({s.process, s.step});
  return out;
}

}  // namespace

json to_json(const sync::SyncNet& net, const SyncVerdict& v) {
  json co = json::array();
  for (const auto& c : v.reach.co_occurrences) co.push_back(c);
  json j{{"net", net.name},
         {"reachable_states", v.reach.states.size()},
         {"truncated", v.reach.truncated},
         {"deadlocks", v.reach.deadlocks.size()},
         {"co_occurrences", co},
         {"violations", v.violations},
         {"ok", v.ok()}};
  if (net.target) {
    j["target"] = *net.target;
    j["target_reachable"] = v.reach.target_reachable();
    if (v.reach.target_witness) j["target_witness"] = trace_json(net, v.reach, *v.reach.target_witness);
    j["decay_states"] = v.reach.decay_states.size();
    if (!v.reach.decay_states.empty()) {
      const auto d = v.reach.decay_states.front();
      j["decay_witness"] = {{"state", sync::describe(net, v.reach.states[d])}, {"trace", trace_json(net, v.reach, d)}};
    }
  }
  if (v.sticks) {
    j["sticks"] = {{"declared", *net.declared_sticks}, {"holds", v.sticks->holds}};
    if (v.sticks->violating_state) {
      const auto s = *v.sticks->violating_state;
      j["sticks"]["violating_state"] = sync::describe(net, v.reach.states[s]);
      j["sticks"]["observed"] = v.sticks->observed;
      j["sticks"]["trace"] = trace_json(net, v.reach, s);
    }
  }
  return j;
}

}  // namespace phaseweb
