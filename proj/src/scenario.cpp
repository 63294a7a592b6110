#include "phaseweb/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace phaseweb {

using nlohmann::json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(field + ": missing");
  return j.at(key);
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) throw ValidationError(field + ": expected a string");
  return j.get<std::string>();
}

std::int64_t as_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ValidationError(field + ": expected an integer");
  return j.get<std::int64_t>();
}

Polarity as_polarity(const json& j, const std::string& field) {
  const auto v = as_int(j, field);
  if (v != 1 && v != -1) throw ValidationError(field + ": orientation must be +1 or -1");
  return v == 1 ? Polarity::positive : Polarity::negative;
}

const json& as_array(const json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected an array");
  return j;
}

std::vector<SensorId> as_ids(const json& j, const std::string& field) {
  std::vector<SensorId> out;
  for (std::size_t i = 0; i < as_array(j, field).size(); ++i)
    out.push_back(as_string(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

Assignment as_assignment(const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field + ": expected an object of sensor orientations");
  Assignment out;
  for (const auto& [k, v] : j.items()) out[k] = as_polarity(v, field + "." + k);
  return out;
}

EnvSpec parse_env(const json& j) {
  if (!j.is_object()) throw ValidationError("env: expected an object");
  EnvSpec env;
  try {
    env.kind = env_kind_from_string(as_string(require(j, "kind", "env.kind"), "env.kind"));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  env.sensors = as_ids(require(j, "sensors", "env.sensors"), "env.sensors");
  if (j.contains("initial")) env.initial = as_assignment(j["initial"], "env.initial");
  if (j.contains("script")) {
    const auto& script = as_array(j["script"], "env.script");
    for (std::size_t i = 0; i < script.size(); ++i) {
      const std::string f = "env.script[" + std::to_string(i) + "]";
      env.script.push_back({as_int(require(script[i], "tick", f + ".tick"), f + ".tick"),
                            as_string(require(script[i], "sensor", f + ".sensor"), f + ".sensor"),
                            as_polarity(require(script[i], "value", f + ".value"), f + ".value")});
    }
  }
  if (j.contains("seed")) env.seed = static_cast<std::uint64_t>(as_int(j["seed"], "env.seed"));
  if (j.contains("noise")) {
    if (!j["noise"].is_number()) throw ValidationError("env.noise: expected a number");
    env.noise = j["noise"].get<double>();
  }
  return env;
}

}  // namespace

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw ValidationError("scenario: expected a JSON object");
  Scenario s;
  s.name = j.contains("name") ? as_string(j["name"], "name") : "unnamed";
  s.env = parse_env(require(j, "env", "env"));
  s.sensors = j.contains("sensors") ? as_ids(j["sensors"], "sensors") : s.env.sensors;
  if (j.contains("effectors")) s.effectors = as_ids(j["effectors"], "effectors");
  if (j.contains("hierarchy")) {
    const auto& h = as_array(j["hierarchy"], "hierarchy");
    for (std::size_t i = 0; i < h.size(); ++i) {
      const std::string f = "hierarchy[" + std::to_string(i) + "]";
      HierarchyConfig c;
      try {
        c.type = layer_type_from_string(as_string(require(h[i], "type", f + ".type"), f + ".type"));
      } catch (const ValidationError&) {
        throw;
      } catch (const std::invalid_argument&) {
        throw ValidationError(f + ".type: unknown hierarchy type");
      }
      if (h[i].contains("levels")) c.levels = static_cast<int>(as_int(h[i]["levels"], f + ".levels"));
      if (h[i].contains("pancake")) {
        if (!h[i]["pancake"].is_boolean()) throw ValidationError(f + ".pancake: expected a boolean");
        c.pancake = h[i]["pancake"].get<bool>();
      }
      s.hierarchy.push_back(c);
    }
  }
  if (j.contains("goals")) {
    const auto& g = as_array(j["goals"], "goals");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::string f = "goals[" + std::to_string(i) + "]";
      s.goals.push_back({as_string(require(g[i], "sensor", f + ".sensor"), f + ".sensor"),
                         as_polarity(require(g[i], "from", f + ".from"), f + ".from"),
                         as_polarity(require(g[i], "to", f + ".to"), f + ".to")});
    }
  }
  if (j.contains("observations")) {
    const auto& o = as_array(j["observations"], "observations");
    for (std::size_t i = 0; i < o.size(); ++i)
      s.observations.push_back(as_assignment(o[i], "observations[" + std::to_string(i) + "]"));
  }
  s.ticks = as_int(require(j, "ticks", "ticks"), "ticks");
  if (j.contains("arity")) {
    const auto a = as_int(j["arity"], "arity");
    if (a < 2) throw ValidationError("arity: must be >= 2");
    s.engine.arity = static_cast<std::size_t>(a);
  }
  if (j.contains("goal_ttl")) s.engine.goal_ttl = as_int(j["goal_ttl"], "goal_ttl");
  if (j.contains("history_window")) {
    const auto w = as_int(j["history_window"], "history_window");
    if (w < 0) throw ValidationError("history_window: must be >= 0");
    s.engine.history_window = static_cast<std::size_t>(w);
  }
  if (j.contains("seed")) s.env.seed = static_cast<std::uint64_t>(as_int(j["seed"], "seed"));
  if (j.contains("setpoint")) {
    const auto& sp = j["setpoint"];
    Setpoint p;
    p.sensor = as_string(require(sp, "sensor", "setpoint.sensor"), "setpoint.sensor");
    p.value = as_polarity(require(sp, "value", "setpoint.value"), "setpoint.value");
    if (sp.contains("within")) p.within = as_int(sp["within"], "setpoint.within");
    s.setpoint = p;
  }
  if (j.contains("stop_on_quiescence")) {
    if (!j["stop_on_quiescence"].is_boolean()) throw ValidationError("stop_on_quiescence: expected a boolean");
    s.stop_on_quiescence = j["stop_on_quiescence"].get<bool>();
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario: cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

void validate(const Scenario& s) {
  if (s.ticks < 1) throw ValidationError("ticks: budget must be >= 1");
  try {
    s.env.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  std::set<SensorId> declared;
  for (const auto& id : s.sensors)
    if (!declared.insert(id).second) throw ValidationError("sensors: duplicate sensor id '" + id + "'");
  for (const auto& id : s.env.sensors)
    if (!declared.contains(id)) throw ValidationError("sensors: environment sensor '" + id + "' is not declared");
  for (const auto& id : s.sensors)
    if (std::find(s.env.sensors.begin(), s.env.sensors.end(), id) == s.env.sensors.end())
      throw ValidationError("sensors: '" + id + "' has no environment sensor behind it");
  if (s.effectors) {
    std::set<SensorId> seen;
    const auto available = s.env.effectors();
    for (const auto& e : *s.effectors) {
      if (!seen.insert(e).second) throw ValidationError("effectors: duplicate effector id '" + e + "'");
      if (std::find(available.begin(), available.end(), e) == available.end())
        throw ValidationError("effectors: '" + e + "' is not an effector of the environment");
    }
  }
  for (std::size_t i = 0; i < s.hierarchy.size(); ++i)
    if (s.hierarchy[i].levels < 1)
      throw ValidationError("hierarchy[" + std::to_string(i) + "].levels: must be >= 1");
  for (std::size_t i = 0; i < s.goals.size(); ++i) {
    const auto& g = s.goals[i];
    const std::string f = "goals[" + std::to_string(i) + "]";
    if (!declared.contains(g.sensor)) throw ValidationError(f + ".sensor: undeclared sensor '" + g.sensor + "'");
    if (g.from == g.to) throw ValidationError(f + ": from and to must differ");
  }
  for (std::size_t i = 0; i < s.observations.size(); ++i) {
    if (s.observations[i].empty()) throw ValidationError("observations[" + std::to_string(i) + "]: empty");
    for (const auto& [k, v] : s.observations[i])
      if (!declared.contains(k))
        throw ValidationError("observations[" + std::to_string(i) + "]: undeclared sensor '" + k + "'");
  }
  if (s.engine.arity < 2) throw ValidationError("arity: must be >= 2");
  if (s.engine.goal_ttl < 1) throw ValidationError("goal_ttl: must be >= 1");
  if (s.setpoint) {
    if (!declared.contains(s.setpoint->sensor))
      throw ValidationError("setpoint.sensor: undeclared sensor '" + s.setpoint->sensor + "'");
    if (s.setpoint->within < 1) throw ValidationError("setpoint.within: must be >= 1");
  }
}

WorldState make_world(const Scenario& s) {
  validate(s);
  WorldState world = make_world(s.env, s.engine, s.hierarchy, s.effectors);
  pretrain(world, s.observations);
  for (const auto& g : s.goals) issue_goal(world, g, "scenario");
  return world;
}

namespace {

class SetpointTracker {
 public:
  explicit SetpointTracker(Setpoint p) : p_(std::move(p)) {}

  void observe(Tick t, Polarity v) {
    if (v == p_.value) {
      if (open_) {
        const Tick took = t - start_;
        report_.recovery_ticks.push_back(took);
        report_.max_recovery_ticks = std::max(report_.max_recovery_ticks, took);
        ++report_.restored;
        open_ = false;
      }
      held_ = true;
    } else if (held_ && !open_) {
      open_ = true;
      start_ = t;
      report_.perturbed_at.push_back(t);
      ++report_.perturbations;
    }
  }

  SetpointReport finish() const {
    SetpointReport r = report_;
    r.all_restored_within = r.restored == r.perturbations && r.max_recovery_ticks <= p_.within;
    return r;
  }

 private:
  Setpoint p_;
  SetpointReport report_;
  bool held_ = false;
  bool open_ = false;
  Tick start_ = 0;
};

}  // namespace

RunResult run_scenario(const Scenario& s) {
  RunResult r{make_world(s), {}};
  std::optional<SetpointTracker> tracker;
  if (s.setpoint) tracker.emplace(*s.setpoint);
  bool quiet = false;
  while (r.world.tick < s.ticks) {
    const Tick t = r.world.tick;
    quiet = tick(r.world);
    if (tracker) tracker->observe(t, *r.world.value(s.setpoint->sensor));
    if (quiet && s.stop_on_quiescence && !r.world.env.has_pending_events()) break;
  }
  r.summary.ticks = r.world.tick;
  r.summary.actions_learned = r.world.stats.actions_learned;
  r.summary.goals_satisfied = r.world.stats.goals_satisfied;
  r.summary.goals_expired = r.world.stats.goals_expired;
  r.summary.quiescent = quiet;
  if (tracker) r.summary.setpoint = tracker->finish();
  return r;
}

WorldState run_for(const Scenario& s, Tick ticks) {
  WorldState world = make_world(s);
  while (world.tick < ticks) tick(world);
  return world;
}

json to_json(const RunSummary& s) {
  json j{{"ticks", s.ticks},
         {"actions_learned", s.actions_learned},
         {"goals_satisfied", s.goals_satisfied},
         {"goals_expired", s.goals_expired},
         {"quiescent", s.quiescent}};
  if (s.setpoint) {
    j["setpoint"] = {{"perturbations", s.setpoint->perturbations},
                     {"restored", s.setpoint->restored},
                     {"max_recovery_ticks", s.setpoint->max_recovery_ticks},
                     {"all_restored_within", s.setpoint->all_restored_within},
                     {"perturbed_at", s.setpoint->perturbed_at},
                     {"recovery_ticks", s.setpoint->recovery_ticks}};
  }
  return j;
}

namespace {

json action_json(const ActionRecord& a) {
  auto assignment = [](const Assignment& x) {
    json o = json::object();
    for (const auto& [k, v] : x) o[k] = to_int(v);
    return o;
  };
  return {{"id", a.id},
          {"kind", to_string(a.kind)},
          {"level", a.level},
          {"halves", json::array({assignment(a.half_a), assignment(a.half_b)})},
          {"changed", a.changed},
          {"context", a.context}};
}

json levels_json(const WorldState& world, int layer) {
  std::map<int, json> levels;
  for (const auto& a : world.actions) {
    if (a.layer != layer) continue;
    auto& lv = levels[a.level];
    if (lv.is_null()) lv = {{"level", a.level}, {"sensors", json::array()}, {"actions", json::array()}};
    lv["actions"].push_back(action_json(a));
    for (const auto& s : a.sensors) {
      auto& ss = lv["sensors"];
      if (std::find(ss.begin(), ss.end(), s) == ss.end()) ss.push_back(s);
    }
  }
  json out = json::array();
  for (auto& [lvl, j] : levels) out.push_back(std::move(j));
  return out;
}

}  // namespace

json hierarchy_dump(const WorldState& world) {
  json layers = json::array();
  for (std::size_t l = 0; l < world.layers.size(); ++l) {
    const auto& cfg = world.layers[l].config;
    layers.push_back({{"type", to_string(cfg.type)},
                      {"pancake", cfg.pancake},
                      {"levels", levels_json(world, static_cast<int>(l))}});
  }
  json values = json::object();
  for (const auto& [k, v] : world.values) values[k] = to_int(v);
  return {{"tick", world.tick},
          {"base", {{"type", "primitive"}, {"pancake", true}, {"levels", levels_json(world, -1)}}},
          {"layers", layers},
          {"values", values}};
}

}  // namespace phaseweb
