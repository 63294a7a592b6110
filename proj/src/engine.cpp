#include "phaseweb/hierarchy.hpp"
#include "phaseweb/world.hpp"

#include <algorithm>
#include <stdexcept>

namespace phaseweb {

std::string to_string(SensorKind k) {
  switch (k) {
    case SensorKind::primitive: return "primitive";
    case SensorKind::meta: return "meta";
    case SensorKind::presence: return "presence";
  }
  return "unknown";
}

std::string to_string(LayerType t) {
  switch (t) {
    case LayerType::meta: return "meta";
    case LayerType::icarian: return "icarian";
    case LayerType::morphic: return "morphic";
  }
  return "unknown";
}

LayerType layer_type_from_string(const std::string& s) {
  if (s == "meta") return LayerType::meta;
  if (s == "icarian") return LayerType::icarian;
  if (s == "morphic") return LayerType::morphic;
  throw std::invalid_argument("hierarchy.type: unknown hierarchy type '" + s + "'");
}

SensorId meta_sensor_id(const ActionRecord& a) { return "M." + a.id; }

SensorId presence_sensor_id(const GoalToken& g) {
  return "G." + g.sensor + "." + to_string(g.from) + "." + to_string(g.to);
}

const SensorInfo& WorldState::sensor(const SensorId& id) const {
  auto it = sensor_index.find(id);
  if (it == sensor_index.end()) throw std::invalid_argument("unregistered sensor '" + id + "'");
  return sensors[it->second];
}

std::vector<SensorId> WorldState::primitive_sensors() const {
  std::vector<SensorId> out;
  for (const auto& s : sensors)
    if (s.kind == SensorKind::primitive) out.push_back(s.id);
  return out;
}

std::optional<Polarity> WorldState::value(const SensorId& id) const {
  auto it = values.find(id);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

const ActionRecord& WorldState::action(const std::string& id) const {
  for (const auto& a : actions)
    if (a.id == id) return a;
  throw std::invalid_argument("unknown action '" + id + "'");
}

bool WorldState::has_presence_layers() const {
  return std::any_of(layers.begin(), layers.end(),
                     [](const LayerState& l) { return l.config.type != LayerType::meta; });
}

void emit(WorldState& world, const std::string& ev,
          const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string line = "tick=" + std::to_string(world.tick) + " ev=" + ev;
  for (const auto& [k, v] : fields) line += " " + k + "=" + v;
  world.trace.push_back(std::move(line));
}

namespace {

void register_sensor(WorldState& world, SensorInfo info) {
  if (world.sensor_index.contains(info.id))
    throw std::invalid_argument("duplicate sensor id '" + info.id + "'");
  world.sensor_index[info.id] = world.sensors.size();
  world.sensors.push_back(std::move(info));
}

void append_if_changed(std::vector<CoOccurrence>& history, Tick t, Assignment a, std::size_t window) {
  if (a.empty()) return;
  if (!history.empty() && history.back().assignment == a) return;
  history.push_back({t, std::move(a)});
  if (window > 0 && history.size() > window) history.erase(history.begin());
}

Assignment primitive_values(const WorldState& world) {
  Assignment out;
  for (const auto& s : world.sensors)
    if (s.kind == SensorKind::primitive) {
      auto v = world.value(s.id);
      if (v) out.emplace(s.id, *v);
    }
  return out;
}

std::size_t learn_all(WorldState& world) {
  std::size_t before = world.actions.size();
  for (auto& a : world.learner.learn(world.history, world.config.arity)) {
    a.kind = ActionKind::primitive;
    a.level = 1;
    a.layer = -1;
    register_action(world, std::move(a));
  }
  for (std::size_t l = 0; l < world.layers.size(); ++l)
    for (int level = 1; level <= world.layers[l].config.levels; ++level) build_level(world, l, level);
  return world.actions.size() - before;
}

}  // namespace

const ActionRecord& register_action(WorldState& world, ActionRecord a) {
  a.index = world.actions.size();
  a.id = "a" + std::to_string(a.index + 1);
  a.created = world.tick;
  for (const auto& s : a.sensors)
    if (!world.has_sensor(s)) throw std::invalid_argument("action over unregistered sensor '" + s + "'");
  world.actions.push_back(std::move(a));
  const ActionRecord& rec = world.actions.back();
  SensorInfo meta;
  meta.id = meta_sensor_id(rec);
  meta.kind = SensorKind::meta;
  meta.level = rec.level;
  meta.action = rec.index;
  register_sensor(world, std::move(meta));
  if (auto v = reflect_orientation(rec, world.values)) world.values[meta_sensor_id(rec)] = *v;
  ++world.stats.actions_learned;
  emit(world, "LEARN",
       {{"action", rec.id},
        {"kind", to_string(rec.kind)},
        {"level", std::to_string(rec.level)},
        {"halves", to_string(rec.half_a) + "|" + to_string(rec.half_b)}});
  return world.actions.back();
}

WorldState make_world(const EnvSpec& env, const EngineConfig& config,
                      const std::vector<HierarchyConfig>& hierarchy,
                      const std::optional<std::vector<SensorId>>& effectors) {
  if (config.arity < 2) throw std::invalid_argument("arity: must be >= 2");
  if (config.goal_ttl < 1) throw std::invalid_argument("goal_ttl: must be >= 1");
  WorldState world;
  world.config = config;
  world.env = make_env(env);
  const auto env_effectors = env.effectors();
  const std::vector<SensorId> wanted = effectors ? *effectors : env_effectors;
  for (const auto& e : wanted)
    if (std::find(env_effectors.begin(), env_effectors.end(), e) == env_effectors.end())
      throw std::invalid_argument("effectors: '" + e + "' is not an effector of the environment");
  for (const auto& s : env.sensors) {
    SensorInfo info;
    info.id = s;
    info.effector = std::find(wanted.begin(), wanted.end(), s) != wanted.end();
    register_sensor(world, std::move(info));
  }
  for (const auto& h : hierarchy) {
    if (h.levels < 1) throw std::invalid_argument("hierarchy.levels: must be >= 1");
    LayerState layer;
    layer.config = h;
    layer.histories.resize(static_cast<std::size_t>(h.levels));
    world.layers.push_back(std::move(layer));
  }
  world.values = env_read(world.env);
  return world;
}

void pretrain(WorldState& world, std::span<const Assignment> observations) {
  if (observations.empty()) return;
  const Tick saved_tick = world.tick;
  const Assignment saved = primitive_values(world);
  world.tick = -1;
  while (true) {
    std::size_t learned = 0;
    for (const auto& obs : observations) {
      for (const auto& [sensor, value] : obs) {
        const auto& info = world.sensor(sensor);
        if (info.kind != SensorKind::primitive)
          throw std::invalid_argument("observations: '" + sensor + "' is not a primitive sensor");
        world.values[sensor] = value;
      }
      append_if_changed(world.history, world.tick, primitive_values(world), world.config.history_window);
      bubble_up(world);
      learned += learn_all(world);
    }
    if (learned == 0) break;
  }
  for (const auto& [sensor, value] : saved) world.values[sensor] = value;
  world.tick = saved_tick;
}

bool issue_goal(WorldState& world, const GoalToken& g, const std::string& issuer) {
  if (!world.has_sensor(g.sensor)) throw std::invalid_argument("goal on unregistered sensor '" + g.sensor + "'");
  const bool fresh = world.board.announce({g, issuer, world.tick});
  if (fresh) emit(world, "GOAL", {{"goal", to_string(g)}, {"issuer", issuer}});
  return fresh;
}

CoOccurrence snapshot(const WorldState& world) {
  CoOccurrence c;
  c.tick = world.tick;
  for (const auto& s : world.sensors) {
    if (s.kind != SensorKind::primitive) continue;
    auto tokens = world.board.listen({s.id, TokenKind::state});
    auto it = std::find_if(tokens.begin(), tokens.end(), [&](const Token& t) { return t.tick == world.tick; });
    if (it == tokens.end()) throw std::runtime_error("no state token for sensor '" + s.id + "' this tick");
    c.assignment.emplace(s.id, std::get<StateToken>(it->body).value);
  }
  return c;
}

std::vector<Firing> relevance_scan(const WorldState& world) {
  std::vector<Firing> out;
  const auto goals = world.board.goals();
  for (const auto& a : world.actions) {
    if (a.kind == ActionKind::morphic) continue;
    auto h = a.obtaining(world.values);
    if (!h) continue;
    const Assignment& here = a.half(*h);
    const Assignment& there = a.half(other(*h));
    for (const auto& tok : goals) {
      const auto& g = std::get<GoalToken>(tok.body);
      if (!a.is_changed(g.sensor)) continue;
      if (here.at(g.sensor) == g.from && there.at(g.sensor) == g.to) {
        out.push_back({a.index, *h, g});
        break;
      }
    }
  }
  return out;
}

void fire(WorldState& world, const Firing& f) {
  if (f.action >= world.actions.size()) throw StaleFiring("firing names an unknown action");
  const ActionRecord& a = world.actions[f.action];
  if (world.fired_this_tick.contains(f.action)) throw StaleFiring("action " + a.id + " already fired this tick");
  if (!a.satisfied(f.half, world.values)) throw StaleFiring("half " + to_string(f.half) + " of " + a.id + " no longer holds");
  if (!world.board.has_goal(f.goal)) throw StaleFiring("goal " + to_string(f.goal) + " is gone");
  world.fired_this_tick.insert(f.action);
  ++world.stats.firings;
  emit(world, "FIRE", {{"action", a.id}, {"half", to_string(f.half)}, {"goal", to_string(f.goal)}});
  const Assignment& here = a.half(f.half);
  const Assignment& there = a.half(other(f.half));
  for (const auto& s : a.changed) {
    if (s == f.goal.sensor) continue;
    issue_goal(world, {s, here.at(s), there.at(s)}, a.id);
  }
}

std::size_t retract_satisfied(WorldState& world) {
  std::size_t removed = 0;
  for (const auto& tok : world.board.goals()) {
    const auto& g = std::get<GoalToken>(tok.body);
    const auto v = world.value(g.sensor);
    if (v && *v == g.to) {
      removed += world.board.retract(g);
      ++world.stats.goals_satisfied;
      emit(world, "RETRACT", {{"goal", to_string(g)}, {"reason", "satisfied"}});
    } else if (world.tick - tok.tick >= world.config.goal_ttl) {
      removed += world.board.retract(g);
      ++world.stats.goals_expired;
      emit(world, "RETRACT", {{"goal", to_string(g)}, {"reason", "expired"}});
    }
  }
  return removed;
}

bool tick(WorldState& world) {
  world.fired_this_tick.clear();
  world.board.begin_tick(world.tick);

  // 1. environment -> state tokens
  world.env = env_step(std::move(world.env), world.tick);
  for (const auto& [sensor, value] : env_read(world.env)) {
    world.board.announce({StateToken{sensor, value}, "env", world.tick});
    world.values[sensor] = value;
  }

  // 2. snapshot
  CoOccurrence now = snapshot(world);
  const bool changed = world.history.empty() || world.history.back().assignment != now.assignment;
  if (changed) emit(world, "SNAPSHOT", {{"state", to_string(now.assignment)}});
  append_if_changed(world.history, world.tick, now.assignment, world.config.history_window);
  const std::size_t events_mark = world.trace.size();

  // 3. bubble-up
  bubble_up(world);

  // 4. retraction
  retract_satisfied(world);

  // 5-6. relevance and firing, creation order
  for (const auto& f : relevance_scan(world)) fire(world, f);
  morphic_complete(world);

  // 7. trickle-down
  propagate_goals(world);

  // 8. effector goals cross the boundary
  std::vector<TransformToken> effects;
  for (const auto& tok : world.board.goals()) {
    const auto& g = std::get<GoalToken>(tok.body);
    const auto& info = world.sensor(g.sensor);
    if (!info.effector) continue;
    if (world.value(g.sensor) != g.from) continue;
    TransformToken x{g.sensor, g.from, g.to};
    if (world.board.announce({x, "effector", world.tick})) effects.push_back(x);
  }
  if (!effects.empty()) {
    world.env = env_apply(std::move(world.env), effects);
    for (const auto& o : world.env.last_effects) {
      ++world.stats.effects;
      emit(world, "EFFECT",
           {{"sensor", o.effect.sensor},
            {"from", to_string(o.effect.from)},
            {"to", to_string(o.effect.to)},
            {"applied", o.applied ? "1" : "0"},
            {"note", o.note}});
    }
  }

  // 9. learning
  sample_goal_streams(world);
  learn_all(world);

  const bool quiet = !changed && world.trace.size() == events_mark;
  if (quiet) emit(world, "QUIESCENT", {});
  world.quiescent = quiet;
  ++world.tick;
  return quiet;
}

}  // namespace phaseweb
