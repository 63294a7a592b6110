#include "phaseweb/hierarchy.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <stdexcept>

namespace phaseweb {

namespace {

void append_stream(std::vector<CoOccurrence>& history, Tick t, Assignment a) {
  if (a.empty()) return;
  if (!history.empty() && history.back().assignment == a) return;
  history.push_back({t, std::move(a)});
}

Assignment project(const WorldState& world, const std::vector<SensorId>& sensors) {
  Assignment out;
  for (const auto& s : sensors)
    if (auto v = world.value(s)) out.emplace(s, *v);
  return out;
}

bool is_presence(const WorldState& world, const SensorId& s) {
  return world.sensor(s).kind == SensorKind::presence;
}

int max_level(const WorldState& world) {
  int m = 0;
  for (const auto& a : world.actions) m = std::max(m, a.level);
  return m;
}

}  // namespace

std::optional<Polarity> reflect_orientation(const ActionRecord& a, const Assignment& values) {
  if (a.satisfied(Half::a, values)) return Polarity::positive;
  if (a.satisfied(Half::b, values)) return Polarity::negative;
  return std::nullopt;
}

std::vector<SensorId> stream_sensors(const WorldState& world, std::size_t layer, int level) {
  if (layer >= world.layers.size()) throw std::out_of_range("no hierarchy layer " + std::to_string(layer));
  const auto& cfg = world.layers[layer].config;
  if (level < 1 || level > cfg.levels) throw std::out_of_range("layer level " + std::to_string(level) + " not built");
  const int lowest = cfg.pancake ? level : 1;
  std::vector<SensorId> out;
  for (const auto& s : world.sensors) {
    bool take = false;
    switch (s.kind) {
      case SensorKind::primitive:
        take = cfg.type == LayerType::morphic && lowest == 1;
        break;
      case SensorKind::presence:
        take = cfg.type != LayerType::meta;
        break;
      case SensorKind::meta: {
        const auto& a = world.actions[*s.action];
        for (int l = lowest; l <= level && !take; ++l) {
          if (l == 1)
            take = cfg.type == LayerType::meta && a.layer == -1;
          else
            take = a.layer == static_cast<int>(layer) && a.level == l;
        }
        break;
      }
    }
    if (take && world.value(s.id)) out.push_back(s.id);
  }
  return out;
}

void bubble_up(WorldState& world) {
  const int top = max_level(world);
  for (int level = 1; level <= top; ++level)
    for (const auto& a : world.actions) {
      if (a.level != level) continue;
      if (auto v = reflect_orientation(a, world.values)) world.values[meta_sensor_id(a)] = *v;
    }
  for (std::size_t l = 0; l < world.layers.size(); ++l) {
    auto& layer = world.layers[l];
    if (layer.config.type != LayerType::meta) continue;
    for (int level = 1; level <= layer.config.levels; ++level)
      append_stream(layer.histories[level - 1], world.tick, project(world, stream_sensors(world, l, level)));
  }
}

std::optional<std::vector<GoalToken>> fan_out(const WorldState& world, const GoalToken& goal) {
  const auto& info = world.sensor(goal.sensor);
  if (info.kind != SensorKind::meta) throw std::invalid_argument("fan-out needs a meta-sensor, got '" + goal.sensor + "'");
  const ActionRecord& a = world.actions[*info.action];
  const Half from = goal.from == Polarity::positive ? Half::a : Half::b;
  if (!a.satisfied(from, world.values)) return std::nullopt;
  std::vector<GoalToken> out;
  for (const auto& s : a.changed) out.push_back({s, a.half(from).at(s), a.half(other(from)).at(s)});
  return out;
}

std::vector<GoalToken> trickle_down(const WorldState& world, const GoalToken& goal) {
  std::vector<GoalToken> out;
  auto push = [&out](const GoalToken& g) {
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
  };
  if (world.sensor(goal.sensor).kind != SensorKind::meta) {
    push(goal);
    return out;
  }
  auto children = fan_out(world, goal);
  if (!children) {
    push(goal);
    return out;
  }
  for (const auto& c : *children)
    for (const auto& leaf : trickle_down(world, c)) push(leaf);
  return out;
}

void sample_goal_streams(WorldState& world) {
  if (!world.has_presence_layers()) return;
  for (const auto& tok : world.board.goals()) {
    const auto& g = std::get<GoalToken>(tok.body);
    if (world.sensor(g.sensor).kind == SensorKind::presence) continue;
    const SensorId id = presence_sensor_id(g);
    if (world.has_sensor(id)) continue;
    SensorInfo info;
    info.id = id;
    info.kind = SensorKind::presence;
    info.level = world.sensor(g.sensor).level;
    info.goal = g;
    world.sensor_index[id] = world.sensors.size();
    world.sensors.push_back(std::move(info));
  }
  for (const auto& s : world.sensors) {
    if (s.kind != SensorKind::presence) continue;
    const Polarity v = world.board.has_goal(*s.goal) ? Polarity::positive : Polarity::negative;
    world.values[s.id] = v;
    world.board.announce({StateToken{s.id, v}, "presence", world.tick});
  }
  for (std::size_t l = 0; l < world.layers.size(); ++l) {
    auto& layer = world.layers[l];
    if (layer.config.type == LayerType::meta) continue;
    for (int level = 1; level <= layer.config.levels; ++level)
      append_stream(layer.histories[level - 1], world.tick, project(world, stream_sensors(world, l, level)));
  }
}

std::vector<std::string> build_level(WorldState& world, std::size_t layer, int level) {
  if (layer >= world.layers.size()) throw std::out_of_range("no hierarchy layer " + std::to_string(layer));
  auto& state = world.layers[layer];
  if (level < 1 || level > state.config.levels) throw std::out_of_range("layer level " + std::to_string(level) + " not built");
  const LayerType type = state.config.type;
  ActionFilter filter;
  if (type == LayerType::morphic) {
    filter = [&world](const ActionRecord& a) {
      bool s = false, g = false;
      for (const auto& c : a.changed) (is_presence(world, c) ? g : s) = true;
      return s && g;
    };
  } else if (type == LayerType::icarian) {
    filter = [&world](const ActionRecord& a) {
      for (const auto& c : a.changed)
        if (!is_presence(world, c)) return false;
      return true;
    };
  }
  // copy: registering actions below may grow the stream histories
  const auto history = state.histories[level - 1];
  auto fresh = state.learner.learn(history, world.config.arity, filter);
  std::vector<std::string> ids;
  for (auto& a : fresh) {
    a.kind = type == LayerType::meta ? ActionKind::meta
             : type == LayerType::morphic ? ActionKind::morphic
                                          : ActionKind::icarian;
    a.level = level + 1;
    a.layer = static_cast<int>(layer);
    ids.push_back(register_action(world, std::move(a)).id);
  }
  return ids;
}

void morphic_complete(WorldState& world) {
  struct Wants {
    std::size_t action;
    Half half;
    std::vector<GoalToken> issue;
    std::vector<GoalToken> retract;
  };
  std::vector<Wants> wants;
  std::set<GoalToken> issuing;
  for (const auto& a : world.actions) {
    if (a.kind != ActionKind::morphic) continue;
    std::optional<Half> held;
    for (Half h : {Half::a, Half::b}) {
      bool ok = true;
      for (const auto& [s, v] : a.half(h))
        if (!is_presence(world, s) && world.value(s) != v) ok = false;
      if (ok) {
        held = h;
        break;
      }
    }
    if (!held) continue;
    Wants w{a.index, *held, {}, {}};
    for (const auto& [s, v] : a.half(*held)) {
      if (!is_presence(world, s)) continue;
      const GoalToken& g = *world.sensor(s).goal;
      if (v == Polarity::positive) {
        if (world.value(g.sensor) == g.from) {
          w.issue.push_back(g);
          issuing.insert(g);
        }
      } else {
        w.retract.push_back(g);
      }
    }
    wants.push_back(std::move(w));
  }
  for (const auto& w : wants) {
    std::vector<GoalToken> issue, retract;
    for (const auto& g : w.issue)
      if (!world.board.has_goal(g)) issue.push_back(g);
    for (const auto& g : w.retract)
      if (!issuing.contains(g) && world.board.has_goal(g)) retract.push_back(g);
    if (issue.empty() && retract.empty()) continue;
    const ActionRecord& a = world.actions[w.action];
    world.fired_this_tick.insert(a.index);
    ++world.stats.firings;
    emit(world, "FIRE",
         {{"action", a.id}, {"half", to_string(w.half)}, {"goal", to_string(issue.empty() ? retract[0] : issue[0])}});
    for (const auto& g : issue) issue_goal(world, g, a.id);
    for (const auto& g : retract) {
      world.board.retract(g);
      emit(world, "RETRACT", {{"goal", to_string(g)}, {"reason", "morphic"}});
    }
  }
}

void propagate_goals(WorldState& world) {
  for (int pass = 0; pass < 16; ++pass) {
    bool changed = false;
    for (const auto& tok : world.board.goals()) {
      const auto& g = std::get<GoalToken>(tok.body);
      if (!world.board.has_goal(g)) continue;
      const auto& info = world.sensor(g.sensor);
      if (info.kind == SensorKind::meta) {
        for (const auto& leaf : trickle_down(world, g))
          if (leaf != g && issue_goal(world, leaf, g.sensor)) changed = true;
      } else if (info.kind == SensorKind::presence) {
        const GoalToken& under = *info.goal;
        if (g.to == Polarity::positive) {
          if (world.value(under.sensor) == under.from && issue_goal(world, under, g.sensor)) changed = true;
        } else if (world.board.retract(under) > 0) {
          emit(world, "RETRACT", {{"goal", to_string(under)}, {"reason", "icarian"}});
          changed = true;
        }
      }
    }
    if (!changed) return;
  }
}

std::size_t axis_of(const WorldState& world, const SensorId& primitive) {
  std::size_t axis = 0;
  for (const auto& s : world.sensors) {
    if (s.kind != SensorKind::primitive) continue;
    ++axis;
    if (s.id == primitive) return axis;
  }
  throw std::invalid_argument("unregistered primitive sensor '" + primitive + "'");
}

std::set<SensorId> primitive_support(const WorldState& world, const SensorId& sensor) {
  const auto& info = world.sensor(sensor);
  switch (info.kind) {
    case SensorKind::primitive: return {sensor};
    case SensorKind::meta: return primitive_support(world, world.actions[*info.action]);
    case SensorKind::presence: return primitive_support(world, info.goal->sensor);
  }
  return {};
}

std::set<SensorId> primitive_support(const WorldState& world, const ActionRecord& a) {
  std::set<SensorId> out;
  for (const auto& s : a.changed) out.merge(primitive_support(world, s));
  return out;
}

namespace {

int transcription_dimension(const WorldState& world) {
  const auto n = static_cast<int>(world.primitive_sensors().size());
  if (n > kMaxDimension) throw std::out_of_range("too many primitive sensors to transcribe");
  return n;
}

}  // namespace

MultivectorI grade_transcription(const WorldState& world, const CoOccurrence& c) {
  if (c.assignment.empty()) throw std::invalid_argument("empty co-occurrence");
  MultivectorI out(transcription_dimension(world));
  for (const auto& [s, v] : c.assignment) {
    if (!world.has_sensor(s) || world.sensor(s).kind != SensorKind::primitive)
      throw std::invalid_argument("'" + s + "' is not a registered primitive sensor");
    out.add_term(Blade::axis(static_cast<int>(axis_of(world, s))), to_int(v));
  }
  return out;
}

Blade action_blade(const WorldState& world, const ActionRecord& a) {
  if (a.index >= world.actions.size() || world.actions[a.index].id != a.id)
    throw std::invalid_argument("unregistered action '" + a.id + "'");
  std::uint32_t mask = 0;
  for (const auto& s : primitive_support(world, a)) mask |= Blade::axis(static_cast<int>(axis_of(world, s))).mask();
  return Blade::from_mask(mask);
}

MultivectorI grade_transcription(const WorldState& world, const ActionRecord& a) {
  return MultivectorI::blade(transcription_dimension(world), action_blade(world, a));
}

GradeCheck grade_monotonicity(const WorldState& world) {
  GradeCheck check;
  for (const auto& a : world.actions) {
    if (a.level < 2 || a.kind != ActionKind::meta) continue;
    const Blade blade = action_blade(world, a);
    std::vector<Blade> parts;
    for (const auto& s : a.changed) {
      const auto& info = world.sensor(s);
      if (info.kind == SensorKind::meta) parts.push_back(action_blade(world, world.actions[*info.action]));
      if (info.level >= a.level)
        check.violations.push_back(a.id + ": fan-out target " + s + " is not below level " + std::to_string(a.level));
    }
    if (std::all_of(parts.begin(), parts.end(), [&](Blade b) { return b == parts.front(); }) && parts.size() > 1) {
      ++check.exempt;
      continue;
    }
    ++check.checked;
    for (Blade p : parts)
      if (blade.grade() <= p.grade())
        check.violations.push_back(a.id + ": grade " + std::to_string(blade.grade()) + " does not exceed " +
                                   std::to_string(p.grade()));
  }
  return check;
}

boost::multiprecision::cpp_int combinatorial_sequence(unsigned k) {
  if (k > 3) throw std::out_of_range("sequence index " + std::to_string(k) + " is only available as a digit count");
  boost::multiprecision::cpp_int a = 3;
  for (unsigned i = 0; i < k; ++i) a = (boost::multiprecision::cpp_int(1) << a.convert_to<unsigned>()) - 1;
  return a;
}

boost::multiprecision::cpp_int combinatorial_sequence_digits(unsigned k) {
  using boost::multiprecision::cpp_int;
  if (k <= 3) return cpp_int(combinatorial_sequence(k).str().size());
  if (k > 4) throw std::out_of_range("sequence index " + std::to_string(k) + " unsupported");
  // a_4 = 2^m - 1 with m = a_3; it has as many digits as 2^m, since 2^m is no power of ten
  using Real = boost::multiprecision::cpp_dec_float_100;
  const Real m(combinatorial_sequence(3).str());
  const Real digits = floor(m * log10(Real(2))) + 1;
  const std::string fixed = digits.str(0, std::ios_base::fixed);
  return cpp_int(fixed.substr(0, fixed.find('.')));
}

}  // namespace phaseweb
