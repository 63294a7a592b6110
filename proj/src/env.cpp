#include "phaseweb/env.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

namespace phaseweb {

std::string to_string(EnvKind k) {
  switch (k) {
    case EnvKind::blocks: return "blocks";
    case EnvKind::switches: return "switches";
    case EnvKind::scripted: return "scripted";
  }
  return "unknown";
}

EnvKind env_kind_from_string(const std::string& s) {
  if (s == "blocks") return EnvKind::blocks;
  if (s == "switches") return EnvKind::switches;
  if (s == "scripted") return EnvKind::scripted;
  throw std::invalid_argument("env.kind: unknown environment kind '" + s + "'");
}

void EnvSpec::validate() const {
  if (sensors.empty()) throw std::invalid_argument("env.sensors: at least one sensor required");
  std::set<SensorId> unique(sensors.begin(), sensors.end());
  if (unique.size() != sensors.size()) throw std::invalid_argument("env.sensors: duplicate sensor id");
  for (const auto& [sensor, value] : initial)
    if (!unique.contains(sensor))
      throw std::invalid_argument("env.initial: undeclared sensor '" + sensor + "'");
  for (std::size_t i = 0; i < script.size(); ++i) {
    if (!unique.contains(script[i].sensor))
      throw std::invalid_argument("env.script: undeclared sensor '" + script[i].sensor + "'");
    if (script[i].tick < 0) throw std::invalid_argument("env.script: negative tick");
    if (i > 0 && script[i].tick <= script[i - 1].tick)
      throw std::invalid_argument("env.script: ticks must be strictly increasing");
  }
  if (noise < 0.0 || noise > 1.0) throw std::invalid_argument("env.noise: must lie in [0, 1]");
  if (kind == EnvKind::blocks) {
    std::size_t full = 0;
    for (const auto& [sensor, value] : initial) full += value == Polarity::positive;
    if (full > sensors.size()) throw std::invalid_argument("env.blocks: more blocks than places");
  }
}

std::vector<SensorId> EnvSpec::effectors() const {
  if (kind == EnvKind::scripted) return {};
  return sensors;
}

EnvState make_env(const EnvSpec& spec) {
  spec.validate();
  EnvState env;
  env.spec = spec;
  env.rng.seed(spec.seed);
  for (const auto& s : spec.sensors) {
    auto it = spec.initial.find(s);
    env.sensors[s] = it == spec.initial.end() ? Polarity::negative : it->second;
  }
  return env;
}

Assignment env_read(const EnvState& env) { return env.sensors; }

namespace {

std::optional<SensorId> first_with(const EnvState& env, Polarity value, const SensorId& except) {
  for (const auto& s : env.spec.sensors)
    if (s != except && env.sensors.at(s) == value) return s;
  return std::nullopt;
}

void move_block(EnvState& env, const SensorId& from, const SensorId& to) {
  env.sensors[from] = Polarity::negative;
  env.sensors[to] = Polarity::positive;
}

}  // namespace

EnvState env_apply(EnvState env, std::span<const TransformToken> effects) {
  env.last_effects.clear();
  for (const auto& e : effects)
    if (!env.sensors.contains(e.sensor))
      throw std::invalid_argument("unknown effector '" + e.sensor + "'");

  switch (env.spec.kind) {
    case EnvKind::scripted:
      for (const auto& e : effects) env.last_effects.push_back({e, false, "exogenous-only"});
      break;

    case EnvKind::switches:
      for (const auto& e : effects) {
        if (env.sensors.at(e.sensor) != e.from) {
          env.last_effects.push_back({e, false, "already-" + to_string(e.to)});
          continue;
        }
        env.sensors[e.sensor] = e.to;
        env.last_effects.push_back({e, true, "flipped"});
      }
      break;

    case EnvKind::blocks: {
      std::vector<const TransformToken*> removals;
      std::vector<const TransformToken*> additions;
      for (const auto& e : effects) {
        const Polarity current = env.sensors.at(e.sensor);
        if (e.from == Polarity::positive && current == Polarity::positive) {
          removals.push_back(&e);
        } else if (e.from == Polarity::negative && current == Polarity::negative) {
          additions.push_back(&e);
        } else {
          env.last_effects.push_back(
              {e, false, current == Polarity::positive ? "place-full" : "place-empty"});
        }
      }
      const std::size_t pairs = std::min(removals.size(), additions.size());
      for (std::size_t i = 0; i < pairs; ++i) {
        move_block(env, removals[i]->sensor, additions[i]->sensor);
        env.last_effects.push_back({*removals[i], true, "moved-to-" + additions[i]->sensor});
        env.last_effects.push_back({*additions[i], true, "moved-from-" + removals[i]->sensor});
      }
      for (std::size_t i = pairs; i < removals.size(); ++i)
        env.last_effects.push_back({*removals[i], false, "unpaired"});
      for (std::size_t i = pairs; i < additions.size(); ++i)
        env.last_effects.push_back({*additions[i], false, "unpaired"});
      break;
    }
  }
  for (const auto& o : env.last_effects)
    if (!o.applied) env.log.push_back("noop " + o.effect.sensor + " " + o.note);
  return env;
}

EnvState env_step(EnvState env, Tick tick) {
  while (env.script_cursor < env.spec.script.size() &&
         env.spec.script[env.script_cursor].tick <= tick) {
    const auto& ev = env.spec.script[env.script_cursor++];
    if (ev.tick < tick) continue;  // missed while the world was not ticking
    const Polarity current = env.sensors.at(ev.sensor);
    if (current == ev.value) {
      env.log.push_back("script " + ev.sensor + " already " + to_string(ev.value));
      continue;
    }
    if (env.spec.kind != EnvKind::blocks) {
      env.sensors[ev.sensor] = ev.value;
      env.log.push_back("script " + ev.sensor + " " + to_string(ev.value));
      continue;
    }
    // blocks are conserved: emptying a place moves its block to the first
    // empty place, filling one takes the block from the first full place
    auto partner = first_with(env, ev.value, ev.sensor);
    if (!partner) {
      env.log.push_back("script " + ev.sensor + " infeasible");
      continue;
    }
    if (ev.value == Polarity::negative)
      move_block(env, ev.sensor, *partner);
    else
      move_block(env, *partner, ev.sensor);
    env.log.push_back("script " + ev.sensor + " " + to_string(ev.value));
  }

  if (env.spec.noise > 0.0) {
    std::bernoulli_distribution coin(env.spec.noise);
    if (env.spec.kind == EnvKind::blocks) {
      if (coin(env.rng)) {
        std::vector<SensorId> full, empty;
        for (const auto& s : env.spec.sensors)
          (env.sensors.at(s) == Polarity::positive ? full : empty).push_back(s);
        if (!full.empty() && !empty.empty()) {
          std::uniform_int_distribution<std::size_t> pick_full(0, full.size() - 1);
          std::uniform_int_distribution<std::size_t> pick_empty(0, empty.size() - 1);
          const auto& from = full[pick_full(env.rng)];
          const auto& to = empty[pick_empty(env.rng)];
          move_block(env, from, to);
          env.log.push_back("noise " + from + "->" + to);
        }
      }
    } else {
      for (const auto& s : env.spec.sensors) {
        if (coin(env.rng)) {
          env.sensors[s] = flip(env.sensors.at(s));
          env.log.push_back("noise " + s);
        }
      }
    }
  }
  return env;
}

}  // namespace phaseweb
