#pragma once

// Environments behind the sensor/effector boundary. The engine sees them
// only through env_read, env_apply and env_step.

#include "phaseweb/tokens.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace phaseweb {

enum class EnvKind { blocks, switches, scripted };
std::string to_string(EnvKind k);
EnvKind env_kind_from_string(const std::string& s);

struct ScriptEvent {
  Tick tick = 0;
  SensorId sensor;
  Polarity value = Polarity::positive;
  friend bool operator==(const ScriptEvent&, const ScriptEvent&) = default;
};

struct EnvSpec {
  EnvKind kind = EnvKind::blocks;
  std::vector<SensorId> sensors;  // places, lights, or scripted sensors, in declaration order
  Assignment initial;             // +1 = full / on
  std::vector<ScriptEvent> script;
  std::uint64_t seed = 0;
  double noise = 0.0;  // per-tick flip probability

  /// Throws std::invalid_argument naming the broken field.
  void validate() const;
  std::vector<SensorId> effectors() const;
  friend bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

struct EffectOutcome {
  TransformToken effect;
  bool applied = false;
  std::string note;
  friend bool operator==(const EffectOutcome&, const EffectOutcome&) = default;
};

struct EnvState {
  EnvSpec spec;
  Assignment sensors;
  std::mt19937_64 rng;
  std::size_t script_cursor = 0;
  std::vector<EffectOutcome> last_effects;
  std::vector<std::string> log;
  friend bool operator==(const EnvState&, const EnvState&) = default;

  bool has_pending_events() const { return script_cursor < spec.script.size() || spec.noise > 0.0; }
};

EnvState make_env(const EnvSpec& spec);

Assignment env_read(const EnvState& env);

/// blocks: a removal (x,+1,-1) paired with an addition (y,-1,+1) in the same
/// call moves a block; unpaired or infeasible transforms are logged no-ops.
/// switches: each transform flips its light. scripted: effects are ignored.
/// Throws std::invalid_argument for an effector the environment lacks.
EnvState env_apply(EnvState env, std::span<const TransformToken> effects);

/// Plays back the scripted events for `tick`, then seeded noise.
EnvState env_step(EnvState env, Tick tick);

}  // namespace phaseweb
