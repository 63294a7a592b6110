#pragma once

// The world a tick runs over: board, sensor registry, learned actions,
// hierarchy layers, environment, and the trace.

#include "phaseweb/env.hpp"
#include "phaseweb/learner.hpp"
#include "phaseweb/tokens.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace phaseweb {

enum class SensorKind { primitive, meta, presence };
std::string to_string(SensorKind k);

struct SensorInfo {
  SensorId id;
  SensorKind kind = SensorKind::primitive;
  int level = 0;                           // primitives 0, meta-sensors = bound action level
  std::optional<std::size_t> action;       // meta: index into WorldState::actions
  std::optional<GoalToken> goal;           // presence: the goal signature sensed
  bool effector = false;
  friend bool operator==(const SensorInfo&, const SensorInfo&) = default;
};

SensorId meta_sensor_id(const ActionRecord& a);       // "M.a3"
SensorId presence_sensor_id(const GoalToken& g);      // "G.p.-1.+1"

enum class LayerType { meta, icarian, morphic };
std::string to_string(LayerType t);
LayerType layer_type_from_string(const std::string& s);

struct HierarchyConfig {
  LayerType type = LayerType::meta;
  int levels = 1;       // how many levels this layer builds above its root stream
  bool pancake = true;  // level n+1 sees only level n
  friend bool operator==(const HierarchyConfig&, const HierarchyConfig&) = default;
};

struct LayerState {
  HierarchyConfig config;
  std::vector<std::vector<CoOccurrence>> histories;  // [stream level - 1]
  Learner learner;
  friend bool operator==(const LayerState&, const LayerState&) = default;
};

struct EngineConfig {
  std::size_t arity = 2;
  Tick goal_ttl = 32;
  std::size_t history_window = 0;  // 0 = unbounded
  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

struct WorldStats {
  std::size_t goals_satisfied = 0;
  std::size_t goals_expired = 0;
  std::size_t actions_learned = 0;
  std::size_t firings = 0;
  std::size_t effects = 0;
  friend bool operator==(const WorldStats&, const WorldStats&) = default;
};

struct WorldState {
  EngineConfig config;
  Board board;
  std::vector<SensorInfo> sensors;  // registration order; primitives first
  std::map<SensorId, std::size_t> sensor_index;
  Assignment values;  // defined values only
  std::vector<CoOccurrence> history;  // level-0, appended on change
  Learner learner;
  std::vector<ActionRecord> actions;  // creation order, ids a1, a2, ...
  std::vector<LayerState> layers;
  EnvState env;
  Tick tick = 0;
  std::vector<std::string> trace;
  WorldStats stats;
  std::set<std::size_t> fired_this_tick;
  bool quiescent = false;

  friend bool operator==(const WorldState&, const WorldState&) = default;

  const SensorInfo& sensor(const SensorId& id) const;
  bool has_sensor(const SensorId& id) const { return sensor_index.contains(id); }
  std::vector<SensorId> primitive_sensors() const;
  std::optional<Polarity> value(const SensorId& id) const;
  const ActionRecord& action(const std::string& id) const;
  bool has_presence_layers() const;
};

/// Registers the environment's sensors as primitives; effectors are the
/// environment's effectors unless `effectors` narrows them.
WorldState make_world(const EnvSpec& env, const EngineConfig& config = {},
                      const std::vector<HierarchyConfig>& hierarchy = {},
                      const std::optional<std::vector<SensorId>>& effectors = std::nullopt);

/// Replays sensor observations through history, learning and bubble-up until
/// no further actions appear. Leaves the board and environment untouched.
void pretrain(WorldState& world, std::span<const Assignment> observations);

/// Announces a goal on any registered sensor. Throws std::invalid_argument for
/// an unregistered sensor. Returns false for a duplicate.
bool issue_goal(WorldState& world, const GoalToken& g, const std::string& issuer);

CoOccurrence snapshot(const WorldState& world);

struct Firing {
  std::size_t action = 0;  // index into WorldState::actions
  Half half = Half::a;
  GoalToken goal;
  friend bool operator==(const Firing&, const Firing&) = default;
};

std::vector<Firing> relevance_scan(const WorldState& world);

class StaleFiring : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Volunteers goals for the action's other changed sensors. Throws
/// StaleFiring if the half or the goal no longer holds, or the action
/// already fired this tick.
void fire(WorldState& world, const Firing& f);

/// Returns the number of goals removed (satisfied + expired).
std::size_t retract_satisfied(WorldState& world);

/// One full cycle; returns true when the tick was quiescent.
bool tick(WorldState& world);

/// Registers a new action, its meta-sensor, and a LEARN trace line.
const ActionRecord& register_action(WorldState& world, ActionRecord a);

void emit(WorldState& world, const std::string& ev, const std::vector<std::pair<std::string, std::string>>& fields);

}  // namespace phaseweb
