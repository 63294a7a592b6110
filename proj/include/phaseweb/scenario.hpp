#pragma once

// Scenario files: parsing, validation, world construction, and runs.

#include "phaseweb/world.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace phaseweb {

/// Raised for malformed input; the message starts with the offending field.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Setpoint {
  SensorId sensor;
  Polarity value = Polarity::positive;
  Tick within = 10;
};

struct Scenario {
  std::string name;
  EnvSpec env;
  std::vector<SensorId> sensors;
  std::optional<std::vector<SensorId>> effectors;
  std::vector<HierarchyConfig> hierarchy;
  std::vector<GoalToken> goals;
  std::vector<Assignment> observations;
  Tick ticks = 1;
  EngineConfig engine;
  std::optional<Setpoint> setpoint;
  bool stop_on_quiescence = true;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);
/// Throws ValidationError naming the field.
void validate(const Scenario& s);

/// Builds the world, replays the observations, and posts the initial goals.
WorldState make_world(const Scenario& s);

struct SetpointReport {
  std::size_t perturbations = 0;
  std::size_t restored = 0;
  Tick max_recovery_ticks = 0;
  bool all_restored_within = true;
  std::vector<Tick> perturbed_at;
  std::vector<Tick> recovery_ticks;
};

struct RunSummary {
  Tick ticks = 0;
  std::size_t actions_learned = 0;
  std::size_t goals_satisfied = 0;
  std::size_t goals_expired = 0;
  bool quiescent = false;
  std::optional<SetpointReport> setpoint;
};

struct RunResult {
  WorldState world;
  RunSummary summary;
};

/// Runs to the tick budget, or to quiescence once the environment has
/// nothing left to play back.
RunResult run_scenario(const Scenario& s);

/// Runs exactly `ticks` ticks, without stopping at quiescence.
WorldState run_for(const Scenario& s, Tick ticks);

nlohmann::json to_json(const RunSummary& s);
nlohmann::json hierarchy_dump(const WorldState& world);

}  // namespace phaseweb
