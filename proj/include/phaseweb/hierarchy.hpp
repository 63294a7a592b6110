#pragma once

// Meta-sensors, bubble-up, trickle-down, layer construction, and the
// transcription of engine entities into the algebra.

#include "phaseweb/algebra.hpp"
#include "phaseweb/world.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace phaseweb {

/// +1 when half A holds, -1 when half B holds, nullopt when neither.
std::optional<Polarity> reflect_orientation(const ActionRecord& a, const Assignment& values);

/// Recomputes meta-sensor values in ascending level order and appends the
/// meta-layer stream snapshots.
void bubble_up(WorldState& world);

/// Fans a goal out toward primitives. Goals on primitive sensors pass
/// through; a meta goal whose 'from' half does not currently hold is
/// returned unchanged (deferred).
std::vector<GoalToken> trickle_down(const WorldState& world, const GoalToken& goal);

/// One fan-out step: the goals on the bound action's changed sensors, or
/// nullopt when the goal must be deferred. Throws for a non-meta sensor.
std::optional<std::vector<GoalToken>> fan_out(const WorldState& world, const GoalToken& goal);

/// Registers presence sensors for goal signatures on the board and appends
/// the goal-based layer streams. Runs after goals settle each tick.
void sample_goal_streams(WorldState& world);

/// The sensors a layer's level-n stream ranges over, defined values only.
std::vector<SensorId> stream_sensors(const WorldState& world, std::size_t layer, int level);

/// Learns over one layer stream; new actions land at level + 1.
std::vector<std::string> build_level(WorldState& world, std::size_t layer, int level);

/// Morphic completion: when the sensor part of a half holds, issue the half's
/// present goals and retract its absent ones; issuing beats retracting.
void morphic_complete(WorldState& world);

/// Goals on presence sensors issue (-1 > +1) or retract (+1 > -1) the goal
/// they sense; goals on meta-sensors fan out.
void propagate_goals(WorldState& world);

// transcription into Cl(n), n = number of primitive sensors

std::size_t axis_of(const WorldState& world, const SensorId& primitive);  // 1-based
std::set<SensorId> primitive_support(const WorldState& world, const SensorId& sensor);
std::set<SensorId> primitive_support(const WorldState& world, const ActionRecord& a);

MultivectorI grade_transcription(const WorldState& world, const CoOccurrence& c);
MultivectorI grade_transcription(const WorldState& world, const ActionRecord& a);
Blade action_blade(const WorldState& world, const ActionRecord& a);

struct GradeCheck {
  std::size_t checked = 0;
  std::size_t exempt = 0;  // constituents share one support (an action and its dual)
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// For every action above level 1: its blade grade exceeds each constituent's
/// (raising), and each fan-out target sits at a lower level (lowering).
GradeCheck grade_monotonicity(const WorldState& world);

/// a_0 = 3, a_{k+1} = 2^{a_k} - 1, exact for k <= 3.
boost::multiprecision::cpp_int combinatorial_sequence(unsigned k);
/// Decimal digit count of a_k for k <= 4. Throws std::out_of_range beyond.
boost::multiprecision::cpp_int combinatorial_sequence_digits(unsigned k);

}  // namespace phaseweb
