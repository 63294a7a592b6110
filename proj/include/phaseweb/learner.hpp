#pragma once

// Co-occurrence snapshots and the co-exclusion learner.

#include "phaseweb/tokens.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace phaseweb {

struct CoOccurrence {
  Tick tick = 0;
  Assignment assignment;
  friend bool operator==(const CoOccurrence&, const CoOccurrence&) = default;
};

enum class Half { a, b };
constexpr Half other(Half h) { return h == Half::a ? Half::b : Half::a; }
inline std::string to_string(Half h) { return h == Half::a ? "A" : "B"; }

enum class ActionKind { primitive, meta, morphic, icarian };
std::string to_string(ActionKind k);

/// A learned co-exclusion: two complementary co-occurrences over the same
/// sensors. Orientation +1 means half A obtains.
struct ActionRecord {
  std::string id;
  std::size_t index = 0;  // creation order
  ActionKind kind = ActionKind::primitive;
  int level = 1;
  int layer = -1;  // owning hierarchy layer, -1 for the base learner
  Tick created = 0;

  std::vector<SensorId> sensors;  // sorted
  Assignment half_a;
  Assignment half_b;
  std::vector<SensorId> changed;  // components that differ between the halves
  std::vector<SensorId> context;  // components equal in both halves

  const Assignment& half(Half h) const { return h == Half::a ? half_a : half_b; }
  bool satisfied(Half h, const Assignment& values) const;
  /// The half whose full assignment (context included) holds, if either.
  std::optional<Half> obtaining(const Assignment& values) const;
  bool is_changed(const SensorId& s) const;

  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

/// Builds an action from two assignments over the same sensors. Throws
/// std::invalid_argument if they differ in fewer than two components.
ActionRecord make_action(const Assignment& half_a, const Assignment& half_b);

/// Identity of an action for deduplication: sensor set plus unordered halves.
std::string equivalence_key(const ActionRecord& a);

/// Restricts which sensor subsets and changed sets the learner may use.
using ActionFilter = std::function<bool(const ActionRecord&)>;

/// Every size-k sensor subset and every pair of distinct observed
/// projections over it that differ in >= 2 components yields one action;
/// the earlier-observed projection becomes half A. Snapshots lacking a
/// sensor of the subset are skipped for that subset.
std::vector<ActionRecord> co_exclusion_infer(std::span<const CoOccurrence> history, std::size_t arity,
                                             const ActionFilter& filter = {});

/// Remembers what it has already emitted so each co-exclusion is reported once.
class Learner {
 public:
  std::vector<ActionRecord> learn(std::span<const CoOccurrence> history, std::size_t arity,
                                  const ActionFilter& filter = {});
  bool knows(const ActionRecord& a) const { return known_.contains(equivalence_key(a)); }
  void remember(const ActionRecord& a) { known_.insert(equivalence_key(a)); }
  friend bool operator==(const Learner&, const Learner&) = default;

 private:
  std::set<std::string> known_;
};

}  // namespace phaseweb
