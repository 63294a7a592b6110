#include "phaseweb/learner.hpp"

#include <algorithm>
#include <stdexcept>

namespace phaseweb {

std::string to_string(ActionKind k) {
  switch (k) {
    case ActionKind::primitive: return "primitive";
    case ActionKind::meta: return "meta";
    case ActionKind::morphic: return "morphic";
    case ActionKind::icarian: return "icarian";
  }
  return "unknown";
}

bool ActionRecord::satisfied(Half h, const Assignment& values) const {
  for (const auto& [sensor, value] : half(h)) {
    auto it = values.find(sensor);
    if (it == values.end() || it->second != value) return false;
  }
  return true;
}

std::optional<Half> ActionRecord::obtaining(const Assignment& values) const {
  if (satisfied(Half::a, values)) return Half::a;
  if (satisfied(Half::b, values)) return Half::b;
  return std::nullopt;
}

bool ActionRecord::is_changed(const SensorId& s) const {
  return std::find(changed.begin(), changed.end(), s) != changed.end();
}

ActionRecord make_action(const Assignment& half_a, const Assignment& half_b) {
  if (half_a.size() != half_b.size())
    throw std::invalid_argument("action halves cover different sensors");
  ActionRecord a;
  a.half_a = half_a;
  a.half_b = half_b;
  for (const auto& [sensor, value] : half_a) {
    auto it = half_b.find(sensor);
    if (it == half_b.end()) throw std::invalid_argument("action halves cover different sensors");
    a.sensors.push_back(sensor);
    (it->second == value ? a.context : a.changed).push_back(sensor);
  }
  if (a.changed.size() < 2)
    throw std::invalid_argument("co-exclusion needs at least two changed components");
  return a;
}

std::string equivalence_key(const ActionRecord& a) {
  std::string ha = to_string(a.half_a);
  std::string hb = to_string(a.half_b);
  if (hb < ha) std::swap(ha, hb);
  return ha + '|' + hb;
}

std::vector<ActionRecord> co_exclusion_infer(std::span<const CoOccurrence> history, std::size_t arity,
                                             const ActionFilter& filter) {
  if (arity < 2) throw std::invalid_argument("co-exclusion arity must be >= 2");
  std::set<SensorId> universe_set;
  for (const auto& c : history)
    for (const auto& [sensor, value] : c.assignment) universe_set.insert(sensor);
  const std::vector<SensorId> universe(universe_set.begin(), universe_set.end());
  std::vector<ActionRecord> out;
  if (universe.size() < arity) return out;

  std::vector<std::size_t> pick(arity);
  for (std::size_t i = 0; i < arity; ++i) pick[i] = i;
  while (true) {
    // distinct projections over this subset, in first-observed order
    std::vector<Assignment> seen;
    for (const auto& c : history) {
      Assignment projection;
      bool complete = true;
      for (auto i : pick) {
        auto it = c.assignment.find(universe[i]);
        if (it == c.assignment.end()) {
          complete = false;
          break;
        }
        projection.emplace(it->first, it->second);
      }
      if (complete && std::find(seen.begin(), seen.end(), projection) == seen.end())
        seen.push_back(std::move(projection));
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      for (std::size_t j = i + 1; j < seen.size(); ++j) {
        std::size_t differing = 0;
        for (const auto& [sensor, value] : seen[i])
          if (seen[j].at(sensor) != value) ++differing;
        if (differing < 2) continue;
        ActionRecord a = make_action(seen[i], seen[j]);
        if (!filter || filter(a)) out.push_back(std::move(a));
      }
    }

    std::size_t pos = arity;
    while (pos > 0 && pick[pos - 1] == universe.size() - arity + pos - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t j = pos; j < arity; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

std::vector<ActionRecord> Learner::learn(std::span<const CoOccurrence> history, std::size_t arity,
                                         const ActionFilter& filter) {
  std::vector<ActionRecord> fresh;
  for (auto& a : co_exclusion_infer(history, arity, filter)) {
    if (known_.insert(equivalence_key(a)).second) fresh.push_back(std::move(a));
  }
  return fresh;
}

}  // namespace phaseweb
