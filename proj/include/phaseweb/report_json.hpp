#pragma once

// JSON forms of ladder reports, net files and reachability reports.

#include "phaseweb/ladder.hpp"
#include "phaseweb/sync.hpp"

#include <json.hpp>

#include <filesystem>

namespace phaseweb {

nlohmann::json to_json(const LadderReport& r);

/// Throws std::invalid_argument naming the offending field.
sync::SyncNet parse_net(const nlohmann::json& j);
sync::SyncNet load_net(const std::filesystem::path& path);

struct SyncVerdict {
  sync::ReachabilityReport reach;
  std::optional<sync::StickCheck> sticks;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Runs the reachability search, the stick check when a count is declared,
/// and every expectation the net file states.
SyncVerdict verify_net(const sync::SyncNet& net);

nlohmann::json to_json(const sync::SyncNet& net, const SyncVerdict& v);

}  // namespace phaseweb
