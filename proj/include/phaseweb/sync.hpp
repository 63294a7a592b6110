#pragma once

// Binary semaphores, wait/signal processes, and an exhaustive interleaving
// checker for small nets.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace phaseweb::sync {

enum class SemState : std::uint8_t { closed = 0, open = 1 };

struct Semaphore {
  std::string id;
  SemState state = SemState::closed;
};

struct Wait {
  std::string semaphore;
};
struct Signal {
  std::string semaphore;
};
struct Set {
  std::string variable;
  int value = 1;  // +1 or -1
};
using Step = std::variant<Wait, Signal, Set>;

std::string to_string(const Step& step);
/// Parses "wait(S)", "signal(S)", "set(v,+1)".
Step parse_step(const std::string& text);

struct ProcessDef {
  std::string id;
  std::vector<Step> program;    // cyclic
  std::set<std::size_t> sticks; // pc values at which the process holds a stick
  std::size_t pc = 0;

  const Step& current() const { return program.at(pc); }
  void advance() { pc = (pc + 1) % program.size(); }
};

struct Variable {
  std::string id;
  int value = -1;
};

using VariableAssignment = std::map<std::string, int>;

/// Optional properties a net file asks the checker to confirm.
struct Expectations {
  std::optional<bool> target_reachable;
  std::optional<bool> target_decays;
  std::optional<bool> deadlock_free;
};

struct SyncNet {
  std::string name;
  std::vector<Semaphore> semaphores;
  std::vector<ProcessDef> processes;
  std::vector<Variable> variables;
  std::optional<int> declared_sticks;
  std::optional<VariableAssignment> target;  // designated co-occurrence
  Expectations expect;

  /// Throws std::invalid_argument describing the first broken invariant.
  void validate() const;
  std::size_t semaphore_index(const std::string& id) const;
  std::size_t variable_index(const std::string& id) const;
};

class StepMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class StepOutcome { proceeded, blocked };

/// Open: close it and advance. Closed: nothing changes.
StepOutcome wait_step(ProcessDef& p, Semaphore& s);
/// Opens a closed semaphore (an open one stays open) and always advances.
StepOutcome signal_step(ProcessDef& p, Semaphore& s);

struct GlobalState {
  std::vector<std::uint8_t> open;  // per semaphore
  std::vector<std::uint32_t> pcs;  // per process
  std::vector<std::int8_t> vars;   // per variable, +1/-1
  friend bool operator==(const GlobalState&, const GlobalState&) = default;
  friend auto operator<=>(const GlobalState&, const GlobalState&) = default;
};

struct GlobalStateHash {
  std::size_t operator()(const GlobalState& s) const noexcept;
};

GlobalState initial_state(const SyncNet& net);
/// Successor when process `process` takes one step; nullopt when it is blocked.
std::optional<GlobalState> successor(const SyncNet& net, const GlobalState& state,
                                     std::size_t process);
int stick_count(const SyncNet& net, const GlobalState& state);
VariableAssignment variables_of(const SyncNet& net, const GlobalState& state);
std::string describe(const SyncNet& net, const GlobalState& state);

struct TraceStep {
  std::string process;
  std::string step;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Edge {
  std::size_t to;
  std::size_t process;
};

struct ParentLink {
  std::size_t from;
  std::size_t process;
};

struct ReachabilityReport {
  std::vector<GlobalState> states;  // BFS order; states[0] is the initial state
  std::vector<std::vector<Edge>> edges;
  std::vector<std::optional<ParentLink>> parent;  // BFS tree edge into each state
  std::vector<std::size_t> deadlocks;
  std::set<VariableAssignment> co_occurrences;
  bool truncated = false;

  std::optional<std::size_t> target_witness;     // first state realising the target
  std::vector<std::size_t> decay_states;         // reachable states that can never reach the target
  std::vector<TraceStep> trace_to(const SyncNet& net, std::size_t state) const;
  bool target_reachable() const { return target_witness.has_value(); }
};

inline constexpr std::size_t kDefaultStateBound = 1'000'000;

/// Breadth-first closure over all interleavings of enabled steps.
ReachabilityReport enumerate_reachable(const SyncNet& net,
                                       std::size_t bound = kDefaultStateBound);

struct StickCheck {
  bool holds = true;
  std::optional<std::size_t> violating_state;
  int observed = 0;
};

/// Open semaphores plus stick-holding processes must equal the declared
/// count in every reachable state. Requires net.declared_sticks.
StickCheck check_stick_invariant(const SyncNet& net, const ReachabilityReport& report);

}  // namespace phaseweb::sync
