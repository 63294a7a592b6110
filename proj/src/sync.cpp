#include "phaseweb/sync.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <regex>
#include <sstream>
#include <unordered_map>

namespace phaseweb::sync {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string signed_value(int v) { return v > 0 ? "+1" : "-1"; }

bool matches(const VariableAssignment& target, const VariableAssignment& vars) {
  for (const auto& [id, value] : target) {
    auto it = vars.find(id);
    if (it == vars.end() || it->second != value) return false;
  }
  return true;
}

}  // namespace

std::string to_string(const Step& step) {
  return std::visit(overloaded{
                        [](const Wait& w) { return "wait(" + w.semaphore + ")"; },
                        [](const Signal& s) { return "signal(" + s.semaphore + ")"; },
                        [](const Set& s) { return "set(" + s.variable + "," + signed_value(s.value) + ")"; },
                    },
                    step);
}

Step parse_step(const std::string& text) {
  static const std::regex unary(R"(^\s*(wait|signal)\s*\(\s*([A-Za-z0-9_']+)\s*\)\s*$)");
  static const std::regex set(R"(^\s*set\s*\(\s*([A-Za-z0-9_']+)\s*,\s*([+-]?1)\s*\)\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, unary)) {
    if (m[1] == "wait") return Wait{m[2]};
    return Signal{m[2]};
  }
  if (std::regex_match(text, m, set)) {
    return Set{m[1], m[2].str().find('-') == std::string::npos ? 1 : -1};
  }
  throw std::invalid_argument("unrecognised step '" + text + "'");
}

std::size_t SyncNet::semaphore_index(const std::string& id) const {
  for (std::size_t i = 0; i < semaphores.size(); ++i)
    if (semaphores[i].id == id) return i;
  throw std::invalid_argument("unknown semaphore '" + id + "'");
}

std::size_t SyncNet::variable_index(const std::string& id) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].id == id) return i;
  throw std::invalid_argument("unknown variable '" + id + "'");
}

void SyncNet::validate() const {
  std::set<std::string> seen;
  for (const auto& s : semaphores)
    if (!seen.insert(s.id).second) throw std::invalid_argument("duplicate semaphore '" + s.id + "'");
  seen.clear();
  for (const auto& v : variables) {
    if (!seen.insert(v.id).second) throw std::invalid_argument("duplicate variable '" + v.id + "'");
    if (v.value != 1 && v.value != -1)
      throw std::invalid_argument("variable '" + v.id + "' must start at +1 or -1");
  }
  seen.clear();
  for (const auto& p : processes) {
    if (!seen.insert(p.id).second) throw std::invalid_argument("duplicate process '" + p.id + "'");
    if (p.program.empty()) throw std::invalid_argument("process '" + p.id + "' has an empty program");
    if (p.pc >= p.program.size()) throw std::invalid_argument("process '" + p.id + "' pc out of range");
    for (auto pc : p.sticks)
      if (pc >= p.program.size())
        throw std::invalid_argument("process '" + p.id + "' stick position out of range");
    for (const auto& step : p.program) {
      std::visit(overloaded{
                     [&](const Wait& w) { (void)semaphore_index(w.semaphore); },
                     [&](const Signal& s) { (void)semaphore_index(s.semaphore); },
                     [&](const Set& s) {
                       (void)variable_index(s.variable);
                       if (s.value != 1 && s.value != -1)
                         throw std::invalid_argument("set value must be +1 or -1");
                     },
                 },
                 step);
    }
  }
  if (declared_sticks && *declared_sticks < 0)
    throw std::invalid_argument("declared stick count must be >= 0");
  if (target) {
    if (target->empty()) throw std::invalid_argument("target co-occurrence is empty");
    for (const auto& [id, value] : *target) {
      (void)variable_index(id);
      if (value != 1 && value != -1) throw std::invalid_argument("target values must be +1 or -1");
    }
  }
}

StepOutcome wait_step(ProcessDef& p, Semaphore& s) {
  const auto* w = std::get_if<Wait>(&p.current());
  if (w == nullptr || w->semaphore != s.id)
    throw StepMismatch("process '" + p.id + "' is not waiting on '" + s.id + "'");
  if (s.state == SemState::closed) return StepOutcome::blocked;
  s.state = SemState::closed;
  p.advance();
  return StepOutcome::proceeded;
}

StepOutcome signal_step(ProcessDef& p, Semaphore& s) {
  const auto* sig = std::get_if<Signal>(&p.current());
  if (sig == nullptr || sig->semaphore != s.id)
    throw StepMismatch("process '" + p.id + "' is not signalling '" + s.id + "'");
  s.state = SemState::open;
  p.advance();
  return StepOutcome::proceeded;
}

std::size_t GlobalStateHash::operator()(const GlobalState& s) const noexcept {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (auto v : s.open) mix(v);
  for (auto v : s.pcs) mix(v);
  for (auto v : s.vars) mix(static_cast<std::uint8_t>(v));
  return h;
}

GlobalState initial_state(const SyncNet& net) {
  GlobalState s;
  for (const auto& sem : net.semaphores) s.open.push_back(sem.state == SemState::open ? 1 : 0);
  for (const auto& p : net.processes) s.pcs.push_back(static_cast<std::uint32_t>(p.pc));
  for (const auto& v : net.variables) s.vars.push_back(static_cast<std::int8_t>(v.value));
  return s;
}

std::optional<GlobalState> successor(const SyncNet& net, const GlobalState& state,
                                     std::size_t process) {
  ProcessDef p = net.processes.at(process);
  p.pc = state.pcs.at(process);
  GlobalState next = state;
  const bool proceeded = std::visit(
      overloaded{
          [&](const Wait& w) {
            const auto idx = net.semaphore_index(w.semaphore);
            Semaphore sem{w.semaphore, state.open[idx] ? SemState::open : SemState::closed};
            if (wait_step(p, sem) == StepOutcome::blocked) return false;
            next.open[idx] = sem.state == SemState::open ? 1 : 0;
            return true;
          },
          [&](const Signal& s) {
            const auto idx = net.semaphore_index(s.semaphore);
            Semaphore sem{s.semaphore, state.open[idx] ? SemState::open : SemState::closed};
            signal_step(p, sem);
            next.open[idx] = sem.state == SemState::open ? 1 : 0;
            return true;
          },
          [&](const Set& s) {
            next.vars[net.variable_index(s.variable)] = static_cast<std::int8_t>(s.value);
            p.advance();
            return true;
          },
      },
      p.current());
  if (!proceeded) return std::nullopt;
  next.pcs[process] = static_cast<std::uint32_t>(p.pc);
  return next;
}

int stick_count(const SyncNet& net, const GlobalState& state) {
  int count = 0;
  for (auto o : state.open) count += o;
  for (std::size_t i = 0; i < net.processes.size(); ++i)
    if (net.processes[i].sticks.contains(state.pcs[i])) ++count;
  return count;
}

VariableAssignment variables_of(const SyncNet& net, const GlobalState& state) {
  VariableAssignment out;
  for (std::size_t i = 0; i < net.variables.size(); ++i) out[net.variables[i].id] = state.vars[i];
  return out;
}

std::string describe(const SyncNet& net, const GlobalState& state) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < net.semaphores.size(); ++i)
    os << (i ? " " : "") << net.semaphores[i].id << '=' << (state.open[i] ? "open" : "closed");
  for (std::size_t i = 0; i < net.processes.size(); ++i)
    os << ' ' << net.processes[i].id << ".pc=" << state.pcs[i];
  for (std::size_t i = 0; i < net.variables.size(); ++i)
    os << ' ' << net.variables[i].id << '=' << signed_value(state.vars[i]);
  os << '}';
  return os.str();
}

std::vector<TraceStep> ReachabilityReport::trace_to(const SyncNet& net, std::size_t state) const {
  std::vector<TraceStep> trace;
  std::size_t cur = state;
  while (parent.at(cur)) {
    const auto link = *parent[cur];
    const auto& proc = net.processes[link.process];
    trace.push_back({proc.id, to_string(proc.program[states[link.from].pcs[link.process]])});
    cur = link.from;
  }
  std::reverse(trace.begin(), trace.end());
  return trace;
}

ReachabilityReport enumerate_reachable(const SyncNet& net, std::size_t bound) {
  if (bound < 1) throw std::invalid_argument("state bound must be >= 1");
  net.validate();
  ReachabilityReport report;
  std::unordered_map<GlobalState, std::size_t, GlobalStateHash> index;

  auto add = [&](GlobalState s, std::optional<ParentLink> link) -> std::optional<std::size_t> {
    if (auto it = index.find(s); it != index.end()) return it->second;
    if (report.states.size() >= bound) {
      report.truncated = true;
      return std::nullopt;
    }
    const std::size_t id = report.states.size();
    index.emplace(s, id);
    report.states.push_back(std::move(s));
    report.edges.emplace_back();
    report.parent.push_back(link);
    return id;
  };

  add(initial_state(net), std::nullopt);
  for (std::size_t cur = 0; cur < report.states.size(); ++cur) {
    bool any = false;
    for (std::size_t p = 0; p < net.processes.size(); ++p) {
      auto next = successor(net, report.states[cur], p);
      if (!next) continue;
      any = true;
      if (auto id = add(std::move(*next), ParentLink{cur, p})) report.edges[cur].push_back({*id, p});
    }
    if (!any) report.deadlocks.push_back(cur);
  }

  for (const auto& s : report.states) report.co_occurrences.insert(variables_of(net, s));

  if (net.target) {
    const std::size_t n = report.states.size();
    std::vector<std::vector<std::size_t>> reverse_edges(n);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : report.edges[i]) reverse_edges[e.to].push_back(i);

    std::vector<bool> reaches(n, false);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
      if (matches(*net.target, variables_of(net, report.states[i]))) {
        if (!report.target_witness) report.target_witness = i;
        reaches[i] = true;
        queue.push_back(i);
      }
    }
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      for (auto pred : reverse_edges[cur])
        if (!reaches[pred]) {
          reaches[pred] = true;
          queue.push_back(pred);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!reaches[i]) report.decay_states.push_back(i);
  }
  return report;
}

StickCheck check_stick_invariant(const SyncNet& net, const ReachabilityReport& report) {
  if (!net.declared_sticks) throw std::invalid_argument("net declares no stick count");
  StickCheck check;
  for (std::size_t i = 0; i < report.states.size(); ++i) {
    const int count = stick_count(net, report.states[i]);
    if (count != *net.declared_sticks) {
      check.holds = false;
      check.violating_state = i;
      check.observed = count;
      return check;
    }
  }
  return check;
}

}  // namespace phaseweb::sync
