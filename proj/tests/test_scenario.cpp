#include "phaseweb/scenario.hpp"

#include <doctest.h>

using namespace phaseweb;
using nlohmann::json;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(PHASEWEB_SOURCE_DIR) + "/scenarios/" + name;
}

json blocks_json() {
  return json::parse(R"({
    "env": {"kind": "blocks", "sensors": ["p", "q"], "initial": {"p": 1}},
    "observations": [{"p": 1, "q": -1}, {"p": -1, "q": 1}],
    "goals": [{"sensor": "p", "from": 1, "to": -1}],
    "ticks": 10
  })");
}

void rejects(json j, const std::string& field) {
  CHECK_THROWS_WITH_AS(parse_scenario(j), doctest::Contains(field.c_str()), ValidationError);
}

}  // namespace

TEST_CASE("parsing fills defaults") {
  const auto s = parse_scenario(blocks_json());
  CHECK(s.name == "unnamed");
  CHECK(s.sensors == std::vector<SensorId>{"p", "q"});
  CHECK(s.engine.arity == 2);
  CHECK(s.stop_on_quiescence);
  CHECK_FALSE(s.setpoint);
  CHECK(s.goals.size() == 1);
}

TEST_CASE("validation errors name the field") {
  auto j = blocks_json();
  j["ticks"] = 0;
  rejects(j, "ticks");

  j = blocks_json();
  j["sensors"] = {"p", "q", "p"};
  rejects(j, "sensors: duplicate");

  j = blocks_json();
  j["goals"][0]["sensor"] = "z";
  rejects(j, "goals[0].sensor");

  j = blocks_json();
  j["env"]["script"] = json::parse(R"([{"tick": 4, "sensor": "p", "value": 1}, {"tick": 2, "sensor": "q", "value": 1}])");
  rejects(j, "env.script");

  j = blocks_json();
  j["hierarchy"] = json::parse(R"([{"type": "spiral"}])");
  rejects(j, "hierarchy[0].type");

  j = blocks_json();
  j["goals"][0]["to"] = 0;
  rejects(j, "goals[0].to");

  j = blocks_json();
  j.erase("env");
  rejects(j, "env");

  CHECK_THROWS_AS(load_scenario(scenario_path("missing.json")), ValidationError);
}

TEST_CASE("blocks scenario satisfies its goal and settles") {
  const auto r = run_scenario(load_scenario(scenario_path("blocks.json")));
  CHECK(r.summary.goals_satisfied >= 1);
  CHECK(r.summary.quiescent);
  CHECK(r.summary.ticks < 10);
  CHECK(env_read(r.world.env) == Assignment{{"p", Polarity::negative}, {"q", Polarity::positive}});
}

TEST_CASE("autopoiesis keeps its setpoint through every perturbation") {
  const auto r = run_scenario(load_scenario(scenario_path("autopoiesis.json")));
  REQUIRE(r.summary.setpoint);
  const auto& sp = *r.summary.setpoint;
  CHECK(r.summary.ticks == 200);
  CHECK(sp.perturbations == 9);
  CHECK(sp.restored == sp.perturbations);
  CHECK(sp.max_recovery_ticks <= 10);
  CHECK(sp.all_restored_within);
  for (std::size_t i = 0; i < sp.perturbed_at.size(); ++i) CHECK(sp.perturbed_at[i] == Tick(20 * (i + 1)));
}

TEST_CASE("identical runs give identical traces and summaries") {
  const auto s = load_scenario(scenario_path("autopoiesis.json"));
  const auto a = run_scenario(s), b = run_scenario(s);
  CHECK(a.world.trace == b.world.trace);
  CHECK(to_json(a.summary) == to_json(b.summary));
}

TEST_CASE("run_for ignores quiescence") {
  const auto w = run_for(load_scenario(scenario_path("blocks.json")), 7);
  CHECK(w.tick == 7);
  CHECK(w.quiescent);
}

TEST_CASE("hierarchy dump shape") {
  const auto w = make_world(load_scenario(scenario_path("hierarchy4.json")));
  const auto d = hierarchy_dump(w);
  CHECK(d["tick"] == 0);
  REQUIRE(d["base"]["levels"].size() == 1);
  CHECK(d["base"]["levels"][0]["actions"].size() == 6);
  REQUIRE(d["layers"].size() == 1);
  CHECK(d["layers"][0]["type"] == "meta");
  CHECK(d["layers"][0]["levels"][0]["level"] == 2);
  CHECK(d["layers"][0]["levels"][0]["actions"].size() == 15);
  const auto& first = d["base"]["levels"][0]["actions"][0];
  for (const char* k : {"id", "kind", "level", "halves", "changed", "context"}) CHECK(first.contains(k));
  CHECK(d["values"]["p"] == -1);
}

TEST_CASE("summary JSON") {
  RunSummary s;
  s.ticks = 3;
  CHECK(to_json(s)["ticks"] == 3);
  CHECK_FALSE(to_json(s).contains("setpoint"));
  s.setpoint = SetpointReport{};
  CHECK(to_json(s)["setpoint"]["all_restored_within"] == true);
}
