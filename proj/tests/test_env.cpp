#include "phaseweb/env.hpp"

#include <doctest.h>

using namespace phaseweb;

namespace {

constexpr auto P = Polarity::positive;
constexpr auto N = Polarity::negative;

EnvSpec blocks(std::vector<SensorId> places, Assignment initial) {
  EnvSpec s;
  s.kind = EnvKind::blocks;
  s.sensors = std::move(places);
  s.initial = std::move(initial);
  return s;
}

std::size_t full(const EnvState& e) {
  std::size_t n = 0;
  for (const auto& [s, v] : e.sensors) n += v == P;
  return n;
}

}  // namespace

TEST_CASE("env_read") {
  CHECK(env_read(make_env(blocks({"p", "q"}, {{"p", P}}))) == Assignment{{"p", P}, {"q", N}});
  EnvSpec sw;
  sw.kind = EnvKind::switches;
  sw.sensors = {"l1", "l2"};
  CHECK(env_read(make_env(sw)) == Assignment{{"l1", N}, {"l2", N}});
  EnvSpec sc;
  sc.kind = EnvKind::scripted;
  sc.sensors = {"x"};
  sc.initial = {{"x", P}};
  sc.script = {{5, "x", N}};
  CHECK(env_read(make_env(sc)) == Assignment{{"x", P}});
}

TEST_CASE("blocks: a paired move relocates the block") {
  auto e = make_env(blocks({"p", "q"}, {{"p", P}}));
  const std::vector<TransformToken> fx{{"p", P, N}, {"q", N, P}};
  e = env_apply(e, fx);
  CHECK(env_read(e) == Assignment{{"p", N}, {"q", P}});
}

TEST_CASE("blocks: infeasible and unpaired transforms are logged no-ops") {
  auto e = make_env(blocks({"p", "q"}, {{"p", P}}));
  const std::vector<TransformToken> bad{{"q", P, N}};
  e = env_apply(e, bad);
  CHECK(env_read(e) == Assignment{{"p", P}, {"q", N}});
  CHECK(e.log.size() == 1);
  const std::vector<TransformToken> lone{{"p", P, N}};
  e = env_apply(e, lone);
  CHECK(env_read(e) == Assignment{{"p", P}, {"q", N}});
  CHECK(e.last_effects.at(0).note == "unpaired");
}

TEST_CASE("blocks are conserved under any effect stream") {
  auto e = make_env(blocks({"a", "b", "c", "d"}, {{"a", P}, {"c", P}}));
  std::mt19937 rng(1);
  const std::vector<SensorId> ids{"a", "b", "c", "d"};
  for (int i = 0; i < 200; ++i) {
    std::vector<TransformToken> fx;
    for (int k = 0; k < 3; ++k) {
      const auto& s = ids[rng() % 4];
      const Polarity from = rng() % 2 ? P : N;
      fx.push_back({s, from, flip(from)});
    }
    e = env_apply(e, fx);
    REQUIRE(full(e) == 2);
  }
}

TEST_CASE("switches flip; scripted ignores effects; unknown effectors throw") {
  EnvSpec sw;
  sw.kind = EnvKind::switches;
  sw.sensors = {"l1"};
  auto e = make_env(sw);
  const std::vector<TransformToken> on{{"l1", N, P}};
  e = env_apply(e, on);
  CHECK(e.sensors.at("l1") == P);
  const std::vector<TransformToken> ghost{{"l9", N, P}};
  CHECK_THROWS_AS(env_apply(e, ghost), std::invalid_argument);

  EnvSpec sc;
  sc.kind = EnvKind::scripted;
  sc.sensors = {"x"};
  auto s = make_env(sc);
  const std::vector<TransformToken> fx{{"x", N, P}};
  s = env_apply(s, fx);
  CHECK(s.sensors.at("x") == N);
  CHECK(sc.effectors().empty());
}

TEST_CASE("env_step plays the script back") {
  EnvSpec sc;
  sc.kind = EnvKind::scripted;
  sc.sensors = {"p"};
  sc.initial = {{"p", P}};
  sc.script = {{5, "p", N}};
  auto e = make_env(sc);
  e = env_step(e, 4);
  CHECK(e.sensors.at("p") == P);
  CHECK(e.has_pending_events());
  e = env_step(e, 5);
  CHECK(e.sensors.at("p") == N);
  CHECK_FALSE(e.has_pending_events());
  const auto before = e;
  e = env_step(e, 6);
  CHECK(e.sensors == before.sensors);
}

TEST_CASE("blocks script events keep the block count") {
  auto spec = blocks({"p", "q", "r"}, {{"p", P}});
  spec.script = {{1, "q", P}, {2, "q", N}};
  auto e = make_env(spec);
  e = env_step(e, 1);
  CHECK(env_read(e) == Assignment{{"p", N}, {"q", P}, {"r", N}});
  e = env_step(e, 2);
  CHECK(env_read(e) == Assignment{{"p", P}, {"q", N}, {"r", N}});
}

TEST_CASE("noise is seeded and reproducible; zero noise is pure playback") {
  EnvSpec sw;
  sw.kind = EnvKind::switches;
  sw.sensors = {"a", "b", "c"};
  sw.noise = 0.3;
  sw.seed = 42;
  auto x = make_env(sw), y = make_env(sw);
  for (Tick t = 0; t < 50; ++t) {
    x = env_step(x, t);
    y = env_step(y, t);
    REQUIRE(x.sensors == y.sensors);
  }
  sw.noise = 0.0;
  auto z = make_env(sw);
  for (Tick t = 0; t < 50; ++t) z = env_step(z, t);
  CHECK(z.sensors == make_env(sw).sensors);
}

TEST_CASE("spec validation names the field") {
  auto s = blocks({"p", "p"}, {});
  CHECK_THROWS_WITH(s.validate(), doctest::Contains("env.sensors"));
  s = blocks({"p"}, {{"z", P}});
  CHECK_THROWS_WITH(s.validate(), doctest::Contains("env.initial"));
  s = blocks({"p", "q"}, {});
  s.script = {{3, "p", P}, {3, "q", P}};
  CHECK_THROWS_WITH(s.validate(), doctest::Contains("env.script"));
  s.script = {};
  s.noise = 2.0;
  CHECK_THROWS_WITH(s.validate(), doctest::Contains("env.noise"));
  CHECK_THROWS_AS(env_kind_from_string("ocean"), std::invalid_argument);
}
