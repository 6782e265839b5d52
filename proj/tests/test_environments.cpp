#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lpacrl/environments.hpp"
#include "test_util.hpp"

using namespace lpacrl;

namespace {

ChainBanditConfig bandit_cfg(int n, double eta, double sd) {
  ChainBanditConfig cfg;
  cfg.n_tasks = n;
  cfg.learn_rate = eta;
  cfg.noise_sd = sd;
  return cfg;
}

}  // namespace

TEST_CASE("bandit update rule, root task") {
  ChainBanditState state(bandit_cfg(3, 0.1, 0.0));
  Rng rng(1);
  const double r = state.pull(0, rng);
  CHECK(state.competence(0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("fully gated task stays put") {
  ChainBanditConfig cfg = bandit_cfg(3, 0.1, 0.0);
  cfg.gate = GateKind::linear;  // gate multiplier equals prerequisite competence
  ChainBanditState state(cfg);
  Rng rng(2);
  const double r = state.pull(1, rng);
  CHECK(state.competence(1) == doctest::Approx(0.0));
  CHECK(r == doctest::Approx(0.0));
}

TEST_CASE("root competence closed form") {
  ChainBanditState state(bandit_cfg(2, 0.05, 0.0));
  Rng rng(3);
  for (int n = 1; n <= 200; ++n) {
    state.pull(0, rng);
    const double expected = 1.0 - std::pow(0.95, n);
    CHECK(std::abs(state.competence(0) - expected) < 1e-12);
  }
}

TEST_CASE("step gate blocks until the prerequisite crosses the threshold") {
  ChainBanditState state(bandit_cfg(4, 0.2, 0.0));
  Rng rng(4);
  // hammer task 1 while task 0 is below 0.5: nothing happens
  for (int i = 0; i < 50; ++i) state.pull(1, rng);
  CHECK(state.competence(1) == doctest::Approx(0.0));
  while (state.competence(0) < 0.5) state.pull(0, rng);
  state.pull(1, rng);
  CHECK(state.competence(1) == doctest::Approx(0.2));
}

TEST_CASE("competence is monotone and gated under arbitrary noise-free schedules") {
  ChainBanditState state(bandit_cfg(5, 0.3, 0.0));
  Rng rng(5);
  std::vector<double> last(5, 0.0);
  for (int i = 0; i < 500; ++i) {
    const int task = static_cast<int>(rng.uniform_int(5));
    const std::vector<double> before = state.competences();
    state.pull(task, rng);
    for (int t = 0; t < 5; ++t) {
      CHECK(state.competence(t) >= last[static_cast<std::size_t>(t)]);
      CHECK(state.competence(t) <= 1.0);
      last[static_cast<std::size_t>(t)] = state.competence(t);
    }
    // a task never gains competence while its prerequisite sits below the gate
    if (task > 0 && before[static_cast<std::size_t>(task - 1)] < 0.5)
      CHECK(state.competence(task) == before[static_cast<std::size_t>(task)]);
  }
}

TEST_CASE("peek never mutates") {
  ChainBanditState state(bandit_cfg(2, 0.5, 0.0));
  Rng rng(6);
  state.pull(0, rng);
  const double before = state.competence(0);
  for (int i = 0; i < 10; ++i) state.peek(0, rng);
  CHECK(state.competence(0) == before);
}

TEST_CASE("bandit env runs single-step episodes") {
  auto state = std::make_shared<ChainBanditState>(bandit_cfg(8, 0.1, 0.0));
  ChainBanditEnv env(state, /*frozen=*/false);
  CHECK(env.observation_dim() == 8);
  CHECK(env.discrete_actions());
  Rng rng(7);
  TaskParams params;
  params.index = 3;
  const std::vector<double> obs = env.reset(params, rng);
  CHECK(obs[3] == 1.0);
  CHECK(obs[0] == 0.0);

  // an episode on the chain root advances its competence and pays it out
  params.index = 0;
  env.reset(params, rng);
  const std::vector<double> action{0.0};
  const StepResult step = env.step(action);
  CHECK(step.done);
  CHECK(step.reward == doctest::Approx(0.1));
  const EpisodeSummary s = env.summary();
  CHECK(s.length == 1);
  CHECK(s.fall_step == 1);
  CHECK(s.episodic_reward == doctest::Approx(0.1));
  CHECK_THROWS_AS(env.step(action), std::logic_error);
}

namespace {

PointMassConfig pm_cfg(double hazard_base = 0.0, double hazard_gain = 0.0) {
  PointMassConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 100;
  cfg.v_fail = 8.0;
  cfg.levels = {{"flat", 10.0, 0.5, hazard_base, hazard_gain, 0.0}};
  return cfg;
}

TaskParams pm_params(double v_cmd, int level = 0) {
  TaskParams params;
  params.index = 0;
  params.values.resize(2);
  params.values[0].value = v_cmd;
  params.values[1].coord = level;
  return params;
}

PointMassBinding pm_binding() {
  PointMassBinding b;
  b.command_dims = {0};
  b.level_dim = 1;
  return b;
}

}  // namespace

TEST_CASE("reset gives (v=0, command, zero action) and is seed-deterministic") {
  PointMassEnv env(pm_cfg(), pm_binding());
  Rng rng_a(77);
  const std::vector<double> obs = env.reset(pm_params(1.25), rng_a);
  REQUIRE(obs.size() == 3);
  CHECK(obs[0] == 0.0);
  CHECK(obs[1] == doctest::Approx(1.25));
  CHECK(obs[2] == 0.0);

  // identical seeds give identical stochastic episodes
  auto roll = [&](std::uint64_t seed) {
    PointMassEnv e(pm_cfg(0.05, 0.0), pm_binding());
    Rng rng(seed);
    e.reset(pm_params(1.25), rng);
    std::vector<double> rewards;
    bool done = false;
    while (!done) {
      const StepResult s = e.step(std::vector<double>{0.5});
      rewards.push_back(s.reward);
      done = s.done;
    }
    return rewards;
  };
  CHECK(roll(5) == roll(5));
}

TEST_CASE("perfect tracking earns the full kernel") {
  PointMassEnv env(pm_cfg(), pm_binding());
  Rng rng(8);
  env.reset(pm_params(0.0), rng);
  // v = v* = 0 and zero action: reward = phi(0) = 1 exactly
  const std::vector<double> zero{0.0};
  const StepResult step = env.step(zero);
  CHECK(step.reward == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tracking kernel hand value at error 0.5") {
  // steady state: with drag d and constant action a, v* = a/d makes the
  // pre-step v persistently equal to v_cmd - 0.5 after we engineer it below.
  PointMassConfig cfg = pm_cfg();
  cfg.dt = 1.0;
  cfg.levels[0].drag = 0.0;
  PointMassEnv env(cfg, pm_binding());
  Rng rng(9);
  env.reset(pm_params(0.5), rng);
  // one zero-action step keeps v = 0, error = 0.5 -> reward = e^{-1}
  const std::vector<double> zero{0.0};
  const StepResult step = env.step(zero);
  CHECK(step.reward == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("hazard-free episodes run exactly horizon steps") {
  PointMassEnv env(pm_cfg(), pm_binding());
  Rng rng(10);
  env.reset(pm_params(1.0), rng);
  int steps = 0;
  bool done = false;
  const std::vector<double> a{0.3};
  while (!done) {
    done = env.step(a).done;
    ++steps;
  }
  CHECK(steps == 100);
  const EpisodeSummary s = env.summary();
  CHECK(s.fall_step == 100);
  CHECK(s.length == 100);
}

TEST_CASE("per-step reward bound") {
  PointMassEnv env(pm_cfg(), pm_binding());
  Rng rng(11);
  env.reset(pm_params(2.0), rng);
  const double a_range = 2.0 * 10.0;
  bool done = false;
  while (!done) {
    const std::vector<double> a{rng.uniform(-30.0, 30.0)};  // clipped to +-a_max inside
    const StepResult step = env.step(a);
    done = step.done;
    CHECK(step.reward <= 1.0);
    CHECK(step.reward > -0.01 * a_range * a_range);
  }
}

TEST_CASE("determinism: same seed, same actions, same results") {
  auto run = [] {
    PointMassEnv env(pm_cfg(0.01, 0.0), pm_binding());
    Rng rng(12);
    env.reset(pm_params(1.5), rng);
    std::vector<double> rewards;
    Rng action_rng(99);
    bool done = false;
    while (!done) {
      const std::vector<double> a{action_rng.uniform(-5.0, 5.0)};
      const StepResult step = env.step(a);
      rewards.push_back(step.reward);
      done = step.done;
    }
    return rewards;
  };
  const auto r1 = run();
  const auto r2 = run();
  REQUIRE(r1.size() == r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1[i] == r2[i]);
}

TEST_CASE("constant action converges to the drag fixed point") {
  PointMassConfig cfg = pm_cfg();
  cfg.horizon = 2000;
  PointMassEnv env(cfg, pm_binding());
  Rng rng(13);
  env.reset(pm_params(0.0), rng);
  const double a = 2.0, d = 0.5;
  const double fixed_point = a / d;
  const std::vector<double> action{a};
  StepResult step;
  for (int i = 0; i < 600; ++i) step = env.step(action);
  const double v = step.observation[0];
  CHECK(std::abs(v - fixed_point) < 0.01 * fixed_point);
}

TEST_CASE("fall terminates with a zero-reward step and truncated series") {
  PointMassConfig cfg = pm_cfg(0.999, 0.0);  // near-certain per-step fall
  PointMassEnv env(cfg, pm_binding());
  Rng rng(14);
  env.reset(pm_params(1.0), rng);
  const std::vector<double> a{0.0};
  const StepResult step = env.step(a);
  CHECK(step.done);
  CHECK(step.reward == 0.0);
  REQUIRE(step.fall_step.has_value());
  CHECK(*step.fall_step == 0);
  const EpisodeSummary s = env.summary();
  CHECK(s.fall_step == 0);
  CHECK(s.length == cfg.horizon);
  CHECK(s.epte_per_channel[0] == doctest::Approx(1.0));
}

TEST_CASE("presets expose the documented spaces") {
  CHECK(make_preset("chain8").space.size() == 8);
  CHECK(make_preset("pm_flat8").space.size() == 8);
  CHECK(make_preset("pm_scaled").space.size() == 40);
  CHECK(make_preset("space600").space.size() == 600);
  CHECK_FALSE(make_preset("space600").runnable());
  CHECK_THROWS_AS(make_preset("nope"), std::invalid_argument);
  CHECK_THROWS_AS(make_preset("space600").make_env(nullptr), std::invalid_argument);
}

TEST_CASE("pm_scaled rough mode is hazard-dominated at high command") {
  const Preset preset = make_preset("pm_scaled");
  PointMassEnv env(preset.pm, preset.binding);
  Rng rng(15);
  TaskParams params;
  params.values.resize(3);
  params.values[0].value = 2.4;  // vx command
  params.values[1].value = 2.9;  // wz command
  params.values[2].coord = 1;    // rough
  params.index = 0;
  env.reset(params, rng);
  const double h = env.hazard();
  CHECK(h > 0.005);
  // survival of 90% of the horizon is essentially impossible
  const double p_alive = std::pow(1.0 - h, 0.9 * preset.pm.horizon);
  CHECK(p_alive < 1e-3);

  params.values[0].value = 0.2;
  params.values[1].value = 0.3;
  params.values[2].coord = 0;  // flat mode never falls
  env.reset(params, rng);
  CHECK(env.hazard() == 0.0);
}
