#include <sstream>

#include <gtest/gtest.h>

#include "intercept/error.hpp"
#include "intercept/scenario.hpp"

using namespace intercept;

TEST(Scenario, DefaultsAreValid) { EXPECT_NO_THROW(ScenarioConfig{}.validate()); }

TEST(Scenario, SaveLoadRoundTripIsLossless) {
  ScenarioConfig cfg;
  cfg.law = Law::dglc;
  cfg.t_sw = 0.1 + 0.2;
  cfg.seed = 0xFFFFFFFFFFFFFFF1ULL;
  cfg.sigma_gamma_E = 1.0 / 3.0;
  cfg.noise = estimation::LikelihoodKind::laplace;
  cfg.greedy = true;
  cfg.causal_complement = false;
  cfg.particles_per_mode = 123;
  std::stringstream ss;
  save_config(ss, cfg);
  const auto back = load_config(ss);
  EXPECT_TRUE(back == cfg);
  EXPECT_EQ(back.t_sw, cfg.t_sw);
}

TEST(Scenario, LoadOverridesOnlyGivenKeys) {
  std::istringstream in("# comment\nlaw = DGL1\n t_sw = 2.3  # trailing\n\nk_xi=3\n");
  const auto cfg = load_config(in);
  EXPECT_EQ(cfg.law, Law::dgl1);
  EXPECT_EQ(cfg.t_sw, 2.3);
  EXPECT_EQ(cfg.k_xi, 3.0);
  EXPECT_EQ(cfg.C, ScenarioConfig{}.C);
}

TEST(Scenario, RejectsBadInput) {
  auto load = [](const char* text) {
    std::istringstream in(text);
    return load_config(in);
  };
  EXPECT_THROW(load("no_such_key = 1\n"), ConfigError);
  EXPECT_THROW(load("t_sw\n"), ConfigError);
  EXPECT_THROW(load("t_sw = fast\n"), ConfigError);
  EXPECT_THROW(load("greedy = maybe\n"), ConfigError);
  EXPECT_THROW(load("C = 1.5\n"), ConfigError);
  EXPECT_THROW(load("particles_per_mode = 0\n"), ConfigError);
  EXPECT_THROW(load("law = pn\n"), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/scenario.cfg"), ConfigError);
}

TEST(Scenario, ParseLaw) {
  EXPECT_EQ(parse_law("dgl1"), Law::dgl1);
  EXPECT_EQ(parse_law("DGLC"), Law::dglc);
  EXPECT_EQ(parse_law("tv-dglcc"), Law::tv_dglcc);
  EXPECT_EQ(parse_law(to_string(Law::tv_dglcc)), Law::tv_dglcc);
  EXPECT_THROW(parse_law("dgl2"), ConfigError);
}

TEST(Scenario, InitialStateIsCollisionCourse) {
  const ScenarioConfig cfg;
  const auto s = cfg.initial_state();
  EXPECT_EQ(s.rho, 15000.0);
  EXPECT_EQ(s.a_E, cfg.a_E0);
  EXPECT_EQ(cfg.evader_command(cfg.t_sw - 1e-9), cfg.evader_cmd_before);
  EXPECT_EQ(cfg.evader_command(cfg.t_sw), cfg.evader_cmd_after);
}
