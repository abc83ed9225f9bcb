#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "mslab/config.hpp"

using namespace mslab;

namespace {

std::string error_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalPmeDefaults) {
  const RunConfig c = parse_config("model = pme\nm = 4\ntau = 0.01\nh = 0.01\n");
  EXPECT_NEAR(c.scheme.gamma(), 1.0 / 3, 1e-15);
  EXPECT_EQ(c.scheme.tol, 1e-5);
  EXPECT_EQ(c.scheme.max_iter, 500);
  EXPECT_EQ(c.scheme.label(), "M");
  EXPECT_EQ(c.t_start, 0.5);
  EXPECT_EQ(c.t_end, 1.0);
  EXPECT_EQ(c.ic, InitialCondition::Barenblatt);
}

TEST(Config, GammaFollowsExponents) {
  EXPECT_NEAR(parse_config("m = 3\n").scheme.gamma(), 0.5, 1e-15);
  EXPECT_NEAR(parse_config("model = biofilm\n").scheme.gamma(), 0.25, 1e-15);
  EXPECT_NEAR(parse_config("model = biofilm\nalpha = 2\n").scheme.gamma(), 0.5, 1e-15);
  EXPECT_NEAR(parse_config("m = 3\ngamma = 0.7\n").scheme.gamma(), 0.7, 1e-15);
}

TEST(Config, BiofilmPreset) {
  const RunConfig c = parse_config("model = biofilm\nk1 = 0.4\nk2 = 0.01\nk3 = 1\nk4 = 0.42\n");
  EXPECT_EQ(c.biofilm, BiofilmParameters{});
  EXPECT_EQ(c.ic, InitialCondition::Hemispheres);
  EXPECT_EQ(c.t_start, 0.0);
  EXPECT_EQ(c.t_end, 1.2);
  const RunSetup s = build_setup(c);
  EXPECT_NEAR(run_u_breve(s.model, s.problem, s.grid, s.u0), 0.993487, 1e-6);
  EXPECT_NEAR(s.u0.max(), 0.9, 0.01);
}

TEST(Config, OverridesWin) {
  const RunConfig c = parse_config("tau = 0.01\nh = 0.02\n", {"tau=0.05", "h=0.1", "tau=0.02"});
  EXPECT_EQ(c.tau, 0.02);
  EXPECT_EQ(c.h, 0.1);
}

TEST(Config, NumberForms) {
  EXPECT_NEAR(parse_number("10^-1.5"), std::pow(10.0, -1.5), 1e-18);
  EXPECT_EQ(parse_number("1e-3"), 1e-3);
  EXPECT_EQ(parse_number(" 0.5 "), 0.5);
  EXPECT_THROW(parse_number("abc", "tol"), ConfigError);
  const RunConfig c = parse_config("taus = 10^-1, 10^-1.5, 1e-2\n");
  ASSERT_EQ(c.taus.size(), 3u);
  EXPECT_NEAR(c.taus[1], std::pow(10.0, -1.5), 1e-18);
}

TEST(Config, CommentsAndBlankLines) {
  const RunConfig c = parse_config("# header\n\nh = 0.02  # trailing\n   \n");
  EXPECT_EQ(c.h, 0.02);
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_NE(error_of("bogus = 1\n").find("bogus"), std::string::npos);
  EXPECT_NE(error_of("h = -1\n").find("h"), std::string::npos);
  EXPECT_NE(error_of("tol = x\n").find("tol"), std::string::npos);
  EXPECT_NE(error_of("scheme = fancy\n").find("scheme"), std::string::npos);
  EXPECT_NE(error_of("bc_u = robin\n").find("bc_u"), std::string::npos);
  EXPECT_NE(error_of("k1 = 0.3\n").find("does not apply"), std::string::npos);
  EXPECT_NE(error_of("model = biofilm\nm = 3\n").find("m: key does not apply"), std::string::npos);
  EXPECT_NE(error_of("just text\n").find("key = value"), std::string::npos);
  EXPECT_NE(error_of("model = foam\n").find("model"), std::string::npos);
  EXPECT_NE(error_of("snapshot_times = 3\n").find("snapshot_times"), std::string::npos);
  EXPECT_NE(error_of("ic = hemispheres\nic_height = 1.0\nmodel = biofilm\n").find("ic_height"),
            std::string::npos);
}

TEST(Config, TauAtGrowthLimitIsRejected) {
  const std::string e = error_of("t_start = 0\nt_end = 2\ntau = 1\n");
  EXPECT_NE(e.find("tau"), std::string::npos);
  EXPECT_NE(e.find("1/f_M"), std::string::npos);
  EXPECT_NE(e.find("tau_disc"), std::string::npos);
  EXPECT_NE(error_of("taus = 0.01, 1.0\n", {"t_end=1.5"}).find("taus"), std::string::npos);
}

TEST(Config, EchoRoundTrips) {
  const std::vector<std::string> docs = {
      "",
      "model = biofilm\nmu = 1\ndim = 2\nh = 0.05\nsweep_schemes = M:1e-2, Newton, L:0.5\n",
      "scheme = l\nL = 3\nbc_u_left = neumann\nsnapshot_times = 0.6, 0.9\nic_C = 0.01\n",
      "model = biofilm\nbc_v_right = dirichlet:0.3\nic = constant\nic_value = 0.2\n"
      "on_failure = continue\ncontraction_metric = increment\n",
      "study = sweep\ntaus = 10^-1, 10^-1.5\nhs = 0.1, 0.05\nrun_id = sw\n"};
  for (const std::string& doc : docs) {
    const RunConfig c = parse_config(doc);
    const std::string echo = to_config_text(c);
    const RunConfig again = parse_config(echo);
    EXPECT_TRUE(again == c) << echo;
    EXPECT_EQ(to_config_text(again), echo);
  }
}

TEST(Config, SetupSpaces) {
  const RunSetup ode = build_setup(parse_config("model = biofilm\nh = 0.1\n"));
  EXPECT_EQ(ode.v0.space(), Space::P0);
  const RunSetup pde = build_setup(parse_config("model = biofilm\nmu = 1\nh = 0.1\n"));
  EXPECT_EQ(pde.v0.space(), Space::P1);
  EXPECT_EQ(pde.v0[0], 1.0);
  const RunSetup two = build_setup(parse_config("model = biofilm\ndim = 2\nh = 0.25\n"));
  EXPECT_EQ(two.problem.mesh().dim(), 2);
  EXPECT_EQ(two.problem.mesh().num_cells(), 2 * 8 * 8);
}

TEST(Config, BarenblattInitialSupport) {
  const RunConfig c = parse_config("h = 0.001\n");
  const RunSetup s = build_setup(c);
  double support = 0.0;
  for (int k = 0; k < s.u0.size(); ++k)
    if (s.u0[k] > 0.0) support = std::max(support, std::abs(s.problem.mesh().centroid(k)[0]));
  EXPECT_NEAR(support, 0.6, 2e-3);
}
