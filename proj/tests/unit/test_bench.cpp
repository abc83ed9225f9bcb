#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "mslab/config.hpp"
#include "mslab/exact.hpp"
#include "mslab/study.hpp"

using namespace mslab;

namespace {

BarenblattParams params(double C, double m = 4.0, int d = 1) {
  BarenblattParams p;
  p.m = m;
  p.d = d;
  p.C = C;
  return p;
}

double trapezoid_mass(const BarenblattParams& p, double t, int n = 10000) {
  const double r = barenblatt_support_radius(t, p);
  const double dx = 2 * r / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    s += w * barenblatt(Point{-r + i * dx, 0.0}, t, p);
  }
  return s * dx;
}

RunRecord constant_record(const Mesh& mesh, double tau, int steps, double u_value) {
  RunRecord rec;
  rec.tau = tau;
  for (int n = 0; n <= steps; ++n) {
    rec.history.push_back(Snapshot{n, n * tau, Field::p0(mesh, u_value), Field::p1(mesh, 0.0),
                                   Field::p0(mesh, 0.0)});
    if (n > 0) rec.steps.push_back(StepRecord{n, n * tau});
  }
  return rec;
}

}  // namespace

TEST(Barenblatt, Examples) {
  EXPECT_DOUBLE_EQ(barenblatt_kappa(4.0, 1), 0.075);
  EXPECT_NEAR(barenblatt(Point{0, 0}, 1.0, params(1.0)), 1.0, 1e-15);
  EXPECT_EQ(barenblatt(Point{1, 0}, 1.0, params(0.075)), 0.0);
  EXPECT_NEAR(barenblatt(Point{1, 0}, 1.0, params(1.0)), std::cbrt(0.925), 1e-15);
  EXPECT_NEAR(barenblatt(Point{1, 0}, 1.0, params(1.0)), 0.974348, 1e-6);
  EXPECT_THROW(barenblatt(Point{0, 0}, 0.0, params(1.0)), std::invalid_argument);
}

TEST(Barenblatt, MassConservation) {
  const BarenblattParams p = params(0.3);
  const double m0 = trapezoid_mass(p, 0.5);
  for (double t : {1.0, 2.0, 5.0}) EXPECT_NEAR(trapezoid_mass(p, t) / m0, 1.0, 1e-6) << t;
}

TEST(Barenblatt, SupportIsFinite) {
  for (int d : {1, 2}) {
    const BarenblattParams p = params(0.2, 3.0, d);
    for (double t : {0.3, 1.0, 4.0}) {
      const double r = barenblatt_support_radius(t, p);
      EXPECT_GT(barenblatt(Point{0.999 * r, 0}, t, p), 0.0);
      EXPECT_EQ(barenblatt(Point{r * (1 + 1e-12), 0}, t, p), 0.0);
      EXPECT_EQ(barenblatt(Point{0, 1.5 * r}, t, p), d == 2 ? 0.0 : barenblatt(Point{0, 0}, t, p));
    }
  }
}

TEST(Barenblatt, ConstantForRadius) {
  BarenblattParams p = params(1.0);
  p.C = barenblatt_constant_for_radius(0.6, 0.5, p);
  const double s = pme_similarity_time(0.5, p);
  EXPECT_NEAR(barenblatt_support_radius(s, p), 0.6, 1e-13);
}

TEST(ModifiedPme, Examples) {
  const BarenblattParams p = params(0.05);
  for (double x : {0.0, 0.1, 0.3})
    EXPECT_NEAR(exact_modified_pme(Point{x, 0}, 0.0, p), barenblatt(Point{x, 0}, 1.0 / 3, p), 1e-15);
  for (double t : {0.5, 0.8, 1.0}) {
    const double s = pme_similarity_time(t, p);
    EXPECT_NEAR(exact_modified_pme(Point{0, 0}, t, p) / barenblatt(Point{0, 0}, s, p), std::exp(t), 1e-13);
  }
  BarenblattParams flat = p;
  flat.beta = 0.0;
  EXPECT_THROW(exact_modified_pme(Point{0, 0}, 1.0, flat), std::invalid_argument);
}

TEST(ModifiedPme, FiniteDifferenceResidual) {
  BarenblattParams p = params(1.0);
  p.C = barenblatt_constant_for_radius(0.6, 0.5, p);
  const double d = 1e-4;
  const auto u = [&](double x, double t) { return exact_modified_pme(Point{x, 0}, t, p); };
  const auto phi = [&](double x, double t) { return std::pow(u(x, t), p.m); };
  for (double t : {0.6, 0.8, 1.0}) {
    for (double x : {0.0, 0.15, 0.3, 0.45}) {
      const double dt = (u(x, t + d) - u(x, t - d)) / (2 * d);
      const double lap = (phi(x + d, t) - 2 * phi(x, t) + phi(x - d, t)) / (d * d);
      EXPECT_LE(std::abs(dt - lap - p.beta * u(x, t)), 1e-4) << "x=" << x << " t=" << t;
    }
  }
}

TEST(SpaceTimeError, OneStepConstantRecord) {
  const Mesh m = build_mesh(Interval{0, 1}, 0.25);
  const RunRecord rec = constant_record(m, 0.1, 1, 1.0);
  const ExactSolution exact{[](const Point&, double) { return 0.0; },
                            [](const Point&, double) { return 0.0; },
                            [](const Point&, double) { return 0.0; }};
  EXPECT_NEAR(spacetime_error(rec, exact), 0.1, 1e-15);
}

TEST(SpaceTimeError, ConstantInTimeExact) {
  const Mesh m = build_mesh(Interval{0, 1}, 0.25);
  const RunRecord rec = constant_record(m, 0.05, 4, 0.7);
  const ExactSolution exact{[](const Point&, double) { return 0.7; },
                            [](const Point&, double) { return 0.0; }, {}};
  EXPECT_NEAR(spacetime_error(rec, exact), 0.0, 1e-28);
}

TEST(SpaceTimeError, InjectedExactFieldsAreSmall) {
  BarenblattParams p = params(1.0);
  p.C = barenblatt_constant_for_radius(0.6, 0.5, p);
  const ExactSolution exact = pme_exact_solution(p, Nonlinearity(PowerLaw{4.0}));
  double previous = 0.0;
  for (double h : {0.02, 0.01}) {
    const Mesh m = build_mesh(Interval{-1, 1}, h);
    const double tau = h;
    RunRecord rec;
    for (int n = 0; n <= static_cast<int>(std::lround(0.5 / tau)); ++n) {
      const double t = 0.5 + n * tau;
      // The numerical u_n approximates u at the end of its step.
      rec.history.push_back(Snapshot{n, t, sample_p0(m, [&](const Point& x) { return exact.u(x, t); }),
                                     interpolate_p1(m, [&](const Point& x) { return exact.w(x, t); }),
                                     Field::p0(m)});
      if (n > 0) rec.steps.push_back(StepRecord{n, t});
    }
    const double e = spacetime_error(rec, exact);
    EXPECT_LT(e, 5 * (h * h + tau * tau)) << h;
    if (previous > 0) EXPECT_LT(e, previous);
    previous = e;
  }
}

TEST(SpaceTimeError, NeedsEveryStep) {
  const Mesh m = build_mesh(Interval{0, 1}, 0.25);
  RunRecord rec = constant_record(m, 0.1, 3, 1.0);
  rec.history.pop_back();
  const ExactSolution exact{[](const Point&, double) { return 0.0; },
                            [](const Point&, double) { return 0.0; }, {}};
  EXPECT_THROW(spacetime_error(rec, exact), std::invalid_argument);
}

TEST(FitOrder, Examples) {
  std::vector<std::pair<double, double>> lin, half;
  for (double c : {0.1, 0.03, 0.01, 0.003}) {
    lin.push_back({c, c});
    half.push_back({c, std::sqrt(c)});
  }
  EXPECT_NEAR(fit_order(lin).slope, 1.0, 1e-14);
  EXPECT_NEAR(fit_order(half).slope, 0.5, 1e-14);
  EXPECT_NEAR(fit_order({{0.1, 0.02}, {0.01, 0.002}}).slope, 1.0, 1e-14);
  EXPECT_THROW(fit_order({{0.1, 0.02}}), std::invalid_argument);
  EXPECT_THROW(fit_order({{0.1, 0.02}, {0.01, 0.0}}), std::invalid_argument);
  EXPECT_THROW(fit_order({{0.1, 0.02}, {0.1, 0.03}}), std::invalid_argument);
}

TEST(FitOrder, ScaleInvariant) {
  const std::vector<std::pair<double, double>> base = {{0.1, 0.7}, {0.05, 0.4}, {0.01, 0.09}, {0.002, 0.03}};
  const double slope = fit_order(base).slope;
  for (double a : {1e-3, 7.0})
    for (double b : {1e-5, 42.0}) {
      std::vector<std::pair<double, double>> scaled;
      for (auto [c, e] : base) scaled.push_back({a * c, b * e});
      EXPECT_NEAR(fit_order(scaled).slope, slope, 1e-12);
    }
}

TEST(ContractionRate, Examples) {
  EXPECT_NEAR(contraction_rate({1, 0.5, 0.25, 0.125}), 0.5, 1e-15);
  EXPECT_NEAR(contraction_rate({1, 1, 1, 1}), 1.0, 1e-15);
  EXPECT_NEAR(contraction_rate({1, 0.4, 0.2, 0.064}), 0.4, 1e-15);
  EXPECT_THROW(contraction_rate({1, 0.5, 0.25}), std::invalid_argument);
  EXPECT_THROW(contraction_rate({1, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(ContractionRate, GeometricSequence) {
  for (double q : {0.01, 0.37, 0.9, 1.3}) {
    std::vector<double> e = {2.5};
    for (int i = 0; i < 3; ++i) e.push_back(e.back() * q);
    EXPECT_NEAR(contraction_rate(e), q, 1e-12);
  }
}

TEST(ContractionNorm, Weights) {
  SchemeConfig m;
  m.kind = MScheme{1e-3, 1.0 / 3};
  EXPECT_NEAR(contraction_norm_weight(m, 0.0, 0.01), 2 * 0.01 / (1e-3 * std::cbrt(0.01)), 1e-12);
  SchemeConfig l;
  l.kind = LScheme{2.0};
  EXPECT_NEAR(contraction_norm_weight(l, 1.0, 0.3), 0.2, 1e-15);
}

TEST(Sweep, SinglePointMatchesDirectRun) {
  const RunConfig c = parse_config("model = biofilm\nh = 0.05\ntau = 0.02\nt_end = 0.4\n");
  const std::vector<SweepRow> rows = sweep_study(c, 1);
  ASSERT_EQ(rows.size(), 1u);
  RunSetup s = build_setup(c);
  s.options.on_failure = FailurePolicy::AcceptAndFlag;
  const RunRecord r = execute(s);
  EXPECT_EQ(rows[0].avg_iterations, r.average_iterations);
  EXPECT_EQ(rows[0].failures, r.failed_steps);
}

TEST(Sweep, OrderIndependentOfWorkerCount) {
  const RunConfig c = parse_config(
      "model = biofilm\nt_end = 0.2\ntaus = 0.02, 0.01\nhs = 0.1, 0.05\nsweep_schemes = M:1e-2, Newton\n");
  const auto serial = sweep_study(c, 1);
  const auto parallel = sweep_study(c, 3);
  ASSERT_EQ(serial.size(), 8u);
  std::ostringstream a, b;
  write_sweep_csv(a, serial);
  write_sweep_csv(b, parallel);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(serial[0].scheme, "M");
  EXPECT_EQ(serial[4].scheme, "Newton");
  EXPECT_EQ(serial[1].h, 0.05);
  EXPECT_EQ(serial[2].tau, 0.01);
}

TEST(Sweep, PmeNewtonMatchesMSchemeAtSmallTau) {
  const RunConfig c = parse_config(
      "t_end = 1.1\ntaus = 10^-2.5\nhs = 0.05, 0.02\nsweep_schemes = M:1e-3, Newton\n");
  const auto rows = sweep_study(c, 2);
  ASSERT_EQ(rows.size(), 4u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(rows[i].failures, 0);
    EXPECT_EQ(rows[i + 2].failures, 0);
    EXPECT_LE(std::abs(rows[i].avg_iterations - rows[i + 2].avg_iterations), 1.0);
  }
}

TEST(Sweep, PointErrorsAreRecorded) {
  // tau * f_M >= 1 for the second point of a pme sweep; validation checks only tau.
  RunConfig c = parse_config("t_end = 2.5\ntaus = 0.1\nhs = 0.05\n");
  c.taus = {0.1, 2.0};
  const auto rows = sweep_study(c, 1);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
  EXPECT_EQ(rows[1].failures, -1);
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](int i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
