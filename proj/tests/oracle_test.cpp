#include <gtest/gtest.h>

#include <cmath>

#include "dskg/desitter.hpp"
#include "dskg/oracle.hpp"

using dskg::Complex;
using dskg::FDConfig;
using dskg::ModeState;

namespace {

FDConfig base_config(int n_r) {
  FDConfig c;
  c.n_r = n_r;
  c.r_max = 6.5;
  c.t_end = 2.0;
  c.sample_r = {0.5, 1.0, 2.0, 3.0};
  c.sample_t = {0.5, 1.0, 2.0};
  return c;
}

double rel_l2(const dskg::FieldGrid& a, const std::function<Complex(double, double)>& exact) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.r_values.size(); ++i)
    for (std::size_t j = 0; j < a.t_values.size(); ++j) {
      const Complex e = exact(a.r_values[i], a.t_values[j]);
      num += std::norm(a.at(i, j) - e);
      den += std::norm(e);
    }
  return std::sqrt(num / den);
}

}  // namespace

TEST(FiniteDifference, DAlembertForMasslessFlatWave) {
  // l = 0, H = m = 0: r F(r, t) = [(r - t) f(r - t) + (r + t) f(r + t)] / 2.
  auto f = dskg::gaussian_profile(1.0, 0.0, 0);
  auto mode = ModeState::make(0, 0, f);
  const auto fd = dskg::solve_fd(0.0, 0.0, mode, base_config(1000));
  auto exact = [&](double r, double t) { return ((r - t) * f(r - t) + (r + t) * f(r + t)) / (2.0 * r); };
  EXPECT_LE(rel_l2(fd, exact), 1e-3);
  EXPECT_EQ(fd.method, "fd");
}

TEST(FiniteDifference, SecondOrderConvergence) {
  const auto p = dskg::PhysicalParams::make(1.0, 0.5);
  auto mode = ModeState::make(2, 0, dskg::gaussian_profile(1.0, 2.0, 2), dskg::gaussian_profile(1.0, 2.0, 2, 0.5));
  dskg::FieldEvaluator ev(p, mode, dskg::FieldMethod::riemann);
  auto exact = [&](double r, double t) { return ev.radial(r, t); };
  const double e1 = rel_l2(dskg::solve_fd(p, mode, base_config(500)), exact);
  const double e2 = rel_l2(dskg::solve_fd(p, mode, base_config(1000)), exact);
  EXPECT_LE(e2, 1e-4);
  EXPECT_GE(std::log2(e1 / e2), 1.8);
}

TEST(FiniteDifference, HuygensPionicAgreesWithClosedForm) {
  const auto p = dskg::PhysicalParams::make(1.0, std::sqrt(2.0));
  const auto mode = dskg::pionic_mode(2, 1, 0, 1);
  FDConfig c = base_config(2000);
  c.r_max = 40.0;  // the pionic profile is wide; keep the boundary out of reach
  const auto fd = dskg::solve_fd(p, mode, c);
  dskg::FieldEvaluator ev(p, mode, dskg::FieldMethod::huygens_riemann);
  for (std::size_t i = 0; i < c.sample_r.size(); ++i)
    for (std::size_t j = 0; j < c.sample_t.size(); ++j) {
      const Complex want = ev.radial(c.sample_r[i], c.sample_t[j]);
      EXPECT_LE(std::abs(fd.at(i, j) - want), 1e-3 * std::abs(want)) << i << " " << j;
    }
}

TEST(FiniteDifference, SampleTimesAreHitExactly) {
  auto mode = ModeState::make(1, 0, dskg::gaussian_profile(1.0, 1.0, 1));
  FDConfig c = base_config(400);
  c.t_end = 0.0;
  c.sample_t = {0.0};
  const auto fd = dskg::solve_fd(0.5, 0.0, mode, c);
  for (std::size_t i = 0; i < c.sample_r.size(); ++i)
    EXPECT_NEAR(std::abs(fd.at(i, 0) - mode.f0(c.sample_r[i])), 0.0, 1e-6);
}

TEST(FiniteDifference, ConfigValidation) {
  auto mode = ModeState::make(0, 0, dskg::gaussian_profile(1.0, 0.0, 0));
  FDConfig c = base_config(1000);
  c.r_max = 4.0;  // 3 + 2 + 0.5 > 4
  EXPECT_THROW(dskg::solve_fd(0.0, 0.0, mode, c), dskg::ConfigError);
  c = base_config(100);
  EXPECT_THROW(dskg::solve_fd(0.0, 0.0, mode, c), dskg::ConfigError);
  c = base_config(1000);
  c.sample_t = {0.5, 3.0};
  EXPECT_THROW(dskg::solve_fd(0.0, 0.0, mode, c), dskg::ConfigError);
  c = base_config(1000);
  c.cfl_safety = 1.5;
  EXPECT_THROW(dskg::solve_fd(0.0, 0.0, mode, c), dskg::ConfigError);
  EXPECT_THROW(dskg::solve_fd(dskg::PhysicalParams::make(1.0, 0.5, 2), mode, base_config(1000)), dskg::InvalidParam);
}

TEST(FiniteDifference, OversizedStepIsDetected) {
  auto mode = ModeState::make(0, 0, dskg::gaussian_profile(1.0, 0.0, 0));
  FDConfig c = base_config(1000);
  c.dt_override = 5.0 * c.r_max / c.n_r;
  EXPECT_THROW(dskg::solve_fd(0.0, 0.0, mode, c), dskg::InstabilityDetected);
}

TEST(Grid, EvaluationIndependentOfWorkers) {
  std::vector<double> r{0.5, 1.0, 1.5, 2.0}, t{0.0, 0.5, 1.0};
  auto f = [](double rr, double tt) { return Complex(std::sin(rr * tt), rr - tt); };
  const auto a = dskg::evaluate_grid(r, t, f, "x", 1);
  const auto b = dskg::evaluate_grid(r, t, f, "x", 8);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.at(2, 1), f(1.5, 0.5));
  EXPECT_TRUE(a.all_ok());
}

TEST(Grid, FailuresAreFlagged) {
  auto f = [](double rr, double) -> Complex {
    if (rr == 1.0) throw dskg::ToleranceNotMet("loose", Complex(7.0), 1.0);
    if (rr == 2.0) throw dskg::DomainError("bad");
    return 1.0;
  };
  const auto g = dskg::evaluate_grid({0.5, 1.0, 2.0}, {0.0}, f, "x", 2);
  EXPECT_EQ(g.err_flags[0], dskg::ErrFlag::ok);
  EXPECT_EQ(g.err_flags[1], dskg::ErrFlag::tolerance);
  EXPECT_EQ(g.values[1], Complex(7.0));
  EXPECT_EQ(g.err_flags[2], dskg::ErrFlag::failed);
  EXPECT_TRUE(std::isnan(g.values[2].real()));
  EXPECT_THROW(dskg::evaluate_grid({1.0, 0.5}, {0.0}, f, "x"), dskg::InvalidParam);
}
