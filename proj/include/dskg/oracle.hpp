#pragma once

// Method-of-lines solver for the radial field, independent of every closed
// form: R = r F obeys
//   R_tt + 3H R_t - e^{-2Ht} (R_rr - l(l+1) R / r^2) + m^2 R = 0,
// with R = 0 at r = 0 and at r_max.

#include <algorithm>
#include <cmath>
#include <vector>

#include "dskg/errors.hpp"
#include "dskg/grid.hpp"
#include "dskg/kernels.hpp"
#include "dskg/profile.hpp"
#include "dskg/types.hpp"

namespace dskg {

struct FDConfig {
  enum class Boundary { dirichlet_origin_R, outflow_at_rmax };
  enum class Integrator { rk4 };

  double r_max = 8.0;
  int n_r = 1000;
  double cfl_safety = 0.5;
  Boundary boundary = Boundary::dirichlet_origin_R;
  Integrator time_integrator = Integrator::rk4;
  double t_end = 2.0;
  double margin = 0.5;
  double dt_override = 0.0;  // 0 selects the stable step; tests use it to provoke blow-up
  std::vector<double> sample_r;
  std::vector<double> sample_t;

  void validate() const {
    if (n_r < 200) throw ConfigError("fd: n_r must be at least 200");
    if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) throw ConfigError("fd: cfl_safety must lie in (0, 1)");
    if (!(t_end >= 0.0)) throw ConfigError("fd: t_end must be nonnegative");
    if (!(dt_override >= 0.0)) throw ConfigError("fd: dt_override must be nonnegative");
    check_grid_axes(sample_r, sample_t);
    if (sample_t.back() > t_end * (1.0 + 1e-12)) throw ConfigError("fd: sample time beyond t_end");
    const double dr = r_max / n_r;
    if (sample_r.back() + t_end + margin > r_max)
      throw ConfigError("fd: r_max too small, the boundary would reach the sampled region");
    if (sample_r.front() < dr) throw ConfigError("fd: sample radius below the first grid cell");
  }
};

namespace detail {

// Cubic Lagrange interpolation of R at x on the uniform grid i dr.
inline Complex lagrange4(const std::vector<Complex>& R, double dr, double x) {
  const int n = static_cast<int>(R.size()) - 1;
  int i0 = static_cast<int>(std::floor(x / dr)) - 1;
  i0 = std::clamp(i0, 0, n - 3);
  Complex out = 0.0;
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    const double xj = (i0 + j) * dr;
    for (int k = 0; k < 4; ++k)
      if (k != j) w *= (x - (i0 + k) * dr) / (xj - (i0 + k) * dr);
    out += w * R[i0 + j];
  }
  return out;
}

}  // namespace detail

/// Radial factor F = R / r sampled on config.sample_r x config.sample_t.
///
/// H = 0 gives the flat-space Klein-Gordon (or wave, m = 0) equation.
inline FieldGrid solve_fd(double H, double m, const ModeState& mode, const FDConfig& config) {
  config.validate();
  mode.validate();
  if (!(H >= 0.0) || !(m >= 0.0)) throw InvalidParam("fd: need H >= 0 and m >= 0");
  const int n = config.n_r;
  const double dr = config.r_max / n;
  const double ll = mode.ell * (mode.ell + 1.0);
  std::vector<double> pot(n + 1, 0.0);
  for (int i = 1; i < n; ++i) pot[i] = ll / (i * dr * i * dr);

  std::vector<Complex> R(n + 1, 0.0), V(n + 1, 0.0);
  for (int i = 1; i < n; ++i) {
    const double r = i * dr;
    R[i] = r * mode.f0(r);
    V[i] = r * mode.f1(r);
  }
  double r0_norm = 0.0;
  for (const auto& v : R) r0_norm = std::max(r0_norm, std::abs(v));
  for (const auto& v : V) r0_norm = std::max(r0_norm, std::abs(v));
  if (r0_norm == 0.0) r0_norm = 1.0;

  // Largest stable step: RK4 covers |lambda dt| <= 2.8 on the imaginary axis,
  // with wave speed e^{-Ht} <= 1.
  const double spectral = std::sqrt(4.0 / (dr * dr) + ll / (dr * dr) + m * m);
  const double dt_max =
      config.dt_override > 0.0 ? config.dt_override : config.cfl_safety * std::min(dr, 2.8 / spectral);

  const double inv_dr2 = 1.0 / (dr * dr);
  auto rhs = [&](double t, const std::vector<Complex>& r_, const std::vector<Complex>& v_, std::vector<Complex>& dr_,
                 std::vector<Complex>& dv_) {
    const double c2 = std::exp(-2.0 * H * t);
    dr_[0] = dv_[0] = dr_[n] = dv_[n] = 0.0;
    for (int i = 1; i < n; ++i) {
      const Complex lap = (r_[i + 1] - 2.0 * r_[i] + r_[i - 1]) * inv_dr2 - pot[i] * r_[i];
      dr_[i] = v_[i];
      dv_[i] = c2 * lap - 3.0 * H * v_[i] - m * m * r_[i];
    }
  };

  FieldGrid grid(config.sample_r, config.sample_t, "fd");
  std::vector<Complex> k1r(n + 1), k1v(n + 1), k2r(n + 1), k2v(n + 1), k3r(n + 1), k3v(n + 1), k4r(n + 1), k4v(n + 1),
      tr(n + 1), tv(n + 1);
  auto record = [&](std::size_t it) {
    for (std::size_t ir = 0; ir < config.sample_r.size(); ++ir) {
      const double r = config.sample_r[ir];
      grid.at(ir, it) = detail::lagrange4(R, dr, r) / r;
    }
  };

  double t = 0.0;
  for (std::size_t it = 0; it < config.sample_t.size(); ++it) {
    const double target = config.sample_t[it];
    const double span = target - t;
    const int steps = span > 0.0 ? static_cast<int>(std::ceil(span / dt_max - 1e-9)) : 0;
    const double dt = steps > 0 ? span / steps : 0.0;
    for (int s = 0; s < steps; ++s) {
      rhs(t, R, V, k1r, k1v);
      for (int i = 0; i <= n; ++i) tr[i] = R[i] + 0.5 * dt * k1r[i], tv[i] = V[i] + 0.5 * dt * k1v[i];
      rhs(t + 0.5 * dt, tr, tv, k2r, k2v);
      for (int i = 0; i <= n; ++i) tr[i] = R[i] + 0.5 * dt * k2r[i], tv[i] = V[i] + 0.5 * dt * k2v[i];
      rhs(t + 0.5 * dt, tr, tv, k3r, k3v);
      for (int i = 0; i <= n; ++i) tr[i] = R[i] + dt * k3r[i], tv[i] = V[i] + dt * k3v[i];
      rhs(t + dt, tr, tv, k4r, k4v);
      double peak = 0.0;
      for (int i = 1; i < n; ++i) {
        R[i] += dt / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
        V[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        peak = std::max(peak, std::abs(R[i]));
      }
      R[0] = V[0] = R[n] = V[n] = 0.0;
      t = (s + 1 == steps) ? target : t + dt;
      if (!(peak <= 1e6 * r0_norm)) throw InstabilityDetected("fd: solution grew beyond the stability bound");
    }
    record(it);
  }
  return grid;
}

inline FieldGrid solve_fd(const PhysicalParams& p, const ModeState& mode, const FDConfig& config) {
  if (p.n != 3) throw InvalidParam("fd: the oracle discretises the three-dimensional Laplacian only");
  return solve_fd(p.H, p.m, mode, config);
}

}  // namespace dskg
