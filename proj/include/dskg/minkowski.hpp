#pragma once

// Flat-space spherical waves F_tt - F_rr - (2/r) F_r + l(l+1)/r^2 F = 0 for a
// single angular mode, by three independent routes, and the Klein-Gordon
// field obtained from them by a Bessel time convolution.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "dskg/errors.hpp"
#include "dskg/profile.hpp"
#include "dskg/quadrature.hpp"
#include "dskg/specfun.hpp"
#include "dskg/types.hpp"

namespace dskg {

enum class WaveMethod { riemann, recursive, hankel };

/// Radial wave with data (g, 0), as a function of (r, t).
using RadialWave = std::function<Complex(double, double)>;

namespace detail {

// Geometric split points b 2^{-k} down to a, resolving an s^{mu-1/2} factor near 0.
inline std::vector<double> origin_splits(double a, double b) {
  std::vector<double> pts;
  if (!(b > 0.0) || a >= 0.25 * b) return pts;
  for (double p = 0.5 * b; p > a && pts.size() < 60; p *= 0.5) pts.push_back(p);
  return pts;
}

inline QuadratureSpec with_splits(const QuadratureSpec& spec, std::vector<double> pts) {
  QuadratureSpec s = spec;
  s.singularity_split_points.insert(s.singularity_split_points.end(), pts.begin(), pts.end());
  return s;
}

inline void check_point(double r, double t) {
  if (!(r > 0.0)) throw DomainError("wave solver: r must be positive");
  if (!(t >= 0.0)) throw DomainError("wave solver: t must be nonnegative");
}

// (1/2r)[(r-t) F(r-t) + (r+t) F(r+t)]
inline Complex travelling_average(const RadialProfile& f, double r, double t) {
  return (f.weighted(r - t) + f.weighted(r + t)) / (2.0 * r);
}

}  // namespace detail

/// Tail of the wave with data (f0, 0), i.e. the part behind the travelling average:
/// -l(l+1) t / (4 r^2) * int F0(s) F(1-l, l+2; 2; z(s)) ds,
/// z(s) = (t-r+s)(t+r-s) / (4rs).
///
/// The integrand is odd in s under the parity extension, so the range
/// [r-t, r+t] reduces to [|r-t|, r+t] and s = 0 is never sampled.
inline Complex riemann_f0_tail(const RadialProfile& f0, int ell, double r, double t, const QuadratureSpec& spec = {}) {
  detail::check_point(r, t);
  if (f0.zero || ell == 0 || t == 0.0) return 0.0;
  const double a = std::abs(r - t);
  const double b = r + t;
  const Complex pa = 1.0 - ell;
  const Complex pb = ell + 2.0;
  auto integrand = [&](double s) {
    const double z = (s - (r - t)) * (b - s) / (4.0 * r * s);
    return f0(s) * hyp2f1(Hyp2F1Params{pa, pb, 2.0, z}).real();
  };
  const auto res = integrate_finite(integrand, a, b, detail::with_splits(spec, detail::origin_splits(a, b)));
  return -0.25 * ell * (ell + 1.0) * t / (r * r) * res.value;
}

/// Wave with data (f0, 0): travelling average plus riemann_f0_tail.
inline Complex riemann_f0_part(const RadialProfile& f0, int ell, double r, double t, const QuadratureSpec& spec = {}) {
  detail::check_point(r, t);
  if (f0.zero) return 0.0;
  if (t == 0.0) return f0(r);
  return detail::travelling_average(f0, r, t) + riemann_f0_tail(f0, ell, r, t, spec);
}

/// Wave with data (0, f1): (1/2r) int_{|r-t|}^{r+t} s F1(s) P_l(sigma) ds,
/// sigma = (r^2 + s^2 - t^2) / (2rs).
inline Complex riemann_f1_part(const RadialProfile& f1, int ell, double r, double t, const QuadratureSpec& spec = {}) {
  detail::check_point(r, t);
  if (f1.zero || t == 0.0) return 0.0;
  const double a = std::abs(r - t);
  const double b = r + t;
  const double rr_tt = (r - t) * (r + t);
  auto integrand = [&](double s) {
    const double sigma = std::clamp((rr_tt + s * s) / (2.0 * r * s), -1.0, 1.0);
    return s * f1(s) * std::legendre(static_cast<unsigned>(ell), sigma);
  };
  const auto res = integrate_finite(integrand, a, b, detail::with_splits(spec, detail::origin_splits(a, b)));
  return res.value / (2.0 * r);
}

/// Velocity part as the time integral int_0^t v_{f1}(r, tau) d tau of the
/// f0-type solution; slower, used to cross-check riemann_f1_part.
inline Complex riemann_f1_time_integrated(const RadialProfile& f1, int ell, double r, double t,
                                          const QuadratureSpec& spec = {}) {
  detail::check_point(r, t);
  if (f1.zero || t == 0.0) return 0.0;
  QuadratureSpec outer = spec;
  if (r < t) outer.singularity_split_points.push_back(r);
  QuadratureSpec inner = spec;
  inner.abs_tol *= 0.01;
  inner.rel_tol *= 0.01;
  auto v = [&](double tau) { return riemann_f0_part(f1, ell, r, tau, inner); };
  return integrate_finite(v, 0.0, t, outer).value;
}

/// Lemma-form solution for data (f0, f1).
inline Complex solve_riemann(const ModeState& mode, double r, double t, const QuadratureSpec& spec = {}) {
  detail::check_point(r, t);
  if (mode.f0.mu <= mode.ell - 1.5 || mode.f1.mu <= mode.ell - 1.5)
    throw DomainError("solve_riemann: need mu > ell - 3/2");
  return riemann_f0_part(mode.f0, mode.ell, r, t, spec) + riemann_f1_part(mode.f1, mode.ell, r, t, spec);
}

namespace detail {

// Coefficients c_k of t / (2 r^{l+1}) sum_k c_k int tau^k F0, powers k = -(l-1), -(l-3), ..., l-1.
inline std::vector<std::pair<int, double>> recursive_coefficients(int ell, double r, double t) {
  const double r2 = r * r;
  const double t2 = t * t;
  const double d = (r - t) * (r + t);
  switch (ell) {
    case 0:
      return {};
    case 1:
      return {{0, -1.0}};
    case 2:
      return {{-1, -1.5 * d}, {1, -1.5}};
    case 3:
      return {{-2, -15.0 / 8.0 * d * d}, {0, -0.25 * (9.0 * r2 - 15.0 * t2)}, {2, -15.0 / 8.0}};
    case 4:
      return {{-3, -35.0 / 16.0 * d * d * d},
              {-1, -5.0 / 16.0 * (9.0 * r2 * r2 - 30.0 * r2 * t2 + 21.0 * t2 * t2)},
              {1, -5.0 / 16.0 * (9.0 * r2 - 21.0 * t2)},
              {3, -35.0 / 16.0}};
    case 5:
      return {{-4, -315.0 / 128.0 * d * d * d * d},
              {-2, (-105.0 * r2 * r2 * r2 + 525.0 * r2 * r2 * t2 - 735.0 * r2 * t2 * t2 + 315.0 * t2 * t2 * t2) / 32.0},
              {0, (-225.0 * r2 * r2 + 1050.0 * r2 * t2 - 945.0 * t2 * t2) / 64.0},
              {2, (315.0 * t2 - 105.0 * r2) / 32.0},
              {4, -315.0 / 128.0}};
    default:
      throw UnsupportedEll("solve_recursive: closed forms exist only for ell <= 5");
  }
}

}  // namespace detail

/// Wave with data (f0, 0) from the explicit per-ell formulas, ell <= 5.
inline Complex recursive_f0_part(const RadialProfile& f0, int ell, double r, double t, const QuadratureSpec& spec = {}) {
  detail::check_point(r, t);
  const auto coef = detail::recursive_coefficients(ell, r, t);
  if (f0.zero) return 0.0;
  if (t == 0.0) return f0(r);
  Complex out = detail::travelling_average(f0, r, t);
  if (coef.empty()) return out;
  const double a = std::abs(r - t);
  const double b = r + t;
  auto integrand = [&](double tau) {
    double poly = 0.0;
    for (const auto& [k, c] : coef) poly += c * std::pow(tau, k);
    return poly * f0(tau);
  };
  const auto res = integrate_finite(integrand, a, b, detail::with_splits(spec, detail::origin_splits(a, b)));
  out += t / (2.0 * std::pow(r, ell + 1)) * res.value;
  return out;
}

/// Explicit-formula solution; requires f1 = 0.
inline Complex solve_recursive(const ModeState& mode, double r, double t, const QuadratureSpec& spec = {}) {
  if (mode.ell > 5) throw UnsupportedEll("solve_recursive: closed forms exist only for ell <= 5");
  if (!mode.f1.zero) throw InvalidParam("solve_recursive: requires f1 = 0");
  return recursive_f0_part(mode.f0, mode.ell, r, t, spec);
}

/// int_0^inf f(rho) J_{l+1/2}(s rho) rho^{3/2} d rho by quadrature.
inline Complex hankel_transform(const RadialProfile& f, int nu_ell, double s, const QuadratureSpec& spec = {}) {
  if (!(s > 0.0)) throw DomainError("hankel_transform: s must be positive");
  if (nu_ell < 0) throw DomainError("hankel_transform: order must be nonnegative");
  if (f.zero) return 0.0;
  if (!f.hankel_admissible()) throw InvalidParam("hankel_transform: profile decays too slowly");
  const double nu = nu_ell + 0.5;
  // Scaled Bessel keeps the small-s law s^nu exact.
  auto integrand = [&](double rho) {
    return f(rho) * std::pow(rho, nu_ell + 2.0) * bessel_j_half_scaled(nu_ell, s * rho);
  };
  Complex g;
  if (std::isfinite(f.support)) {
    const double R = f.support;
    std::vector<double> pts = detail::origin_splits(0.0, R);
    const double half = kPi / s;
    for (double x = half; x < R && pts.size() < 20000; x += half) pts.push_back(x);
    g = integrate_finite(integrand, 0.0, R, detail::with_splits(spec, pts)).value;
  } else {
    g = integrate_semi_infinite_oscillatory(integrand, 2.0 * kPi / s, spec).value;
  }
  return std::pow(s, nu) * g;
}

/// Hankel transform of one profile divided by lambda^{l+1/2}, tabulated on
/// Chebyshev panels.
///
/// Profiles with an analytic transform bypass the table. Otherwise the table
/// extends until the transform has fallen 1e-15 below its peak (or to the
/// rounding floor of the node integrals); if that never
/// happens within the panel budget the tail continues as the power law fixed
/// by the small-r exponent, H ~ lambda^{-(mu+2)}.
class HankelTable {
 public:
  HankelTable(const RadialProfile& f, int ell, const QuadratureSpec& spec = {}) : ell_(ell), nu_(ell + 0.5) {
    if (f.zero) {
      kind_ = Kind::zero;
      return;
    }
    if (!f.hankel_admissible()) throw InvalidParam("hankel: profile decays too slowly");
    if (f.hankel_scaled && f.parity_ell == ell) {
      kind_ = Kind::exact;
      exact_ = f.hankel_scaled;
      return;
    }
    if (!std::isfinite(f.support))
      throw InvalidParam("hankel: tabulation needs a profile with finite effective support");
    kind_ = Kind::table;
    build(f, spec);
  }

  /// H(lambda) / lambda^{l+1/2}.
  Complex scaled(double lambda) const {
    switch (kind_) {
      case Kind::zero:
        return 0.0;
      case Kind::exact:
        return exact_(ell_, lambda);
      case Kind::table:
        break;
    }
    if (lambda >= edges_.back()) {
      if (!power_tail_) return 0.0;
      return tail_value_ * std::pow(edges_.back() / lambda, tail_power_ + nu_);
    }
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), lambda);
    const std::size_t k = std::max<std::ptrdiff_t>(it - edges_.begin() - 1, 0);
    return interpolate(k, lambda);
  }

  Complex operator()(double lambda) const { return std::pow(lambda, nu_) * scaled(lambda); }

  bool is_zero() const { return kind_ == Kind::zero; }
  /// True when the transform has unbounded support in lambda.
  bool infinite_tail() const { return kind_ == Kind::exact || (kind_ == Kind::table && power_tail_); }
  /// End of the tabulated range (infinity for analytic transforms).
  double cutoff() const {
    if (kind_ == Kind::table) return edges_.back();
    return kind_ == Kind::zero ? 0.0 : std::numeric_limits<double>::infinity();
  }

 private:
  enum class Kind { zero, exact, table };
  static constexpr int kNodes = 24;
  static constexpr int kMaxPanels = 800;

  static double node(int j) { return std::cos(kPi * j / (kNodes - 1)); }

  void build(const RadialProfile& f, const QuadratureSpec& spec) {
    const double R = f.support;
    const int ell = ell_;
    auto node_value = [&](double lambda, const QuadratureSpec& qs) {
      auto integrand = [&](double rho) {
        return f(rho) * std::pow(rho, ell + 2.0) * bessel_j_half_scaled(ell, lambda * rho);
      };
      std::vector<double> pts = detail::origin_splits(0.0, R);
      if (lambda > 0.0) {
        const double half = kPi / lambda;
        for (double x = half; x < R && pts.size() < 20000; x += half) pts.push_back(x);
      }
      return integrate_finite_status(integrand, 0.0, R, detail::with_splits(qs, pts)).value;
    };
    QuadratureSpec qs = spec;
    qs.abs_tol = 1e-300;
    qs.rel_tol = 1e-12;
    const double g0 = std::abs(node_value(0.0, qs));
    const double scale = g0 > 0.0 ? g0 : 1.0;

    const double width = std::min(0.5, 4.0 / R);
    edges_.push_back(0.0);
    double hmax = 0.0;
    int quiet = 0;
    for (int p = 0; p < kMaxPanels; ++p) {
      const double a = edges_.back();
      const double b = a + width;
      std::vector<Complex> vals(kNodes);
      double panel_max = 0.0;
      for (int j = 0; j < kNodes; ++j) {
        const double lam = 0.5 * (a + b) + 0.5 * (b - a) * node(j);
        QuadratureSpec nq = spec;
        nq.rel_tol = 1e-11;
        nq.abs_tol = 1e-14 * scale;
        vals[j] = node_value(lam, nq);
        panel_max = std::max(panel_max, std::abs(vals[j]) * std::pow(lam, nu_));
      }
      values_.push_back(std::move(vals));
      edges_.push_back(b);
      hmax = std::max(hmax, panel_max);
      // Below the rounding floor of the node integrals the table is done.
      const double floor = std::max(1e-15 * hmax, 1e3 * std::numeric_limits<double>::epsilon() * scale * std::pow(b, nu_));
      quiet = (panel_max <= floor) ? quiet + 1 : 0;
      if (quiet >= 2) return;
    }
    power_tail_ = true;
    tail_power_ = f.mu + 2.0;
    tail_value_ = values_.back().front();
  }

  Complex interpolate(std::size_t k, double lambda) const {
    const double a = edges_[k];
    const double b = edges_[k + 1];
    const double x = (2.0 * lambda - a - b) / (b - a);
    const auto& v = values_[k];
    Complex num = 0.0;
    double den = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const double d = x - node(j);
      if (d == 0.0) return v[j];
      double w = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == kNodes - 1) w *= 0.5;
      num += w / d * v[j];
      den += w / d;
    }
    return num / den;
  }

  int ell_;
  double nu_;
  Kind kind_ = Kind::zero;
  std::function<Complex(int, double)> exact_;
  std::vector<double> edges_;
  std::vector<std::vector<Complex>> values_;
  bool power_tail_ = false;
  double tail_power_ = 0.0;
  Complex tail_value_;
};

namespace detail {

// P and Q of J_{l+1/2}(x) = sqrt(2/(pi x)) [P sin(x - l pi/2) + Q cos(x - l pi/2)].
inline std::pair<double, double> bessel_pq(int ell, double x) {
  double P = 0.0;
  double Q = 0.0;
  const double inv = 1.0 / (2.0 * x);
  for (int k = 0; 2 * k <= ell; ++k) {
    const double c = std::exp(std::lgamma(ell + 2.0 * k + 1.0) - std::lgamma(2.0 * k + 1.0) - std::lgamma(ell - 2.0 * k + 1.0));
    P += ((k % 2) ? -c : c) * std::pow(inv, 2 * k);
  }
  for (int k = 0; 2 * k + 1 <= ell; ++k) {
    const double c =
        std::exp(std::lgamma(ell + 2.0 * k + 2.0) - std::lgamma(2.0 * k + 2.0) - std::lgamma(ell - 2.0 * k));
    Q += ((k % 2) ? -c : c) * std::pow(inv, 2 * k + 1);
  }
  return {P, Q};
}

}  // namespace detail

/// r^{-1/2} int_0^inf [H0 cos(lambda t) lambda + H1 sin(lambda t)] J_{l+1/2}(r lambda) d lambda.
///
/// Below lambda_s = x_s / r the integrand is integrated directly. Above it
/// the finite asymptotic form of the half-integer Bessel function splits the
/// integrand into the single frequencies r + t and r - t, each summed cell
/// by cell with acceleration.
inline Complex hankel_wave(const HankelTable& h0, const HankelTable& h1, int ell, double r, double t,
                           const QuadratureSpec& spec = {}) {
  detail::check_point(r, t);
  const bool use1 = !h1.is_zero() && t > 0.0;
  if (h0.is_zero() && !use1) return 0.0;
  const double rl = std::pow(r, ell);
  auto direct = [&](double lam) {
    const double jh = bessel_j_half_scaled(ell, r * lam);
    const double lp = std::pow(lam, 2 * ell + 1);
    Complex v = 0.0;
    if (!h0.is_zero()) v += h0.scaled(lam) * (lp * lam * std::cos(lam * t));
    if (use1) v += h1.scaled(lam) * (lp * std::sin(lam * t));
    return rl * jh * v;
  };

  const bool tail = h0.infinite_tail() || (use1 && h1.infinite_tail());
  const double x_s = std::max(8.0, 2.0 * ell * (ell + 1.0));
  const double lambda_s = x_s / r;
  const double cut = std::max(h0.is_zero() ? 0.0 : h0.cutoff(), use1 ? h1.cutoff() : 0.0);
  const double upper = tail ? lambda_s : cut;

  std::vector<double> pts;
  const double half = kPi / (r + t);
  for (double x = half; x < upper && pts.size() < 50000; x += half) pts.push_back(x);
  Complex out = integrate_finite(direct, 0.0, upper, detail::with_splits(spec, pts)).value;
  if (!tail) return out;

  const double nu = ell + 0.5;
  auto amplitudes = [&](double lam) {
    // A multiplies the cos(lambda t) part, B the sin(lambda t) part.
    const double env = std::sqrt(2.0 / (kPi * r * lam)) / std::sqrt(r);
    const double ln = std::pow(lam, nu);
    Complex A = 0.0;
    Complex B = 0.0;
    if (!h0.is_zero()) A = h0.scaled(lam) * (ln * lam * env);
    if (use1) B = h1.scaled(lam) * (ln * env);
    return std::pair{A, B};
  };
  const double phase0 = -0.5 * ell * kPi;
  for (int sign : {+1, -1}) {
    const double omega = r + sign * t;
    auto f = [&, sign, omega](double lam) {
      const auto [P, Q] = detail::bessel_pq(ell, r * lam);
      const auto [A, B] = amplitudes(lam);
      const Complex cs = sign > 0 ? 0.5 * (A * P + B * Q) : 0.5 * (A * P - B * Q);
      const Complex cc = sign > 0 ? 0.5 * (A * Q - B * P) : 0.5 * (A * Q + B * P);
      const double th = omega * lam + phase0;
      return cs * std::sin(th) + cc * std::cos(th);
    };
    const bool still = std::abs(omega) <= 1e-12 * (r + t);
    const double period = still ? std::numeric_limits<double>::infinity() : 2.0 * kPi / std::abs(omega);
    out += integrate_semi_infinite_oscillatory(f, period, spec, lambda_s).value;
  }
  return out;
}

/// Transform-route solver; the tables are built once and reused.
class HankelSolver {
 public:
  HankelSolver(const ModeState& mode, const QuadratureSpec& spec = {})
      : ell_(mode.ell),
        spec_(spec),
        h0_(std::make_shared<HankelTable>(mode.f0, mode.ell, spec)),
        h1_(std::make_shared<HankelTable>(mode.f1, mode.ell, spec)) {}

  Complex operator()(double r, double t) const { return hankel_wave(*h0_, *h1_, ell_, r, t, spec_); }

 private:
  int ell_;
  QuadratureSpec spec_;
  std::shared_ptr<const HankelTable> h0_;
  std::shared_ptr<const HankelTable> h1_;
};

inline Complex solve_hankel(const ModeState& mode, double r, double t, const QuadratureSpec& spec = {}) {
  return HankelSolver(mode, spec)(r, t);
}

/// Evaluator of the wave with data (g, 0) by the chosen route.
inline RadialWave wave_evaluator(const RadialProfile& g, int ell, WaveMethod method, const QuadratureSpec& spec = {}) {
  if (g.zero) return [](double, double) { return Complex(0.0); };
  switch (method) {
    case WaveMethod::riemann:
      return [g, ell, spec](double r, double t) { return riemann_f0_part(g, ell, r, t, spec); };
    case WaveMethod::recursive:
      if (ell > 5) throw UnsupportedEll("recursive route covers ell <= 5");
      return [g, ell, spec](double r, double t) { return recursive_f0_part(g, ell, r, t, spec); };
    case WaveMethod::hankel: {
      auto solver = std::make_shared<HankelSolver>(ModeState::make(ell, 0, g), spec);
      return [solver](double r, double t) { return (*solver)(r, t); };
    }
  }
  throw InvalidParam("unknown wave method");
}

/// Klein-Gordon field u_tt - Delta u + m0^2 u = 0 for one mode:
/// u = v0(t) - int_0^t m0 t J1(m0 y) / y v0(tau) d tau + int_0^t J0(m0 y) v1(tau) d tau,
/// y = sqrt(t^2 - tau^2), where v_k is the wave with data (f_k, 0).
inline Complex minkowski_kg(const ModeState& mode, double m0, double r, double t,
                            WaveMethod method = WaveMethod::riemann, const QuadratureSpec& spec = {}) {
  detail::check_point(r, t);
  if (!(m0 >= 0.0)) throw InvalidParam("minkowski_kg: mass must be nonnegative");
  const RadialWave v0 = wave_evaluator(mode.f0, mode.ell, method, spec);
  const RadialWave v1 = wave_evaluator(mode.f1, mode.ell, method, spec);
  if (t == 0.0) return v0(r, 0.0);
  QuadratureSpec outer = spec;
  if (r < t) outer.singularity_split_points.push_back(r);
  auto integrand = [&](double tau) {
    const double y = std::sqrt((t - tau) * (t + tau));
    Complex acc = 0.0;
    if (!mode.f0.zero && m0 > 0.0) {
      const double j1_over_y = y > 0.0 ? std::cyl_bessel_j(1.0, m0 * y) / y : 0.5 * m0;
      acc -= m0 * t * j1_over_y * v0(r, tau);
    }
    if (!mode.f1.zero) acc += std::cyl_bessel_j(0.0, m0 * y) * v1(r, tau);
    return acc;
  };
  return v0(r, t) + integrate_finite(integrand, 0.0, t, outer).value;
}

}  // namespace dskg
