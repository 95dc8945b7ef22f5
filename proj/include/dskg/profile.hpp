#pragma once

// Radial initial data F(r) for one spherical-harmonic mode, with the parity
// continuation to r < 0 that the traveling-wave formulas read.

#include <boost/math/interpolators/makima.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dskg/errors.hpp"
#include "dskg/specfun.hpp"
#include "dskg/types.hpp"

namespace dskg {

/// Fine structure constant.
inline constexpr double kFineStructure = 1.0 / 137.035999;

struct DecayClass {
  enum class Kind { exponential, algebraic };
  Kind kind = Kind::exponential;
  double k = std::numeric_limits<double>::infinity();  // F = O(r^{-k}) when algebraic

  static DecayClass exponential() { return {}; }
  static DecayClass algebraic(double k) { return {Kind::algebraic, k}; }
};

struct RadialProfile {
  std::function<Complex(double)> eval;  // r > 0 only
  double mu = 0.5;                      // F = O(r^{mu - 1/2}) as r -> 0
  int parity_ell = 0;                   // r^ell F is even
  DecayClass decay{};
  // |F| is negligible beyond this radius; infinity when the decay is algebraic.
  double support = std::numeric_limits<double>::infinity();
  // Optional analytic Hankel transform divided by lambda^{ell+1/2}.
  std::function<Complex(int, double)> hankel_scaled;
  bool zero = false;

  static RadialProfile zeros(int ell) {
    RadialProfile p;
    p.eval = [](double) { return Complex(0.0); };
    p.mu = ell + 0.5;
    p.parity_ell = ell;
    p.support = 0.0;
    p.hankel_scaled = [](int, double) { return Complex(0.0); };
    p.zero = true;
    return p;
  }

  /// F(x) for any real x, using F(-x) = (-1)^ell F(x).
  Complex operator()(double x) const {
    if (zero) return 0.0;
    if (x > 0.0) return eval(x);
    if (x == 0.0) return eval(kOriginProbe);
    const Complex v = eval(-x);
    return (parity_ell % 2 == 0) ? v : -v;
  }

  /// x F(x), with the removable value 0 at the origin.
  Complex weighted(double x) const {
    if (zero || x == 0.0) return 0.0;
    return x * (*this)(x);
  }

  bool hankel_admissible() const {
    return zero || decay.kind == DecayClass::Kind::exponential || decay.k > 2.0;
  }

  /// c F, keeping the metadata.
  RadialProfile scaled(Complex c) const {
    if (zero || c == 0.0) return zeros(parity_ell);
    RadialProfile p = *this;
    auto base = eval;
    p.eval = [base, c](double r) { return c * base(r); };
    if (hankel_scaled) {
      auto h = hankel_scaled;
      p.hankel_scaled = [h, c](int ell, double lam) { return c * h(ell, lam); };
    }
    return p;
  }

  static constexpr double kOriginProbe = 1e-12;
};

/// One (ell, m) mode with its two radial data profiles.
struct ModeState {
  int ell = 0;
  int m = 0;
  RadialProfile f0 = RadialProfile::zeros(0);
  RadialProfile f1 = RadialProfile::zeros(0);

  static ModeState make(int ell, int m, RadialProfile f0, std::optional<RadialProfile> f1 = std::nullopt) {
    ModeState s;
    s.ell = ell;
    s.m = m;
    s.f0 = std::move(f0);
    s.f1 = f1 ? std::move(*f1) : RadialProfile::zeros(ell);
    s.validate();
    return s;
  }

  void validate() const {
    if (ell < 0) throw IndexError("mode: ell must be nonnegative");
    if (std::abs(m) > ell) throw IndexError("mode: |m| must not exceed ell");
    if (f0.parity_ell != ell || f1.parity_ell != ell) throw InvalidParam("mode: profile parity must equal ell");
    if (!f0.eval || !f1.eval) throw InvalidParam("mode: profile has no evaluator");
  }
};

/// a F + b G for profiles of the same parity.
inline RadialProfile profile_combination(Complex a, const RadialProfile& F, Complex b, const RadialProfile& G) {
  if (F.parity_ell != G.parity_ell) throw InvalidParam("profile combination: parities differ");
  const bool f_off = F.zero || a == 0.0;
  const bool g_off = G.zero || b == 0.0;
  if (f_off && g_off) return RadialProfile::zeros(F.parity_ell);
  if (g_off) return F.scaled(a);
  if (f_off) return G.scaled(b);
  RadialProfile p;
  p.eval = [a, b, fe = F.eval, ge = G.eval](double r) { return a * fe(r) + b * ge(r); };
  p.mu = std::min(F.mu, G.mu);
  p.parity_ell = F.parity_ell;
  p.decay = F.decay.k < G.decay.k ? F.decay : G.decay;
  p.support = std::max(F.support, G.support);
  if (F.hankel_scaled && G.hankel_scaled)
    p.hankel_scaled = [a, b, fh = F.hankel_scaled, gh = G.hankel_scaled](int ell, double lam) {
      return a * fh(ell, lam) + b * gh(ell, lam);
    };
  return p;
}

/// Profile from an arbitrary evaluator.
inline RadialProfile custom_profile(std::function<Complex(double)> f, double mu, int parity_ell,
                                    DecayClass decay = DecayClass::exponential(),
                                    double support = std::numeric_limits<double>::infinity()) {
  if (parity_ell < 0) throw InvalidParam("profile: parity ell must be nonnegative");
  RadialProfile p;
  p.eval = std::move(f);
  p.mu = mu;
  p.parity_ell = parity_ell;
  p.decay = decay;
  p.support = support;
  return p;
}

/// amplitude * r^power * exp(-(r/sigma)^2).
inline RadialProfile gaussian_profile(double sigma, double power, int ell, double amplitude = 1.0) {
  if (!(sigma > 0.0)) throw InvalidParam("gaussian profile: sigma must be positive");
  if (!(power >= 0.0)) throw InvalidParam("gaussian profile: power must be nonnegative");
  // Radius where r^p e^{-(r/s)^2} has dropped 1e-18 below its peak.
  const double peak_x = std::sqrt(0.5 * power);
  const double log_peak = power > 0.0 ? power * std::log(peak_x) - peak_x * peak_x : 0.0;
  double x = std::max(peak_x, 1.0);
  while ((power > 0.0 ? power * std::log(x) : 0.0) - x * x > log_peak - 41.5) x += 0.05;
  RadialProfile p = custom_profile(
      [sigma, power, amplitude](double r) {
        const double u = r / sigma;
        return Complex(amplitude * std::pow(r, power) * std::exp(-u * u));
      },
      power + 0.5, ell, DecayClass::exponential(), x * sigma);
  return p;
}

/// Monotone-cubic interpolation of (r, F) samples; zero beyond the last sample.
///
/// The small-r exponent is taken as regular, mu = ell + 1/2.
inline RadialProfile tabulated_profile(std::vector<double> r, std::vector<double> values, int ell) {
  if (r.size() != values.size() || r.size() < 4) throw InvalidParam("tabulated profile: need >= 4 matching samples");
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    if (!(r[i + 1] > r[i])) throw InvalidParam("tabulated profile: radii must be strictly increasing");
  if (!(r.front() >= 0.0)) throw InvalidParam("tabulated profile: radii must be nonnegative");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidParam("tabulated profile: non-finite sample");
  const double r_lo = r.front();
  const double r_hi = r.back();
  using Spline = boost::math::interpolators::makima<std::vector<double>>;
  auto spline = std::make_shared<Spline>(std::move(r), std::move(values));
  return custom_profile(
      [spline, r_lo, r_hi](double x) {
        if (x > r_hi) return Complex(0.0);
        return Complex((*spline)(std::max(x, r_lo)));
      },
      ell + 0.5, ell, DecayClass::exponential(), r_hi);
}

namespace detail {

// Coefficients of L_k^alpha(x) = sum_j c_j x^j.
inline std::vector<double> laguerre_coefficients(int k, double alpha) {
  std::vector<double> c(k + 1);
  // c_j = (-1)^j binom(k + alpha, k - j) / j!
  for (int j = 0; j <= k; ++j) {
    const double lb = std::lgamma(k + alpha + 1.0) - std::lgamma(k - j + 1.0) - std::lgamma(alpha + j + 1.0) -
                      std::lgamma(j + 1.0);
    c[j] = ((j % 2) ? -1.0 : 1.0) * std::exp(lb);
  }
  return c;
}

// int_0^inf e^{-p x} x^{beta-1} J_nu(lambda x) dx / lambda^nu, nu = ell + 1/2.
inline double laplace_bessel_scaled(int ell, double beta, double p, double lambda) {
  const double nu = ell + 0.5;
  const double a = 0.5 * (nu + beta);
  const double l2 = lambda * lambda;
  const double p2 = p * p;
  const double w = l2 / (l2 + p2);
  const double wc = p2 / (l2 + p2);
  const double log_pref = std::lgamma(nu + beta) - std::lgamma(nu + 1.0) - nu * std::log(2.0) - (nu + beta) * std::log(p) +
                          a * std::log(wc);
  const Complex f = hyp2f1(Hyp2F1Params{a, nu + 0.5 - a, nu + 1.0, w}, wc);
  return std::exp(log_pref) * f.real();
}

}  // namespace detail

/// Pionic-atom radial function C r^{mu-1/2} e^{-r/2} L_{n-ell-1}^{2 mu}(r),
/// mu = sqrt((ell+1/2)^2 - Z^2 alpha^2).
///
/// normalization <= 0 selects the unit L^2(r^2 dr) constant; otherwise it is C.
/// `alpha` defaults to the CODATA fine-structure constant; pass 1/137 for
/// the rounded value.
inline RadialProfile pionic_profile(int n_quantum, int ell, int Z, double normalization = 1.0,
                                    double alpha_fs = kFineStructure) {
  if (ell < 0 || n_quantum < 1 || ell >= n_quantum) throw InvalidParam("pionic profile: need 0 <= ell < n");
  if (Z < 1) throw InvalidParam("pionic profile: Z must be positive");
  if (!(alpha_fs > 0.0)) throw InvalidParam("pionic profile: alpha must be positive");
  const double za = Z * alpha_fs;
  const double disc = (ell + 0.5) * (ell + 0.5) - za * za;
  if (!(disc > 0.0)) throw DomainError("pionic profile: Z alpha too large for a real mu");
  const double mu = std::sqrt(disc);
  const int k = n_quantum - ell - 1;
  const double alpha = 2.0 * mu;
  const auto coef = detail::laguerre_coefficients(k, alpha);

  double C = normalization;
  if (!(normalization > 0.0)) {
    // int_0^inf x^{2 mu + 1} e^{-x} L(x)^2 dx
    double norm2 = 0.0;
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) norm2 += coef[i] * coef[j] * std::exp(std::lgamma(2.0 * mu + 2.0 + i + j));
    C = 1.0 / std::sqrt(norm2);
  }

  RadialProfile p = custom_profile(
      [C, mu, k, alpha](double r) {
        return Complex(C * std::pow(r, mu - 0.5) * std::exp(-0.5 * r) * assoc_laguerre(k, alpha, r));
      },
      mu, ell, DecayClass::exponential(), 2.0 * (41.5 + 2.0 * (mu + k) * std::log(10.0 + n_quantum)));
  p.hankel_scaled = [C, mu, coef](int nu_ell, double lambda) {
    double sum = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j)
      sum += coef[j] * detail::laplace_bessel_scaled(nu_ell, mu + 2.0 + double(j), 0.5, lambda);
    return Complex(C * sum);
  };
  return p;
}

}  // namespace dskg
