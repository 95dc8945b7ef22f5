#pragma once

// Klein-Gordon field in the de Sitter universe assembled from flat-space
// waves through the kernels K0, K1, plus the decay-regime analysis.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dskg/errors.hpp"
#include "dskg/kernels.hpp"
#include "dskg/minkowski.hpp"
#include "dskg/profile.hpp"
#include "dskg/quadrature.hpp"
#include "dskg/specfun.hpp"
#include "dskg/types.hpp"

namespace dskg {

enum class FieldMethod { riemann, hankel, huygens_riemann, huygens_hankel };

inline std::string_view to_string(FieldMethod m) {
  switch (m) {
    case FieldMethod::riemann:
      return "riemann";
    case FieldMethod::hankel:
      return "hankel";
    case FieldMethod::huygens_riemann:
      return "huygens_riemann";
    case FieldMethod::huygens_hankel:
      return "huygens_hankel";
  }
  return "?";
}

inline std::optional<FieldMethod> parse_field_method(std::string_view s) {
  for (auto m : {FieldMethod::riemann, FieldMethod::hankel, FieldMethod::huygens_riemann, FieldMethod::huygens_hankel})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

/// The three pieces of the transform formula at one point.
struct ItaTerms {
  Complex leading;   // e^{-(n-1)Ht/2} v0(r, phi(t))
  Complex integral;  // both kernel integrals with their prefactors
  Complex total() const { return leading + integral; }
};

/// Transform formula with the kernel integrals written over w in [0, 1],
/// tau = phi(t)(1 - w):
/// e^{-(n-1)Ht/2} v0(phi) + e^{-nHt/2} phi int [v0 (2K0 + nH K1) + 2 v1 K1] dw.
///
/// The light-cone end w = 0 carries a layer of width e^{-Ht}; it is
/// resolved by geometric split points.
inline ItaTerms ita_terms(const RadialWave& v0, const RadialWave* v1, const PhysicalParams& p, double r, double t,
                          const QuadratureSpec& spec = {}) {
  if (!(t >= 0.0)) throw DomainError("ita: t must be nonnegative");
  const double H = p.H;
  const double phi = phi_of_t(t, H);
  ItaTerms out;
  out.leading = std::exp(-0.5 * (p.n - 1) * H * t) * v0(r, phi);
  if (t == 0.0) return out;
  const double nH = p.n * H;
  auto integrand = [&](double w) {
    const double tau = phi * (1.0 - w);
    const auto k = kernel_eval_cone(w, t, H, p.M);
    Complex acc = v0(r, tau) * (2.0 * k.k0 + nH * k.k1);
    if (v1) acc += 2.0 * (*v1)(r, tau) * k.k1;
    return acc;
  };
  std::vector<double> pts;
  if (r < phi) pts.push_back(1.0 - r / phi);
  const double e = std::exp(-H * t);
  for (double x = e; x < 0.5 && pts.size() < 80; x *= 2.0) pts.push_back(x);
  const auto res = integrate_finite(integrand, 0.0, 1.0, detail::with_splits(spec, pts));
  out.integral = std::exp(-0.5 * nH * t) * phi * res.value;
  return out;
}

/// Transform formula for a caller-supplied flat-space wave.
inline Complex ita_assemble(const RadialWave& wave, const PhysicalParams& p, double r, double t,
                            const std::optional<RadialWave>& wave1 = std::nullopt, const QuadratureSpec& spec = {}) {
  return ita_terms(wave, wave1 ? &*wave1 : nullptr, p, r, t, spec).total();
}

/// Radial factor Phi / Y_lm by one of the four representations.
class FieldEvaluator {
 public:
  FieldEvaluator(const PhysicalParams& p, const ModeState& mode, FieldMethod method, const QuadratureSpec& spec = {})
      : p_(p), mode_(mode), method_(method), spec_(spec) {
    mode_.validate();
    const bool huygens = method == FieldMethod::huygens_riemann || method == FieldMethod::huygens_hankel;
    if (huygens && !p.is_huygens()) throw InvalidParam("huygensian method requires m = sqrt(2) H and n = 3");
    if ((method == FieldMethod::riemann || method == FieldMethod::hankel) && p.n != 3 && !allow_other_dimensions)
      throw InvalidParam("closed-form representations are validated for n = 3 only");
    switch (method) {
      case FieldMethod::riemann:
        v0_ = wave_evaluator(mode.f0, mode.ell, WaveMethod::riemann, spec);
        v1_ = wave_evaluator(mode.f1, mode.ell, WaveMethod::riemann, spec);
        break;
      case FieldMethod::hankel:
        v0_ = wave_evaluator(mode.f0, mode.ell, WaveMethod::hankel, spec);
        v1_ = wave_evaluator(mode.f1, mode.ell, WaveMethod::hankel, spec);
        break;
      case FieldMethod::huygens_riemann:
      case FieldMethod::huygens_hankel: {
        // Phi = e^{-Ht} [v_{F0}(phi) + int_0^phi v_{H F0 + F1}], i.e. the flat
        // wave with data (F0, H F0 + F1) evaluated at time phi.
        const RadialProfile g = profile_combination(p.H, mode.f0, 1.0, mode.f1);
        if (method == FieldMethod::huygens_riemann) {
          v0_ = wave_evaluator(mode.f0, mode.ell, WaveMethod::riemann, spec);
          const int ell = mode.ell;
          v1_ = [g, ell, spec](double r, double t) { return riemann_f1_part(g, ell, r, t, spec); };
        } else {
          auto h0 = std::make_shared<HankelSolver>(ModeState::make(mode.ell, mode.m, mode.f0), spec);
          auto h1 = std::make_shared<HankelSolver>(
              ModeState::make(mode.ell, mode.m, RadialProfile::zeros(mode.ell), g), spec);
          v0_ = [h0](double r, double t) { return (*h0)(r, t); };
          v1_ = [h1](double r, double t) { return (*h1)(r, t); };
        }
        break;
      }
    }
  }

  /// Leading term and remainder, each computed without subtraction.
  ItaTerms terms(double r, double t) const {
    if (!(r > 0.0)) throw DomainError("field: r must be positive");
    if (!(t >= 0.0)) throw DomainError("field: t must be nonnegative");
    if (method_ == FieldMethod::huygens_riemann || method_ == FieldMethod::huygens_hankel) {
      const double phi = phi_of_t(t, p_.H);
      const double e = std::exp(-p_.H * t);
      return {e * v0_(r, phi), t == 0.0 ? Complex(0.0) : e * v1_(r, phi)};
    }
    return ita_terms(v0_, mode_.f1.zero ? nullptr : &v1_, p_, r, t, spec_);
  }

  Complex radial(double r, double t) const { return terms(r, t).total(); }

  Complex operator()(double r, double t, double theta, double phi_angle) const {
    return radial(r, t) * spherical_harmonic(mode_.ell, mode_.m, theta, phi_angle);
  }

  FieldMethod method() const { return method_; }
  const PhysicalParams& params() const { return p_; }
  const ModeState& mode() const { return mode_; }

  /// Lets ita-based methods run for n != 3 (unvalidated).
  static inline bool allow_other_dimensions = false;

 private:
  PhysicalParams p_;
  ModeState mode_;
  FieldMethod method_;
  QuadratureSpec spec_;
  RadialWave v0_;
  RadialWave v1_;
};

inline Complex field_riemann(const ModeState& mode, const PhysicalParams& p, double r, double t, double theta,
                             double phi_angle, const QuadratureSpec& spec = {}) {
  return FieldEvaluator(p, mode, FieldMethod::riemann, spec)(r, t, theta, phi_angle);
}

inline Complex field_riemann_huygens(const ModeState& mode, const PhysicalParams& p, double r, double t, double theta,
                                     double phi_angle, const QuadratureSpec& spec = {}) {
  return FieldEvaluator(p, mode, FieldMethod::huygens_riemann, spec)(r, t, theta, phi_angle);
}

inline Complex field_hankel(const ModeState& mode, const PhysicalParams& p, double r, double t, double theta,
                            double phi_angle, const QuadratureSpec& spec = {}) {
  return FieldEvaluator(p, mode, FieldMethod::hankel, spec)(r, t, theta, phi_angle);
}

inline Complex field_hankel_huygens(const ModeState& mode, const PhysicalParams& p, double r, double t, double theta,
                                    double phi_angle, const QuadratureSpec& spec = {}) {
  return FieldEvaluator(p, mode, FieldMethod::huygens_hankel, spec)(r, t, theta, phi_angle);
}

/// Pionic mode: F0 from pionic_profile, F1 = -i E F0 when an energy is given.
inline ModeState pionic_mode(int n_quantum, int ell, int m, int Z, std::optional<double> energy = std::nullopt,
                             double normalization = 1.0, double alpha_fs = kFineStructure) {
  RadialProfile f0 = pionic_profile(n_quantum, ell, Z, normalization, alpha_fs);
  if (!energy) return ModeState::make(ell, m, f0);
  RadialProfile f1 = f0.scaled(Complex(0.0, -*energy));
  return ModeState::make(ell, m, std::move(f0), std::move(f1));
}

enum class DecayRegime { subcritical_light, intermediate, critical_huygens, heavy };

inline std::string_view to_string(DecayRegime r) {
  switch (r) {
    case DecayRegime::subcritical_light:
      return "subcritical_light";
    case DecayRegime::intermediate:
      return "intermediate";
    case DecayRegime::critical_huygens:
      return "critical_huygens";
    case DecayRegime::heavy:
      return "heavy";
  }
  return "?";
}

struct DecayReport {
  DecayRegime regime = DecayRegime::subcritical_light;
  double predicted_exponent = 0.0;
  double predicted_poly_power = 0.0;
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  double fitted_poly_power = std::numeric_limits<double>::quiet_NaN();
  double fit_residual = std::numeric_limits<double>::quiet_NaN();
};

/// Predicted decay of |Phi - e^{-(n-1)Ht/2} v0(phi(t))|.
///
/// Thresholds in terms of M: heavy Re M = 0 (m >= nH/2), intermediate
/// 0 < M < H/2, critical M = H/2, light M > H/2.
inline DecayReport decay_classify(const PhysicalParams& p) {
  DecayReport rep;
  const double H = p.H;
  const double base = -0.5 * (p.n - 1) * H;
  const double Mr = p.M.real();
  if (p.M.imag() > 0.0 || Mr == 0.0) {
    rep.regime = DecayRegime::heavy;
    rep.predicted_exponent = base;
    rep.predicted_poly_power = std::abs(p.M) > 0.0 ? 0.0 : 1.0;
  } else if (std::abs(Mr - 0.5 * H) <= 1e-12 * H || (p.n == 3 && p.is_huygens())) {
    rep.regime = DecayRegime::critical_huygens;
    rep.predicted_exponent = base;
  } else if (Mr < 0.5 * H) {
    rep.regime = DecayRegime::intermediate;
    rep.predicted_exponent = base;
  } else {
    rep.regime = DecayRegime::subcritical_light;
    rep.predicted_exponent = -0.5 * p.n * H + Mr;
  }
  return rep;
}

/// Least-squares fit of log|f(t)| = a + b t (+ c log t when `with_power`)
/// on n equally spaced samples of [t_a, t_b].
inline DecayReport decay_fit(const std::function<Complex(double)>& f, double t_a, double t_b, int n_samples,
                             bool with_power = false, DecayReport base = {}) {
  const int cols = with_power ? 3 : 2;
  if (n_samples < cols + 1) throw InvalidParam("decay_fit: too few samples");
  if (!(t_b > t_a) || !(t_a > 0.0 || !with_power)) throw InvalidParam("decay_fit: bad window");
  Eigen::MatrixXd A(n_samples, cols);
  Eigen::VectorXd y(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double t = t_a + (t_b - t_a) * i / (n_samples - 1);
    const double v = std::abs(f(t));
    if (!(v > 0.0) || !std::isfinite(v) || v < std::numeric_limits<double>::min())
      throw DegenerateFit("decay_fit: remainder vanished or is not finite");
    A(i, 0) = 1.0;
    A(i, 1) = t;
    if (with_power) A(i, 2) = std::log(t);
    y(i) = std::log(v);
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  base.fitted_exponent = c(1);
  base.fitted_poly_power = with_power ? c(2) : std::numeric_limits<double>::quiet_NaN();
  base.fit_residual = std::sqrt((A * c - y).squaredNorm() / n_samples);
  return base;
}

}  // namespace dskg
