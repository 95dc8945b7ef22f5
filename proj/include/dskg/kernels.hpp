#pragma once

// Integral-transform kernels K0, K1 linking flat-space waves to the
// Klein-Gordon field in the expanding universe with scale factor e^{Ht}.

#include <cmath>
#include <complex>

#include "dskg/errors.hpp"
#include "dskg/specfun.hpp"
#include "dskg/types.hpp"

namespace dskg {

/// Hubble constant, mass and spatial dimension; M is derived.
struct PhysicalParams {
  double H = 1.0;
  double m = 0.0;
  int n = 3;
  Complex M;

  /// M = sqrt(n^2 H^2 / 4 - m^2), principal branch.
  static PhysicalParams make(double H, double m, int n = 3) {
    if (!(H > 0.0) || !std::isfinite(H)) throw InvalidParam("H must be positive and finite");
    if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidParam("mass must be nonnegative and finite");
    if (n < 1) throw InvalidParam("spatial dimension must be at least 1");
    PhysicalParams p;
    p.H = H;
    p.m = m;
    p.n = n;
    const double half = 0.5 * n * H;
    // (half - m)(half + m) keeps M accurate near the real/imaginary transition.
    const double m2 = (half - m) * (half + m);
    p.M = m2 >= 0.0 ? Complex(std::sqrt(m2), 0.0) : Complex(0.0, std::sqrt(-m2));
    return p;
  }

  double huygens_mass() const { return std::sqrt(2.0) * H; }
  bool is_huygens(double tol = 1e-12) const { return n == 3 && std::abs(m - huygens_mass()) <= tol; }
};

/// (1 - e^{-Ht}) / H.
inline double phi_of_t(double t, double H) { return -std::expm1(-H * t) / H; }

/// Inverse of phi_of_t on [0, 1/H).
inline double t_of_phi(double phi, double H) { return -std::log1p(-H * phi) / H; }

struct KernelEval {
  double r = 0.0;
  double t = 0.0;
  Complex k0;
  Complex k1;
  double z_arg = 0.0;
};

namespace detail {

struct KernelGeometry {
  double e;          // e^{-Ht}
  double D;          // (1+e)^2 - H^2 r^2
  double z;          // N / D
  double one_minus_z;  // 4e / D
};

inline KernelGeometry kernel_geometry(double r, double t, double H) {
  const double e = std::exp(-H * t);
  const double hr = H * r;
  const double one_m_e = -std::expm1(-H * t);
  const double D = (1.0 + e - hr) * (1.0 + e + hr);
  if (!(D > 0.0)) throw DomainError("kernel: (1+e^{-Ht})^2 - H^2 r^2 must be positive");
  const double N = (one_m_e - hr) * (one_m_e + hr);
  return {e, D, N / D, 4.0 * e / D};
}

// 4^{-M/H} e^{Mt} D^{M/H}, formed in log space.
inline Complex kernel_scale(Complex M, double H, double t, double D) {
  const Complex q = M / H;
  return std::exp(q * (std::log(D) - 2.0 * std::log(2.0)) + M * t);
}

}  // namespace detail

namespace detail {

inline KernelEval kernel_from_geometry(double r, double t, double H, Complex M, const KernelGeometry& g) {
  const Complex q = M / H;
  const Complex a1 = 0.5 - q;
  const Complex a2 = 1.5 - q;
  const Complex f1 = hyp2f1(Hyp2F1Params{a1, a1, 1.0, g.z}, g.one_minus_z);
  const Complex scale = kernel_scale(M, H, t, g.D);

  KernelEval out;
  out.r = r;
  out.t = t;
  out.z_arg = g.z;
  out.k1 = scale * f1 / std::sqrt(g.D);

  const double e = g.e;
  const double hr2 = H * H * r * r;
  const Complex poly = -M * hr2 + M * e * e + H * e + H - M;
  Complex k0 = -scale * std::pow(g.D, -1.5) * poly * f1;
  const Complex hm = H - 2.0 * M;
  const Complex second_pref = hm * hm / H;
  if (second_pref != 0.0) {
    const Complex f2 = hyp2f1(Hyp2F1Params{a2, a2, 2.0, g.z}, g.one_minus_z);
    const double bracket = -hr2 + (e - 1.0) * (e + 1.0);
    k0 -= scale * e * std::pow(g.D, -2.5) * second_pref * bracket * f2;
  }
  out.k0 = k0;
  return out;
}

}  // namespace detail

/// Both kernels at (r, t) for an arbitrary complex M.
inline KernelEval kernel_eval(double r, double t, double H, Complex M) {
  if (r < 0.0 || t < 0.0) throw DomainError("kernel: r and t must be nonnegative");
  return detail::kernel_from_geometry(r, t, H, M, detail::kernel_geometry(r, t, H));
}

/// Kernels at r = phi(t)(1 - w), w in [0, 1].
///
/// w is the relative distance to the light cone r = phi(t); the geometry is
/// formed from w directly so z stays accurate when r is close to phi(t).
inline KernelEval kernel_eval_cone(double w, double t, double H, Complex M) {
  if (!(w >= 0.0 && w <= 1.0) || t < 0.0) throw DomainError("kernel_eval_cone: need w in [0, 1] and t >= 0");
  const double e = std::exp(-H * t);
  const double one_m_e = -std::expm1(-H * t);
  const double D = (w + e * (2.0 - w)) * (2.0 - w * one_m_e);
  const double N = one_m_e * one_m_e * w * (2.0 - w);
  const double r = one_m_e / H * (1.0 - w);
  return detail::kernel_from_geometry(r, t, H, M, detail::KernelGeometry{e, D, N / D, 4.0 * e / D});
}

inline KernelEval kernel_eval(double r, double t, const PhysicalParams& p) { return kernel_eval(r, t, p.H, p.M); }

inline Complex kernel_k0(double r, double t, const PhysicalParams& p) { return kernel_eval(r, t, p).k0; }
inline Complex kernel_k1(double r, double t, const PhysicalParams& p) { return kernel_eval(r, t, p).k1; }

/// 2 K0 + n H K1.
inline Complex kernel_combination(double r, double t, const PhysicalParams& p) {
  const auto k = kernel_eval(r, t, p);
  return 2.0 * k.k0 + double(p.n) * p.H * k.k1;
}

/// Closed forms at M = H/2.
inline Complex huygens_k0(double t, double H) { return -0.25 * H * std::exp(0.5 * H * t); }
inline Complex huygens_k1(double t, double H) { return 0.5 * std::exp(0.5 * H * t); }

}  // namespace dskg
