#pragma once

// Special functions used by the closed-form solvers: Gauss hypergeometric
// 2F1 with complex parameters on real z in (-1, 1), Bessel functions of
// half-integer order, associated Laguerre polynomials, spherical harmonics
// and the upper incomplete gamma function.
//
// Everything here is pure and reentrant.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>

#include "dskg/errors.hpp"
#include "dskg/types.hpp"

namespace dskg {

namespace detail {

inline constexpr double kIntegerTol = 1e-12;
inline constexpr double kLogCaseTol = 1e-8;
inline constexpr double kSeriesSwitch = 0.95;

// Lanczos g = 7, n = 9.
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline std::optional<int> nonpositive_integer(Complex z, double tol = kIntegerTol) {
  if (std::abs(z.imag()) > tol) return std::nullopt;
  const double n = std::round(z.real());
  if (n > 0.0 || std::abs(z.real() - n) > tol) return std::nullopt;
  return static_cast<int>(-n);
}

// Gamma for Re z >= 0.5.
inline Complex gamma_right(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace detail

/// Complex gamma function (Lanczos with reflection). Poles raise DomainError.
inline Complex cgamma(Complex z) {
  if (detail::nonpositive_integer(z, 0.0)) throw DomainError("gamma: pole at nonpositive integer");
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * detail::gamma_right(1.0 - z));
  return detail::gamma_right(z);
}

/// 1/Gamma(z); entire, exactly zero at the poles of Gamma.
inline Complex crgamma(Complex z) {
  if (detail::nonpositive_integer(z, 0.0)) return 0.0;
  if (z.real() < 0.5) return std::sin(kPi * z) * detail::gamma_right(1.0 - z) / kPi;
  return 1.0 / detail::gamma_right(z);
}

/// Complex digamma.
inline Complex cdigamma(Complex z) {
  if (detail::nonpositive_integer(z, 0.0)) throw DomainError("digamma: pole at nonpositive integer");
  if (z.real() < 0.5) return cdigamma(1.0 - z) - kPi / std::tan(kPi * z);
  Complex acc = 0.0;
  while (std::abs(z) < 12.0) {
    acc -= 1.0 / z;
    z += 1.0;
  }
  const Complex iz2 = 1.0 / (z * z);
  const Complex series =
      iz2 * (1.0 / 12 -
             iz2 * (1.0 / 120 -
                    iz2 * (1.0 / 252 -
                           iz2 * (1.0 / 240 - iz2 * (1.0 / 132 - iz2 * (691.0 / 32760 - iz2 / 12.0))))));
  return acc + std::log(z) - 0.5 / z - series;
}

/// Arguments of F(a, b; c; z).
struct Hyp2F1Params {
  Complex a;
  Complex b;
  Complex c;
  double z = 0.0;

  /// Degree k when a or b equals -k (within 1e-12); the function is then a polynomial.
  std::optional<int> polynomial_degree() const {
    auto da = detail::nonpositive_integer(a);
    auto db = detail::nonpositive_integer(b);
    if (da && db) return std::min(*da, *db);
    return da ? da : db;
  }
};

namespace detail {

inline Complex hyp2f1_series(Complex a, Complex b, Complex c, double z, int max_terms = 20000) {
  Complex term = 1.0;
  Complex sum = 1.0;
  int small_run = 0;
  for (int n = 0; n < max_terms; ++n) {
    term *= (a + double(n)) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++small_run >= 2) return sum;
    } else {
      small_run = 0;
    }
    if (term == 0.0) return sum;
  }
  throw DivergentSeries("hyp2f1: series did not converge");
}

inline Complex hyp2f1_polynomial(int degree, Complex b, Complex c, double z) {
  const double a = -static_cast<double>(degree);
  Complex term = 1.0;
  Complex sum = 1.0;
  for (int n = 0; n < degree; ++n) {
    term *= (a + n) * (b + double(n)) / ((c + double(n)) * double(n + 1)) * z;
    sum += term;
  }
  return sum;
}

// z close to 1, given w = 1 - z to full precision. s = c - a - b not near an integer.
inline Complex hyp2f1_reflect(Complex a, Complex b, Complex c, double w) {
  const Complex s = c - a - b;
  const Complex gc = cgamma(c);
  const Complex first = gc * cgamma(s) * crgamma(c - a) * crgamma(c - b) *
                        hyp2f1_series(a, b, 1.0 - s, w);
  const Complex second = std::pow(Complex(w), s) * gc * cgamma(-s) * crgamma(a) * crgamma(b) *
                         hyp2f1_series(c - a, c - b, 1.0 + s, w);
  return first + second;
}

// Logarithmic case c = a + b + m (m >= 0) or c = a + b - m (m > 0).
inline Complex hyp2f1_reflect_log(Complex a, Complex b, Complex c, int m_signed, double w) {
  const double lw = std::log(w);
  const Complex gc = cgamma(c);
  Complex total = 0.0;
  if (m_signed >= 0) {
    const int m = m_signed;
    if (m > 0) {
      Complex finite = 0.0;
      Complex term = 1.0;
      for (int n = 0; n < m; ++n) {
        finite += term;
        term *= (a + double(n)) * (b + double(n)) / (double(n + 1) * double(n + 1 - m)) * w;
      }
      total += std::tgamma(double(m)) * gc * crgamma(a + double(m)) * crgamma(b + double(m)) * finite;
    }
    const Complex pref = (m % 2 == 0 ? 1.0 : -1.0) * std::pow(w, m) * gc * crgamma(a) * crgamma(b);
    if (pref != 0.0) {
      Complex coef = 1.0 / std::tgamma(double(m + 1));
      Complex sum = 0.0;
      for (int n = 0; n < 5000; ++n) {
        const Complex bracket = lw - cdigamma(double(n + 1)) - cdigamma(double(n + m + 1)) +
                                cdigamma(a + double(n + m)) + cdigamma(b + double(n + m));
        const Complex add = coef * bracket;
        sum += add;
        if (std::abs(add) <= 1e-17 * std::abs(sum) && n > 2) break;
        coef *= (a + double(m + n)) * (b + double(m + n)) / (double(n + 1) * double(n + m + 1)) * w;
      }
      total -= pref * sum;
    }
    return total;
  }
  const int m = -m_signed;
  {
    Complex finite = 0.0;
    Complex term = 1.0;
    for (int n = 0; n < m; ++n) {
      finite += term;
      term *= (a - double(m) + double(n)) * (b - double(m) + double(n)) /
              (double(n + 1) * double(n + 1 - m)) * w;
    }
    total += std::tgamma(double(m)) * gc * crgamma(a) * crgamma(b) * std::pow(w, -m) * finite;
  }
  const Complex pref = (m % 2 == 0 ? 1.0 : -1.0) * gc * crgamma(a - double(m)) * crgamma(b - double(m));
  if (pref != 0.0) {
    Complex coef = 1.0 / std::tgamma(double(m + 1));
    Complex sum = 0.0;
    for (int n = 0; n < 5000; ++n) {
      const Complex bracket = lw - cdigamma(double(n + 1)) - cdigamma(double(n + m + 1)) +
                              cdigamma(a + double(n)) + cdigamma(b + double(n));
      const Complex add = coef * bracket;
      sum += add;
      if (std::abs(add) <= 1e-17 * std::abs(sum) && n > 2) break;
      coef *= (a + double(n)) * (b + double(n)) / (double(n + 1) * double(n + m + 1)) * w;
    }
    total -= pref * sum;
  }
  return total;
}

}  // namespace detail

/// Gauss hypergeometric F(a, b; c; z) for real z in (-1, 1).
///
/// `one_minus_z`, when supplied, is used in place of 1 - z near z = 1 so that
/// callers who know the complement exactly do not lose digits to cancellation.
inline Complex hyp2f1(const Hyp2F1Params& p, std::optional<double> one_minus_z = std::nullopt) {
  if (detail::nonpositive_integer(p.c)) {
    // Allowed only for a terminating series that stops before the pole.
    auto deg = p.polynomial_degree();
    auto cdeg = detail::nonpositive_integer(p.c);
    if (!deg || *deg > *cdeg) throw InvalidParam("hyp2f1: c is a nonpositive integer");
  }
  if (auto deg = p.polynomial_degree()) {
    const bool a_poly = detail::nonpositive_integer(p.a) && *detail::nonpositive_integer(p.a) == *deg;
    return detail::hyp2f1_polynomial(*deg, a_poly ? p.b : p.a, p.c, p.z);
  }
  const double z = p.z;
  const bool complement_ok = one_minus_z && *one_minus_z > 0.0 && *one_minus_z < 1.0 - detail::kSeriesSwitch;
  if (!std::isfinite(z) || (z >= 1.0 && !complement_ok) || z <= -1.0)
    throw DivergentSeries("hyp2f1: |z| >= 1 is outside the supported range");
  if (z == 0.0) return 1.0;
  if (z < -0.5) {
    // Pfaff: maps (-1, -0.5) into (1/3, 1/2).
    const double zz = z / (z - 1.0);
    return std::pow(Complex(1.0 - z), -p.a) * detail::hyp2f1_series(p.a, p.c - p.b, p.c, zz);
  }
  if (z < detail::kSeriesSwitch) return detail::hyp2f1_series(p.a, p.b, p.c, z);

  const double w = one_minus_z.value_or(1.0 - z);
  const Complex s = p.c - p.a - p.b;
  const double m = std::round(s.real());
  if (std::abs(s.imag()) <= detail::kLogCaseTol && std::abs(s.real() - m) <= detail::kLogCaseTol)
    return detail::hyp2f1_reflect_log(p.a, p.b, p.c, static_cast<int>(m), w);
  return detail::hyp2f1_reflect(p.a, p.b, p.c, w);
}

inline Complex hyp2f1(Complex a, Complex b, Complex c, double z) {
  return hyp2f1(Hyp2F1Params{a, b, c, z});
}

namespace detail {

// sqrt(2x/pi) * j_l(x) by its power series; accurate for x < ~2.
inline double bessel_j_half_series(int ell, double x) {
  double lead = std::sqrt(2.0 * x / kPi);
  for (int k = 1; k <= ell; ++k) lead *= x / (2.0 * k + 1.0);
  const double q = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (k * (ell + k + 0.5));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

}  // namespace detail

/// J_{l+1/2}(z) for z > 0.
inline double bessel_j_half(int ell, double z) {
  if (ell < 0) throw DomainError("bessel_j_half: ell must be nonnegative");
  if (!(z > 0.0)) throw DomainError("bessel_j_half: argument must be positive");
  if (z < 1.0) return detail::bessel_j_half_series(ell, z);

  const double s = std::sin(z);
  const double c = std::cos(z);
  const double pref = std::sqrt(2.0 / (kPi * z));
  // pref * z * j_l(z) forms.
  const double j0 = s;
  const double j1 = s / z - c;
  if (ell == 0) return pref * j0;
  if (ell == 1) return pref * j1;
  if (ell == 2) return pref * ((3.0 / (z * z) - 1.0) * s - 3.0 * c / z);

  const double nu = ell + 0.5;
  if (z > nu) {
    double prev = j0;
    double cur = j1;
    for (int n = 1; n < ell; ++n) {
      const double next = (2.0 * n + 1.0) / z * cur - prev;
      prev = cur;
      cur = next;
    }
    return pref * cur;
  }

  // Miller: downward from well above ell, normalised against the closed forms.
  const int start = ell + 30 + static_cast<int>(std::sqrt(40.0 * ell)) + static_cast<int>(z);
  double above = 0.0;  // y_{n+1}
  double cur = 1e-300;  // y_n
  double at_ell = 0.0;
  for (int n = start; n >= 1; --n) {
    const double below = (2.0 * n + 1.0) / z * cur - above;
    above = cur;
    cur = below;  // now y_{n-1}
    if (n - 1 == ell) at_ell = cur;
    if (std::abs(cur) > 1e200) {
      cur *= 1e-200;
      above *= 1e-200;
      at_ell *= 1e-200;
    }
  }
  // cur = y_0, above = y_1.
  const double scale = std::abs(j0) > std::abs(j1) ? j0 / cur : j1 / above;
  return pref * at_ell * scale;
}

/// J_{l+1/2}(z) / z^{l+1/2} for z >= 0; finite at the origin.
inline double bessel_j_half_scaled(int ell, double z) {
  if (ell < 0) throw DomainError("bessel_j_half_scaled: ell must be nonnegative");
  if (z < 0.0) throw DomainError("bessel_j_half_scaled: argument must be nonnegative");
  if (z < 1.0) {
    // sqrt(2/pi) / (2l+1)!! * sum_k (-z^2/4)^k / (k! (l+3/2)_k).
    double lead = std::sqrt(2.0 / kPi);
    for (int k = 1; k <= ell; ++k) lead /= (2.0 * k + 1.0);
    const double q = -0.25 * z * z;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (k * (ell + k + 0.5));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return lead * sum;
  }
  return bessel_j_half(ell, z) / std::pow(z, ell + 0.5);
}

/// Generalised Laguerre polynomial L_k^alpha(x) by three-term recurrence.
inline double assoc_laguerre(int k, double alpha, double x) {
  if (k < 0) throw DomainError("assoc_laguerre: degree must be nonnegative");
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int n = 1; n < k; ++n) {
    const double next = ((2.0 * n + 1.0 + alpha - x) * cur - (n + alpha) * prev) / (n + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Orthonormal spherical harmonic with the Condon-Shortley phase.
inline Complex spherical_harmonic(int ell, int m, double theta, double phi) {
  if (ell < 0 || std::abs(m) > ell) throw IndexError("spherical_harmonic: need |m| <= ell");
  const int am = std::abs(m);
  const double x = std::cos(theta);
  const double sx = std::sin(theta);
  // Normalised P_m^m.
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= am; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sx;
  double plm = pmm;
  if (ell > am) {
    double p_prev = pmm;
    double p_cur = x * std::sqrt(2.0 * am + 3.0) * pmm;
    for (int l = am + 2; l <= ell; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(am) * am));
      const double b = std::sqrt((double(l - 1) * (l - 1) - double(am) * am) / (4.0 * (l - 1) * (l - 1) - 1.0));
      const double p_next = a * (x * p_cur - b * p_prev);
      p_prev = p_cur;
      p_cur = p_next;
    }
    plm = p_cur;
  }
  const Complex y = plm * std::polar(1.0, am * phi);
  if (m >= 0) return y;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(y);
}

/// Upper incomplete gamma Gamma(a, x) for x > 0.
inline double upper_incomplete_gamma(double a, double x) {
  if (!(x > 0.0)) throw DomainError("upper_incomplete_gamma: x must be positive");
  auto continued_fraction = [](double a, double x) {
    // Modified Lentz on Gamma(a,x) = e^{-x} x^a / (x + 1 - a - 1(1-a)/(x + 3 - a - ...)).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
      const double an = -i * (i - a);
      b += 2.0;
      d = an * d + b;
      if (std::abs(d) < tiny) d = tiny;
      c = b + an / c;
      if (std::abs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const double delta = d * c;
      h *= delta;
      if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
  };
  auto lower_series = [](double a, double x) {
    // gamma(a, x) = e^{-x} x^a sum x^n / (a (a+1) ... (a+n)), a > 0.
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum * std::exp(-x + a * std::log(x));
  };

  if (x > a + 1.0) return continued_fraction(a, x);
  if (a > 0.0) return std::tgamma(a) - lower_series(a, x);
  if (a == 0.0) {
    // E1(x) for 0 < x <= 1.
    constexpr double euler_gamma = 0.57721566490153286061;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
      term *= -x / k;
      sum += term / k;
      if (std::abs(term) < 1e-18) break;
    }
    return -euler_gamma - std::log(x) - sum;
  }
  // -1 < a < 0 here: step up once, Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a.
  return (upper_incomplete_gamma(a + 1.0, x) - std::exp(-x + a * std::log(x))) / a;
}

}  // namespace dskg
