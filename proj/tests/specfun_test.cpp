#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dskg/specfun.hpp"
#include "fixtures/frozen_values.hpp"

using dskg::Complex;
using dskg::hyp2f1;
using dskg::Hyp2F1Params;
using dskg::kPi;

namespace {

double rel(Complex got, Complex want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

}  // namespace

TEST(Hyp2F1, ZeroArgumentIsOne) {
  EXPECT_EQ(hyp2f1(Complex(0.7), Complex(-1.3), Complex(2.0), 0.0), Complex(1.0));
}

TEST(Hyp2F1, TerminatingPolynomial) {
  const auto v = hyp2f1(Complex(-1.0), Complex(4.0), Complex(2.0), 0.25);
  EXPECT_NEAR(v.real(), 0.5, 1e-15);
  EXPECT_EQ(v.imag(), 0.0);
  EXPECT_EQ((Hyp2F1Params{-3.0, 2.5, 1.0, 0.3}.polynomial_degree()), 3);
  EXPECT_EQ((Hyp2F1Params{2.5, -3.0 + 1e-13, 1.0, 0.3}.polynomial_degree()), 3);
  EXPECT_FALSE((Hyp2F1Params{-3.0 + 1e-9, 2.5, 1.0, 0.3}.polynomial_degree()));
}

TEST(Hyp2F1, ComplexSeriesAgainstExtendedPrecision) {
  const Complex a(0.5, -0.3);
  EXPECT_LT(rel(hyp2f1(a, a, 1.0, 0.5), fixtures::kHyp2f1Series200), 1e-13);
}

TEST(Hyp2F1, NearOneBranches) {
  EXPECT_LT(rel(hyp2f1(0.2, 0.2, 1.0, 0.97), fixtures::kHypNearOneGeneric), 1e-11);
  EXPECT_LT(rel(hyp2f1({0.3, 0.2}, {0.7, -0.2}, 1.0, 0.98), fixtures::kHypNearOneLog0), 1e-11);
  EXPECT_LT(rel(hyp2f1({0.3, 0.2}, {0.7, -0.2}, 2.0, 0.99), fixtures::kHypNearOneLogPlus1), 1e-11);
  EXPECT_LT(rel(hyp2f1({0.3, 0.2}, {1.7, -0.2}, 1.0, 0.96), fixtures::kHypNearOneLogMinus1), 1e-11);
  const Complex ai(0.5, -1.3228756555322954);
  EXPECT_LT(rel(hyp2f1(ai, ai, 1.0, 0.999), fixtures::kHypNearOneImag), 1e-10);
  EXPECT_LT(rel(hyp2f1({0.4, 0.1}, 1.1, 1.7, -0.8), fixtures::kHypNegativeZ), 1e-12);
}

TEST(Hyp2F1, LogCaseClosedForm) {
  // F(1,1;2;z) = -ln(1-z)/z.
  for (double z : {0.95, 0.99, 0.999999, 1.0 - 1e-12}) {
    const double want = -std::log1p(-z) / z;
    EXPECT_LT(rel(hyp2f1(1.0, 1.0, 2.0, z), want), 1e-12) << z;
  }
  // Supplied complement is used verbatim.
  const double w = 1e-20;
  const double want = -std::log(w);
  EXPECT_LT(rel(hyp2f1(Hyp2F1Params{1.0, 1.0, 2.0, 1.0 - w}, w), want), 1e-12);
}

TEST(Hyp2F1, ContinuousAcrossSeriesSwitch) {
  const Complex a(0.35, 0.4), b(0.8, -0.1), c(1.3, 0.2);
  const double z = 0.95;
  const auto lo = hyp2f1(a, b, c, std::nextafter(z, 0.0));
  const auto hi = hyp2f1(a, b, c, z);
  EXPECT_LT(rel(lo, hi), 1e-11);
}

TEST(Hyp2F1, Errors) {
  EXPECT_THROW(hyp2f1(0.5, 0.5, -2.0, 0.3), dskg::InvalidParam);
  EXPECT_THROW(hyp2f1(0.5, 0.5, 1.0, 1.0), dskg::DivergentSeries);
  EXPECT_THROW(hyp2f1(0.5, 0.5, 1.0, -1.2), dskg::DivergentSeries);
}

TEST(Hyp2F1, ContiguousRelationRandom) {
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> part(-1.5, 1.5);
  std::uniform_real_distribution<double> zdist(-0.9, 0.9);
  for (int i = 0; i < 100; ++i) {
    const Complex a(part(rng), part(rng));
    const Complex b(part(rng), part(rng));
    const Complex c(1.0 + std::abs(part(rng)), part(rng));
    const double z = zdist(rng);
    const Complex f = hyp2f1(a, b, c, z);
    const Complex fa = hyp2f1(a + 1.0, b, c, z);
    const Complex fac = hyp2f1(a + 1.0, b + 1.0, c + 1.0, z);
    const Complex resid = c * f - c * fa + b * z * fac;
    const double scale = std::abs(c * f) + std::abs(c * fa) + std::abs(b * z * fac);
    EXPECT_LT(std::abs(resid), 1e-8 * scale) << i;
  }
}

TEST(Hyp2F1, PolynomialMatchesSeries) {
  for (int k = 0; k <= 6; ++k) {
    for (double z : {-0.4, 0.1, 0.5, 0.9}) {
      const Complex b(k + 2.0), c(2.0);
      const Complex poly = hyp2f1(double(-k), b, c, z);
      const Complex series = dskg::detail::hyp2f1_series(double(-k), b, c, z);
      EXPECT_LT(std::abs(poly - series), 1e-12 * std::max(1.0, std::abs(series)));
    }
  }
}

TEST(Gamma, KnownValues) {
  EXPECT_LT(rel(dskg::cgamma(5.0), 24.0), 1e-13);
  EXPECT_LT(rel(dskg::cgamma(0.5), std::sqrt(kPi)), 1e-13);
  EXPECT_LT(rel(dskg::cgamma(-0.5), -2.0 * std::sqrt(kPi)), 1e-13);
  EXPECT_EQ(dskg::crgamma(-3.0), Complex(0.0));
  EXPECT_LT(rel(dskg::cdigamma(1.0), -0.57721566490153286), 1e-13);
  const Complex z(0.3, 1.7);
  EXPECT_LT(rel(dskg::cgamma(z + 1.0), z * dskg::cgamma(z)), 1e-13);
  EXPECT_LT(rel(dskg::cdigamma(z + 1.0), dskg::cdigamma(z) + 1.0 / z), 1e-13);
}

TEST(BesselJHalf, ClosedForms) {
  EXPECT_NEAR(dskg::bessel_j_half(0, kPi), 0.0, 1e-16);
  EXPECT_NEAR(dskg::bessel_j_half(0, kPi / 2), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(dskg::bessel_j_half(1, 1.0), std::sqrt(2.0 / kPi) * (std::sin(1.0) - std::cos(1.0)), 1e-15);
  EXPECT_THROW(dskg::bessel_j_half(0, 0.0), dskg::DomainError);
  EXPECT_THROW(dskg::bessel_j_half(1, -1.0), dskg::DomainError);
}

TEST(BesselJHalf, AgainstStandardLibrary) {
  for (int ell = 0; ell <= 12; ++ell) {
    for (double z : {0.01, 0.3, 0.9, 1.0, 2.5, 5.0, 7.3, 11.0, 13.9, 25.0, 49.0, 120.0}) {
      const double want = std::cyl_bessel_j(ell + 0.5, z);
      const double got = dskg::bessel_j_half(ell, z);
      // Relative accuracy away from zeros; absolute near them.
      const double envelope = std::sqrt(2.0 / (kPi * std::max(z, double(ell) + 1.0)));
      EXPECT_LT(std::abs(got - want), 1e-12 * std::max(std::abs(want), 1e-3 * envelope))
          << "ell=" << ell << " z=" << z;
    }
  }
}

TEST(BesselJHalf, ThreeTermRecurrence) {
  for (int ell = 1; ell <= 10; ++ell) {
    const double nu = ell + 0.5;
    for (double z = 0.1; z <= 50.0; z += 0.37) {
      const double lhs = dskg::bessel_j_half(ell - 1, z) + dskg::bessel_j_half(ell + 1, z);
      const double rhs = 2.0 * nu / z * dskg::bessel_j_half(ell, z);
      const double scale = std::abs(dskg::bessel_j_half(ell - 1, z)) + std::abs(dskg::bessel_j_half(ell + 1, z));
      EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(scale, 1e-300)) << ell << " " << z;
    }
  }
}

TEST(Laguerre, Values) {
  EXPECT_EQ(dskg::assoc_laguerre(0, 3.3, 7.0), 1.0);
  EXPECT_EQ(dskg::assoc_laguerre(1, 2.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(dskg::assoc_laguerre(2, 0.0, 2.0), -1.0);
  for (int k = 0; k < 10; ++k)
    EXPECT_NEAR(dskg::assoc_laguerre(k, 2.0, 1.3), std::assoc_laguerre(k, 2, 1.3), 1e-12);
}

TEST(Laguerre, Recurrence) {
  const double alpha = 0.9998934356, x = 2.7;
  for (int k = 1; k < 15; ++k) {
    const double lhs = (k + 1) * dskg::assoc_laguerre(k + 1, alpha, x);
    const double rhs = (2 * k + 1 + alpha - x) * dskg::assoc_laguerre(k, alpha, x) -
                       (k + alpha) * dskg::assoc_laguerre(k - 1, alpha, x);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(SphericalHarmonic, ValuesAndErrors) {
  EXPECT_NEAR(dskg::spherical_harmonic(0, 0, 0.4, 1.1).real(), 0.5 / std::sqrt(kPi), 1e-15);
  EXPECT_NEAR(dskg::spherical_harmonic(1, 0, 0.0, 0.0).real(), std::sqrt(3.0 / (4.0 * kPi)), 1e-15);
  EXPECT_THROW(dskg::spherical_harmonic(1, 2, 0.0, 0.0), dskg::IndexError);
  for (int ell = 0; ell <= 6; ++ell)
    for (int m = 0; m <= ell; ++m)
      for (double th : {0.2, 1.1, 2.9}) {
        const Complex y = dskg::spherical_harmonic(ell, m, th, 0.0);
        EXPECT_NEAR(y.real(), std::sph_legendre(ell, m, th), 1e-13) << ell << " " << m;
        const Complex yn = dskg::spherical_harmonic(ell, -m, th, 0.7);
        const Complex yp = dskg::spherical_harmonic(ell, m, th, 0.7);
        EXPECT_LT(std::abs(yn - (m % 2 ? -1.0 : 1.0) * std::conj(yp)), 1e-14);
      }
}

TEST(SphericalHarmonic, AngularEigenrelation) {
  const int ell = 3, m = 2;
  const double th = 0.8, ph = 0.5, h = 1e-4;
  auto Y = [&](double t, double p) { return dskg::spherical_harmonic(ell, m, t, p); };
  const Complex d2t = (Y(th + h, ph) - 2.0 * Y(th, ph) + Y(th - h, ph)) / (h * h);
  const Complex d1t = (Y(th + h, ph) - Y(th - h, ph)) / (2 * h);
  const Complex d2p = (Y(th, ph + h) - 2.0 * Y(th, ph) + Y(th, ph - h)) / (h * h);
  const Complex lap = d2t + std::cos(th) / std::sin(th) * d1t + d2p / (std::sin(th) * std::sin(th));
  EXPECT_LT(std::abs(lap + double(ell * (ell + 1)) * Y(th, ph)), 1e-6);
}

TEST(IncompleteGamma, Values) {
  EXPECT_NEAR(dskg::upper_incomplete_gamma(1.0, 2.0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(dskg::upper_incomplete_gamma(2.0, 1.0), 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_LT(rel(dskg::upper_incomplete_gamma(0.5, 0.25), fixtures::kErfcHalfSqrtPi), 1e-12);
  EXPECT_LT(rel(dskg::upper_incomplete_gamma(0.5, 0.25), std::sqrt(kPi) * std::erfc(0.5)), 1e-12);
  EXPECT_LT(rel(dskg::upper_incomplete_gamma(-0.5, 2.0), fixtures::kGammaInc_m05_2), 1e-10);
  EXPECT_LT(rel(dskg::upper_incomplete_gamma(0.0, 0.5), fixtures::kGammaInc_0_05), 1e-10);
  EXPECT_LT(rel(dskg::upper_incomplete_gamma(3.5, 1.0), fixtures::kGammaInc_3p5_1), 1e-10);
  EXPECT_LT(rel(dskg::upper_incomplete_gamma(-2.3, 4.0), fixtures::kGammaInc_m2p3_4), 1e-10);
  EXPECT_THROW(dskg::upper_incomplete_gamma(1.0, 0.0), dskg::DomainError);
}
