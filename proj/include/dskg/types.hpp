#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace dskg {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace dskg
