#pragma once

// Adaptive Gauss-Kronrod integration on finite intervals and a cell-wise
// integrator with repeated-averaging acceleration for semi-infinite,
// oscillatory integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <vector>

#include "dskg/errors.hpp"
#include "dskg/types.hpp"

namespace dskg {

struct OscillatoryTruncation {
  double lambda_max = 1e6;
  double tail_tol = 1e-10;
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;
  OscillatoryTruncation oscillatory_truncation{};
  std::vector<double> singularity_split_points{};

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw InvalidParam("quadrature tolerances must be positive");
    if (!(oscillatory_truncation.lambda_max > 0.0)) throw InvalidParam("lambda_max must be positive");
    if (!(oscillatory_truncation.tail_tol > 0.0)) throw InvalidParam("tail_tol must be positive");
    if (max_subdivisions < 8) throw InvalidParam("max_subdivisions must be at least 8");
  }
};

struct QuadResult {
  Complex value;
  double err_est = 0.0;
  int evaluations = 0;
  bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525624788, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for kXgk[1], kXgk[3], ..., kXgk[9].
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  Complex value;
  double err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

template <class F>
Segment gauss_kronrod21(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<Complex, 21> fv;
  fv[20] = Complex(f(c));
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    fv[2 * j] = Complex(f(c - dx));
    fv[2 * j + 1] = Complex(f(c + dx));
  }
  for (const auto& v : fv)
    if (!is_finite(v)) throw NonFiniteIntegrand("integrand returned a non-finite value");

  Complex resk = fv[20] * kWgk[10];
  Complex resg = 0.0;
  double resabs = std::abs(fv[20]) * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const Complex pair = fv[2 * j] + fv[2 * j + 1];
    resk += kWgk[j] * pair;
    resabs += kWgk[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
    if (j % 2 == 1) resg += kWg[j / 2] * pair;
  }
  const Complex mean = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fv[20] - mean);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));

  const double ah = std::abs(h);
  resasc *= ah;
  resabs *= ah;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * resabs);
  return {a, b, resk * h, err};
}

}  // namespace detail

/// Adaptive integration on [a, b]; never throws on tolerance, reports `converged` instead.
template <class F>
QuadResult integrate_finite_status(F&& f, double a, double b, const QuadratureSpec& spec) {
  if (!(a <= b)) throw DomainError("integrate_finite: need a <= b");
  QuadResult out;
  if (a == b) return out;

  std::vector<double> cuts{a};
  std::vector<double> splits = spec.singularity_split_points;
  std::sort(splits.begin(), splits.end());
  for (double s : splits)
    if (s > cuts.back() && s < b) cuts.push_back(s);
  cuts.push_back(b);

  std::priority_queue<detail::Segment> heap;
  Complex total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto seg = detail::gauss_kronrod21(f, cuts[i], cuts[i + 1]);
    total += seg.value;
    err += seg.err;
    heap.push(seg);
  }
  int evals = 21 * static_cast<int>(heap.size());
  int pieces = static_cast<int>(heap.size());

  // Segments too narrow to bisect are retired with their error kept.
  double retired_err = 0.0;
  while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (pieces >= spec.max_subdivisions || heap.empty()) break;
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 1e3 * std::numeric_limits<double>::epsilon() * std::max(std::abs(mid), 1e-300)) {
      retired_err += worst.err;
      if (heap.empty()) break;
      continue;
    }
    auto left = detail::gauss_kronrod21(f, worst.a, mid);
    auto right = detail::gauss_kronrod21(f, mid, worst.b);
    evals += 42;
    ++pieces;
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum in interval order so the result does not depend on heap history.
  std::vector<detail::Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  Complex sum = 0.0;
  double esum = retired_err;
  for (const auto& s : segs) {
    sum += s.value;
    esum += s.err;
  }
  out.value = sum;
  out.err_est = esum;
  out.evaluations = evals;
  out.converged = esum <= std::max(spec.abs_tol, spec.rel_tol * std::abs(sum));
  return out;
}

/// Adaptive Gauss-Kronrod 10-21 on [a, b], bisecting the worst segment first.
template <class F>
QuadResult integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  auto res = integrate_finite_status(f, a, b, spec);
  if (!res.converged) throw ToleranceNotMet("integrate_finite: tolerance not met", res.value, res.err_est);
  return res;
}

namespace detail {

// Repeated averaging of the trailing partial sums.
inline Complex euler_average(const std::vector<Complex>& partial, int levels) {
  const int n = static_cast<int>(partial.size());
  const int k = std::min(levels, n - 1);
  std::vector<Complex> row(partial.end() - (k + 1), partial.end());
  for (int l = 0; l < k; ++l)
    for (int i = 0; i + 1 < static_cast<int>(row.size()) - l; ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
  return row[0];
}

}  // namespace detail

/// Integral of f over [lower, inf).
///
/// `period_hint` is the oscillation period of f; pass infinity for a
/// non-oscillatory integrand. Cells are half periods, accelerated by
/// repeated averaging; convergence needs three consecutive accelerated
/// estimates within max(tail_tol, rel_tol * |estimate|).
template <class F>
QuadResult integrate_semi_infinite_oscillatory(F&& f, double period_hint, const QuadratureSpec& spec = {},
                                               double lower = 0.0) {
  spec.validate();
  if (!(period_hint > 0.0)) throw InvalidParam("period_hint must be positive");
  const double lambda_max = spec.oscillatory_truncation.lambda_max;
  const double tail_tol = spec.oscillatory_truncation.tail_tol;

  QuadratureSpec cell_spec = spec;
  cell_spec.singularity_split_points.clear();
  cell_spec.abs_tol = std::min(spec.abs_tol, tail_tol) * 0.1;

  QuadResult out;
  double quad_err = 0.0;
  bool cells_ok = true;
  auto cell = [&](double a, double b) {
    auto r = integrate_finite_status(f, a, b, cell_spec);
    quad_err += r.err_est;
    out.evaluations += r.evaluations;
    cells_ok = cells_ok && r.converged;
    return r.value;
  };

  if (!std::isfinite(period_hint)) {
    // Geometric cells; the tail is extrapolated from the ratio of the last two.
    double a = lower;
    double width = 1.0;
    Complex sum = 0.0;
    Complex prev_piece = 0.0;
    Complex prev_est = 0.0;
    int small = 0;
    int count = 0;
    while (a < lambda_max) {
      const double b = std::min(a + width, lambda_max);
      const Complex piece = cell(a, b);
      sum += piece;
      Complex tail = 0.0;
      if (prev_piece != 0.0) {
        const Complex q = piece / prev_piece;
        if (std::abs(q) < 0.9) tail = piece * q / (1.0 - q);
      }
      const Complex est = sum + tail;
      const double tol = std::max(tail_tol, spec.rel_tol * std::abs(est));
      const double change = std::abs(est - prev_est);
      small = (++count > 2 && change <= tol) ? small + 1 : 0;
      if (small >= 3) {
        out.value = est;
        out.err_est = quad_err + std::max(change, std::abs(tail) * 1e-3);
        out.converged = cells_ok;
        return out;
      }
      prev_piece = piece;
      prev_est = est;
      a = b;
      width *= 2.0;
    }
    throw TailNotNegligible("semi-infinite integral: tail not negligible at lambda_max", sum, quad_err);
  }

  constexpr int kLevels = 10;
  const double half = 0.5 * period_hint;
  std::vector<Complex> partial;
  std::vector<Complex> estimates;
  Complex sum = 0.0;
  double a = lower;
  // The budget is a cell count, so slow oscillations are not cut short.
  const double limit = std::max(lambda_max, lower + (kLevels + 40) * half);
  while (a < limit) {
    const double b = a + half;
    sum += cell(a, b);
    partial.push_back(sum);
    a = b;
    if (static_cast<int>(partial.size()) < kLevels + 1) continue;
    estimates.push_back(detail::euler_average(partial, kLevels));
    const std::size_t n = estimates.size();
    if (n < 3) continue;
    const Complex e0 = estimates[n - 1];
    const double d1 = std::abs(e0 - estimates[n - 2]);
    const double d2 = std::abs(estimates[n - 2] - estimates[n - 3]);
    const double tol = std::max(tail_tol, spec.rel_tol * std::abs(e0));
    if (d1 <= tol && d2 <= tol) {
      out.value = e0;
      out.err_est = quad_err + std::max(d1, d2);
      out.converged = cells_ok;
      return out;
    }
  }
  const Complex best = estimates.empty() ? sum : estimates.back();
  throw TailNotNegligible("oscillatory integral: no convergence before lambda_max", best, quad_err);
}

}  // namespace dskg
