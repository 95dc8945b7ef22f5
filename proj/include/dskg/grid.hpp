#pragma once

// Field samples on an (r, t) grid and a deterministic parallel evaluator.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "dskg/errors.hpp"
#include "dskg/types.hpp"

namespace dskg {

enum class ErrFlag : int { ok = 0, tolerance = 1, failed = 2 };

/// Values stored r-major: index = i_r * t_values.size() + i_t.
struct FieldGrid {
  std::vector<double> r_values;
  std::vector<double> t_values;
  std::vector<Complex> values;
  std::vector<ErrFlag> err_flags;
  std::string method;

  FieldGrid() = default;
  FieldGrid(std::vector<double> r, std::vector<double> t, std::string m = {})
      : r_values(std::move(r)), t_values(std::move(t)), method(std::move(m)) {
    values.assign(r_values.size() * t_values.size(), Complex(0.0));
    err_flags.assign(values.size(), ErrFlag::ok);
  }

  std::size_t size() const { return values.size(); }
  std::size_t index(std::size_t ir, std::size_t it) const { return ir * t_values.size() + it; }
  Complex& at(std::size_t ir, std::size_t it) { return values[index(ir, it)]; }
  const Complex& at(std::size_t ir, std::size_t it) const { return values[index(ir, it)]; }
  bool all_ok() const {
    return std::all_of(err_flags.begin(), err_flags.end(), [](ErrFlag f) { return f == ErrFlag::ok; });
  }
};

inline void check_grid_axes(const std::vector<double>& r, const std::vector<double>& t) {
  if (r.empty() || t.empty()) throw InvalidParam("grid: empty axis");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) throw InvalidParam("grid: r values must be positive");
    if (i && !(r[i] > r[i - 1])) throw InvalidParam("grid: r values must be strictly increasing");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= 0.0)) throw InvalidParam("grid: t values must be nonnegative");
    if (i && !(t[i] > t[i - 1])) throw InvalidParam("grid: t values must be strictly increasing");
  }
}

inline int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Evaluates f at every grid point with `jobs` workers.
///
/// Each point is written only by the worker that claimed it, so the result
/// does not depend on the number of workers. ToleranceNotMet keeps the best
/// estimate and flags the point; any other library error stores NaN.
inline FieldGrid evaluate_grid(const std::vector<double>& r, const std::vector<double>& t,
                               const std::function<Complex(double, double)>& f, std::string method, int jobs = 1) {
  check_grid_axes(r, t);
  FieldGrid g(r, t, std::move(method));
  const std::size_t total = g.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t ir = k / t.size();
      const std::size_t it = k % t.size();
      try {
        g.values[k] = f(r[ir], t[it]);
        if (!is_finite(g.values[k])) g.err_flags[k] = ErrFlag::failed;
      } catch (const ToleranceNotMet& e) {
        g.values[k] = e.best_estimate();
        g.err_flags[k] = ErrFlag::tolerance;
      } catch (const Error&) {
        g.values[k] = Complex(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
        g.err_flags[k] = ErrFlag::failed;
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (n == 1) {
    worker();
    return g;
  }
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return g;
}

}  // namespace dskg
