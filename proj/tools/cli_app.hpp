#pragma once

// Configuration layer and subcommands of the dskg tool.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dskg/desitter.hpp"
#include "dskg/grid.hpp"
#include "dskg/kernels.hpp"
#include "dskg/oracle.hpp"
#include "dskg/profile.hpp"

namespace dskg::cli {

using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kToleranceFailure = 3 };

struct DecaySettings {
  double r = 1.0;
  double t_a = 8.0;
  double t_b = 24.0;
  int n_samples = 17;
  bool fit_power = false;
  double tolerance = 0.1;
};

struct FDSettings {
  int n_r = 2000;
  double r_max = 0.0;  // 0: sampled radius + t_end + margin, at least 8
  double cfl_safety = 0.5;
  double margin = 0.5;
};

/// Everything a run depends on. Parallelism is deliberately absent: it must
/// not change the output.
struct RunConfig {
  double H = 1.0;
  double mass = 0.0;
  int n_dim = 3;
  int ell = 0;
  int m_index = 0;
  json profile = json{{"type", "pionic"}};
  std::vector<double> r{1.0};
  std::vector<double> t{0.0};
  double theta = 0.0;
  double phi = 0.0;
  std::string method = "riemann";
  std::vector<std::string> methods{"riemann", "hankel"};
  QuadratureSpec quadrature{};
  FDSettings fd{};
  DecaySettings decay{};
  double compare_tolerance = 1e-5;
  std::string format = "csv";
};

namespace detail {

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

inline std::vector<double> read_axis(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(where + ": axis entries must be numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  check_keys(v, {"start", "stop", "count"}, where);
  if (!v.contains("start") || !v.contains("stop") || !v.contains("count"))
    throw ConfigError(where + ": a range needs start, stop and count");
  const double a = v["start"].get<double>(), b = v["stop"].get<double>();
  const int n = v["count"].get<int>();
  if (n < 1) throw ConfigError(where + ": count must be positive");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  if (n > 1) out.back() = b;
  return out;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline std::vector<double> read_column_file(const std::string& path, std::vector<double>* second) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table '" + path + "'");
  std::vector<double> first;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a >> b)) {
      if (first.empty()) continue;  // header row
      throw ConfigError("table '" + path + "': malformed row");
    }
    first.push_back(a);
    second->push_back(b);
  }
  return first;
}

}  // namespace detail

/// Parses a config document; missing keys keep their defaults.
inline RunConfig parse_config(const json& doc) {
  using detail::check_keys;
  using detail::read;
  RunConfig c;
  check_keys(doc, {"physics", "mode", "grid", "method", "methods", "quadrature", "fd", "decay", "compare", "output"},
             "config");
  if (doc.contains("physics")) {
    const auto& p = doc["physics"];
    check_keys(p, {"H", "mass", "n_dim"}, "physics");
    read(p, "H", c.H, "physics");
    read(p, "mass", c.mass, "physics");
    read(p, "n_dim", c.n_dim, "physics");
  }
  if (doc.contains("mode")) {
    const auto& m = doc["mode"];
    check_keys(m, {"ell", "m", "profile", "theta", "phi"}, "mode");
    read(m, "ell", c.ell, "mode");
    read(m, "m", c.m_index, "mode");
    read(m, "theta", c.theta, "mode");
    read(m, "phi", c.phi, "mode");
    if (m.contains("profile")) c.profile = m["profile"];
  }
  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    check_keys(g, {"r", "t"}, "grid");
    if (g.contains("r")) c.r = detail::read_axis(g["r"], "grid.r");
    if (g.contains("t")) c.t = detail::read_axis(g["t"], "grid.t");
  }
  read(doc, "method", c.method, "config");
  read(doc, "methods", c.methods, "config");
  if (doc.contains("quadrature")) {
    const auto& q = doc["quadrature"];
    check_keys(q, {"abs_tol", "rel_tol", "max_subdivisions", "lambda_max", "tail_tol"}, "quadrature");
    read(q, "abs_tol", c.quadrature.abs_tol, "quadrature");
    read(q, "rel_tol", c.quadrature.rel_tol, "quadrature");
    read(q, "max_subdivisions", c.quadrature.max_subdivisions, "quadrature");
    read(q, "lambda_max", c.quadrature.oscillatory_truncation.lambda_max, "quadrature");
    read(q, "tail_tol", c.quadrature.oscillatory_truncation.tail_tol, "quadrature");
  }
  if (doc.contains("fd")) {
    const auto& f = doc["fd"];
    check_keys(f, {"n_r", "r_max", "cfl_safety", "margin"}, "fd");
    read(f, "n_r", c.fd.n_r, "fd");
    read(f, "r_max", c.fd.r_max, "fd");
    read(f, "cfl_safety", c.fd.cfl_safety, "fd");
    read(f, "margin", c.fd.margin, "fd");
  }
  if (doc.contains("decay")) {
    const auto& d = doc["decay"];
    check_keys(d, {"r", "t_window", "n_samples", "fit_power", "tolerance"}, "decay");
    read(d, "r", c.decay.r, "decay");
    if (d.contains("t_window")) {
      const auto w = d["t_window"];
      if (!w.is_array() || w.size() != 2) throw ConfigError("decay.t_window: expected [t_a, t_b]");
      c.decay.t_a = w[0].get<double>();
      c.decay.t_b = w[1].get<double>();
    }
    read(d, "n_samples", c.decay.n_samples, "decay");
    read(d, "fit_power", c.decay.fit_power, "decay");
    read(d, "tolerance", c.decay.tolerance, "decay");
  }
  if (doc.contains("compare")) {
    check_keys(doc["compare"], {"tolerance"}, "compare");
    read(doc["compare"], "tolerance", c.compare_tolerance, "compare");
  }
  if (doc.contains("output")) {
    check_keys(doc["output"], {"format"}, "output");
    read(doc["output"], "format", c.format, "output");
  }
  return c;
}

/// Fills profile defaults that depend on other settings, so the resolved
/// document is self-contained.
inline json resolve_profile(const RunConfig& c) {
  json p = c.profile;
  if (!p.is_object() || !p.contains("type") || !p["type"].is_string())
    throw ConfigError("mode.profile: needs a string 'type'");
  const std::string type = p["type"];
  if (type == "pionic") {
    detail::check_keys(p, {"type", "n", "Z", "normalization", "alpha", "energy"}, "mode.profile");
    if (!p.contains("n")) p["n"] = c.ell + 1;
    if (!p.contains("Z")) p["Z"] = 1;
    if (!p.contains("normalization")) p["normalization"] = 1.0;
    if (!p.contains("alpha")) p["alpha"] = kFineStructure;
    if (!p.contains("energy")) p["energy"] = c.mass;  // rest-energy default
  } else if (type == "gaussian") {
    detail::check_keys(p, {"type", "sigma", "power", "amplitude", "velocity_amplitude"}, "mode.profile");
    if (!p.contains("sigma")) p["sigma"] = 1.0;
    if (!p.contains("power")) p["power"] = double(c.ell);
    if (!p.contains("amplitude")) p["amplitude"] = 1.0;
    if (!p.contains("velocity_amplitude")) p["velocity_amplitude"] = 0.0;
  } else if (type == "tabulated") {
    detail::check_keys(p, {"type", "file", "velocity_file"}, "mode.profile");
    if (!p.contains("file")) throw ConfigError("mode.profile: tabulated needs 'file'");
  } else {
    throw ConfigError("mode.profile: unknown type '" + type + "'");
  }
  // Canonical key order so the embedded config does not depend on the input.
  json out{{"type", type}};
  for (const char* k : {"n", "Z", "normalization", "alpha", "energy", "sigma", "power", "amplitude",
                        "velocity_amplitude", "file", "velocity_file"})
    if (p.contains(k)) out[k] = p[k];
  return out;
}

inline json to_json(const RunConfig& c) {
  json axis_r = c.r, axis_t = c.t;
  return json{
      {"physics", {{"H", c.H}, {"mass", c.mass}, {"n_dim", c.n_dim}}},
      {"mode", {{"ell", c.ell}, {"m", c.m_index}, {"profile", resolve_profile(c)}, {"theta", c.theta}, {"phi", c.phi}}},
      {"grid", {{"r", axis_r}, {"t", axis_t}}},
      {"method", c.method},
      {"methods", c.methods},
      {"quadrature",
       {{"abs_tol", c.quadrature.abs_tol},
        {"rel_tol", c.quadrature.rel_tol},
        {"max_subdivisions", c.quadrature.max_subdivisions},
        {"lambda_max", c.quadrature.oscillatory_truncation.lambda_max},
        {"tail_tol", c.quadrature.oscillatory_truncation.tail_tol}}},
      {"fd", {{"n_r", c.fd.n_r}, {"r_max", c.fd.r_max}, {"cfl_safety", c.fd.cfl_safety}, {"margin", c.fd.margin}}},
      {"decay",
       {{"r", c.decay.r},
        {"t_window", {c.decay.t_a, c.decay.t_b}},
        {"n_samples", c.decay.n_samples},
        {"fit_power", c.decay.fit_power},
        {"tolerance", c.decay.tolerance}}},
      {"compare", {{"tolerance", c.compare_tolerance}}},
      {"output", {{"format", c.format}}},
  };
}

inline PhysicalParams make_params(const RunConfig& c) {
  try {
    return PhysicalParams::make(c.H, c.mass, c.n_dim);
  } catch (const InvalidParam& e) {
    throw ConfigError(e.what());
  }
}

inline ModeState make_mode(const RunConfig& c) {
  const json p = resolve_profile(c);
  const std::string type = p["type"];
  try {
    if (type == "pionic") {
      std::optional<double> energy;
      if (!p["energy"].is_null()) energy = p["energy"].get<double>();
      return pionic_mode(p["n"].get<int>(), c.ell, c.m_index, p["Z"].get<int>(), energy,
                         p["normalization"].get<double>(), p["alpha"].get<double>());
    }
    if (type == "gaussian") {
      const double sigma = p["sigma"], power = p["power"], amp = p["amplitude"], vamp = p["velocity_amplitude"];
      auto f0 = gaussian_profile(sigma, power, c.ell, amp);
      if (vamp == 0.0) return ModeState::make(c.ell, c.m_index, f0);
      return ModeState::make(c.ell, c.m_index, f0, gaussian_profile(sigma, power, c.ell, vamp));
    }
    std::vector<double> v;
    auto r = detail::read_column_file(p["file"].get<std::string>(), &v);
    auto f0 = tabulated_profile(r, v, c.ell);
    if (!p.contains("velocity_file")) return ModeState::make(c.ell, c.m_index, f0);
    std::vector<double> w;
    auto r1 = detail::read_column_file(p["velocity_file"].get<std::string>(), &w);
    return ModeState::make(c.ell, c.m_index, f0, tabulated_profile(r1, w, c.ell));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("mode.profile: ") + e.what());
  } catch (const InvalidParam& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const IndexError& e) {
    throw ConfigError(e.what());
  }
}

/// Shortest decimal that round-trips.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Grid of Phi values (radial factor times Y_lm at the configured angles).
inline FieldGrid evaluate_field(const RunConfig& c, const std::string& method, int jobs) {
  const PhysicalParams p = make_params(c);
  const ModeState mode = make_mode(c);
  try {
    check_grid_axes(c.r, c.t);
    c.quadrature.validate();
  } catch (const InvalidParam& e) {
    throw ConfigError(e.what());
  }
  Complex Y;
  try {
    Y = spherical_harmonic(c.ell, c.m_index, c.theta, c.phi);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (method == "fd") {
    FDConfig fd;
    fd.n_r = c.fd.n_r;
    fd.cfl_safety = c.fd.cfl_safety;
    fd.margin = c.fd.margin;
    fd.t_end = c.t.back();
    fd.r_max = c.fd.r_max > 0.0 ? c.fd.r_max : std::max(8.0, c.r.back() + fd.t_end + fd.margin);
    fd.sample_r = c.r;
    fd.sample_t = c.t;
    FieldGrid g;
    try {
      g = solve_fd(p, mode, fd);
    } catch (const InvalidParam& e) {
      throw ConfigError(e.what());
    } catch (const InstabilityDetected&) {
      g = FieldGrid(c.r, c.t, "fd");
      for (auto& v : g.values) v = Complex(std::nan(""), std::nan(""));
      for (auto& f : g.err_flags) f = ErrFlag::failed;
      return g;
    }
    for (auto& v : g.values) v *= Y;
    return g;
  }
  const auto fm = parse_field_method(method);
  if (!fm) throw ConfigError("unknown method '" + method + "'");
  std::optional<FieldEvaluator> ev;
  try {
    ev.emplace(p, mode, *fm, c.quadrature);
  } catch (const InvalidParam& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const UnsupportedEll& e) {
    throw ConfigError(e.what());
  }
  const FieldEvaluator& f = *ev;
  return evaluate_grid(c.r, c.t, [&f, Y](double r, double t) { return f.radial(r, t) * Y; }, method, jobs);
}

inline bool any_failed(const FieldGrid& g) { return !g.all_ok(); }

inline int cmd_eval(const RunConfig& c, int jobs, std::ostream& out) {
  const FieldGrid g = evaluate_field(c, c.method, jobs);
  if (c.format == "csv") {
    std::string s = "r,t,re,im,method,err_flag\n";
    for (std::size_t i = 0; i < g.r_values.size(); ++i)
      for (std::size_t j = 0; j < g.t_values.size(); ++j) {
        const std::size_t k = g.index(i, j);
        s += format_double(g.r_values[i]) + ',' + format_double(g.t_values[j]) + ',' +
             format_double(g.values[k].real()) + ',' + format_double(g.values[k].imag()) + ',' + g.method + ',' +
             std::to_string(static_cast<int>(g.err_flags[k])) + '\n';
      }
    out << s;
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < g.r_values.size(); ++i)
      for (std::size_t j = 0; j < g.t_values.size(); ++j) {
        const std::size_t k = g.index(i, j);
        rows.push_back({{"r", g.r_values[i]},
                        {"t", g.t_values[j]},
                        {"re", detail::number_or_null(g.values[k].real())},
                        {"im", detail::number_or_null(g.values[k].imag())},
                        {"method", g.method},
                        {"err_flag", static_cast<int>(g.err_flags[k])}});
      }
    out << json{{"config", to_json(c)}, {"rows", rows}}.dump(2) << '\n';
  }
  return any_failed(g) ? kNumericalFailure : kOk;
}

inline int cmd_compare(const RunConfig& c, int jobs, std::ostream& out) {
  if (c.methods.size() != 2) throw ConfigError("compare: 'methods' must name exactly two methods");
  const FieldGrid a = evaluate_field(c, c.methods[0], jobs);
  const FieldGrid b = evaluate_field(c, c.methods[1], jobs);
  double max_abs = 0.0, max_rel = 0.0;
  std::size_t worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a.values[k] - b.values[k]);
    const double scale = std::max(std::abs(a.values[k]), std::abs(b.values[k]));
    const double rel = scale > 0.0 ? d / scale : d;
    if (!(d <= max_abs)) max_abs = d;
    if (!(rel <= max_rel)) {
      max_rel = rel;
      worst = k;
    }
  }
  const std::size_t ir = worst / c.t.size(), it = worst % c.t.size();
  const bool failed = any_failed(a) || any_failed(b);
  const bool pass = !failed && max_rel <= c.compare_tolerance;
  json rep{{"config", to_json(c)},
           {"methods", c.methods},
           {"max_abs_diff", detail::number_or_null(max_abs)},
           {"max_rel_diff", detail::number_or_null(max_rel)},
           {"worst_point",
            {{"r", c.r[ir]},
             {"t", c.t[it]},
             {"a_re", detail::number_or_null(a.values[worst].real())},
             {"a_im", detail::number_or_null(a.values[worst].imag())},
             {"b_re", detail::number_or_null(b.values[worst].real())},
             {"b_im", detail::number_or_null(b.values[worst].imag())}}},
           {"tolerance", c.compare_tolerance},
           {"numerical_failure", failed},
           {"pass", pass}};
  out << rep.dump(2) << '\n';
  if (failed) return kNumericalFailure;
  return pass ? kOk : kToleranceFailure;
}

inline int cmd_decay(const RunConfig& c, int jobs, std::ostream& out) {
  const PhysicalParams p = make_params(c);
  const ModeState mode = make_mode(c);
  const auto fm = parse_field_method(c.method);
  if (!fm) throw ConfigError("decay: method must be a closed-form representation");
  const auto& d = c.decay;
  if (!(d.t_b > d.t_a) || !(d.t_a > 0.0) || d.n_samples < 4 || !(d.r > 0.0) || !(d.tolerance > 0.0))
    throw ConfigError("decay: need 0 < t_a < t_b, n_samples >= 4, r > 0, tolerance > 0");
  std::optional<FieldEvaluator> ev;
  try {
    ev.emplace(p, mode, *fm, c.quadrature);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  std::vector<double> ts(d.n_samples);
  for (int i = 0; i < d.n_samples; ++i) ts[i] = d.t_a + (d.t_b - d.t_a) * i / (d.n_samples - 1);
  const FieldEvaluator& f = *ev;
  const FieldGrid g =
      evaluate_grid({d.r}, ts, [&f](double r, double t) { return f.terms(r, t).integral; }, c.method, jobs);
  json rep{{"config", to_json(c)}};
  DecayReport r = decay_classify(p);
  rep["regime"] = std::string(to_string(r.regime));
  rep["predicted_exponent"] = r.predicted_exponent;
  rep["predicted_poly_power"] = r.predicted_poly_power;
  int code = kOk;
  if (any_failed(g)) {
    code = kNumericalFailure;
  } else {
    std::map<double, Complex> samples;
    for (std::size_t i = 0; i < ts.size(); ++i) samples[ts[i]] = g.values[i];
    try {
      r = decay_fit([&](double t) { return samples.at(t); }, d.t_a, d.t_b, d.n_samples, d.fit_power, r);
    } catch (const DegenerateFit&) {
      code = kNumericalFailure;
    }
  }
  rep["fitted_exponent"] = detail::number_or_null(r.fitted_exponent);
  rep["fitted_poly_power"] = detail::number_or_null(r.fitted_poly_power);
  rep["fit_residual"] = detail::number_or_null(r.fit_residual);
  const double scale = std::max(std::abs(r.predicted_exponent), 1e-300);
  const double rel = std::abs(r.fitted_exponent - r.predicted_exponent) / scale;
  rep["relative_error"] = detail::number_or_null(rel);
  rep["tolerance"] = d.tolerance;
  const bool pass = code == kOk && rel <= d.tolerance;
  rep["pass"] = pass;
  out << rep.dump(2) << '\n';
  if (code != kOk) return code;
  return pass ? kOk : kToleranceFailure;
}

inline int cmd_kernels(const RunConfig& c, std::ostream& out) {
  const PhysicalParams p = make_params(c);
  try {
    check_grid_axes(c.r, c.t);
  } catch (const InvalidParam& e) {
    throw ConfigError(e.what());
  }
  const bool huygens = p.is_huygens();
  struct Row {
    double r, t;
    Complex k0, k1, comb;
    int flag;
  };
  std::vector<Row> rows;
  for (double r : c.r)
    for (double t : c.t) {
      Row row{r, t, {}, {}, {}, 0};
      try {
        const auto k = kernel_eval(r, t, p);
        row.k0 = k.k0;
        row.k1 = k.k1;
        row.comb = kernel_combination(r, t, p);
      } catch (const Error&) {
        const double nan = std::nan("");
        row.k0 = row.k1 = row.comb = Complex(nan, nan);
        row.flag = static_cast<int>(ErrFlag::failed);
      }
      rows.push_back(row);
    }
  const bool failed = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.flag != 0; });
  if (c.format == "csv") {
    std::string s = "r,t,k0_re,k0_im,k1_re,k1_im,comb_re,comb_im";
    if (huygens) s += ",huygens_k0,huygens_k1";
    s += ",err_flag\n";
    for (const auto& r : rows) {
      s += format_double(r.r) + ',' + format_double(r.t) + ',' + format_double(r.k0.real()) + ',' +
           format_double(r.k0.imag()) + ',' + format_double(r.k1.real()) + ',' + format_double(r.k1.imag()) + ',' +
           format_double(r.comb.real()) + ',' + format_double(r.comb.imag());
      if (huygens)
        s += ',' + format_double(huygens_k0(r.t, p.H).real()) + ',' + format_double(huygens_k1(r.t, p.H).real());
      s += ',' + std::to_string(r.flag) + '\n';
    }
    out << s;
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      json row{{"r", r.r},
               {"t", r.t},
               {"k0_re", detail::number_or_null(r.k0.real())},
               {"k0_im", detail::number_or_null(r.k0.imag())},
               {"k1_re", detail::number_or_null(r.k1.real())},
               {"k1_im", detail::number_or_null(r.k1.imag())},
               {"comb_re", detail::number_or_null(r.comb.real())},
               {"comb_im", detail::number_or_null(r.comb.imag())}};
      if (huygens) {
        row["huygens_k0"] = huygens_k0(r.t, p.H).real();
        row["huygens_k1"] = huygens_k1(r.t, p.H).real();
      }
      row["err_flag"] = r.flag;
      arr.push_back(row);
    }
    out << json{{"config", to_json(c)}, {"rows", arr}}.dump(2) << '\n';
  }
  return failed ? kNumericalFailure : kOk;
}

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  CLI::App app{"Klein-Gordon fields in de Sitter space"};
  app.require_subcommand(1, 1);
  std::string config_path, out_path, format;
  int jobs = default_jobs();
  std::optional<double> H, mass, theta, phi, tolerance;
  std::optional<int> ell, m_index, n_dim;
  std::string method, methods, profile;
  std::vector<double> r_axis, t_axis;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--jobs", jobs, "worker threads (default: logical cores)")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--H", H, "Hubble constant");
  app.add_option("--mass", mass, "field mass");
  app.add_option("--n-dim", n_dim, "spatial dimension");
  app.add_option("--ell", ell, "angular momentum l");
  app.add_option("--m-index", m_index, "azimuthal index m");
  app.add_option("--theta", theta, "polar angle");
  app.add_option("--phi", phi, "azimuthal angle");
  app.add_option("--method", method, "riemann, hankel, huygens_riemann, huygens_hankel or fd");
  app.add_option("--methods", methods, "two comma-separated methods for compare");
  app.add_option("--profile", profile, "profile type with defaults: pionic or gaussian");
  app.add_option("--r", r_axis, "comma-separated radii")->delimiter(',');
  app.add_option("--t", t_axis, "comma-separated times")->delimiter(',');
  app.add_option("--tolerance", tolerance, "pass threshold for compare and decay");
  auto* eval = app.add_subcommand("eval", "evaluate the field on a grid");
  auto* compare = app.add_subcommand("compare", "compare two methods on a grid");
  auto* decay = app.add_subcommand("decay", "fit the late-time remainder");
  auto* kernels = app.add_subcommand("kernels", "tabulate K0 and K1");
  for (auto* s : {eval, compare, decay, kernels}) s->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, eo;
    const int code = app.exit(e, o, eo);
    std::cout << o.str();
    err << eo.str();
    return code == 0 ? kOk : kConfigError;
  }

  try {
    json doc = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    }
    RunConfig c = parse_config(doc);
    if (H) c.H = *H;
    if (mass) c.mass = *mass;
    if (n_dim) c.n_dim = *n_dim;
    if (ell) c.ell = *ell;
    if (m_index) c.m_index = *m_index;
    if (theta) c.theta = *theta;
    if (phi) c.phi = *phi;
    if (!method.empty()) c.method = method;
    if (!r_axis.empty()) c.r = r_axis;
    if (!t_axis.empty()) c.t = t_axis;
    if (!methods.empty()) {
      c.methods.clear();
      std::stringstream ss(methods);
      for (std::string item; std::getline(ss, item, ',');) c.methods.push_back(item);
    }
    if (!profile.empty()) c.profile = json{{"type", profile}};
    if (tolerance) {
      c.compare_tolerance = *tolerance;
      c.decay.tolerance = *tolerance;
    }
    if (!format.empty()) c.format = format;
    if (c.format != "csv" && c.format != "json") throw ConfigError("output.format must be csv or json");
    resolve_profile(c);

    std::ostringstream buffer;
    int code = kOk;
    if (*eval) code = cmd_eval(c, jobs, buffer);
    if (*compare) code = cmd_compare(c, jobs, buffer);
    if (*decay) code = cmd_decay(c, jobs, buffer);
    if (*kernels) code = cmd_kernels(c, buffer);
    if (out_path.empty()) {
      std::cout << buffer.str();
      std::cout.flush();
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigError("cannot open output '" + out_path + "'");
      f << buffer.str();
    }
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

}  // namespace dskg::cli
