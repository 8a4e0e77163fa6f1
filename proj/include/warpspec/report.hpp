#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "warpspec/bounds.hpp"
#include "warpspec/config.hpp"
#include "warpspec/ode.hpp"
#include "warpspec/spectrum.hpp"
#include "warpspec/volume.hpp"

namespace warpspec {

using json = nlohmann::json;

/// Non-finite doubles become strings so the report stays valid JSON.
inline json number(double x) {
  if (std::isfinite(x))
    return x;
  if (std::isnan(x))
    return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline json to_json(const QuadratureConfig &q) {
  return {{"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol}, {"max_depth", q.max_depth}};
}

inline json to_json(const SolverConfig &s) {
  return {{"truncation_radii", s.truncation_radii}, {"mesh_points", s.mesh_points},
          {"osc_window", s.osc_window},             {"n_osc", s.n_osc},
          {"bisect_tol", s.bisect_tol},             {"ode_step", s.ode_step}};
}

inline json to_json(const PieceRow &row) {
  return {{"start", row.start}, {"kind", row.kind}, {"params", row.params}, {"no_d2", row.no_d2}};
}

inline json to_json(const ManifoldSource &m) {
  json j{{"family", m.family}, {"n", m.n}};
  if (m.family == "paper-equality") {
    j["alpha"] = m.alpha;
    j["r0"] = m.r0;
  } else if (m.family == "hyperbolic") {
    j["k"] = m.k;
  } else if (m.family == "custom") {
    j["label"] = m.label;
    j["g"] = json::array();
    for (const auto &row : m.g_rows)
      j["g"].push_back(to_json(row));
    j["f"] = json::array();
    for (const auto &row : m.f_rows)
      j["f"].push_back(to_json(row));
  }
  return j;
}

inline json to_json(const HypersurfaceData &d) {
  return {{"n", d.n},
          {"m", d.m},
          {"mu", d.mu},
          {"ric_inf", d.ric_inf},
          {"grad_inf_sq", d.grad_inf_sq},
          {"ric_nm_inf", d.ric_nm_inf}};
}

inline json to_json(const RunConfig &c) {
  json params{{"r", c.params.r}, {"delta", c.params.delta}, {"r_max", c.params.r_max}, {"t0", c.params.t0}};
  if (c.params.lambda)
    params["lambda"] = *c.params.lambda;
  if (c.params.beta)
    params["beta"] = *c.params.beta;
  json j{{"command", c.command},
         {"manifold", to_json(c.manifold)},
         {"quadrature", to_json(c.quadrature)},
         {"solver", to_json(c.solver)},
         {"params", params}};
  if (c.hypersurface)
    j["hypersurface"] = to_json(*c.hypersurface);
  if (c.nonexistence)
    j["nonexistence"] = {{"k", c.nonexistence->k},
                         {"regime", c.nonexistence->regime},
                         {"exponent", c.nonexistence->exponent}};
  return j;
}

inline json to_json(const LiminfEstimate &e) {
  json seq = json::array();
  for (const auto &[r, v] : e.sequence)
    seq.push_back({number(r), number(v)});
  return {{"value", number(e.value)},
          {"window", {e.r_lo, e.r_hi}},
          {"spread", number(e.spread)},
          {"sequence", seq}};
}

inline json to_json(const TotalVolume &t) {
  return {{"kind", to_string(t.kind)}, {"value", number(t.value)}, {"certified_radius", t.certified_radius}};
}

inline json to_json(const VolumeReport &v) {
  json samples = json::array();
  for (const auto &[r, vol] : v.samples)
    samples.push_back({number(r), number(vol)});
  json j{{"total", to_json(v.total)}, {"samples", samples}};
  j["mu_v"] = v.mu_v ? to_json(*v.mu_v) : json(nullptr);
  j["mu_w"] = v.mu_w ? to_json(*v.mu_w) : json(nullptr);
  return j;
}

inline json to_json(const SpectrumEstimate &s) {
  json diag = json::object();
  for (const auto &[k, v] : s.diagnostics)
    diag[k] = number(v);
  return {{"lambda1_lower", number(s.lambda1_lower)},
          {"lambda1_upper", number(s.lambda1_upper)},
          {"method", to_string(s.method)},
          {"r0", s.r0},
          {"diagnostics", diag}};
}

inline json to_json(const OscillationVerdict &v) {
  return {{"oscillatory", v.oscillatory},
          {"sign_changes", v.sign_changes},
          {"window", {v.t_begin, v.t_end}},
          {"overflow_guard", v.overflow_guard},
          {"log_growth", number(v.log_growth)}};
}

inline json to_json(const CurvatureBounds &b) {
  return {{"hf_sq_lower", number(b.hf_sq_lower)},
          {"hf_sq_upper", number(b.hf_sq_upper)},
          {"consistent", b.consistent},
          {"forced_f_minimal", b.forced_f_minimal}};
}

inline json to_json(const SpectrumCrossCheck &c) {
  return {{"from_mu", to_json(c.from_mu)},
          {"from_spectrum", to_json(c.from_spectrum)},
          {"mu_cap", number(c.mu_cap)},
          {"spectrum_cap", number(c.spectrum_cap)},
          {"spectrum", to_json(c.spectrum)},
          {"tightened", c.tightened}};
}

inline json error_record(const std::string &kind, const std::string &message) {
  return {{"status", "error"}, {"error", {{"kind", kind}, {"message", message}}}};
}

inline void write_pairs_csv(std::ostream &out, const std::string &header,
                            const std::vector<std::pair<double, double>> &rows) {
  out << header << '\n' << std::setprecision(17);
  for (const auto &[a, b] : rows)
    out << a << ',' << b << '\n';
}

inline void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorKind::ConfigError, "cannot write '" + path + "'");
  out << text;
  if (!out)
    fail(ErrorKind::ConfigError, "write to '" + path + "' failed");
}

inline void write_pairs_csv(const std::string &path, const std::string &header,
                            const std::vector<std::pair<double, double>> &rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorKind::ConfigError, "cannot write '" + path + "'");
  write_pairs_csv(out, header, rows);
}

} // namespace warpspec
