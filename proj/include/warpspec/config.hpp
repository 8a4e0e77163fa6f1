#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "warpspec/bounds.hpp"
#include "warpspec/errors.hpp"
#include "warpspec/manifold.hpp"
#include "warpspec/quadrature.hpp"
#include "warpspec/spectrum.hpp"

namespace warpspec {

/// One row of a piecewise table: `start kind params... [no_d2]`.
struct PieceRow {
  double start = 0.0;
  std::string kind;
  std::vector<double> params;
  bool no_d2 = false;
};

struct ManifoldSource {
  std::string family = "paper-equality"; ///< or "custom" when tables are given
  int n = 3;
  double alpha = 1.0;
  double r0 = 1.0;
  double k = 1.0;
  std::string label;
  std::vector<PieceRow> g_rows;
  std::vector<PieceRow> f_rows;
};

struct OutputPaths {
  std::string json;
  std::string csv;
  std::string ode_trace;
};

struct RunParams {
  double r = 1.0;
  double delta = 1.0;
  double r_max = 1000.0;
  double t0 = 1.0;
  std::optional<double> lambda;
  std::optional<double> beta;
};

struct NonexistenceQuery {
  double k = 1.0;
  std::string regime = "polynomial";
  double exponent = 0.0;
};

struct RunConfig {
  std::string command;
  ManifoldSource manifold;
  QuadratureConfig quadrature;
  SolverConfig solver;
  RunParams params;
  std::optional<HypersurfaceData> hypersurface;
  std::optional<NonexistenceQuery> nonexistence;
  OutputPaths output;
};

namespace config_detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<std::string> split_ws(const std::string &s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;)
    out.push_back(tok);
  return out;
}

inline double to_double(const std::string &s, const std::string &key) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    fail(ErrorKind::ConfigError, "key '" + key + "': '" + s + "' is not a number");
  return v;
}

inline int to_int(const std::string &s, const std::string &key) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    fail(ErrorKind::ConfigError, "key '" + key + "': '" + s + "' is not an integer");
  return v;
}

inline PieceRow parse_row(const std::string &value, const std::string &key) {
  std::vector<std::string> tok = split_ws(value);
  PieceRow row;
  if (!tok.empty() && tok.back() == "no_d2") {
    row.no_d2 = true;
    tok.pop_back();
  }
  if (tok.size() < 2)
    fail(ErrorKind::ConfigError, "key '" + key + "' needs 'start kind params...'");
  row.start = to_double(tok[0], key);
  row.kind = tok[1];
  for (std::size_t i = 2; i < tok.size(); ++i)
    row.params.push_back(to_double(tok[i], key));
  return row;
}

inline Formula formula_from_row(const PieceRow &row) {
  auto need = [&](std::size_t k) {
    if (row.params.size() != k)
      fail(ErrorKind::ConfigError, "piece kind '" + row.kind + "' takes " + std::to_string(k) + " parameters");
  };
  const auto &p = row.params;
  if (row.kind == "linear") {
    need(2);
    return Linear{p[0], p[1]};
  }
  if (row.kind == "exp") {
    need(2);
    return Exponential{p[0], p[1]};
  }
  if (row.kind == "power") {
    need(2);
    return Power{p[0], p[1]};
  }
  if (row.kind == "hermite") {
    need(4);
    return CubicHermite{p[0], p[1], p[2], p[3]};
  }
  if (row.kind == "sinh") {
    need(2);
    return SinhLike{p[0], p[1]};
  }
  fail(ErrorKind::ConfigError, "unknown piece kind '" + row.kind + "'");
}

inline RadialProfile profile_from_rows(const std::vector<PieceRow> &rows) {
  std::vector<Piece> pieces;
  for (const PieceRow &row : rows)
    pieces.push_back(Piece{row.start, formula_from_row(row), !row.no_d2});
  std::sort(pieces.begin(), pieces.end(), [](const Piece &a, const Piece &b) { return a.start < b.start; });
  try {
    return RadialProfile(std::move(pieces));
  } catch (const Error &e) {
    fail(ErrorKind::ConfigError, std::string("piecewise table rejected: ") + e.what());
  }
}

} // namespace config_detail

inline ModelFamily family_from_source(const ManifoldSource &m) {
  if (m.family == "paper-equality")
    return PaperEquality{m.alpha, m.r0};
  if (m.family == "euclidean")
    return Euclidean{};
  if (m.family == "gaussian-soliton")
    return GaussianSoliton{};
  if (m.family == "hyperbolic")
    return HyperbolicLike{m.k};
  fail(ErrorKind::ConfigError, "unknown family '" + m.family + "'");
}

inline ManifoldSpec build_manifold(const ManifoldSource &m) {
  if (m.family != "custom")
    return make_model(family_from_source(m), m.n);
  if (m.g_rows.empty())
    fail(ErrorKind::ConfigError, "custom family needs at least one g.piece row");
  RadialProfile g = config_detail::profile_from_rows(m.g_rows);
  RadialProfile f = m.f_rows.empty() ? RadialProfile{} : config_detail::profile_from_rows(m.f_rows);
  return ManifoldSpec(m.n, std::move(g), std::move(f), m.label.empty() ? "custom" : m.label);
}

/// Parses the key = value config format. Lines starting with '#' and text
/// after a '#' are ignored; `g.piece` and `f.piece` may repeat.
inline RunConfig parse_config(std::istream &in) {
  using namespace config_detail;
  RunConfig cfg;
  std::map<std::string, std::string> seen;
  HypersurfaceData hs;
  bool has_hs = false;
  NonexistenceQuery nx;
  bool has_nx = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": empty key or value");
    if (key != "g.piece" && key != "f.piece" && !seen.emplace(key, value).second)
      fail(ErrorKind::ConfigError, "duplicate key '" + key + "'");

    auto &m = cfg.manifold;
    if (key == "command") cfg.command = value;
    else if (key == "family") m.family = value;
    else if (key == "label") m.label = value;
    else if (key == "n") m.n = to_int(value, key);
    else if (key == "alpha") m.alpha = to_double(value, key);
    else if (key == "r0") m.r0 = to_double(value, key);
    else if (key == "k") m.k = to_double(value, key);
    else if (key == "g.piece") m.g_rows.push_back(parse_row(value, key));
    else if (key == "f.piece") m.f_rows.push_back(parse_row(value, key));
    else if (key == "quadrature.rel_tol") cfg.quadrature.rel_tol = to_double(value, key);
    else if (key == "quadrature.abs_tol") cfg.quadrature.abs_tol = to_double(value, key);
    else if (key == "quadrature.max_depth") cfg.quadrature.max_depth = to_int(value, key);
    else if (key == "solver.truncation_radii") {
      cfg.solver.truncation_radii.clear();
      std::string list = value;
      std::replace(list.begin(), list.end(), ',', ' ');
      for (const std::string &tok : split_ws(list))
        cfg.solver.truncation_radii.push_back(to_double(tok, key));
    }
    else if (key == "solver.mesh_points") cfg.solver.mesh_points = to_int(value, key);
    else if (key == "solver.osc_window") cfg.solver.osc_window = to_double(value, key);
    else if (key == "solver.n_osc") cfg.solver.n_osc = to_int(value, key);
    else if (key == "solver.bisect_tol") cfg.solver.bisect_tol = to_double(value, key);
    else if (key == "solver.ode_step") cfg.solver.ode_step = to_double(value, key);
    else if (key == "run.r") cfg.params.r = to_double(value, key);
    else if (key == "run.delta") cfg.params.delta = to_double(value, key);
    else if (key == "run.r_max") cfg.params.r_max = to_double(value, key);
    else if (key == "run.t0") cfg.params.t0 = to_double(value, key);
    else if (key == "run.lambda") cfg.params.lambda = to_double(value, key);
    else if (key == "run.beta") cfg.params.beta = to_double(value, key);
    else if (key.starts_with("hypersurface.")) {
      has_hs = true;
      const std::string field = key.substr(13);
      if (field == "n") hs.n = to_int(value, key);
      else if (field == "m") hs.m = to_double(value, key);
      else if (field == "mu") hs.mu = to_double(value, key);
      else if (field == "ric_inf") hs.ric_inf = to_double(value, key);
      else if (field == "grad_inf_sq") hs.grad_inf_sq = to_double(value, key);
      else if (field == "ric_nm_inf") hs.ric_nm_inf = to_double(value, key);
      else fail(ErrorKind::ConfigError, "unknown key '" + key + "'");
    }
    else if (key == "nonexistence.k") { has_nx = true; nx.k = to_double(value, key); }
    else if (key == "nonexistence.regime") { has_nx = true; nx.regime = value; }
    else if (key == "nonexistence.exponent") { has_nx = true; nx.exponent = to_double(value, key); }
    else if (key == "output.json") cfg.output.json = value;
    else if (key == "output.csv") cfg.output.csv = value;
    else if (key == "output.ode_trace") cfg.output.ode_trace = value;
    else fail(ErrorKind::ConfigError, "unknown key '" + key + "'");
  }
  if (!cfg.manifold.g_rows.empty() && !seen.contains("family"))
    cfg.manifold.family = "custom";
  if (!cfg.manifold.f_rows.empty() && cfg.manifold.g_rows.empty())
    fail(ErrorKind::ConfigError, "f.piece rows need g.piece rows");
  if (has_hs) {
    if (!seen.contains("hypersurface.n"))
      hs.n = cfg.manifold.n;
    cfg.hypersurface = hs;
  }
  if (has_nx)
    cfg.nonexistence = nx;
  return cfg;
}

inline RunConfig parse_config_string(const std::string &text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::ConfigError, "cannot open config file '" + path + "'");
  return parse_config(in);
}

inline GrowthRegime regime_from_query(const NonexistenceQuery &q) {
  if (q.regime == "infinite-volume") return InfiniteVolume{q.exponent};
  if (q.regime == "finite-volume") return FiniteVolume{q.exponent};
  if (q.regime == "log-derivative") return LogDerivative{q.exponent};
  if (q.regime == "polynomial") return Polynomial{};
  if (q.regime == "exponential-rate") return ExponentialRate{q.exponent};
  fail(ErrorKind::ConfigError, "unknown regime '" + q.regime + "'");
}

} // namespace warpspec
