#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "warpspec/errors.hpp"
#include "warpspec/manifold.hpp"
#include "warpspec/ode.hpp"
#include "warpspec/quadrature.hpp"
#include "warpspec/tridiagonal.hpp"

namespace warpspec {

struct SolverConfig {
  std::vector<double> truncation_radii{50.0, 100.0, 200.0, 400.0};
  int mesh_points = 64; ///< per unit length
  double osc_window = 800.0;
  int n_osc = 5;
  double bisect_tol = 1e-4;
  double ode_step = 1e-2;

  void validate() const {
    if (truncation_radii.empty())
      fail(ErrorKind::InvalidParameter, "truncation_radii must not be empty");
    for (std::size_t i = 0; i < truncation_radii.size(); ++i) {
      if (!(truncation_radii[i] > 0.0) || !std::isfinite(truncation_radii[i]))
        fail(ErrorKind::InvalidParameter, "truncation radii must be positive");
      if (i > 0 && !(truncation_radii[i] > truncation_radii[i - 1]))
        fail(ErrorKind::InvalidParameter, "truncation radii must be increasing");
    }
    if (mesh_points <= 0 || n_osc <= 0)
      fail(ErrorKind::InvalidParameter, "mesh_points and n_osc must be positive");
    if (!(osc_window > 0.0) || !(bisect_tol > 0.0) || !(ode_step > 0.0))
      fail(ErrorKind::InvalidParameter, "osc_window, bisect_tol and ode_step must be positive");
    if (ode_step >= osc_window)
      fail(ErrorKind::InvalidParameter, "ode_step must be smaller than osc_window");
  }
};

enum class SpectrumMethod { FiniteDifference, Oscillation, TestFunction, Barrier };

inline const char *to_string(SpectrumMethod m) {
  switch (m) {
  case SpectrumMethod::FiniteDifference: return "finite-difference";
  case SpectrumMethod::Oscillation: return "oscillation";
  case SpectrumMethod::TestFunction: return "test-function";
  default: return "barrier";
  }
}

struct SpectrumEstimate {
  double lambda1_lower = 0.0;
  double lambda1_upper = 0.0;
  SpectrumMethod method = SpectrumMethod::FiniteDifference;
  double r0 = 0.0;
  std::map<std::string, double> diagnostics;

  double value() const { return 0.5 * (lambda1_lower + lambda1_upper); }
};

namespace spectrum_detail {

inline constexpr double lambda_ceiling = 1e6;

inline void check_inner_radius(const ManifoldSpec &spec, double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0))
    fail(ErrorKind::InvalidParameter, "inner radius must be positive");
  if (!(spec.warping().value(r0) > 0.0))
    fail(ErrorKind::DomainError, "warping vanishes at the inner radius");
}

/// Smallest Dirichlet eigenvalue of -(v u')' = lambda v u on [a, b].
inline double dirichlet_eigenvalue(const ManifoldSpec &spec, double a, double b, int per_unit) {
  const auto intervals = static_cast<std::size_t>(std::ceil((b - a) * per_unit - 1e-9));
  if (intervals < 3)
    fail(ErrorKind::MeshFailure, "truncated interval holds fewer than two interior nodes");
  const double h = (b - a) / static_cast<double>(intervals);
  const std::size_t nodes = intervals - 1;
  std::vector<double> log_node(nodes), log_mid(intervals);
  for (std::size_t i = 0; i < intervals; ++i)
    log_mid[i] = spec.log_density_unchecked(a + h * (static_cast<double>(i) + 0.5));
  for (std::size_t i = 0; i < nodes; ++i)
    log_node[i] = spec.log_density_unchecked(a + h * static_cast<double>(i + 1));

  // D^{-1/2} A D^{-1/2} with D = diag(v_i): only log-ratios of v enter.
  SymmetricTridiagonal t;
  t.diag.resize(nodes);
  t.off.resize(nodes - 1);
  const double inv_h2 = 1.0 / (h * h);
  for (std::size_t i = 0; i < nodes; ++i) {
    t.diag[i] = (std::exp(log_mid[i] - log_node[i]) + std::exp(log_mid[i + 1] - log_node[i])) * inv_h2;
    if (i + 1 < nodes)
      t.off[i] = -std::exp(log_mid[i + 1] - 0.5 * (log_node[i] + log_node[i + 1])) * inv_h2;
  }
  for (double d : t.diag)
    if (!std::isfinite(d))
      fail(ErrorKind::MeshFailure, "density ratio overflows on the mesh; refine mesh_points");
  return t.eigenvalue(0);
}

inline DriftTable drift_table(const ManifoldSpec &spec, double t0, const SolverConfig &cfg) {
  return DriftTable([&](double t) { return spec.log_density_slope_unchecked(t); }, t0, cfg.osc_window,
                    cfg.ode_step);
}

} // namespace spectrum_detail

/// Dirichlet eigenvalue of the exterior of B_{r0}, bracketed from the
/// truncated problems on [r0, R] for every truncation radius R.
inline SpectrumEstimate lambda1_exterior_fd(const ManifoldSpec &spec, double r0, const SolverConfig &cfg = {}) {
  cfg.validate();
  spectrum_detail::check_inner_radius(spec, r0);
  std::vector<std::pair<double, double>> ladder;
  for (double R : cfg.truncation_radii)
    if (R > r0)
      ladder.emplace_back(R, spectrum_detail::dirichlet_eigenvalue(spec, r0, R, cfg.mesh_points));
  if (ladder.empty())
    fail(ErrorKind::InvalidParameter, "no truncation radius exceeds r0");
  for (std::size_t i = 1; i < ladder.size(); ++i)
    if (ladder[i].second > ladder[i - 1].second + 10.0 * cfg.bisect_tol)
      fail(ErrorKind::MeshFailure, "truncated eigenvalue rises from R = " + std::to_string(ladder[i - 1].first) +
                                       " to R = " + std::to_string(ladder[i].first) + "; mesh too coarse");

  SpectrumEstimate out;
  out.method = SpectrumMethod::FiniteDifference;
  out.r0 = r0;
  const double last = ladder.back().second;
  const double gap = ladder.size() > 1 ? std::max(0.0, ladder[ladder.size() - 2].second - last) : 0.0;
  out.lambda1_upper = std::max(0.0, last);
  out.lambda1_lower = std::max(0.0, last - gap);
  out.diagnostics["mesh_h"] = 1.0 / cfg.mesh_points;
  out.diagnostics["truncation_radius"] = ladder.back().first;
  out.diagnostics["richardson_gap"] = gap;
  for (const auto &[R, lam] : ladder)
    out.diagnostics["lambda_R" + std::to_string(static_cast<long>(std::lround(R)))] = lam;
  return out;
}

/// Sign-change verdict for y'' + (v'/v) y' + lambda y = 0 on [t0, t0 + L].
inline OscillationVerdict oscillation_probe(const ManifoldSpec &spec, double t0, double lambda,
                                            const SolverConfig &cfg = {},
                                            std::vector<std::pair<double, double>> *trace = nullptr) {
  cfg.validate();
  spectrum_detail::check_inner_radius(spec, t0);
  if (!std::isfinite(lambda))
    fail(ErrorKind::InvalidParameter, "lambda must be finite");
  return probe_oscillation(spectrum_detail::drift_table(spec, t0, cfg), lambda, cfg.n_osc, trace);
}

/// Infimum of the oscillatory lambda by bisection on the sign-change verdict.
inline SpectrumEstimate oscillation_threshold(const ManifoldSpec &spec, double t0, const SolverConfig &cfg = {}) {
  cfg.validate();
  spectrum_detail::check_inner_radius(spec, t0);
  const DriftTable table = spectrum_detail::drift_table(spec, t0, cfg);
  auto oscillates = [&](double lam) { return probe_oscillation(table, lam, cfg.n_osc).oscillatory; };

  double hi = 1.0;
  while (!oscillates(hi)) {
    hi *= 2.0;
    if (hi > spectrum_detail::lambda_ceiling)
      fail(ErrorKind::NoOscillationFound, "no oscillation on [" + std::to_string(t0) + ", " +
                                              std::to_string(table.t_end()) + "] up to lambda = 1e6");
  }
  double lo = hi == 1.0 ? 0.0 : 0.5 * hi;
  while (hi - lo > cfg.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    (oscillates(mid) ? hi : lo) = mid;
  }
  const double star = 0.5 * (lo + hi);
  const OscillationVerdict at_hi = probe_oscillation(table, hi, cfg.n_osc);

  SpectrumEstimate out;
  out.method = SpectrumMethod::Oscillation;
  out.r0 = t0;
  out.lambda1_lower = std::max(0.0, star - cfg.bisect_tol);
  out.lambda1_upper = std::max(out.lambda1_lower, star + cfg.bisect_tol);
  out.diagnostics["lambda_star"] = star;
  out.diagnostics["sign_changes"] = at_hi.sign_changes;
  out.diagnostics["window_begin"] = table.t0();
  out.diagnostics["window_end"] = table.t_end();
  const double wave = cfg.n_osc * std::numbers::pi / cfg.osc_window;
  out.diagnostics["window_bias"] = wave * wave;
  return out;
}

/// sup over r0 in {1, 2, 4, ..., 64} of the exterior oscillation thresholds.
inline SpectrumEstimate ess_spectrum_bottom(const ManifoldSpec &spec, const SolverConfig &cfg = {}) {
  SpectrumEstimate best;
  bool have = false;
  std::map<std::string, double> per_radius;
  for (double t0 = 1.0; t0 <= 64.0; t0 *= 2.0) {
    SpectrumEstimate e = oscillation_threshold(spec, t0, cfg);
    per_radius["lambda_star_t0_" + std::to_string(static_cast<int>(t0))] = e.diagnostics.at("lambda_star");
    if (!have || e.value() > best.value()) {
      best = std::move(e);
      have = true;
    }
  }
  best.diagnostics.insert(per_radius.begin(), per_radius.end());
  best.diagnostics["argmax_t0"] = best.r0;
  return best;
}

struct BarrierAnalysis {
  double value = 0.0;   ///< grid infimum of -Delta_f u / u
  double argmin = 0.0;  ///< radius where it is attained
  bool tail_monotone = false; ///< quotient nondecreasing over the last tenth of the grid
};

/// -Delta_f u / u for u = e^{beta r} sampled at 100 points per unit on [r0, r0 + 1000].
inline BarrierAnalysis barrier_analysis(const ManifoldSpec &spec, double r0, double beta) {
  if (!(r0 > 0.0) || !std::isfinite(beta))
    fail(ErrorKind::InvalidParameter, "barrier needs r0 > 0 and finite beta");
  constexpr std::size_t samples = 100000;
  constexpr double span = 1000.0;
  BarrierAnalysis out;
  out.value = std::numeric_limits<double>::infinity();
  out.tail_monotone = true;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= samples; ++i) {
    const double r = r0 + span * static_cast<double>(i) / samples;
    const double q = -beta * beta - beta * log_derivative_sphere(spec, r);
    if (q < out.value) {
      out.value = q;
      out.argmin = r;
    }
    if (i >= samples - samples / 10) {
      if (q < prev - 1e-12 * std::max(1.0, std::abs(prev)))
        out.tail_monotone = false;
      prev = q;
    }
  }
  return out;
}

inline double barrier_lower_bound(const ManifoldSpec &spec, double r0, double beta) {
  return barrier_analysis(spec, r0, beta).value;
}

/// Rayleigh quotient of u = e^{h_j} chi_r on M \ B_{omega_r}, with
/// h_j = alpha rho (rho <= j), 2 alpha j - alpha rho (rho > j), and chi_r
/// ramping up on [omega_r, omega_r + delta] and down on [r, r + delta].
inline double test_function_bound(const ManifoldSpec &spec, double omega_r, double alpha, double j, double r,
                                  double delta, const QuadratureConfig &q = {}) {
  if (!(omega_r >= 0.0) || !(delta > 0.0) || !(alpha >= 0.0))
    fail(ErrorKind::InvalidParameter, "test function needs omega_r >= 0, delta > 0, alpha >= 0");
  if (!(omega_r + delta <= r) || !(j > omega_r) || !std::isfinite(r) || !std::isfinite(j))
    fail(ErrorKind::InvalidParameter, "test function needs omega_r + delta <= r and j > omega_r");

  std::vector<double> cuts{omega_r, omega_r + delta, j, r, r + delta};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const std::vector<double> bps = spec.breakpoints();
  const double lo_end = omega_r, hi_end = r + delta;

  double log_num = -std::numeric_limits<double>::infinity();
  double log_den = log_num;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    if (a < lo_end || b > hi_end)
      continue;
    // One-sided branches fixed by the segment midpoint.
    const double mid = 0.5 * (a + b);
    const double dh = mid <= j ? alpha : -alpha;
    const double dchi = mid < omega_r + delta ? 1.0 / delta : (mid > r ? -1.0 / delta : 0.0);
    auto h = [&](double t) { return t <= j ? alpha * t : 2.0 * alpha * j - alpha * t; };
    auto chi = [&](double t) {
      if (mid < omega_r + delta)
        return (t - omega_r) / delta;
      if (mid > r)
        return 1.0 - (t - r) / delta;
      return 1.0;
    };
    auto log_u2v = [&](double t) {
      return 2.0 * (h(t) + std::log(std::abs(chi(t)))) + spec.log_density_unchecked(t);
    };
    auto log_du2v = [&](double t) {
      return 2.0 * (h(t) + std::log(std::abs(dh * chi(t) + dchi))) + spec.log_density_unchecked(t);
    };
    log_den = log_add_exp(log_den, log_integrate(log_u2v, a, b, bps, q));
    log_num = log_add_exp(log_num, log_integrate(log_du2v, a, b, bps, q));
  }
  if (log_den == -std::numeric_limits<double>::infinity())
    fail(ErrorKind::QuadratureFailure, "test function has zero weighted norm");
  return std::exp(log_num - log_den);
}

} // namespace warpspec
