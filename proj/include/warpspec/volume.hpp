#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "warpspec/errors.hpp"
#include "warpspec/manifold.hpp"
#include "warpspec/quadrature.hpp"

namespace warpspec {

/// Finite-sample surrogate for a liminf (value = tail-window min) or a
/// limsup (value = tail-window max) of a sequence sampled on a radial grid.
struct LiminfEstimate {
  double value = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double spread = 0.0; ///< max - min over the window
  std::vector<std::pair<double, double>> sequence; ///< (r, sampled value) over the whole grid
};
using LimsupEstimate = LiminfEstimate;

enum class VolumeKind { Finite, Infinite, Undetermined };

inline const char *to_string(VolumeKind k) {
  switch (k) {
  case VolumeKind::Finite: return "finite";
  case VolumeKind::Infinite: return "infinite";
  default: return "undetermined";
  }
}

struct TotalVolume {
  VolumeKind kind = VolumeKind::Undetermined;
  double value = std::numeric_limits<double>::quiet_NaN(); ///< set when Finite
  double certified_radius = 0.0; ///< radius where the tail verdict was reached
};

struct VolumeReport {
  std::vector<std::pair<double, double>> samples; ///< (r, Vol_f(B_r))
  TotalVolume total;
  std::optional<LiminfEstimate> mu_v;
  std::optional<LiminfEstimate> mu_w;
  std::vector<double> grid;
};

namespace volume_detail {

inline constexpr double grid_ratio = 1.1;
inline constexpr double tail_slope_eps = 1e-6;
inline constexpr int tail_run = 32;
inline constexpr double scan_limit = 1e6;

inline auto log_density(const ManifoldSpec &spec) {
  return [&spec](double t) { return spec.log_density_unchecked(t); };
}

inline double log_integral(const ManifoldSpec &spec, double a, double b, const QuadratureConfig &q) {
  const std::vector<double> bps = spec.breakpoints();
  return log_integrate(log_density(spec), a, b, bps, q);
}

inline double checked_exp(double log_value, const char *what) {
  const double v = std::exp(log_value);
  if (!std::isfinite(v))
    fail(ErrorKind::NotRepresentable, std::string(what) + " exceeds double range");
  return v;
}

/// Samples in [r_max/2, r_max] of `sequence`, reduced to min/max.
inline LiminfEstimate window_estimate(std::vector<std::pair<double, double>> sequence, double r_max,
                                      bool take_max) {
  LiminfEstimate est;
  est.r_lo = 0.5 * r_max;
  est.r_hi = r_max;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto [r, s] : sequence) {
    if (r < est.r_lo * (1.0 - 1e-12))
      continue;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi))
    fail(ErrorKind::PrecisionLoss, "no finite samples in the tail window");
  est.value = take_max ? hi : lo;
  est.spread = hi - lo;
  est.sequence = std::move(sequence);
  return est;
}

} // namespace volume_detail

/// Geometric grid with ratio 1.1 ending exactly at r_max, going down to r_min.
inline std::vector<double> geometric_grid(double r_min, double r_max, double ratio = volume_detail::grid_ratio) {
  if (!(r_max > 0.0) || !(r_min > 0.0) || !(ratio > 1.0))
    fail(ErrorKind::InvalidParameter, "grid needs positive radii and ratio > 1");
  std::vector<double> grid;
  for (double r = r_max; r >= r_min * (1.0 - 1e-12); r /= ratio)
    grid.push_back(r);
  std::reverse(grid.begin(), grid.end());
  return grid;
}

inline double log_ball_volume(const ManifoldSpec &spec, double r, const QuadratureConfig &q = {}) {
  if (!(r >= 0.0))
    fail(ErrorKind::DomainError, "ball radius must be >= 0");
  return volume_detail::log_integral(spec, 0.0, r, q);
}

/// Vol_f(B_r) = integral of v over [0, r] (coarea formula).
inline double ball_volume(const ManifoldSpec &spec, double r, const QuadratureConfig &q = {}) {
  return volume_detail::checked_exp(log_ball_volume(spec, r, q), "Vol_f(B_r)");
}

inline double log_annulus_volume(const ManifoldSpec &spec, double r, double delta, const QuadratureConfig &q = {}) {
  if (!(r >= 0.0) || !(delta > 0.0))
    fail(ErrorKind::DomainError, "annulus needs r >= 0 and delta > 0");
  return volume_detail::log_integral(spec, r, r + delta, q);
}

/// Vol_f(B_{r+delta} \ B_r), integrated directly over [r, r + delta].
inline double annulus_volume(const ManifoldSpec &spec, double r, double delta, const QuadratureConfig &q = {}) {
  return volume_detail::checked_exp(log_annulus_volume(spec, r, delta, q), "annulus volume");
}

/// Ball volumes at every grid radius, accumulated interval by interval in log space.
inline std::vector<double> log_ball_volumes(const ManifoldSpec &spec, const std::vector<double> &grid,
                                            const QuadratureConfig &q = {}) {
  std::vector<double> out;
  out.reserve(grid.size());
  double acc = -std::numeric_limits<double>::infinity();
  double prev = 0.0;
  for (double r : grid) {
    acc = log_add_exp(acc, volume_detail::log_integral(spec, prev, r, q));
    out.push_back(acc);
    prev = r;
  }
  return out;
}

/// Decides whether Vol_f(M) is finite by scanning the log-derivative of v on a
/// geometric grid. A geometric tail (slope <= -1e-6 on 32 consecutive grid
/// points, remainder bound v(R)/kappa below rel_tol) gives Finite; slope
/// r * (log v)' >= -1 on the last 32 points of the scan (v decays no faster
/// than 1/r) gives Infinite.
inline TotalVolume total_volume(const ManifoldSpec &spec, const QuadratureConfig &q = {}) {
  using namespace volume_detail;
  q.validate();
  const std::vector<double> bps = spec.breakpoints();
  const double start = std::max(1.0, bps.empty() ? 0.0 : bps.back());

  std::vector<double> slopes;
  std::vector<double> radii;
  int run = 0;
  double integrated_to = 0.0;
  double log_vol = -std::numeric_limits<double>::infinity();
  for (double r = start; r <= scan_limit; r *= grid_ratio) {
    const double s = spec.log_density_slope_unchecked(r);
    radii.push_back(r);
    slopes.push_back(s);
    run = s <= -tail_slope_eps ? run + 1 : 0;
    if (run < tail_run)
      continue;
    double kappa = std::numeric_limits<double>::infinity();
    for (std::size_t i = slopes.size() - tail_run; i < slopes.size(); ++i)
      kappa = std::min(kappa, -slopes[i]);
    log_vol = log_add_exp(log_vol, log_integral(spec, integrated_to, r, q));
    integrated_to = r;
    const double log_v = spec.log_density_unchecked(r);
    if (log_v - std::log(kappa) <= std::log(q.rel_tol) + log_vol) {
      const double value = std::exp(log_vol) + std::exp(log_v - std::log(-s));
      if (!std::isfinite(value))
        return TotalVolume{VolumeKind::Undetermined, std::numeric_limits<double>::quiet_NaN(), r};
      return TotalVolume{VolumeKind::Finite, value, r};
    }
  }
  bool diverges = radii.size() >= static_cast<std::size_t>(tail_run);
  for (std::size_t i = radii.size() >= tail_run ? radii.size() - tail_run : 0; i < radii.size(); ++i)
    diverges = diverges && slopes[i] * radii[i] >= -1.0;
  return TotalVolume{diverges ? VolumeKind::Infinite : VolumeKind::Undetermined,
                     std::numeric_limits<double>::quiet_NaN(), radii.empty() ? 0.0 : radii.back()};
}

/// Surrogate for mu_v = liminf (1/r) log Vol_f(B_r).
inline LiminfEstimate mu_v(const ManifoldSpec &spec, double r_max, const QuadratureConfig &q = {}) {
  if (total_volume(spec, q).kind == VolumeKind::Finite)
    fail(ErrorKind::WrongVolumeRegime, "mu_v is defined for infinite weighted volume");
  const std::vector<double> grid = geometric_grid(std::min(1.0, 0.5 * r_max), r_max);
  const std::vector<double> logs = log_ball_volumes(spec, grid, q);
  std::vector<std::pair<double, double>> seq;
  for (std::size_t i = 0; i < grid.size(); ++i)
    seq.emplace_back(grid[i], logs[i] / grid[i]);
  return volume_detail::window_estimate(std::move(seq), r_max, false);
}

/// log(Vol_f(M) - Vol_f(B_r)) at each grid radius, integrated directly (never
/// as a difference). The improper end is closed at 1.25 r_max by
/// v(R)/|(log v)'(R)|, exact for exponential tails. Stops at the first
/// non-finite value.
inline std::vector<double> log_tail_volumes(const ManifoldSpec &spec, const std::vector<double> &grid,
                                            const QuadratureConfig &q = {}) {
  if (grid.empty())
    return {};
  const double r_end = 1.25 * grid.back();
  const double slope = spec.log_density_slope_unchecked(r_end);
  if (!(slope < 0.0))
    fail(ErrorKind::PrecisionLoss, "tail does not decay at the closing radius");
  std::vector<double> out(grid.size());
  double acc = spec.log_density_unchecked(r_end) - std::log(-slope);
  double upper = r_end;
  for (std::size_t k = grid.size(); k-- > 0;) {
    acc = log_add_exp(acc, volume_detail::log_integral(spec, grid[k], upper, q));
    out[k] = acc;
    upper = grid[k];
  }
  std::size_t keep = 0;
  while (keep < out.size() && std::isfinite(out[keep]))
    ++keep;
  out.resize(keep);
  return out;
}

/// Surrogate for mu_w = liminf -(1/r) log(Vol_f(M) - Vol_f(B_r)).
inline LiminfEstimate mu_w(const ManifoldSpec &spec, double r_max, const QuadratureConfig &q = {}) {
  if (total_volume(spec, q).kind != VolumeKind::Finite)
    fail(ErrorKind::WrongVolumeRegime, "mu_w is defined for finite weighted volume");
  const std::vector<double> grid = geometric_grid(std::min(1.0, 0.5 * r_max), r_max);
  const std::vector<double> logs = log_tail_volumes(spec, grid, q);
  std::vector<std::pair<double, double>> seq;
  for (std::size_t i = 0; i < logs.size(); ++i)
    seq.emplace_back(grid[i], -logs[i] / grid[i]);
  return volume_detail::window_estimate(std::move(seq), r_max, false);
}

/// (liminf, limsup) surrogates of mu_delta(r) = (1/r) log Vol_f(A_delta(dB_r)).
inline std::pair<LiminfEstimate, LimsupEstimate> mu_delta(const ManifoldSpec &spec, double delta, double r_max,
                                                          const QuadratureConfig &q = {}) {
  if (!(delta > 0.0))
    fail(ErrorKind::InvalidParameter, "delta must be positive");
  const std::vector<double> grid = geometric_grid(std::min(1.0, 0.5 * r_max), r_max);
  std::vector<std::pair<double, double>> seq;
  for (double r : grid) {
    const double l = log_annulus_volume(spec, r, delta, q);
    if (!std::isfinite(l))
      break;
    seq.emplace_back(r, l / r);
  }
  LiminfEstimate lower = volume_detail::window_estimate(seq, r_max, false);
  LimsupEstimate upper = volume_detail::window_estimate(std::move(seq), r_max, true);
  return {std::move(lower), std::move(upper)};
}

inline VolumeReport volume_report(const ManifoldSpec &spec, double r_max, const QuadratureConfig &q = {}) {
  VolumeReport report;
  report.grid = geometric_grid(std::min(1.0, 0.5 * r_max), r_max);
  const std::vector<double> logs = log_ball_volumes(spec, report.grid, q);
  for (std::size_t i = 0; i < logs.size(); ++i)
    report.samples.emplace_back(report.grid[i], std::exp(logs[i]));
  report.total = total_volume(spec, q);
  if (report.total.kind == VolumeKind::Finite)
    report.mu_w = mu_w(spec, r_max, q);
  else if (report.total.kind == VolumeKind::Infinite)
    report.mu_v = mu_v(spec, r_max, q);
  return report;
}

} // namespace warpspec
