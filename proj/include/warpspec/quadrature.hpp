#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "warpspec/errors.hpp"

namespace warpspec {

struct QuadratureConfig {
  double rel_tol = 1e-8;
  /// Absolute floor, measured on the chunk-normalized integrand (max ~ 1 per chunk).
  double abs_tol = 1e-12;
  int max_depth = 40;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      fail(ErrorKind::InvalidParameter, "quadrature tolerances must be positive");
    if (max_depth < 10)
      fail(ErrorKind::InvalidParameter, "quadrature max_depth must be >= 10");
  }
};

/// log(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity())
    return b;
  if (b == -std::numeric_limits<double>::infinity())
    return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

namespace detail {

inline constexpr double max_chunk_length = 1.0;
inline constexpr int min_simpson_depth = 3;

template <class F> struct SimpsonRecursion {
  const F &f;
  double floor;
  double noise; ///< relative rounding level of f, from the magnitude of log f
  int max_depth;

  double refine(double a, double fa, double m, double fm, double b, double fb, double whole, double eps,
                int depth) const {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
      fail(ErrorKind::QuadratureFailure, "integrand is not finite near t = " + std::to_string(lm));
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    const double target = std::max({eps, floor * (b - a), noise * std::abs(left + right)});
    if (depth >= min_simpson_depth && std::abs(delta) <= 15.0 * target)
      return left + right + delta / 15.0;
    if (!(lm > a && rm < b && lm < m && rm > m))
      return left + right;
    if (depth >= max_depth)
      fail(ErrorKind::QuadratureFailure, "adaptive Simpson exhausted max_depth on [" + std::to_string(a) +
                                             ", " + std::to_string(b) + "]");
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * eps, depth + 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * eps, depth + 1);
  }
};

/// log of the integral of exp(log_f) over one smooth chunk.
template <class LogF> double log_integrate_chunk(const LogF &log_f, double a, double b, const QuadratureConfig &q) {
  double ref = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 4; ++i) {
    const double l = log_f(a + (b - a) * i / 4.0);
    ref = std::isnan(l) ? l : std::max(ref, l);
    if (std::isnan(ref))
      break;
  }
  if (std::isnan(ref))
    fail(ErrorKind::QuadratureFailure, "integrand is NaN on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  if (ref == -std::numeric_limits<double>::infinity())
    return ref;
  if (!std::isfinite(ref))
    fail(ErrorKind::QuadratureFailure, "integrand overflows on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  auto scaled = [&](double t) { return std::exp(log_f(t) - ref); };
  const double m = 0.5 * (a + b);
  const double fa = scaled(a), fm = scaled(m), fb = scaled(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(ref));
  const SimpsonRecursion<decltype(scaled)> rec{scaled, q.abs_tol, noise, q.max_depth};
  // A coarse first pass fixes the relative target for this chunk.
  const double coarse = std::max(whole, (b - a) * 1e-300);
  double value = rec.refine(a, fa, m, fm, b, fb, whole, q.rel_tol * coarse, 0);
  if (value > 0.0 && value < 0.5 * coarse)
    value = rec.refine(a, fa, m, fm, b, fb, whole, q.rel_tol * value, 0);
  if (!(value >= 0.0) || !std::isfinite(value))
    fail(ErrorKind::QuadratureFailure, "non-finite quadrature result");
  return value == 0.0 ? -std::numeric_limits<double>::infinity() : ref + std::log(value);
}

} // namespace detail

/// log of the integral over [a, b] of exp(log_f(t)).
///
/// The range is cut at every breakpoint inside (a, b) and then into chunks of
/// length at most 1; each chunk is normalized by its own peak before adaptive
/// Simpson runs on it, so the result stays representable far beyond double range.
template <class LogF>
double log_integrate(const LogF &log_f, double a, double b, std::span<const double> breakpoints,
                     const QuadratureConfig &q) {
  q.validate();
  if (!(b >= a))
    fail(ErrorKind::DomainError, "integration bounds out of order");
  double acc = -std::numeric_limits<double>::infinity();
  if (a == b)
    return acc;
  std::vector<double> cuts{a};
  for (double bp : breakpoints)
    if (bp > a && bp < b)
      cuts.push_back(bp);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const auto chunks = static_cast<long>(std::ceil((hi - lo) / detail::max_chunk_length));
    for (long c = 0; c < chunks; ++c) {
      const double ca = lo + (hi - lo) * static_cast<double>(c) / static_cast<double>(chunks);
      const double cb = c + 1 == chunks ? hi : lo + (hi - lo) * static_cast<double>(c + 1) / static_cast<double>(chunks);
      acc = log_add_exp(acc, detail::log_integrate_chunk(log_f, ca, cb, q));
    }
  }
  return acc;
}

} // namespace warpspec
