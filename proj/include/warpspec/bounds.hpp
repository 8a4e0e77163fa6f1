#pragma once

#include <cmath>
#include <utility>
#include <variant>

#include "warpspec/errors.hpp"
#include "warpspec/manifold.hpp"
#include "warpspec/spectrum.hpp"

namespace warpspec {

/// (a+b)^2 >= a^2/(1+m) - b^2/m for m > 0 or m < -1. Returns (lhs, rhs).
inline std::pair<double, double> lemma_split(double a, double b, double m) {
  if (!std::isfinite(m) || (m >= -1.0 && m <= 0.0))
    fail(ErrorKind::InvalidParameter, "lemma_split needs m > 0 or m < -1");
  return {(a + b) * (a + b), a * a / (1.0 + m) - b * b / m};
}

struct HypersurfaceData {
  int n = 2;
  double m = 1.0;
  double mu = 0.0;
  double ric_inf = 0.0;
  double grad_inf_sq = 0.0;
  double ric_nm_inf = 0.0; ///< inf of Ric_f - df(x)df/(nm), supplied independently

  void validate() const {
    if (n < 2)
      fail(ErrorKind::InvalidParameter, "hypersurface dimension n must be >= 2");
    if (!(m > 0.0) || !std::isfinite(m))
      fail(ErrorKind::InvalidParameter, "splitting parameter m must be positive");
    if (!(grad_inf_sq >= 0.0))
      fail(ErrorKind::InvalidParameter, "grad_inf_sq must be nonnegative");
    if (!std::isfinite(mu) || !std::isfinite(ric_inf) || !std::isfinite(grad_inf_sq) || !std::isfinite(ric_nm_inf))
      fail(ErrorKind::InvalidParameter, "hypersurface data must be finite");
  }
};

struct CurvatureBounds {
  double hf_sq_lower = 0.0;
  double hf_sq_upper = 0.0;
  bool consistent = true;
  bool forced_f_minimal = false;
};

/// Bounds on H_f^2 from the growth exponent mu and the curvature infima.
/// Both bounds use mu^2/4 only through `spectral_cap`, which defaults to it.
inline CurvatureBounds mean_curvature_bounds(const HypersurfaceData &d, double spectral_cap) {
  d.validate();
  const double nm = d.n * d.m;
  const double n1m = d.n * (1.0 + d.m);
  CurvatureBounds out;
  out.hf_sq_lower = nm * (-spectral_cap + d.ric_inf + d.grad_inf_sq / n1m);
  out.hf_sq_upper = n1m * (spectral_cap - d.ric_nm_inf);
  out.forced_f_minimal = d.ric_nm_inf >= spectral_cap;
  out.consistent = out.hf_sq_lower <= out.hf_sq_upper;
  return out;
}

inline CurvatureBounds mean_curvature_bounds(const HypersurfaceData &d) {
  return mean_curvature_bounds(d, 0.25 * d.mu * d.mu);
}

struct InfiniteVolume {
  double mu_v;
};
struct FiniteVolume {
  double mu_w;
};
struct LogDerivative {
  double alpha;
};
struct Polynomial {};
struct ExponentialRate {
  double alpha;
};

using GrowthRegime = std::variant<InfiniteVolume, FiniteVolume, LogDerivative, Polynomial, ExponentialRate>;

inline double regime_exponent(const GrowthRegime &regime) {
  return std::visit(detail::overloaded{
                        [](const InfiniteVolume &r) { return r.mu_v; },
                        [](const FiniteVolume &r) { return r.mu_w; },
                        [](const LogDerivative &r) { return r.alpha; },
                        [](const Polynomial &) { return 0.0; },
                        [](const ExponentialRate &r) { return r.alpha; },
                    },
                    regime);
}

inline const char *regime_name(const GrowthRegime &regime) {
  constexpr const char *names[] = {"infinite-volume", "finite-volume", "log-derivative", "polynomial",
                                   "exponential-rate"};
  return names[regime.index()];
}

/// True when no complete noncompact f-minimal hypersurface of finite index
/// can exist under Ric_f >= k: the regime's exponent is below 2 sqrt(k).
inline bool nonexistence_verdict(double k, const GrowthRegime &regime) {
  if (!(k > 0.0) || !std::isfinite(k))
    fail(ErrorKind::InvalidParameter, "nonexistence_verdict needs k > 0");
  const double e = regime_exponent(regime);
  if (std::isnan(e))
    fail(ErrorKind::InvalidParameter, "regime exponent is NaN");
  return e < 2.0 * std::sqrt(k);
}

struct SpectrumCrossCheck {
  CurvatureBounds from_mu;
  CurvatureBounds from_spectrum;
  double mu_cap = 0.0;       ///< mu^2/4
  double spectrum_cap = 0.0; ///< computed bottom of the essential spectrum
  SpectrumEstimate spectrum;
  bool tightened = false;
};

inline constexpr double cross_check_tolerance = 5e-3;

/// Recomputes the bounds with mu^2/4 replaced by the computed spectrum bottom of `spec`.
inline SpectrumCrossCheck cross_check_with_spectrum(const ManifoldSpec &spec, const HypersurfaceData &d,
                                                    const SolverConfig &cfg = {}) {
  d.validate();
  if (spec.n() != d.n)
    fail(ErrorKind::InvalidParameter, "manifold and hypersurface data disagree on n");
  SpectrumCrossCheck out;
  out.spectrum = ess_spectrum_bottom(spec, cfg);
  out.mu_cap = 0.25 * d.mu * d.mu;
  out.spectrum_cap = out.spectrum.value();
  out.from_mu = mean_curvature_bounds(d, out.mu_cap);
  out.from_spectrum = mean_curvature_bounds(d, out.spectrum_cap);
  out.tightened = out.spectrum_cap < out.mu_cap - cross_check_tolerance;
  return out;
}

} // namespace warpspec
