#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "warpspec/errors.hpp"
#include "warpspec/profile.hpp"

namespace warpspec {

/// (n-1)-dimensional volume of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_volume(int n) {
  if (n < 1)
    fail(ErrorKind::InvalidParameter, "dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Rotationally symmetric weighted manifold (R^n, dr^2 + g(r)^2 dtheta^2, e^{-f} dsigma).
class ManifoldSpec {
public:
  ManifoldSpec(int n, RadialProfile warping, RadialProfile weight, std::string label = {})
      : n_(n), warping_(std::move(warping)), weight_(std::move(weight)), label_(std::move(label)) {
    if (n_ < 2)
      fail(ErrorKind::InvalidParameter, "dimension n must be >= 2");
    const Jet at0 = warping_.jet(0.0);
    if (std::abs(at0.value) > 1e-10 || std::abs(at0.d1 - 1.0) > 1e-10)
      fail(ErrorKind::InvalidParameter, "warping must satisfy g(0) = 0 and g'(0) = 1");
    check_positive_warping();
    omega_ = unit_sphere_volume(n_);
  }

  int n() const { return n_; }
  const RadialProfile &warping() const { return warping_; }
  const RadialProfile &weight() const { return weight_; }
  const std::string &label() const { return label_; }
  double omega() const { return omega_; }

  /// Union of the breakpoints of g and f, sorted and deduplicated.
  std::vector<double> breakpoints() const {
    std::vector<double> out = warping_.breakpoints();
    for (double b : weight_.breakpoints())
      out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// log v(r); -inf at r = 0. No domain checks: internal integrand use.
  double log_density_unchecked(double r) const {
    if (r == 0.0)
      return -std::numeric_limits<double>::infinity();
    return std::log(omega_) + (n_ - 1) * warping_.log_value(r) - weight_.value(r);
  }

  /// d/dr log v(r), no domain checks.
  double log_density_slope_unchecked(double r) const {
    return (n_ - 1) * warping_.log_derivative(r) - weight_.derivative(r);
  }

private:
  void check_positive_warping() const {
    std::vector<double> bps = warping_.breakpoints();
    const double far = std::max(10.0, bps.empty() ? 0.0 : 2.0 * bps.back());
    auto check = [&](double r) {
      if (!(warping_.value(r) > 0.0))
        fail(ErrorKind::InvalidParameter, "warping must be positive for r > 0 (fails at r = " +
                                              std::to_string(r) + ")");
    };
    for (int i = 0; i <= 600; ++i)
      check(1e-6 * std::pow(far / 1e-6, i / 600.0));
    double lo = 0.0;
    for (double b : bps) {
      for (int i = 1; i <= 200; ++i)
        check(lo + (b - lo) * i / 200.0);
      lo = b;
    }
  }

  int n_;
  RadialProfile warping_;
  RadialProfile weight_;
  std::string label_;
  double omega_ = 0.0;
};

struct PaperEquality {
  double alpha = 1.0;
  double r0 = 1.0;
};
struct Euclidean {};
struct GaussianSoliton {};
struct HyperbolicLike {
  double k = 1.0;
};

using ModelFamily = std::variant<PaperEquality, Euclidean, GaussianSoliton, HyperbolicLike>;

/// Warping profile equal to `tail` on [r0, inf) with a cubic Hermite cap on
/// [0, r0] that matches g(0) = 0, g'(0) = 1 and the tail's value and slope at r0.
inline RadialProfile capped_warping(const Formula &tail, double r0) {
  if (!(r0 > 0.0))
    fail(ErrorKind::InvalidParameter, "cap radius r0 must be positive");
  if (std::holds_alternative<CubicHermite>(tail))
    fail(ErrorKind::InvalidParameter, "tail of a capped warping cannot be a Hermite piece");
  const Jet at = detail::evaluate(tail, r0, r0, std::numeric_limits<double>::infinity());
  return RadialProfile({Piece{0.0, CubicHermite{0.0, 1.0, at.value, at.d1}}, Piece{r0, tail}});
}

inline ManifoldSpec make_model(const ModelFamily &family, int n) {
  if (n < 2)
    fail(ErrorKind::InvalidParameter, "dimension n must be >= 2");
  return std::visit(
      detail::overloaded{
          [&](const PaperEquality &p) {
            if (!(p.alpha > 0.0) || !(p.r0 > 0.0))
              fail(ErrorKind::InvalidParameter, "paper-equality needs alpha > 0 and r0 > 0");
            const double rate = -p.alpha / (2.0 * (n - 1));
            return ManifoldSpec(n, capped_warping(Exponential{1.0, rate}, p.r0),
                                RadialProfile::single(Linear{0.5 * p.alpha, 0.0}),
                                "paper-equality(alpha=" + std::to_string(p.alpha) +
                                    ",r0=" + std::to_string(p.r0) + ")");
          },
          [&](const Euclidean &) {
            return ManifoldSpec(n, RadialProfile::single(Linear{1.0, 0.0}), RadialProfile{}, "euclidean");
          },
          [&](const GaussianSoliton &) {
            return ManifoldSpec(n, RadialProfile::single(Linear{1.0, 0.0}),
                                RadialProfile::single(Power{0.25, 2.0}), "gaussian-soliton");
          },
          [&](const HyperbolicLike &h) {
            if (!(h.k > 0.0))
              fail(ErrorKind::InvalidParameter, "hyperbolic-like needs k > 0");
            return ManifoldSpec(n, RadialProfile::single(SinhLike{1.0 / h.k, h.k}), RadialProfile{},
                                "hyperbolic(k=" + std::to_string(h.k) + ")");
          },
      },
      family);
}

/// Weighted area of the geodesic sphere: v(r) = omega_n g(r)^{n-1} e^{-f(r)}.
inline double sphere_density(const ManifoldSpec &spec, double r) {
  if (!(r > 0.0))
    fail(ErrorKind::DomainError, "sphere_density needs r > 0");
  const double v = spec.omega() * std::pow(spec.warping().value(r), spec.n() - 1) *
                   std::exp(-spec.weight().value(r));
  if (!std::isfinite(v) || v <= 0.0)
    fail(ErrorKind::NotRepresentable,
         "v(r) at r = " + std::to_string(r) + " is outside double range; use log_sphere_density");
  return v;
}

inline double log_sphere_density(const ManifoldSpec &spec, double r) {
  if (!(r > 0.0))
    fail(ErrorKind::DomainError, "log_sphere_density needs r > 0");
  return spec.log_density_unchecked(r);
}

/// d/dr log v(r) = (n-1) g'/g - f'.
inline double log_derivative_sphere(const ManifoldSpec &spec, double r) {
  if (!(r > 0.0))
    fail(ErrorKind::DomainError, "log_derivative_sphere needs r > 0");
  if (!(spec.warping().log_value(r) > -std::numeric_limits<double>::infinity()))
    fail(ErrorKind::DomainError, "warping vanishes at r = " + std::to_string(r));
  return spec.log_density_slope_unchecked(r);
}

/// Ric_f(d_r, d_r) = -(n-1) g''/g + f''.
inline double radial_bakry_emery(const ManifoldSpec &spec, double r) {
  if (!(r > 0.0))
    fail(ErrorKind::DomainError, "radial_bakry_emery needs r > 0");
  return -(spec.n() - 1) * spec.warping().second_ratio(r) + spec.weight().second_derivative(r);
}

} // namespace warpspec
