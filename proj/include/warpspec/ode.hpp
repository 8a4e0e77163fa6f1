#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <string>
#include <vector>

#include "warpspec/errors.hpp"

namespace warpspec {

/// Drift coefficient q of y'' + q(t) y' + lambda y = 0 sampled on the RK4
/// half-step lattice of [t0, t0 + length]: entry 2k is q(t_k), entry 2k+1 is
/// q(t_k + h/2). Built once, reused for every lambda probed.
class DriftTable {
public:
  template <class Q>
  DriftTable(const Q &q, double t0, double length, double step) : t0_(t0), step_(step) {
    if (!(step > 0.0) || !(length > 0.0))
      fail(ErrorKind::InvalidParameter, "ODE window and step must be positive");
    steps_ = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
    samples_.resize(2 * steps_ + 1);
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      samples_[k] = q(t0 + 0.5 * step * static_cast<double>(k));
      if (!std::isfinite(samples_[k]))
        fail(ErrorKind::DomainError, "drift coefficient is not finite at t = " +
                                         std::to_string(t0 + 0.5 * step * static_cast<double>(k)));
    }
  }

  double t0() const { return t0_; }
  double step() const { return step_; }
  std::size_t steps() const { return steps_; }
  double t_end() const { return t0_ + step_ * static_cast<double>(steps_); }
  double at(std::size_t half_index) const { return samples_[half_index]; }

private:
  double t0_;
  double step_;
  std::size_t steps_ = 0;
  std::vector<double> samples_;
};

struct OscillationVerdict {
  bool oscillatory = false;
  int sign_changes = 0;
  double t_begin = 0.0;
  double t_end = 0.0;
  /// The solution grew past 1e150 (tracked through rescaling) without reaching
  /// the required number of sign changes.
  bool overflow_guard = false;
  double log_growth = 0.0;
};

inline constexpr double overflow_guard_level = 1e150;

/// Integrates y'' + q y' + lambda y = 0 from y(t0) = 0, y'(t0) = 1 with
/// fixed-step RK4 and counts strict sign changes of y. The state is rescaled
/// whenever it leaves [1e-100, 1e100]; zeros of a linear ODE do not move under scaling.
/// With `trace`, every `trace_stride`-th step is recorded as (t, y) with y in
/// the current (rescaled) units, and integration always runs to the end.
inline OscillationVerdict probe_oscillation(const DriftTable &table, double lambda, int required_changes,
                                            std::vector<std::pair<double, double>> *trace = nullptr,
                                            std::size_t trace_stride = 10) {
  OscillationVerdict out;
  out.t_begin = table.t0();
  out.t_end = table.t_end();
  const double h = table.step();
  double y = 0.0;
  double p = 1.0;
  int last_sign = 0;
  double log_scale = 0.0;
  if (trace)
    trace->emplace_back(table.t0(), 0.0);
  for (std::size_t k = 0; k < table.steps(); ++k) {
    const double q0 = table.at(2 * k);
    const double qm = table.at(2 * k + 1);
    const double q1 = table.at(2 * k + 2);
    const double k1y = p;
    const double k1p = -q0 * p - lambda * y;
    const double y2 = y + 0.5 * h * k1y, p2 = p + 0.5 * h * k1p;
    const double k2y = p2;
    const double k2p = -qm * p2 - lambda * y2;
    const double y3 = y + 0.5 * h * k2y, p3 = p + 0.5 * h * k2p;
    const double k3y = p3;
    const double k3p = -qm * p3 - lambda * y3;
    const double y4 = y + h * k3y, p4 = p + h * k3p;
    const double k4y = p4;
    const double k4p = -q1 * p4 - lambda * y4;
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if (!std::isfinite(y) || !std::isfinite(p))
      fail(ErrorKind::DomainError, "ODE state became non-finite");

    const double mag = std::max(std::abs(y), std::abs(p));
    if (mag > 1e100 || (mag < 1e-100 && mag > 0.0)) {
      y /= mag;
      p /= mag;
      log_scale += std::log(mag);
    }
    const int s = (y > 0.0) - (y < 0.0);
    if (s != 0) {
      if (last_sign != 0 && s != last_sign)
        ++out.sign_changes;
      last_sign = s;
    }
    if (trace && (k + 1) % trace_stride == 0)
      trace->emplace_back(table.t0() + h * static_cast<double>(k + 1), y);
    if (!trace && out.sign_changes >= required_changes)
      break;
  }
  out.log_growth = log_scale + std::log(std::max(std::abs(y), std::abs(p)));
  out.oscillatory = out.sign_changes >= required_changes;
  out.overflow_guard = !out.oscillatory && out.log_growth > std::log(overflow_guard_level);
  return out;
}

} // namespace warpspec
