#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "warpspec/errors.hpp"

namespace warpspec {

/// a * r + b
struct Linear {
  double slope = 0.0;
  double intercept = 0.0;
};

/// c * exp(beta * r)
struct Exponential {
  double scale = 1.0;
  double rate = 0.0;
};

/// c * r^p
struct Power {
  double scale = 1.0;
  double exponent = 1.0;
};

/// Cubic Hermite interpolant on the interval of the piece that holds it:
/// value p0 and slope m0 at the left end, p1 and m1 at the right end.
struct CubicHermite {
  double p0 = 0.0;
  double m0 = 0.0;
  double p1 = 0.0;
  double m1 = 0.0;
};

/// c * sinh(beta * r)
struct SinhLike {
  double scale = 1.0;
  double rate = 1.0;
};

using Formula = std::variant<Linear, Exponential, Power, CubicHermite, SinhLike>;

inline const char *formula_name(const Formula &f) {
  switch (f.index()) {
  case 0: return "linear";
  case 1: return "exp";
  case 2: return "power";
  case 3: return "hermite";
  default: return "sinh";
  }
}

struct Piece {
  double start = 0.0; ///< left end; the piece extends to the next piece's start
  Formula formula;
  bool has_second_derivative = true;
};

/// Value and the first two derivatives at a point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

namespace detail {

template <class... Ts> struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

inline Jet evaluate(const Formula &formula, double r, double lo, double hi) {
  return std::visit(
      overloaded{
          [&](const Linear &p) { return Jet{p.slope * r + p.intercept, p.slope, 0.0}; },
          [&](const Exponential &p) {
            const double e = p.scale * std::exp(p.rate * r);
            return Jet{e, p.rate * e, p.rate * p.rate * e};
          },
          [&](const Power &p) {
            const double p1 = p.exponent;
            const double p2 = p.exponent * (p.exponent - 1.0);
            return Jet{p.scale * std::pow(r, p1), p1 == 0.0 ? 0.0 : p.scale * p1 * std::pow(r, p1 - 1.0),
                       p2 == 0.0 ? 0.0 : p.scale * p2 * std::pow(r, p1 - 2.0)};
          },
          [&](const CubicHermite &p) {
            const double len = hi - lo;
            const double t = (r - lo) / len;
            const double t2 = t * t;
            const double t3 = t2 * t;
            const double v = (2 * t3 - 3 * t2 + 1) * p.p0 + (t3 - 2 * t2 + t) * len * p.m0 +
                             (-2 * t3 + 3 * t2) * p.p1 + (t3 - t2) * len * p.m1;
            const double d1 = ((6 * t2 - 6 * t) * p.p0 + (3 * t2 - 4 * t + 1) * len * p.m0 +
                               (-6 * t2 + 6 * t) * p.p1 + (3 * t2 - 2 * t) * len * p.m1) /
                              len;
            const double d2 = ((12 * t - 6) * p.p0 + (6 * t - 4) * len * p.m0 + (-12 * t + 6) * p.p1 +
                               (6 * t - 2) * len * p.m1) /
                              (len * len);
            return Jet{v, d1, d2};
          },
          [&](const SinhLike &p) {
            const double s = p.scale * std::sinh(p.rate * r);
            const double c = p.scale * std::cosh(p.rate * r);
            return Jet{s, p.rate * c, p.rate * p.rate * s};
          },
      },
      formula);
}

/// log(value), stable for exponential-type formulas at large r.
inline double log_value(const Formula &formula, double r, double lo, double hi) {
  return std::visit(overloaded{
                        [&](const Exponential &p) { return std::log(p.scale) + p.rate * r; },
                        [&](const Power &p) { return std::log(p.scale) + p.exponent * std::log(r); },
                        [&](const SinhLike &p) {
                          const double x = p.rate * r;
                          if (x > 20.0)
                            return std::log(p.scale) + x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0);
                          return std::log(p.scale * std::sinh(x));
                        },
                        [&](const auto &) { return std::log(evaluate(formula, r, lo, hi).value); },
                    },
                    formula);
}

/// value'/value, stable at large r.
inline double log_derivative(const Formula &formula, double r, double lo, double hi) {
  return std::visit(overloaded{
                        [&](const Exponential &p) { return p.rate; },
                        [&](const Power &p) { return p.exponent / r; },
                        [&](const SinhLike &p) { return p.rate / std::tanh(p.rate * r); },
                        [&](const auto &) {
                          const Jet j = evaluate(formula, r, lo, hi);
                          return j.d1 / j.value;
                        },
                    },
                    formula);
}

/// value''/value, stable at large r.
inline double second_ratio(const Formula &formula, double r, double lo, double hi) {
  return std::visit(overloaded{
                        [&](const Exponential &p) { return p.rate * p.rate; },
                        [&](const Power &p) { return p.exponent * (p.exponent - 1.0) / (r * r); },
                        [&](const SinhLike &p) { return p.rate * p.rate; },
                        [&](const auto &) {
                          const Jet j = evaluate(formula, r, lo, hi);
                          return j.d2 / j.value;
                        },
                    },
                    formula);
}

} // namespace detail

/// A piecewise-analytic scalar function on [0, inf). Immutable once built.
///
/// Pieces partition [0, inf): the first starts at 0 and each runs to the next
/// one's start. At a breakpoint the right-hand piece is used. Value and first
/// derivative must agree across every breakpoint.
class RadialProfile {
public:
  static constexpr double continuity_tol = 1e-12;

  RadialProfile() : RadialProfile(std::vector<Piece>{Piece{0.0, Linear{}}}) {}

  explicit RadialProfile(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty())
      fail(ErrorKind::InvalidParameter, "profile needs at least one piece");
    if (pieces_.front().start != 0.0)
      fail(ErrorKind::InvalidParameter, "first piece must start at r = 0");
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
      if (!(pieces_[i].start > pieces_[i - 1].start) || !std::isfinite(pieces_[i].start))
        fail(ErrorKind::InvalidParameter, "piece starts must be finite and strictly increasing");
    }
    if (std::holds_alternative<CubicHermite>(pieces_.back().formula))
      fail(ErrorKind::InvalidParameter, "a cubic Hermite piece needs a bounded interval");
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
      const double b = pieces_[i].start;
      const Jet left = detail::evaluate(pieces_[i - 1].formula, b, pieces_[i - 1].start, b);
      const Jet right = detail::evaluate(pieces_[i].formula, b, b, end_of(i));
      const double scale = std::max({1.0, std::abs(left.value), std::abs(right.value)});
      const double dscale = std::max({1.0, std::abs(left.d1), std::abs(right.d1)});
      if (std::abs(left.value - right.value) > continuity_tol * scale ||
          std::abs(left.d1 - right.d1) > continuity_tol * dscale) {
        fail(ErrorKind::InvalidParameter,
             "profile is not C1 at breakpoint r = " + std::to_string(b));
      }
    }
  }

  static RadialProfile single(Formula f) { return RadialProfile({Piece{0.0, f}}); }

  Jet jet(double r) const {
    const std::size_t i = locate(r);
    return detail::evaluate(pieces_[i].formula, r, pieces_[i].start, end_of(i + 1));
  }

  double value(double r) const { return jet(r).value; }
  double derivative(double r) const { return jet(r).d1; }

  double second_derivative(double r) const {
    const std::size_t i = locate(r);
    require_second(i, r);
    return detail::evaluate(pieces_[i].formula, r, pieces_[i].start, end_of(i + 1)).d2;
  }

  double log_value(double r) const {
    const std::size_t i = locate(r);
    return detail::log_value(pieces_[i].formula, r, pieces_[i].start, end_of(i + 1));
  }

  double log_derivative(double r) const {
    const std::size_t i = locate(r);
    return detail::log_derivative(pieces_[i].formula, r, pieces_[i].start, end_of(i + 1));
  }

  double second_ratio(double r) const {
    const std::size_t i = locate(r);
    require_second(i, r);
    return detail::second_ratio(pieces_[i].formula, r, pieces_[i].start, end_of(i + 1));
  }

  std::span<const Piece> pieces() const { return pieces_; }

  /// Interior breakpoints (every piece start except 0).
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < pieces_.size(); ++i)
      out.push_back(pieces_[i].start);
    return out;
  }

private:
  double end_of(std::size_t next) const {
    return next < pieces_.size() ? pieces_[next].start : std::numeric_limits<double>::infinity();
  }

  std::size_t locate(double r) const {
    if (!(r >= 0.0))
      fail(ErrorKind::DomainError, "profile evaluated at negative or NaN radius");
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), r,
                               [](double x, const Piece &p) { return x < p.start; });
    return static_cast<std::size_t>(std::distance(pieces_.begin(), it)) - 1;
  }

  void require_second(std::size_t i, double r) const {
    if (!pieces_[i].has_second_derivative)
      fail(ErrorKind::SecondDerivativeUnavailable,
           "piece containing r = " + std::to_string(r) + " declares no second derivative");
  }

  std::vector<Piece> pieces_;
};

} // namespace warpspec
