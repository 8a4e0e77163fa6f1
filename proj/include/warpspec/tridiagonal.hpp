#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "warpspec/errors.hpp"

namespace warpspec {

/// Symmetric tridiagonal matrix: diag[0..n), off[i] couples rows i and i+1.
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }

  /// Gershgorin interval [lo, hi] containing every eigenvalue, padded for rounding.
  std::pair<double, double> gershgorin() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      double radius = 0.0;
      if (i > 0)
        radius += std::abs(off[i - 1]);
      if (i + 1 < n)
        radius += std::abs(off[i]);
      lo = std::min(lo, diag[i] - radius);
      hi = std::max(hi, diag[i] + radius);
    }
    const double pad = 2.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                       std::max(std::abs(lo), std::abs(hi));
    return {lo - pad, hi + pad};
  }

  /// Number of eigenvalues strictly below x (Sturm count from the LDL^T pivots of T - xI).
  std::size_t count_below(double x) const {
    const double tiny = std::numeric_limits<double>::min();
    std::size_t count = 0;
    double pivot = 1.0;
    for (std::size_t i = 0; i < size(); ++i) {
      const double coupling = i == 0 ? 0.0 : off[i - 1] * off[i - 1] / pivot;
      pivot = diag[i] - x - coupling;
      if (pivot == 0.0)
        pivot = tiny;
      if (pivot < 0.0)
        ++count;
    }
    return count;
  }

  /// k-th smallest eigenvalue (k = 0 is the smallest) by bisection on the
  /// Sturm count, run until the bracket stops shrinking or reaches `tol`.
  double eigenvalue(std::size_t k, double tol = 0.0) const {
    if (k >= size())
      fail(ErrorKind::InvalidParameter, "eigenvalue index out of range");
    if (off.size() + 1 != size())
      fail(ErrorKind::InvalidParameter, "off-diagonal length must be n - 1");
    auto [lo, hi] = gershgorin();
    while (true) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi || hi - lo <= tol)
        break;
      if (count_below(mid) > k)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  }
};

} // namespace warpspec
