#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "warpspec/tridiagonal.hpp"

using namespace warpspec;
using Catch::Approx;

namespace {

/// Cyclic Jacobi rotations on the dense matrix; returns sorted eigenvalues.
std::vector<double> jacobi_eigenvalues(const SymmetricTridiagonal &t) {
  const std::size_t n = t.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = t.diag[i];
    if (i + 1 < n)
      a[i][i + 1] = a[i + 1][i] = t.off[i];
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        off += a[p][q] * a[p][q];
    if (off < 1e-30)
      break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0)
          continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double tt = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(tt * tt + 1), s = tt * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i)
    ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

} // namespace

TEST_CASE("discrete Laplacian spectrum", "[tridiagonal]") {
  const std::size_t n = 50;
  SymmetricTridiagonal t{std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0)};
  for (std::size_t k = 0; k < n; ++k)
    CHECK(t.eigenvalue(k) ==
          Approx(2.0 - 2.0 * std::cos((k + 1) * std::numbers::pi / (n + 1))).epsilon(1e-13).margin(1e-14));
}

TEST_CASE("bisection agrees with dense Jacobi on random matrices", "[tridiagonal][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 9;
    SymmetricTridiagonal t;
    for (std::size_t i = 0; i < n; ++i)
      t.diag.push_back(u(rng));
    for (std::size_t i = 0; i + 1 < n; ++i)
      t.off.push_back(trial % 5 == 0 && i == 0 ? 0.0 : u(rng));
    const std::vector<double> ref = jacobi_eigenvalues(t);
    for (std::size_t k = 0; k < n; ++k)
      CHECK(t.eigenvalue(k) == Approx(ref[k]).margin(1e-11));
  }
}

TEST_CASE("Sturm count and Gershgorin interval", "[tridiagonal]") {
  SymmetricTridiagonal t{{4.0, 1.0, -2.0, 7.0}, {0.5, -0.3, 1.2}};
  const auto [lo, hi] = t.gershgorin();
  CHECK(t.count_below(lo) == 0);
  CHECK(t.count_below(hi) == 4);
  std::size_t prev = 0;
  for (double x = lo; x <= hi; x += 0.05) {
    const std::size_t c = t.count_below(x);
    CHECK(c >= prev);
    prev = c;
  }
  // Exactly at an eigenvalue the count stays strict.
  SymmetricTridiagonal diag{{1.0, 2.0, 3.0}, {0.0, 0.0}};
  CHECK(diag.count_below(2.0) == 1);
}

TEST_CASE("tolerance stops bisection early", "[tridiagonal]") {
  SymmetricTridiagonal t{std::vector<double>(10, 2.0), std::vector<double>(9, -1.0)};
  const double exact = 2.0 - 2.0 * std::cos(std::numbers::pi / 11);
  CHECK(t.eigenvalue(0, 1e-3) == Approx(exact).margin(1e-3));
}

TEST_CASE("index and shape errors", "[tridiagonal]") {
  SymmetricTridiagonal t{{1.0, 2.0}, {0.1}};
  CHECK_THROWS_AS(t.eigenvalue(2), Error);
  SymmetricTridiagonal bad{{1.0, 2.0}, {}};
  CHECK_THROWS_AS(bad.eigenvalue(0), Error);
}
