#include <catch_amalgamated.hpp>

#include <cmath>

#include "warpspec/profile.hpp"

using namespace warpspec;
using Catch::Approx;

namespace {

double central_d1(const RadialProfile &p, double r, double h = 1e-5) {
  return (p.value(r + h) - p.value(r - h)) / (2 * h);
}

double central_d2(const RadialProfile &p, double r, double h = 1e-4) {
  return (p.value(r + h) - 2 * p.value(r) + p.value(r - h)) / (h * h);
}

ErrorKind kind_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidParameter;
}

} // namespace

TEST_CASE("single formulas match finite differences", "[profile]") {
  const std::vector<Formula> formulas{Linear{2.0, -1.0}, Exponential{0.7, -0.3}, Power{1.5, 2.5},
                                      SinhLike{0.5, 1.3}, Power{2.0, 0.0}, Power{3.0, 1.0}};
  for (const Formula &f : formulas) {
    const RadialProfile p = RadialProfile::single(f);
    for (double r : {0.3, 1.0, 2.7, 6.0}) {
      INFO(formula_name(f) << " at r = " << r);
      CHECK(p.derivative(r) == Approx(central_d1(p, r)).epsilon(1e-7).margin(1e-9));
      CHECK(p.second_derivative(r) == Approx(central_d2(p, r)).epsilon(1e-4).margin(1e-6));
    }
  }
}

TEST_CASE("closed-form values", "[profile]") {
  CHECK(RadialProfile::single(Linear{2.0, 1.0}).value(3.0) == 7.0);
  CHECK(RadialProfile::single(Exponential{2.0, -0.5}).value(2.0) == Approx(2.0 * std::exp(-1.0)));
  CHECK(RadialProfile::single(Power{0.25, 2.0}).value(2.0) == Approx(1.0));
  CHECK(RadialProfile::single(SinhLike{1.0, 1.0}).value(1.0) == Approx(std::sinh(1.0)));
  CHECK(RadialProfile{}.value(5.0) == 0.0);
  CHECK(RadialProfile{}.derivative(5.0) == 0.0);
}

TEST_CASE("log helpers stay finite far out", "[profile]") {
  const RadialProfile s = RadialProfile::single(SinhLike{0.5, 2.0});
  CHECK(s.log_value(500.0) == Approx(std::log(0.5) + 1000.0 - std::log(2.0)));
  CHECK(s.log_value(3.0) == Approx(std::log(0.5 * std::sinh(6.0))));
  CHECK(s.log_derivative(500.0) == Approx(2.0));
  CHECK(s.second_ratio(500.0) == Approx(4.0));
  const RadialProfile e = RadialProfile::single(Exponential{3.0, -0.2});
  CHECK(e.log_value(5000.0) == Approx(std::log(3.0) - 1000.0));
  CHECK(e.log_derivative(5000.0) == Approx(-0.2));
  const RadialProfile pw = RadialProfile::single(Power{2.0, 3.0});
  CHECK(pw.log_derivative(4.0) == Approx(0.75));
  CHECK(pw.second_ratio(4.0) == Approx(6.0 / 16.0));
}

TEST_CASE("cubic Hermite interpolates its end data", "[profile]") {
  const CubicHermite h{0.0, 1.0, 0.4, -0.2};
  const RadialProfile p({Piece{0.0, h}, Piece{2.0, Linear{-0.2, 0.8}}});
  CHECK(p.value(0.0) == Approx(0.0).margin(1e-15));
  CHECK(p.derivative(0.0) == Approx(1.0));
  CHECK(p.value(2.0) == Approx(0.4));
  CHECK(p.value(2.0 - 1e-9) == Approx(0.4));
  CHECK(p.derivative(2.0 - 1e-9) == Approx(-0.2).epsilon(1e-6));
  for (double r : {0.2, 0.9, 1.7})
    CHECK(p.second_derivative(r) == Approx(central_d2(p, r)).epsilon(1e-5));
}

TEST_CASE("construction rejects malformed tables", "[profile]") {
  CHECK(kind_of([] { RadialProfile(std::vector<Piece>{}); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { RadialProfile({Piece{0.5, Linear{}}}); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] {
          RadialProfile({Piece{0.0, Linear{}}, Piece{2.0, Linear{}}, Piece{2.0, Linear{}}});
        }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { RadialProfile({Piece{0.0, CubicHermite{0, 1, 1, 1}}}); }) == ErrorKind::InvalidParameter);
  // Jump in value.
  CHECK(kind_of([] { RadialProfile({Piece{0.0, Linear{1.0, 0.0}}, Piece{1.0, Linear{1.0, 0.1}}}); }) ==
        ErrorKind::InvalidParameter);
  // Kink: same value, different slope.
  CHECK(kind_of([] { RadialProfile({Piece{0.0, Linear{1.0, 0.0}}, Piece{1.0, Linear{2.0, -1.0}}}); }) ==
        ErrorKind::InvalidParameter);
  // C1 join passes.
  CHECK_NOTHROW(RadialProfile({Piece{0.0, Linear{1.0, 0.0}}, Piece{1.0, Exponential{std::exp(-1.0), 1.0}}}));
}

TEST_CASE("breakpoints use the right-hand piece", "[profile]") {
  const RadialProfile p({Piece{0.0, Linear{1.0, 0.0}}, Piece{1.0, Linear{1.0, 0.0}, false}});
  CHECK(p.second_derivative(0.999) == 0.0);
  CHECK(kind_of([&] { (void)p.second_derivative(1.0); }) == ErrorKind::SecondDerivativeUnavailable);
  CHECK(kind_of([&] { (void)p.second_ratio(3.0); }) == ErrorKind::SecondDerivativeUnavailable);
  CHECK(p.breakpoints() == std::vector<double>{1.0});
  CHECK(p.pieces().size() == 2);
}

TEST_CASE("negative and NaN radii are domain errors", "[profile]") {
  const RadialProfile p = RadialProfile::single(Linear{1.0, 0.0});
  CHECK(kind_of([&] { (void)p.value(-1e-3); }) == ErrorKind::DomainError);
  CHECK(kind_of([&] { (void)p.value(std::nan("")); }) == ErrorKind::DomainError);
}
