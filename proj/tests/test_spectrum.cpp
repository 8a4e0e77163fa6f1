#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "warpspec/spectrum.hpp"

using namespace warpspec;
using Catch::Approx;
constexpr double pi = std::numbers::pi;

namespace {

ErrorKind kind_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidParameter;
}

/// Plain composite Simpson of the Rayleigh quotient of e^{h_j} chi_r in double
/// precision, one segment at a time, with v supplied in closed form.
template <class V>
double simpson_quotient(V v, double omega_r, double alpha, double j, double r, double delta) {
  std::vector<double> cuts{omega_r, omega_r + delta, j, r, r + delta};
  std::sort(cuts.begin(), cuts.end());
  double num = 0.0, den = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    if (b <= a || b > r + delta)
      continue;
    const double mid = 0.5 * (a + b);
    const bool rising = mid < omega_r + delta, falling = mid > r, up = mid < j;
    auto u = [&](double t) {
      const double h = up ? alpha * t : alpha * (2 * j - t);
      const double chi = rising ? (t - omega_r) / delta : falling ? (r + delta - t) / delta : 1.0;
      return std::exp(h) * chi;
    };
    auto du = [&](double t) {
      const double h = up ? alpha * t : alpha * (2 * j - t);
      const double chi = rising ? (t - omega_r) / delta : falling ? (r + delta - t) / delta : 1.0;
      const double dchi = rising ? 1.0 / delta : falling ? -1.0 / delta : 0.0;
      return std::exp(h) * ((up ? alpha : -alpha) * chi + dchi);
    };
    const int panels = 4000;
    const double hh = (b - a) / panels;
    for (int i = 0; i <= panels; ++i) {
      const double t = a + i * hh;
      const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      num += w * du(t) * du(t) * v(t) * hh / 3;
      den += w * u(t) * u(t) * v(t) * hh / 3;
    }
  }
  return num / den;
}

} // namespace

TEST_CASE("solver config validation and method names", "[spectrum]") {
  CHECK_NOTHROW(SolverConfig{}.validate());
  SolverConfig c;
  c.truncation_radii = {100.0, 50.0};
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidParameter);
  c = SolverConfig{};
  c.truncation_radii.clear();
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidParameter);
  c = SolverConfig{};
  c.mesh_points = 0;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidParameter);
  c = SolverConfig{};
  c.ode_step = 1000.0;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidParameter);
  CHECK(std::string(to_string(SpectrumMethod::Oscillation)) == "oscillation");
  CHECK(std::string(to_string(SpectrumMethod::FiniteDifference)) == "finite-difference");
  CHECK(std::string(to_string(SpectrumMethod::TestFunction)) == "test-function");
  CHECK(std::string(to_string(SpectrumMethod::Barrier)) == "barrier");
}

TEST_CASE("finite-difference brackets", "[spectrum][fd]") {
  const SpectrumEstimate pe = lambda1_exterior_fd(make_model(PaperEquality{1.0, 1.0}, 3), 1.0);
  CHECK(pe.method == SpectrumMethod::FiniteDifference);
  CHECK(pe.lambda1_lower <= 0.25);
  CHECK(pe.lambda1_upper >= 0.25);
  CHECK(pe.lambda1_upper <= 0.26);
  CHECK(pe.diagnostics.at("truncation_radius") == 400.0);

  const SpectrumEstimate eu = lambda1_exterior_fd(make_model(Euclidean{}, 3), 1.0);
  CHECK(eu.lambda1_lower == 0.0);
  CHECK(eu.lambda1_upper < 1e-3);

  const SpectrumEstimate pe2 = lambda1_exterior_fd(make_model(PaperEquality{2.0, 1.0}, 2), 1.0);
  CHECK(pe2.lambda1_lower <= 1.0);
  CHECK(pe2.lambda1_upper >= 1.0);
}

TEST_CASE("truncated eigenvalues match closed forms", "[spectrum][fd]") {
  // Euclidean n = 3: u = w / r turns the problem into -w'' = lambda w on [1, R].
  const SpectrumEstimate eu = lambda1_exterior_fd(make_model(Euclidean{}, 3), 1.0);
  // Equality model: v ~ e^{-r} on [1, R], so lambda = 1/4 + (pi / (R - 1))^2.
  const SpectrumEstimate pe = lambda1_exterior_fd(make_model(PaperEquality{1.0, 1.0}, 3), 1.0);
  for (int R : {50, 100, 200, 400}) {
    const double k2 = std::pow(pi / (R - 1.0), 2);
    const std::string key = "lambda_R" + std::to_string(R);
    INFO("R = " << R);
    CHECK(eu.diagnostics.at(key) == Approx(k2).epsilon(1e-3));
    CHECK(pe.diagnostics.at(key) == Approx(0.25 + k2).margin(1e-5));
  }
  CHECK(pe.diagnostics.at("richardson_gap") ==
        Approx(std::pow(pi / 199.0, 2) - std::pow(pi / 399.0, 2)).margin(1e-5));
}

TEST_CASE("finite-difference errors", "[spectrum][fd]") {
  const ManifoldSpec pe = make_model(PaperEquality{1.0, 1.0}, 3);
  SolverConfig coarse;
  coarse.mesh_points = 1;
  coarse.truncation_radii = {2.0, 3.0};
  CHECK(kind_of([&] { (void)lambda1_exterior_fd(pe, 1.0, coarse); }) == ErrorKind::MeshFailure);
  CHECK(kind_of([&] { (void)lambda1_exterior_fd(pe, 0.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([&] { (void)lambda1_exterior_fd(pe, 500.0); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("oscillation probe examples", "[spectrum][ode]") {
  const ManifoldSpec pe = make_model(PaperEquality{1.0, 1.0}, 3);
  CHECK(oscillation_probe(pe, 1.0, 0.5).oscillatory);
  const OscillationVerdict low = oscillation_probe(pe, 1.0, 0.1);
  CHECK_FALSE(low.oscillatory);
  CHECK(low.sign_changes == 0);
  for (int n : {2, 3, 5})
    for (const ModelFamily &fam :
         {ModelFamily{PaperEquality{1.0, 1.0}}, ModelFamily{Euclidean{}}, ModelFamily{GaussianSoliton{}},
          ModelFamily{HyperbolicLike{1.0}}}) {
      const ManifoldSpec s = make_model(fam, n);
      INFO(s.label());
      CHECK_FALSE(oscillation_probe(s, 1.0, 0.0).oscillatory);
    }
  std::vector<std::pair<double, double>> trace;
  SolverConfig c;
  c.osc_window = 20.0;
  (void)oscillation_probe(pe, 1.0, 0.5, c, &trace);
  CHECK(trace.size() == 201);
  CHECK(trace.back().first == Approx(21.0));
  CHECK(kind_of([&] { (void)oscillation_probe(pe, 1.0, std::nan("")); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([&] { (void)oscillation_probe(pe, -1.0, 0.5); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("oscillation threshold examples", "[spectrum][ode]") {
  const SpectrumEstimate pe = oscillation_threshold(make_model(PaperEquality{1.0, 1.0}, 3), 1.0);
  CHECK(pe.method == SpectrumMethod::Oscillation);
  CHECK(pe.value() == Approx(0.25).margin(1e-3));
  CHECK(pe.lambda1_upper - pe.lambda1_lower == Approx(2e-4).margin(1e-12));
  CHECK(pe.diagnostics.at("window_bias") == Approx(std::pow(5 * pi / 800, 2)));
  CHECK(pe.diagnostics.at("sign_changes") >= 5);
  CHECK(oscillation_threshold(make_model(Euclidean{}, 2), 1.0).value() < 1e-3);
  CHECK(oscillation_threshold(make_model(HyperbolicLike{1.0}, 2), 1.0).value() == Approx(0.25).margin(5e-3));

  SolverConfig tiny;
  tiny.osc_window = 0.02;
  tiny.ode_step = 0.01;
  CHECK(kind_of([&] { (void)oscillation_threshold(make_model(Euclidean{}, 2), 1.0, tiny); }) ==
        ErrorKind::NoOscillationFound);
}

TEST_CASE("threshold tracks the constant-drift value q^2/4", "[spectrum][ode]") {
  for (double alpha : {0.5, 1.0, 2.0})
    for (int n : {2, 3, 5}) {
      const double lam = oscillation_threshold(make_model(PaperEquality{alpha, 1.0}, n), 1.0).value();
      INFO("alpha = " << alpha << " n = " << n);
      CHECK(lam == Approx(alpha * alpha / 4).margin(1e-3));
      CHECK(lam >= alpha * alpha / 4);
    }
}

TEST_CASE("barrier examples", "[spectrum][barrier]") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const BarrierAnalysis b = barrier_analysis(make_model(PaperEquality{alpha, 1.0}, 3), 1.0, alpha / 2);
    CHECK(std::abs(b.value - alpha * alpha / 4) < 1e-10);
    CHECK(b.tail_monotone);
  }
  CHECK(barrier_lower_bound(make_model(Euclidean{}, 3), 1.0, 0.0) == 0.0);
  CHECK(barrier_lower_bound(make_model(PaperEquality{1.0, 1.0}, 3), 1.0, 0.3) == Approx(0.21).margin(1e-12));
  // Euclidean n = 2 with beta > 0: -beta^2 - beta / r rises toward -beta^2, so the infimum sits at r0.
  const BarrierAnalysis eu = barrier_analysis(make_model(Euclidean{}, 2), 1.0, 0.5);
  CHECK(eu.value == Approx(-0.75));
  CHECK(eu.argmin == 1.0);
  CHECK(eu.tail_monotone);
  CHECK(kind_of([] { (void)barrier_lower_bound(make_model(Euclidean{}, 2), 0.0, 0.5); }) ==
        ErrorKind::InvalidParameter);
}

TEST_CASE("test-function quotient against plain Simpson", "[spectrum][test-function]") {
  const ManifoldSpec pe = make_model(PaperEquality{1.0, 1.0}, 3);
  auto v_pe = [](double t) { return 4 * pi * std::exp(-t); }; // exact for t >= 1
  const double alpha = (1.0 + 2 * 0.05) / 2;
  const double value = test_function_bound(pe, 1.0, alpha, 40.0, 120.0, 1.0);
  CHECK(value <= 0.55 * 0.55 + 0.05);
  CHECK(value >= 0.25 - 1e-3);
  CHECK(value == Approx(simpson_quotient(v_pe, 1.0, alpha, 40.0, 120.0, 1.0)).epsilon(1e-7));

  for (auto [a, j, r, d] : {std::tuple{0.3, 5.0, 8.0, 1.0}, std::tuple{0.8, 3.0, 10.0, 0.5},
                            std::tuple{0.0, 2.0, 6.0, 2.0}, std::tuple{0.5, 2.5, 2.5, 1.0}}) {
    INFO("alpha = " << a << " j = " << j << " r = " << r);
    CHECK(test_function_bound(pe, 1.0, a, j, r, d) == Approx(simpson_quotient(v_pe, 1.0, a, j, r, d)).epsilon(1e-7));
  }
  // Euclidean n = 3 from the origin: v = 4 pi t^2.
  const ManifoldSpec eu = make_model(Euclidean{}, 3);
  auto v_eu = [](double t) { return 4 * pi * t * t; };
  CHECK(test_function_bound(eu, 0.0, 0.2, 3.0, 7.0, 1.0) ==
        Approx(simpson_quotient(v_eu, 0.0, 0.2, 3.0, 7.0, 1.0)).epsilon(1e-7));
}

TEST_CASE("test-function edge examples", "[spectrum][test-function]") {
  // Plain cutoff on Euclidean space: gradient only on the ramps.
  for (int n : {2, 3})
    CHECK(test_function_bound(make_model(Euclidean{}, n), 1.0, 0.0, 50.0, 200.0, 1.0) < 0.02);
  // j = r: no descending branch.
  const double rising = test_function_bound(make_model(PaperEquality{1.0, 1.0}, 3), 1.0, 1.0, 20.0, 20.0, 1.0);
  CHECK(std::isfinite(rising));
  CHECK(rising >= 0.25);

  const ManifoldSpec pe = make_model(PaperEquality{1.0, 1.0}, 3);
  CHECK(kind_of([&] { (void)test_function_bound(pe, 1.0, 0.5, 5.0, 10.0, 0.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([&] { (void)test_function_bound(pe, 1.0, -0.5, 5.0, 10.0, 1.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([&] { (void)test_function_bound(pe, 5.0, 0.5, 4.0, 10.0, 1.0); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([&] { (void)test_function_bound(pe, 1.0, 0.5, 5.0, 1.5, 1.0); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("essential spectrum bottom examples", "[spectrum][ess]") {
  const SpectrumEstimate pe = ess_spectrum_bottom(make_model(PaperEquality{1.0, 1.0}, 3));
  CHECK(pe.value() == Approx(0.25).margin(1e-3));
  for (int t0 : {1, 2, 4, 8, 16, 32, 64})
    CHECK(pe.diagnostics.contains("lambda_star_t0_" + std::to_string(t0)));
  CHECK(pe.diagnostics.at("argmax_t0") == pe.r0);
  CHECK(ess_spectrum_bottom(make_model(Euclidean{}, 3)).value() < 1e-3);
  CHECK(ess_spectrum_bottom(make_model(PaperEquality{2.0, 1.0}, 2)).value() == Approx(1.0).margin(4e-3));
}
