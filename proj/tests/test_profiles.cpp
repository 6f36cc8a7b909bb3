#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tdosc/profiles.hpp"

using namespace tdosc;

TEST_CASE("constant profile") {
  const ParameterProfile p = ParameterProfile::constant(2.5);
  CHECK(p.value(-3.0) == 2.5);
  CHECK(p.value(17.0) == 2.5);
  CHECK(p.derivative(1.0, 1) == 0.0);
  CHECK(p.derivative(1.0, 2) == 0.0);
}

TEST_CASE("polynomial profile matches Horner evaluation and derivatives") {
  // 1 + 2t + 3t^2 - 0.5 t^3
  const ParameterProfile p = ParameterProfile::polynomial({1.0, 2.0, 3.0, -0.5});
  for (double t : {-1.5, 0.0, 0.3, 2.0}) {
    const double v = 1.0 + 2.0 * t + 3.0 * t * t - 0.5 * t * t * t;
    const double d1 = 2.0 + 6.0 * t - 1.5 * t * t;
    const double d2 = 6.0 - 3.0 * t;
    CHECK(p.value(t) == doctest::Approx(v).epsilon(1e-14));
    CHECK(p.derivative(t, 1) == doctest::Approx(d1).epsilon(1e-14));
    CHECK(p.derivative(t, 2) == doctest::Approx(d2).epsilon(1e-14));
  }
}

TEST_CASE("sinusoidal profile") {
  const double A = 0.3, w = 0.8, ph = 0.25, c = 1.0;
  const ParameterProfile p = ParameterProfile::sinusoidal(A, w, ph, c);
  for (double t : {0.0, 0.7, 4.2}) {
    CHECK(p.value(t) == doctest::Approx(A * std::sin(w * t + ph) + c).epsilon(1e-15));
    CHECK(p.derivative(t, 1) ==
          doctest::Approx(A * w * std::cos(w * t + ph)).epsilon(1e-15));
    CHECK(p.derivative(t, 2) ==
          doctest::Approx(-A * w * w * std::sin(w * t + ph)).epsilon(1e-15));
  }
}

TEST_CASE("exponential profile") {
  const double A = 2.0, k = -0.4, c = 0.1;
  const ParameterProfile p = ParameterProfile::exponential(A, k, c);
  for (double t : {0.0, 1.0, 5.0}) {
    CHECK(p.value(t) == doctest::Approx(A * std::exp(k * t) + c).epsilon(1e-15));
    CHECK(p.derivative(t, 1) == doctest::Approx(A * k * std::exp(k * t)).epsilon(1e-15));
    CHECK(p.derivative(t, 2) ==
          doctest::Approx(A * k * k * std::exp(k * t)).epsilon(1e-15));
  }
}

TEST_CASE("tabulated profile reproduces collinear data exactly") {
  // A natural spline through collinear points is that line: all knot second
  // derivatives vanish, so value and slope are exact everywhere.
  std::vector<double> ts, ys;
  for (int i = 0; i <= 10; ++i) {
    ts.push_back(0.25 * i);
    ys.push_back(2.0 * ts.back() + 1.0);
  }
  const ParameterProfile p = ParameterProfile::tabulated(ts, ys);
  for (double t : {0.0, 0.1, 1.23, 2.5}) {
    CHECK(p.value(t) == doctest::Approx(2.0 * t + 1.0).epsilon(1e-13));
    CHECK(p.derivative(t, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(p.derivative(t, 2)) < 1e-11);
  }
}

TEST_CASE("tabulated profile approximates a smooth function") {
  std::vector<double> ts, ys;
  const int n = 60;
  for (int i = 0; i <= n; ++i) {
    const double t = 3.0 * i / n;
    ts.push_back(t);
    ys.push_back(std::sin(t));
  }
  const ParameterProfile p = ParameterProfile::tabulated(ts, ys);
  double worst_v = 0.0, worst_d = 0.0;
  for (int i = 0; i <= 300; ++i) {
    const double t = 3.0 * i / 300.0;
    worst_v = std::max(worst_v, std::abs(p.value(t) - std::sin(t)));
    worst_d = std::max(worst_d, std::abs(p.derivative(t, 1) - std::cos(t)));
  }
  // Natural end conditions limit accuracy near t=3 where sin'' != 0.
  CHECK(worst_v < 2e-4);
  CHECK(worst_d < 5e-3);
}

TEST_CASE("tabulated profile throws outside its knots") {
  const ParameterProfile p =
      ParameterProfile::tabulated({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  CHECK_THROWS_AS(p.value(-0.1), OutOfRange);
  CHECK_THROWS_AS(p.value(2.1), OutOfRange);
  CHECK_NOTHROW(p.value(0.0));
  CHECK_NOTHROW(p.value(2.0));
}

TEST_CASE("tabulated profile rejects bad knot sets") {
  CHECK_THROWS_AS(ParameterProfile::tabulated({0.0, 1.0}, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParameterProfile::tabulated({0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParameterProfile::tabulated({0.0, 1.0, 2.0}, {1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("derivative order is restricted to 1 and 2") {
  const ParameterProfile p = ParameterProfile::polynomial({1.0, 1.0});
  CHECK_THROWS_AS(p.derivative(0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(p.derivative(0.0, 3), std::invalid_argument);
}

TEST_CASE("parameter validation flags bad inputs") {
  SystemParams good;
  good.m1 = ParameterProfile::constant(1.0);
  good.m2 = ParameterProfile::constant(1.0);
  good.C1 = ParameterProfile::constant(1.0);
  good.C2 = ParameterProfile::constant(1.0);
  good.t0 = 0.0;
  good.t1 = 10.0;
  CHECK(validate_params(good).valid());

  SystemParams bad_interval = good;
  bad_interval.t1 = -1.0;
  CHECK_FALSE(validate_params(bad_interval).valid());
  CHECK(validate_params(bad_interval).issues.front().check == "interval");

  SystemParams bad_mass = good;
  bad_mass.m1 = ParameterProfile::sinusoidal(2.0, 1.0, 0.0, 1.0);  // dips below 0
  const ValidationReport rep = validate_params(bad_mass);
  CHECK_FALSE(rep.valid());
  CHECK(rep.issues.front().check == "mass_positivity");

  SystemParams bad_hbar = good;
  bad_hbar.hbar = 0.0;
  CHECK_FALSE(validate_params(bad_hbar).valid());

  SystemParams short_table = good;
  short_table.m1 = ParameterProfile::tabulated({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0});
  const ValidationReport rep2 = validate_params(short_table);  // t1 = 10 > 2
  CHECK_FALSE(rep2.valid());
  CHECK(rep2.issues.front().check == "profile_range");
}
