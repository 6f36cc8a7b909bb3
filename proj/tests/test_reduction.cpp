#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tdosc/reduction.hpp"

using namespace tdosc;

namespace {

SystemParams constant_params(double m1, double m2, double C1, double C2, double C3,
                             double B, double t1 = 10.0) {
  SystemParams p;
  p.m1 = ParameterProfile::constant(m1);
  p.m2 = ParameterProfile::constant(m2);
  p.C1 = ParameterProfile::constant(C1);
  p.C2 = ParameterProfile::constant(C2);
  p.C3 = ParameterProfile::constant(C3);
  p.B = ParameterProfile::constant(B);
  p.t0 = 0.0;
  p.t1 = t1;
  return p;
}

SystemParams breathing_params() {
  SystemParams p = constant_params(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 40.0);
  p.m1 = ParameterProfile::sinusoidal(0.3, 0.8, 0.0, 1.0);
  p.m2 = p.m1;
  return p;
}

SystemParams magnetic_params() {
  return constant_params(1.0, 1.0, 1.0, 1.0, 0.0, 1.0);
}

SystemParams drifting_params() {
  // Anisotropic coupling in a field: the decoupling angle rotates with phi.
  return constant_params(1.0, 1.0, 1.0, 1.0, 0.5, 1.0, 20.0);
}

double max_state_dev(const PhaseSpaceState& a, const PhaseSpaceState& b) {
  return std::max({std::abs(a.q1 - b.q1), std::abs(a.q2 - b.q2),
                   std::abs(a.p1 - b.p1), std::abs(a.p2 - b.p2)});
}

}  // namespace

TEST_CASE("cyclotron frequencies and unique mass") {
  const Cyclotron a = cyclotron(constant_params(1.0, 1.0, 1, 1, 0, 2.0), 0.0);
  CHECK(a.omega1c == doctest::Approx(2.0));
  CHECK(a.omega2c == doctest::Approx(2.0));
  CHECK(a.omega_c == doctest::Approx(2.0));
  CHECK(a.m == doctest::Approx(1.0));

  const Cyclotron b = cyclotron(constant_params(2.0, 3.0, 1, 1, 0, 0.0), 1.0);
  CHECK(b.omega1c == 0.0);
  CHECK(b.omega2c == 0.0);
  CHECK(b.omega_c == 0.0);
  CHECK(b.m == doctest::Approx(std::sqrt(6.0)));

  const Cyclotron c = cyclotron(constant_params(4.0, 1.0, 1, 1, 0, 2.0), 0.0);
  CHECK(c.omega1c == doctest::Approx(0.5));
  CHECK(c.omega2c == doctest::Approx(2.0));
  CHECK(c.omega_c == doctest::Approx(1.0));
  CHECK(c.m == doctest::Approx(2.0));
}

TEST_CASE("cyclotron product structure holds for time-dependent masses") {
  SystemParams p = breathing_params();
  p.B = ParameterProfile::constant(0.7);
  for (double t : {0.0, 1.3, 5.5, 17.0}) {
    const Cyclotron cyc = cyclotron(p, t);
    CHECK(cyc.omega_c * cyc.omega_c ==
          doctest::Approx(cyc.omega1c * cyc.omega2c).epsilon(1e-13));
    CHECK(cyc.m * cyc.m ==
          doctest::Approx(p.m1.value(t) * p.m2.value(t)).epsilon(1e-13));
  }
}

TEST_CASE("stiffness absorbs the field terms") {
  // omega2c = 2 here, so c1 = C1 + m2 * 4 / 4 = 2.
  const Stiffness a = stiffness(constant_params(1.0, 1.0, 1.0, 3.0, 0.0, 2.0), 0.0);
  CHECK(a.c1 == doctest::Approx(2.0));
  CHECK(a.c2 == doctest::Approx(4.0));

  const Stiffness b = stiffness(constant_params(2.0, 5.0, 1.1, 2.2, 3.3, 0.0), 0.0);
  CHECK(b.c1 == doctest::Approx(1.1));
  CHECK(b.c2 == doctest::Approx(2.2));
  CHECK(b.c3 == doctest::Approx(3.3));

  const Stiffness c = stiffness(constant_params(1.0, 2.0, 1.0, 1.0, 7.0, 3.0), 0.0);
  CHECK(c.c3 == doctest::Approx(7.0));  // independent of B
}

TEST_CASE("scaled stiffness") {
  const ScaledStiffness a = scaled_stiffness(constant_params(3.0, 3.0, 1.5, 2.5, 0.5, 0.0), 0.0);
  CHECK(a.d1 == doctest::Approx(1.5));
  CHECK(a.d2 == doctest::Approx(2.5));
  CHECK(a.d3 == doctest::Approx(0.5));

  // c1 = 2 with B = 0, mass ratio 4 : d1 = 2 * sqrt(1/4) = 1, d2 = 2 * c2.
  const ScaledStiffness b = scaled_stiffness(constant_params(4.0, 1.0, 2.0, 1.0, 5.0, 0.0), 0.0);
  CHECK(b.d1 == doctest::Approx(1.0));
  CHECK(b.d2 == doctest::Approx(2.0));
  CHECK(b.d3 == doctest::Approx(5.0));
}

TEST_CASE("unique-mass derivatives against closed forms") {
  // m1 = (1+t)^2, m2 = 1: m = 1+t, m_dot = 1, m_ddot = 0.
  SystemParams p = constant_params(1.0, 1.0, 1, 1, 0, 0);
  p.m1 = ParameterProfile::polynomial({1.0, 2.0, 1.0});
  for (double t : {0.0, 0.5, 3.0}) {
    const MassDerivatives md = mass_derivatives(p, t);
    CHECK(md.m == doctest::Approx(1.0 + t).epsilon(1e-14));
    CHECK(md.m_dot == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(md.m_ddot) < 1e-12);
  }

  // m1 = m2 = f(t): m = f with its own derivatives.
  SystemParams q = breathing_params();
  for (double t : {0.0, 0.9, 4.0}) {
    const MassDerivatives md = mass_derivatives(q, t);
    CHECK(md.m == doctest::Approx(q.m1.value(t)).epsilon(1e-14));
    CHECK(md.m_dot == doctest::Approx(q.m1.derivative(t, 1)).epsilon(1e-13));
    CHECK(md.m_ddot == doctest::Approx(q.m1.derivative(t, 2)).epsilon(1e-12));
  }

  // m1 = e^{2t}, m2 = 1: m = e^t.
  SystemParams r = constant_params(1.0, 1.0, 1, 1, 0, 0);
  r.m1 = ParameterProfile::exponential(1.0, 2.0, 0.0);
  for (double t : {0.0, 0.7}) {
    const MassDerivatives md = mass_derivatives(r, t);
    CHECK(md.m == doctest::Approx(std::exp(t)).epsilon(1e-13));
    CHECK(md.m_dot == doctest::Approx(std::exp(t)).epsilon(1e-13));
    CHECK(md.m_ddot == doctest::Approx(std::exp(t)).epsilon(1e-13));
  }
}

TEST_CASE("rotation phase") {
  // Constant omega_c = 2 over one unit of time: phi = -1.
  const SystemParams p = constant_params(1.0, 1.0, 1, 1, 0, 2.0);
  CHECK(rotation_phase(p, 1.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rotation_phase(p, 0.0) == 0.0);

  const SystemParams zero = constant_params(1.0, 1.0, 1, 1, 0, 0.0);
  CHECK(rotation_phase(zero, 7.3) == 0.0);

  // omega_c(t) = 2 cos t: phi(t) = -sin t.
  SystemParams osc = constant_params(1.0, 1.0, 1, 1, 0, 0.0);
  osc.B = ParameterProfile::sinusoidal(2.0, 1.0, M_PI / 2.0, 0.0);
  CHECK(rotation_phase(osc, M_PI / 2.0) == doctest::Approx(-1.0).epsilon(1e-10));
  for (double t : {0.3, 2.0, 5.1, 9.0})
    CHECK(rotation_phase(osc, t) == doctest::Approx(-std::sin(t)).epsilon(1e-10));
}

TEST_CASE("pipeline phi matches the one-shot quadrature and is additive") {
  SystemParams p = magnetic_params();
  const ReductionPipeline pipe(p);
  for (double t : {0.0, 1.5, 6.2, 10.0}) {
    CHECK(pipe.phi(t) == doctest::Approx(-0.5 * t).epsilon(1e-10));
    CHECK(pipe.phi(t) == doctest::Approx(rotation_phase(p, t)).epsilon(1e-9));
  }

  SystemParams osc = breathing_params();
  osc.B = ParameterProfile::sinusoidal(0.5, 0.3, 0.1, 1.0);
  const ReductionPipeline pipe2(osc);
  for (double a : {1.0, 13.0}) {
    SystemParams shifted = osc;
    shifted.t0 = a;
    const double target = a + 5.0;
    CHECK(pipe2.phi(target) - pipe2.phi(a) ==
          doctest::Approx(rotation_phase(shifted, target)).epsilon(1e-9));
  }
}

TEST_CASE("rotated coefficients") {
  const ScaledStiffness d{2.0, 1.0, 0.0};
  const RotatedCoefficients id = rotated_coefficients(d, 0.0);
  CHECK(id.lambda1 == doctest::Approx(2.0));
  CHECK(id.lambda2 == doctest::Approx(1.0));
  CHECK(id.lambda3 == doctest::Approx(0.0));

  const RotatedCoefficients iso = rotated_coefficients({3.0, 3.0, 0.0}, 1.234);
  CHECK(iso.lambda1 == doctest::Approx(3.0));
  CHECK(iso.lambda2 == doctest::Approx(3.0));
  CHECK(std::abs(iso.lambda3) < 1e-14);

  const RotatedCoefficients q = rotated_coefficients(d, M_PI / 4.0);
  CHECK(q.lambda1 == doctest::Approx(1.5));
  CHECK(q.lambda2 == doctest::Approx(1.5));
  CHECK(q.lambda3 == doctest::Approx(1.0));
}

TEST_CASE("rotation preserves the stiffness trace and determinant") {
  const ScaledStiffness d{2.3, 0.7, 0.4};
  for (double phi : {-2.0, -0.3, 0.9, 2.8}) {
    const RotatedCoefficients lam = rotated_coefficients(d, phi);
    CHECK(lam.lambda1 + lam.lambda2 == doctest::Approx(d.d1 + d.d2).epsilon(1e-13));
    // 2x2 symmetric form determinant: l1 l2 - (l3/2)^2 invariant.
    CHECK(lam.lambda1 * lam.lambda2 - 0.25 * lam.lambda3 * lam.lambda3 ==
          doctest::Approx(d.d1 * d.d2 - 0.25 * d.d3 * d.d3).epsilon(1e-12));
  }
}

TEST_CASE("effective frequencies") {
  const MassDerivatives unit{1.0, 0.0, 0.0};
  const EffectiveFrequencies w = effective_frequencies({2.0, 3.0, 0.0}, unit);
  CHECK(w.w1_sq == doctest::Approx(2.0));
  CHECK(w.w2_sq == doctest::Approx(3.0));

  // m = e^{2t}: m_dot/m = 2, m_ddot/m = 4, so the mass term is (4 - 8)/4 = -1.
  SystemParams p = constant_params(1.0, 1.0, 1, 1, 0, 0);
  p.m1 = ParameterProfile::exponential(1.0, 2.0, 0.0);
  p.m2 = p.m1;
  const MassDerivatives md = mass_derivatives(p, 0.4);
  const EffectiveFrequencies w2 = effective_frequencies({0.0, 0.0, 0.0}, md);
  CHECK(w2.w1_sq == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(w2.w2_sq == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("decoupling angle on representative parameter sets") {
  // No coupling: theta = 0, zero deviation.
  const ReductionPipeline plain(constant_params(1.0, 1.0, 1.0, 1.0, 0.0, 0.0));
  CHECK(plain.angle().theta == 0.0);
  CHECK(plain.angle().max_deviation == 0.0);
  CHECK(plain.angle().valid);

  // Equal effective frequencies with positive coupling: theta = pi/2.
  const ReductionPipeline sym(constant_params(1.0, 1.0, 1.0, 1.0, 0.5, 0.0));
  CHECK(sym.angle().theta == doctest::Approx(M_PI / 2.0));
  CHECK(sym.angle().valid);

  // lambda3 = 1 and m (w2^2 - w1^2) = 1: theta = pi/4.
  const ReductionPipeline quarter(constant_params(1.0, 1.0, 1.0, 2.0, 1.0, 0.0));
  CHECK(quarter.angle().theta == doctest::Approx(M_PI / 4.0));
  CHECK(quarter.angle().valid);

  // Heavier second particle, no coupling: the gap is negative, theta = pi.
  const ReductionPipeline swapped(constant_params(1.0, 4.0, 1.0, 1.0, 0.0, 0.0));
  CHECK(swapped.angle().theta == doctest::Approx(M_PI));
  CHECK(swapped.angle().valid);
}

TEST_CASE("drifting decoupling angle is detected, not silently accepted") {
  const ReductionPipeline pipe(drifting_params());
  CHECK_FALSE(pipe.angle().valid);
  CHECK(pipe.angle().max_deviation > 1e-3);

  // Here phi = -t/2, so the pointwise angle is pi/2 + t modulo the branch.
  for (double t : {0.0, 0.4, 1.1, 2.7}) {
    const double expected = M_PI / 2.0 + t;
    CHECK(std::abs(std::remainder(pipe.theta_at(t) - expected, 2.0 * M_PI)) < 1e-9);
  }
}

TEST_CASE("normal frequencies") {
  // theta = pi/2 with equal effective frequencies 4 and coupling 1:
  // the half-angle projections each contribute 2, the cross term 1/2.
  const NormalFrequencies nf =
      normal_frequencies({4.0, 4.0}, 1.0, 1.0, M_PI / 2.0);
  CHECK(nf.Omega1 == doctest::Approx(std::sqrt(3.5)).epsilon(1e-14));
  CHECK(nf.Omega2 == doctest::Approx(std::sqrt(4.5)).epsilon(1e-14));
  CHECK(std::abs(nf.delta) < 1e-14);

  const NormalFrequencies plain = normal_frequencies({1.0, 2.0}, 0.0, 1.0, 0.0);
  CHECK(plain.Omega1 == doctest::Approx(1.0));
  CHECK(plain.Omega2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(plain.delta == 0.0);

  CHECK_THROWS_AS(normal_frequencies({-1.0, 2.0}, 0.0, 1.0, 0.0), InvalidFrequency);
  CHECK_THROWS_AS(normal_frequencies({1.0, 2.0}, 8.0, 1.0, M_PI / 2.0),
                  InvalidFrequency);
}

TEST_CASE("delta vanishes when theta comes from the decoupling condition") {
  for (const SystemParams& p :
       {constant_params(1.0, 1.0, 1.0, 1.0, 0.5, 0.0),     // symmetric coupling
        constant_params(1.0, 4.0, 1.0, 1.0, 0.0, 0.0),     // unequal masses
        constant_params(1.0, 1.0, 1.0, 2.0, 1.0, 0.0),     // pi/4 angle
        magnetic_params()}) {
    const ReductionPipeline pipe(p);
    REQUIRE(pipe.angle().valid);
    for (int i = 0; i <= 64; ++i) {
      const double t = p.t0 + (p.t1 - p.t0) * i / 64.0;
      const ReducedCoefficients rc = pipe.coefficients(t);
      const double scale =
          std::max(1.0, std::abs(rc.omega_tilde1_sq - rc.omega_tilde2_sq));
      CHECK(std::abs(rc.delta) < 1e-10 * scale);
    }
  }
}

TEST_CASE("coefficient traces and products over time-dependent scenarios") {
  for (const SystemParams& p : {breathing_params(), magnetic_params()}) {
    const ReductionPipeline pipe(p);
    for (int i = 0; i <= 64; ++i) {
      const double t = p.t0 + (p.t1 - p.t0) * i / 64.0;
      const ReducedCoefficients rc = pipe.coefficients(t);
      CHECK(rc.omega_c * rc.omega_c ==
            doctest::Approx(rc.omega1c * rc.omega2c).epsilon(1e-12));
      CHECK(rc.m * rc.m ==
            doctest::Approx(p.m1.value(t) * p.m2.value(t)).epsilon(1e-12));
      CHECK(rc.lambda1 + rc.lambda2 == doctest::Approx(rc.d1 + rc.d2).epsilon(1e-12));
      CHECK(rc.Omega1 * rc.Omega1 + rc.Omega2 * rc.Omega2 ==
            doctest::Approx(rc.omega_tilde1_sq + rc.omega_tilde2_sq).epsilon(1e-10));
    }
  }
}

TEST_CASE("identity scenario: the full chain is the identity map") {
  const ReductionPipeline pipe(constant_params(1.0, 1.0, 1.0, 1.0, 0.0, 0.0));
  PhaseSpaceState s;
  s.q1 = 0.2;
  s.q2 = -0.9;
  s.p1 = 1.4;
  s.p2 = 0.01;
  s.t = 3.0;
  const PhaseSpaceState n = pipe.map_state(s, Frame::Normal);
  CHECK(n.frame == Frame::Normal);
  CHECK(max_state_dev(n, s) < 1e-14);
}

TEST_CASE("scaling stage follows the mass-ratio quarter power") {
  const ReductionPipeline pipe(constant_params(4.0, 1.0, 1.0, 1.0, 0.0, 0.0));
  PhaseSpaceState s;
  s.q1 = 1.0;
  s.q2 = 1.0;
  s.p1 = 1.0;
  s.p2 = 1.0;
  s.t = 0.0;
  const double r = std::sqrt(2.0);  // (m1/m2)^{1/4}
  const PhaseSpaceState sc = pipe.map_state(s, Frame::Scaled);
  CHECK(sc.frame == Frame::Scaled);
  CHECK(sc.q1 == doctest::Approx(r));
  CHECK(sc.q2 == doctest::Approx(1.0 / r));
  CHECK(sc.p1 == doctest::Approx(1.0 / r));
  CHECK(sc.p2 == doctest::Approx(r));
}

TEST_CASE("round trips through every frame pair") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  SystemParams p = breathing_params();
  p.B = ParameterProfile::sinusoidal(0.4, 0.5, 0.3, 0.6);
  const ReductionPipeline pipe(p);
  for (Frame far : {Frame::Scaled, Frame::Rotated, Frame::Normal}) {
    for (int trial = 0; trial < 10; ++trial) {
      PhaseSpaceState s;
      s.q1 = uni(rng);
      s.q2 = uni(rng);
      s.p1 = uni(rng);
      s.p2 = uni(rng);
      s.t = 0.5 + 3.0 * trial / 10.0;
      const PhaseSpaceState back = pipe.map_state(pipe.map_state(s, far), Frame::Original);
      CHECK(max_state_dev(back, s) < 1e-12);
    }
  }
}

TEST_CASE("finite-difference Jacobians of every stage are symplectic") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SystemParams p = breathing_params();
  p.B = ParameterProfile::sinusoidal(0.4, 0.5, 0.3, 0.6);
  p.C3 = ParameterProfile::constant(0.2);
  const ReductionPipeline pipe(p);
  const double S[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
  const double eps = 1e-6;

  const Frame frames[] = {Frame::Original, Frame::Scaled, Frame::Rotated, Frame::Normal};
  for (int stage = 0; stage < 3; ++stage) {
    for (int trial = 0; trial < 25; ++trial) {
      PhaseSpaceState s;
      s.frame = frames[stage];
      s.q1 = uni(rng);
      s.q2 = uni(rng);
      s.p1 = uni(rng);
      s.p2 = uni(rng);
      s.t = 0.2 + 37.0 * trial / 25.0;
      double J[4][4];
      for (int col = 0; col < 4; ++col) {
        PhaseSpaceState plus = s, minus = s;
        (col == 0   ? plus.q1
         : col == 1 ? plus.q2
         : col == 2 ? plus.p1
                    : plus.p2) += eps;
        (col == 0   ? minus.q1
         : col == 1 ? minus.q2
         : col == 2 ? minus.p1
                    : minus.p2) -= eps;
        const PhaseSpaceState fp = pipe.map_state(plus, frames[stage + 1]);
        const PhaseSpaceState fm = pipe.map_state(minus, frames[stage + 1]);
        J[0][col] = (fp.q1 - fm.q1) / (2 * eps);
        J[1][col] = (fp.q2 - fm.q2) / (2 * eps);
        J[2][col] = (fp.p1 - fm.p1) / (2 * eps);
        J[3][col] = (fp.p2 - fm.p2) / (2 * eps);
      }
      double worst = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double acc = 0.0;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) acc += J[a][i] * S[a][b] * J[b][j];
          worst = std::max(worst, std::abs(acc - S[i][j]));
        }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("frame names and bad frame tags") {
  CHECK(std::string(frame_name(Frame::Original)) == "original");
  CHECK(std::string(frame_name(Frame::Scaled)) == "scaled");
  CHECK(std::string(frame_name(Frame::Rotated)) == "rotated");
  CHECK(std::string(frame_name(Frame::Normal)) == "normal");

  const ReductionPipeline pipe(constant_params(1.0, 1.0, 1.0, 1.0, 0.0, 0.0));
  PhaseSpaceState s;
  s.frame = static_cast<Frame>(42);
  CHECK_THROWS_AS(pipe.map_state(s, Frame::Normal), FrameMismatch);
}
