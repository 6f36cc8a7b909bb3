#include "tdosc/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace tdosc {
namespace {

OdeRhs original_rhs(const ReductionPipeline& pipe) {
  const SystemParams& params = pipe.params();
  return [&params](double t, const double* y, double* dydt) {
    const Cyclotron cyc = cyclotron(params, t);
    const Stiffness c = stiffness(params, t);
    const double m1 = params.m1.value(t);
    const double m2 = params.m2.value(t);
    const double X1 = y[0], X2 = y[1], P1 = y[2], P2 = y[3];
    dydt[0] = P1 / m1 - 0.5 * cyc.omega1c * X2;
    dydt[1] = P2 / m2 + 0.5 * cyc.omega2c * X1;
    dydt[2] = -c.c1 * X1 - 0.5 * c.c3 * X2 - 0.5 * cyc.omega2c * P2;
    dydt[3] = -c.c2 * X2 - 0.5 * c.c3 * X1 + 0.5 * cyc.omega1c * P1;
  };
}

OdeRhs normal_rhs(const ReductionPipeline& pipe) {
  return [&pipe](double t, const double* y, double* dydt) {
    const ReducedCoefficients rc = pipe.coefficients(t);
    dydt[0] = y[2];
    dydt[1] = y[3];
    dydt[2] = -rc.Omega1 * rc.Omega1 * y[0];
    dydt[3] = -rc.Omega2 * rc.Omega2 * y[1];
  };
}

}  // namespace

double hamiltonian_value(const PhaseSpaceState& state, const ReductionPipeline& pipe) {
  if (state.frame == Frame::Original) {
    const SystemParams& params = pipe.params();
    const Cyclotron cyc = cyclotron(params, state.t);
    const Stiffness c = stiffness(params, state.t);
    const double m1 = params.m1.value(state.t);
    const double m2 = params.m2.value(state.t);
    return state.p1 * state.p1 / (2.0 * m1) + state.p2 * state.p2 / (2.0 * m2) +
           0.5 * cyc.omega2c * state.q1 * state.p2 -
           0.5 * cyc.omega1c * state.q2 * state.p1 +
           0.5 * (c.c1 * state.q1 * state.q1 + c.c2 * state.q2 * state.q2 +
                  c.c3 * state.q1 * state.q2);
  }
  if (state.frame == Frame::Normal) {
    const ReducedCoefficients rc = pipe.coefficients(state.t);
    return 0.5 * (state.p1 * state.p1 + state.p2 * state.p2) +
           0.5 * (rc.Omega1 * rc.Omega1 * state.q1 * state.q1 +
                  rc.Omega2 * rc.Omega2 * state.q2 * state.q2);
  }
  throw FrameMismatch(std::string("no Hamiltonian for the ") +
                      frame_name(state.frame) + " frame");
}

Trajectory propagate(const PhaseSpaceState& state, const ReductionPipeline& pipe,
                     double t1, int n_samples, const SolverOptions& opts) {
  if (state.frame != Frame::Original && state.frame != Frame::Normal)
    throw FrameMismatch(std::string("cannot propagate in the ") +
                        frame_name(state.frame) + " frame");
  const OdeRhs rhs =
      state.frame == Frame::Original ? original_rhs(pipe) : normal_rhs(pipe);
  const std::vector<double> y0{state.q1, state.q2, state.p1, state.p2};
  const OdeSolution sol = integrate_ode(rhs, 4, y0, state.t, t1, opts);

  Trajectory traj;
  traj.frame = state.frame;
  traj.solver_stats = sol.stats();
  const int n = std::max(2, n_samples);
  traj.samples.reserve(n);
  double y[4];
  for (int i = 0; i < n; ++i) {
    const double t =
        i + 1 == n ? t1 : state.t + (t1 - state.t) * static_cast<double>(i) / (n - 1);
    sol.at(t, y);
    traj.samples.push_back(PhaseSpaceState{state.frame, y[0], y[1], y[2], y[3], t});
  }
  return traj;
}

double consistency_check(const PhaseSpaceState& state, const ReductionPipeline& pipe,
                         double t1, int n_samples, const SolverOptions& opts) {
  const PhaseSpaceState start = pipe.map_state(state, Frame::Original);
  const Trajectory direct = propagate(start, pipe, t1, n_samples, opts);
  const PhaseSpaceState start_normal = pipe.map_state(start, Frame::Normal);
  const Trajectory routed = propagate(start_normal, pipe, t1, n_samples, opts);

  double dev = 0.0;
  for (size_t i = 0; i < direct.samples.size(); ++i) {
    PhaseSpaceState back = routed.samples[i];
    back.t = direct.samples[i].t;  // guard against endpoint rounding
    back = pipe.map_state(back, Frame::Original);
    dev = std::max(dev, std::abs(back.q1 - direct.samples[i].q1));
    dev = std::max(dev, std::abs(back.q2 - direct.samples[i].q2));
    dev = std::max(dev, std::abs(back.p1 - direct.samples[i].p1));
    dev = std::max(dev, std::abs(back.p2 - direct.samples[i].p2));
  }
  return dev;
}

double classical_invariant(const PhaseSpaceState& state, double rho1, double rho1_dot,
                           double rho2, double rho2_dot) {
  if (state.frame != Frame::Normal)
    throw FrameMismatch("classical invariant is defined in the normal frame");
  if (rho1 == 0.0 || rho2 == 0.0)
    throw ZeroRho("auxiliary amplitude vanished");
  const double a1 = state.q1 / rho1;
  const double b1 = rho1 * state.p1 - rho1_dot * state.q1;
  const double a2 = state.q2 / rho2;
  const double b2 = rho2 * state.p2 - rho2_dot * state.q2;
  return 0.5 * (a1 * a1 + b1 * b1) + 0.5 * (a2 * a2 + b2 * b2);
}

}  // namespace tdosc
