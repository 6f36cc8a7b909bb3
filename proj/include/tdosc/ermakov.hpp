#pragma once

#include <functional>
#include <memory>

#include "tdosc/ode.hpp"
#include "tdosc/quadrature.hpp"

namespace tdosc {

using FrequencyFn = std::function<double(double)>;  // Omega^2(t)

/// Two linear solutions of u'' + Omega^2(t) u = 0 with u(t0)=1, u'(t0)=0,
/// v(t0)=0, v'(t0)=1 (Wronskian 1), dense over [t0, t1].
class LinearPair {
 public:
  LinearPair(OdeSolution sol, double t0, double t1);

  /// (u, u_dot, v, v_dot) at t.
  void at(double t, double& u, double& u_dot, double& v, double& v_dot) const;
  double wronskian(double t) const;
  double t0() const { return t0_; }
  double t1() const { return t1_; }

 private:
  OdeSolution sol_;  // state (u, u', v, v')
  double t0_, t1_;
};

LinearPair solve_linear_pair(const FrequencyFn& Omega_sq, double t0, double t1,
                             const SolverOptions& opts = {});

/// Pinney coefficients for rho = sqrt(A u^2 + 2 B u v + C v^2); requires
/// A C - B^2 = 1 (unit Wronskian). Defaults give rho(t0)=1, rho_dot(t0)=0.
struct PinneyCoefficients {
  double A = 1.0, B = 0.0, C = 1.0;
};

/// Equilibrium branch for constant Omega: rho = Omega^{-1/2} identically.
PinneyCoefficients equilibrium_branch(double Omega);

/// One Ermakov mode: rho solves rho'' + Omega^2(t) rho = 1/rho^3, together
/// with the accumulated phase integral of rho^{-2} from t0.
class ErmakovMode {
 public:
  ErmakovMode(std::shared_ptr<const LinearPair> pair, PinneyCoefficients pc,
              double phase_abs_tol = 1e-10);

  double rho(double t) const;
  double rho_dot(double t) const;
  /// rho_ddot reconstructed from the linear states (uses the Wronskian
  /// identity, no finite differences).
  double rho_ddot(double t, double Omega_sq) const;
  /// Integral_{t0}^{t} rho^{-2} dt'.
  double phase(double t) const;
  double wronskian(double t) const;
  const PinneyCoefficients& pinney() const { return pc_; }

 private:
  void eval(double t, double& rho, double& rho_dot, double& u, double& u_dot,
            double& v, double& v_dot) const;
  std::shared_ptr<const LinearPair> pair_;
  PinneyCoefficients pc_;
  PhaseAccumulator phase_;
};

ErmakovMode pinney_compose(const LinearPair& pair, PinneyCoefficients pc = {});

/// |rho_ddot rho^3 + Omega^2 rho^4 - 1| with rho_ddot from the ODE states.
double ermakov_residual(const ErmakovMode& mode, const FrequencyFn& Omega_sq, double t);

/// Both auxiliary modes on a shared mesh, plus everything the CSV emitter
/// and the quantum layer need.
class ErmakovSolution {
 public:
  ErmakovSolution(ErmakovMode mode1, ErmakovMode mode2, std::vector<double> mesh);

  const ErmakovMode& mode(int i) const;  // i = 0 or 1
  const std::vector<double>& mesh() const { return mesh_; }

 private:
  ErmakovMode modes_[2];
  std::vector<double> mesh_;
};

ErmakovSolution solve_ermakov(const FrequencyFn& Omega1_sq, const FrequencyFn& Omega2_sq,
                              double t0, double t1, int mesh_points = 257,
                              const SolverOptions& opts = {},
                              PinneyCoefficients pc1 = {}, PinneyCoefficients pc2 = {});

}  // namespace tdosc
