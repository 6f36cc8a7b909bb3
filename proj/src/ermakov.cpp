#include "tdosc/ermakov.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace tdosc {

LinearPair::LinearPair(OdeSolution sol, double t0, double t1)
    : sol_(std::move(sol)), t0_(t0), t1_(t1) {
  if (sol_.dim() != 4) throw std::invalid_argument("linear pair needs a 4-dim state");
}

void LinearPair::at(double t, double& u, double& u_dot, double& v,
                    double& v_dot) const {
  double y[4];
  sol_.at(t, y);
  u = y[0];
  u_dot = y[1];
  v = y[2];
  v_dot = y[3];
}

double LinearPair::wronskian(double t) const {
  double u, ud, v, vd;
  at(t, u, ud, v, vd);
  return u * vd - v * ud;
}

LinearPair solve_linear_pair(const FrequencyFn& Omega_sq, double t0, double t1,
                             const SolverOptions& opts) {
  auto rhs = [&Omega_sq](double t, const double* y, double* dydt) {
    const double w2 = Omega_sq(t);
    dydt[0] = y[1];
    dydt[1] = -w2 * y[0];
    dydt[2] = y[3];
    dydt[3] = -w2 * y[2];
  };
  const std::vector<double> y0{1.0, 0.0, 0.0, 1.0};
  return LinearPair(integrate_ode(rhs, 4, y0, t0, t1, opts), t0, t1);
}

PinneyCoefficients equilibrium_branch(double Omega) {
  if (Omega <= 0.0)
    throw InvalidFrequency("equilibrium branch needs a positive frequency");
  return PinneyCoefficients{1.0 / Omega, 0.0, Omega};
}

namespace {

PinneyCoefficients checked_pinney(PinneyCoefficients pc) {
  if (pc.A <= 0.0 || std::abs(pc.A * pc.C - pc.B * pc.B - 1.0) > 1e-9)
    throw std::invalid_argument("Pinney coefficients must satisfy A > 0, AC - B^2 = 1");
  return pc;
}

}  // namespace

ErmakovMode::ErmakovMode(std::shared_ptr<const LinearPair> pair, PinneyCoefficients pc,
                         double phase_abs_tol)
    : pair_(std::move(pair)),
      pc_(checked_pinney(pc)),
      phase_(
          [p = pair_, pc](double t) {
            double u, ud, v, vd;
            p->at(t, u, ud, v, vd);
            return 1.0 / (pc.A * u * u + 2.0 * pc.B * u * v + pc.C * v * v);
          },
          pair_->t0(), pair_->t1(), phase_abs_tol) {}

void ErmakovMode::eval(double t, double& rho, double& rho_dot, double& u,
                       double& u_dot, double& v, double& v_dot) const {
  pair_->at(t, u, u_dot, v, v_dot);
  const double r2 = pc_.A * u * u + 2.0 * pc_.B * u * v + pc_.C * v * v;
  if (r2 <= 0.0) throw ZeroRho("auxiliary amplitude vanished");
  rho = std::sqrt(r2);
  rho_dot = (pc_.A * u * u_dot + pc_.B * (u_dot * v + u * v_dot) +
             pc_.C * v * v_dot) /
            rho;
}

double ErmakovMode::rho(double t) const {
  double r, rd, u, ud, v, vd;
  eval(t, r, rd, u, ud, v, vd);
  return r;
}

double ErmakovMode::rho_dot(double t) const {
  double r, rd, u, ud, v, vd;
  eval(t, r, rd, u, ud, v, vd);
  return rd;
}

double ErmakovMode::rho_ddot(double t, double Omega_sq) const {
  double r, rd, u, ud, v, vd;
  eval(t, r, rd, u, ud, v, vd);
  const double dot_form = pc_.A * ud * ud + 2.0 * pc_.B * ud * vd + pc_.C * vd * vd;
  return (dot_form - Omega_sq * r * r - rd * rd) / r;
}

double ErmakovMode::phase(double t) const { return phase_.integral_to(t); }

double ErmakovMode::wronskian(double t) const { return pair_->wronskian(t); }

ErmakovMode pinney_compose(const LinearPair& pair, PinneyCoefficients pc) {
  return ErmakovMode(std::make_shared<LinearPair>(pair), pc);
}

double ermakov_residual(const ErmakovMode& mode, const FrequencyFn& Omega_sq,
                        double t) {
  const double r = mode.rho(t);
  const double w2 = Omega_sq(t);
  const double rdd = mode.rho_ddot(t, w2);
  return std::abs(rdd * r * r * r + w2 * r * r * r * r - 1.0);
}

ErmakovSolution::ErmakovSolution(ErmakovMode mode1, ErmakovMode mode2,
                                 std::vector<double> mesh)
    : modes_{std::move(mode1), std::move(mode2)}, mesh_(std::move(mesh)) {}

const ErmakovMode& ErmakovSolution::mode(int i) const {
  if (i != 0 && i != 1) throw OutOfRange("mode index must be 0 or 1");
  return modes_[i];
}

ErmakovSolution solve_ermakov(const FrequencyFn& Omega1_sq, const FrequencyFn& Omega2_sq,
                              double t0, double t1, int mesh_points,
                              const SolverOptions& opts, PinneyCoefficients pc1,
                              PinneyCoefficients pc2) {
  auto pair1 = std::make_shared<LinearPair>(solve_linear_pair(Omega1_sq, t0, t1, opts));
  auto pair2 = std::make_shared<LinearPair>(solve_linear_pair(Omega2_sq, t0, t1, opts));
  ErmakovMode m1(std::move(pair1), pc1);
  ErmakovMode m2(std::move(pair2), pc2);

  const int n = std::max(2, mesh_points);
  std::vector<double> mesh(n);
  for (int i = 0; i < n; ++i)
    mesh[i] = i + 1 == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / (n - 1);
  return ErmakovSolution(std::move(m1), std::move(m2), std::move(mesh));
}

}  // namespace tdosc
