#include "tdosc/quantum.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tdosc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

void check_order(int n, int max_order) {
  if (n < 0 || n > max_order)
    throw OutOfRange("Hermite order " + std::to_string(n) + " outside [0, " +
                     std::to_string(max_order) + "]");
}

}  // namespace

double hermite(int n, double x, int max_order) {
  check_order(n, max_order);
  if (n == 0) return 1.0;
  double hm = 1.0;        // H_{k-1}
  double h = 2.0 * x;     // H_k
  for (int k = 1; k < n; ++k) {
    const double hp = 2.0 * x * h - 2.0 * k * hm;
    hm = h;
    h = hp;
  }
  return h;
}

double eigenvalue(const QuantumNumbers& n, double hbar) {
  check_order(n.n1, kMaxHermiteOrder);
  check_order(n.n2, kMaxHermiteOrder);
  return hbar * (n.n1 + n.n2 + 1);
}

Complex xi(const QuantumNumbers& n, double X1, double X2, double rho1,
           double rho1_dot, double rho2, double rho2_dot, double hbar) {
  check_order(n.n1, kMaxHermiteOrder);
  check_order(n.n2, kMaxHermiteOrder);
  if (rho1 <= 0.0 || rho2 <= 0.0) throw ZeroRho("auxiliary amplitude vanished");

  const double log_norm =
      0.5 * (-std::log(kPi * hbar) - (n.n1 + n.n2) * kLn2 - std::lgamma(n.n1 + 1.0) -
             std::lgamma(n.n2 + 1.0) - std::log(rho1) - std::log(rho2));
  const double sh = std::sqrt(hbar);
  const double h1 = hermite(n.n1, X1 / (sh * rho1));
  const double h2 = hermite(n.n2, X2 / (sh * rho2));
  const Complex g1 = Complex(rho1_dot / rho1, 1.0 / (rho1 * rho1));
  const Complex g2 = Complex(rho2_dot / rho2, 1.0 / (rho2 * rho2));
  const Complex expo =
      Complex(0.0, 0.5 / hbar) * (g1 * X1 * X1 + g2 * X2 * X2);
  return std::exp(log_norm) * h1 * h2 * std::exp(expo);
}

double alpha_phase(const QuantumNumbers& n, double t, const ErmakovSolution& erm) {
  return -(n.n1 + 0.5) * erm.mode(0).phase(t) - (n.n2 + 0.5) * erm.mode(1).phase(t);
}

Complex chi(const QuantumNumbers& n, double X1, double X2, double t,
            const ErmakovSolution& erm, double hbar) {
  const double r1 = erm.mode(0).rho(t);
  const double r1d = erm.mode(0).rho_dot(t);
  const double r2 = erm.mode(1).rho(t);
  const double r2d = erm.mode(1).rho_dot(t);
  const double a = alpha_phase(n, t, erm);
  return std::exp(Complex(0.0, a)) * xi(n, X1, X2, r1, r1d, r2, r2d, hbar);
}

QuantumContext::QuantumContext(const ReductionPipeline& pipe, int mesh_points,
                               const SolverOptions& opts)
    : pipe_(pipe),
      erm_(solve_ermakov(
          [&pipe](double t) {
            const ReducedCoefficients rc = pipe.coefficients(t);
            return rc.Omega1 * rc.Omega1;
          },
          [&pipe](double t) {
            const ReducedCoefficients rc = pipe.coefficients(t);
            return rc.Omega2 * rc.Omega2;
          },
          pipe.params().t0, pipe.params().t1, mesh_points, opts)) {
  if (!pipe.angle().valid)
    throw InvalidScenario(
        "decoupling angle drifts by " + std::to_string(pipe.angle().max_deviation) +
        " over the interval; the transformed-system solutions do not apply");
}

PhaseCoefficients phase_coefficients(const QuantumNumbers& n, double t,
                                     const QuantumContext& ctx) {
  const ErmakovSolution& erm = ctx.ermakov();
  const double r1 = erm.mode(0).rho(t);
  const double r1d = erm.mode(0).rho_dot(t);
  const double r2 = erm.mode(1).rho(t);
  const double r2d = erm.mode(1).rho_dot(t);
  const MassDerivatives md = mass_derivatives(ctx.pipeline().params(), t);
  PhaseCoefficients pc;
  pc.gamma = Complex(r1d / r1 - 0.5 * md.m_dot, 1.0 / (r1 * r1));
  pc.beta = Complex(r2d / r2 - 0.5 * md.m_dot, 1.0 / (r2 * r2));
  pc.alpha = alpha_phase(n, t, erm);
  return pc;
}

Complex psi_compositional(const QuantumNumbers& n, double X1, double X2, double t,
                          const QuantumContext& ctx) {
  const ReductionPipeline& pipe = ctx.pipeline();
  const SystemParams& params = pipe.params();
  const double m1 = params.m1.value(t);
  const double m2 = params.m2.value(t);
  const MassDerivatives md = mass_derivatives(params, t);
  const double hbar = ctx.hbar();
  const double a = pipe.phi(t) + 0.5 * ctx.theta();
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  const double s1 = std::sqrt(m1);
  const double s2 = std::sqrt(m2);

  // Normal coordinates of the original-frame point (the three substitution
  // operators composed), then the mass-removal phase and the dilation amplitude.
  const double Y1 = ca * s1 * X1 - sa * s2 * X2;
  const double Y2 = sa * s1 * X1 + ca * s2 * X2;
  const Complex phase = std::exp(
      Complex(0.0, -md.m_dot * (m1 * X1 * X1 + m2 * X2 * X2) / (4.0 * hbar * md.m)));
  return std::sqrt(md.m) * phase * chi(n, Y1, Y2, t, ctx.ermakov(), hbar);
}

Complex psi_closed_form(const QuantumNumbers& n, double X1, double X2, double t,
                        const QuantumContext& ctx) {
  check_order(n.n1, kMaxHermiteOrder);
  check_order(n.n2, kMaxHermiteOrder);
  const ReductionPipeline& pipe = ctx.pipeline();
  const SystemParams& params = pipe.params();
  const double m1 = params.m1.value(t);
  const double m2 = params.m2.value(t);
  const double hbar = ctx.hbar();
  const double phi = pipe.phi(t);
  const double theta = ctx.theta();
  const double a = phi + 0.5 * theta;

  const ErmakovSolution& erm = ctx.ermakov();
  const double r1 = erm.mode(0).rho(t);
  const double r2 = erm.mode(1).rho(t);
  if (r1 <= 0.0 || r2 <= 0.0) throw ZeroRho("auxiliary amplitude vanished");

  const double log_pre =
      0.5 * (0.5 * std::log(m1 * m2) - std::log(kPi * hbar) -
             std::lgamma(n.n1 + 1.0) - std::lgamma(n.n2 + 1.0) -
             (n.n1 + n.n2) * kLn2 - std::log(r1) - std::log(r2));

  const double sh = std::sqrt(hbar);
  const double s1 = std::sqrt(m1);
  const double s2 = std::sqrt(m2);
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  const double h1 =
      hermite(n.n1, (s1 * ca * X1 - s2 * sa * X2) / (sh * r1));
  const double h2 =
      hermite(n.n2, (s1 * sa * X1 + s2 * ca * X2) / (sh * r2));

  const PhaseCoefficients pc = phase_coefficients(n, t, ctx);
  const Complex avg = 0.5 * (pc.gamma + pc.beta);
  const Complex half_diff = 0.5 * (pc.beta - pc.gamma);
  const double s2a = std::sin(theta + 2.0 * phi);
  const double c2a = std::cos(theta + 2.0 * phi);

  const Complex expo =
      Complex(0.0, 0.5 * m1 / hbar) * (avg + half_diff * s2a) * (X1 * X1) +
      Complex(0.0, 0.5 * m2 / hbar) * (avg - half_diff * s2a) * (X2 * X2) +
      Complex(0.0, 0.5 / hbar) * s1 * s2 * (pc.beta - pc.gamma) * c2a * (X1 * X2) +
      Complex(0.0, pc.alpha);
  return std::exp(log_pre) * h1 * h2 * std::exp(expo);
}

}  // namespace tdosc
