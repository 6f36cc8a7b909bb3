#pragma once

#include <memory>

#include "tdosc/profiles.hpp"
#include "tdosc/quadrature.hpp"

namespace tdosc {

enum class Frame { Original, Scaled, Rotated, Normal };

const char* frame_name(Frame f);

struct Cyclotron {
  double omega1c, omega2c, omega_c, m;
};

struct Stiffness {
  double c1, c2, c3;
};

struct ScaledStiffness {
  double d1, d2, d3;
};

struct MassDerivatives {
  double m, m_dot, m_ddot;
};

struct RotatedCoefficients {
  double lambda1, lambda2, lambda3;
};

struct EffectiveFrequencies {
  double w1_sq, w2_sq;
};

struct NormalFrequencies {
  double Omega1, Omega2, delta;
  double Omega1_sq, Omega2_sq;
};

/// omega_ic = e B / m_i, omega_c = e B / m, m = sqrt(m1 m2).
Cyclotron cyclotron(const SystemParams& params, double t);

/// c1 = C1 + m2 omega2c^2 / 4, c2 = C2 + m1 omega1c^2 / 4, c3 = C3.
Stiffness stiffness(const SystemParams& params, double t);

/// d1 = c1 sqrt(m2/m1), d2 = c2 sqrt(m1/m2), d3 = c3.
ScaledStiffness scaled_stiffness(const SystemParams& params, double t);

/// m = sqrt(m1 m2) with its first and second time derivatives from the
/// profile derivatives.
MassDerivatives mass_derivatives(const SystemParams& params, double t);

/// lambda_i from d_i and the rotation phase phi.
RotatedCoefficients rotated_coefficients(const ScaledStiffness& d, double phi);

/// w_i^2 = lambda_i / m + (1/4)(m_dot^2/m^2 - 2 m_ddot/m).
EffectiveFrequencies effective_frequencies(const RotatedCoefficients& lam,
                                           const MassDerivatives& md);

/// Normal-mode squared frequencies and residual coupling delta for a given
/// decoupling angle theta. Throws InvalidFrequency when either squared
/// frequency is non-positive.
NormalFrequencies normal_frequencies(const EffectiveFrequencies& w,
                                     double lambda3, double m, double theta);

/// One-shot rotation phase phi(t) = -(1/2) Integral_{t0}^{t} omega_c dt',
/// adaptive quadrature with the given absolute tolerance.
double rotation_phase(const SystemParams& params, double t, double abs_tol = 1e-10);

/// Everything derived at one time, as emitted by the reduce subcommand.
struct ReducedCoefficients {
  double t;
  double omega1c, omega2c, omega_c;
  double m, m_dot, m_ddot;
  double c1, c2, c3;
  double d1, d2, d3;
  double phi;
  double lambda1, lambda2, lambda3;
  double omega_tilde1_sq, omega_tilde2_sq;
  double theta;
  double Omega1, Omega2, delta;
};

struct DecouplingAngle {
  double theta = 0.0;          // value at t0, range (-pi, pi]
  double max_deviation = 0.0;  // sup over samples of wrapped |theta(t) - theta|
  bool valid = false;          // max_deviation < tolerance
};

struct PhaseSpaceState {
  Frame frame = Frame::Original;
  double q1 = 0.0, q2 = 0.0;
  double p1 = 0.0, p2 = 0.0;
  double t = 0.0;
};

/// Evaluator for one scenario: owns the parameter set, the checkpointed
/// phi(t) accumulator and the decoupling angle (sampled once at
/// construction). Immutable afterwards; safe for concurrent reads.
class ReductionPipeline {
 public:
  explicit ReductionPipeline(SystemParams params, double theta_tolerance = 1e-8,
                             int theta_samples = 256);

  const SystemParams& params() const { return params_; }
  const DecouplingAngle& angle() const { return angle_; }

  double phi(double t) const;

  /// theta(t) from the atan2 branch of the decoupling condition, not the
  /// constant returned by angle().
  double theta_at(double t) const;

  ReducedCoefficients coefficients(double t) const;

  /// Applies (or inverts) the stage maps to carry a state to target frame;
  /// multi-stage compositions walk the chain one stage at a time.
  PhaseSpaceState map_state(const PhaseSpaceState& state, Frame target) const;

 private:
  SystemParams params_;
  std::shared_ptr<const PhaseAccumulator> phi_acc_;  // null when B is identically zero
  DecouplingAngle angle_;
};

}  // namespace tdosc
