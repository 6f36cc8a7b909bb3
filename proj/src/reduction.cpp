#include "tdosc/reduction.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tdosc {
namespace {

constexpr double kPi = std::numbers::pi;

int frame_index(Frame f) {
  const int i = static_cast<int>(f);
  if (i < 0 || i > 3) throw FrameMismatch("unknown frame tag");
  return i;
}

}  // namespace

const char* frame_name(Frame f) {
  switch (f) {
    case Frame::Original: return "original";
    case Frame::Scaled: return "scaled";
    case Frame::Rotated: return "rotated";
    case Frame::Normal: return "normal";
  }
  throw FrameMismatch("unknown frame tag");
}

Cyclotron cyclotron(const SystemParams& params, double t) {
  const double m1 = params.m1.value(t);
  const double m2 = params.m2.value(t);
  const double B = params.B.value(t);
  Cyclotron out;
  out.omega1c = params.e * B / m1;
  out.omega2c = params.e * B / m2;
  out.m = std::sqrt(m1 * m2);
  out.omega_c = params.e * B / out.m;
  return out;
}

Stiffness stiffness(const SystemParams& params, double t) {
  const Cyclotron cyc = cyclotron(params, t);
  const double m1 = params.m1.value(t);
  const double m2 = params.m2.value(t);
  Stiffness out;
  out.c1 = params.C1.value(t) + 0.25 * m2 * cyc.omega2c * cyc.omega2c;
  out.c2 = params.C2.value(t) + 0.25 * m1 * cyc.omega1c * cyc.omega1c;
  out.c3 = params.C3.value(t);
  return out;
}

ScaledStiffness scaled_stiffness(const SystemParams& params, double t) {
  const Stiffness c = stiffness(params, t);
  const double ratio = std::sqrt(params.m2.value(t) / params.m1.value(t));
  return ScaledStiffness{c.c1 * ratio, c.c2 / ratio, c.c3};
}

MassDerivatives mass_derivatives(const SystemParams& params, double t) {
  const double m1 = params.m1.value(t);
  const double m2 = params.m2.value(t);
  const double m1d = params.m1.derivative(t, 1);
  const double m2d = params.m2.derivative(t, 1);
  const double m1dd = params.m1.derivative(t, 2);
  const double m2dd = params.m2.derivative(t, 2);
  MassDerivatives md;
  md.m = std::sqrt(m1 * m2);
  md.m_dot = (m1d * m2 + m1 * m2d) / (2.0 * md.m);
  md.m_ddot = (m1dd * m2 + 2.0 * m1d * m2d + m1 * m2dd) / (2.0 * md.m) -
              md.m_dot * md.m_dot / md.m;
  return md;
}

RotatedCoefficients rotated_coefficients(const ScaledStiffness& d, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  RotatedCoefficients lam;
  lam.lambda1 = d.d1 * c * c + d.d2 * s * s - d.d3 * s * c;
  lam.lambda2 = d.d2 * c * c + d.d1 * s * s + d.d3 * s * c;
  lam.lambda3 = 2.0 * (d.d1 - d.d2) * s * c + d.d3 * (c * c - s * s);
  return lam;
}

EffectiveFrequencies effective_frequencies(const RotatedCoefficients& lam,
                                           const MassDerivatives& md) {
  const double mass_term =
      0.25 * (md.m_dot * md.m_dot / (md.m * md.m) - 2.0 * md.m_ddot / md.m);
  return EffectiveFrequencies{lam.lambda1 / md.m + mass_term,
                              lam.lambda2 / md.m + mass_term};
}

NormalFrequencies normal_frequencies(const EffectiveFrequencies& w, double lambda3,
                                     double m, double theta) {
  const double ch = std::cos(0.5 * theta);
  const double sh = std::sin(0.5 * theta);
  const double cross = lambda3 * std::sin(theta) / (2.0 * m);
  NormalFrequencies nf;
  nf.Omega1_sq = w.w1_sq * ch * ch + w.w2_sq * sh * sh - cross;
  nf.Omega2_sq = w.w1_sq * sh * sh + w.w2_sq * ch * ch + cross;
  nf.delta = 0.5 * (w.w1_sq - w.w2_sq) * std::sin(theta) +
             lambda3 * std::cos(theta) / (2.0 * m);
  if (nf.Omega1_sq <= 0.0 || nf.Omega2_sq <= 0.0)
    throw InvalidFrequency("non-positive normal-mode squared frequency (" +
                           std::to_string(nf.Omega1_sq) + ", " +
                           std::to_string(nf.Omega2_sq) + ")");
  nf.Omega1 = std::sqrt(nf.Omega1_sq);
  nf.Omega2 = std::sqrt(nf.Omega2_sq);
  return nf;
}

double rotation_phase(const SystemParams& params, double t, double abs_tol) {
  auto integrand = [&params](double s) {
    const double m = std::sqrt(params.m1.value(s) * params.m2.value(s));
    return -0.5 * params.e * params.B.value(s) / m;
  };
  return integrate(integrand, params.t0, t, abs_tol).value;
}

ReductionPipeline::ReductionPipeline(SystemParams params, double theta_tolerance,
                                     int theta_samples)
    : params_(std::move(params)) {
  const bool zero_field = params_.B.kind() == ProfileKind::Constant &&
                          params_.B.value(params_.t0) == 0.0;
  if (!zero_field) {
    SystemParams p = params_;  // captured by value: accumulator outlives copies
    phi_acc_ = std::make_shared<PhaseAccumulator>(
        [p](double s) {
          return -0.5 * p.e * p.B.value(s) /
                 std::sqrt(p.m1.value(s) * p.m2.value(s));
        },
        params_.t0, params_.t1);
  }

  angle_.theta = theta_at(params_.t0);
  const int n = std::max(2, theta_samples);
  double dev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t =
        params_.t0 + (params_.t1 - params_.t0) * static_cast<double>(i) / (n - 1);
    const double wrapped = std::remainder(theta_at(t) - angle_.theta, 2.0 * kPi);
    dev = std::max(dev, std::abs(wrapped));
  }
  angle_.max_deviation = dev;
  angle_.valid = dev < theta_tolerance;
}

double ReductionPipeline::phi(double t) const {
  if (!phi_acc_) return 0.0;
  return phi_acc_->integral_to(t);
}

double ReductionPipeline::theta_at(double t) const {
  const ScaledStiffness d = scaled_stiffness(params_, t);
  const RotatedCoefficients lam = rotated_coefficients(d, phi(t));
  const MassDerivatives md = mass_derivatives(params_, t);
  const EffectiveFrequencies w = effective_frequencies(lam, md);
  const double gap = md.m * (w.w2_sq - w.w1_sq);
  if (lam.lambda3 == 0.0 && gap == 0.0) return 0.0;
  double theta = std::atan2(lam.lambda3, gap);
  if (theta <= -kPi) theta = kPi;  // branch convention: theta in (-pi, pi]
  return theta;
}

ReducedCoefficients ReductionPipeline::coefficients(double t) const {
  const Cyclotron cyc = cyclotron(params_, t);
  const Stiffness c = stiffness(params_, t);
  const ScaledStiffness d = scaled_stiffness(params_, t);
  const MassDerivatives md = mass_derivatives(params_, t);
  const double ph = phi(t);
  const RotatedCoefficients lam = rotated_coefficients(d, ph);
  const EffectiveFrequencies w = effective_frequencies(lam, md);
  const NormalFrequencies nf =
      normal_frequencies(w, lam.lambda3, md.m, angle_.theta);

  ReducedCoefficients rc;
  rc.t = t;
  rc.omega1c = cyc.omega1c;
  rc.omega2c = cyc.omega2c;
  rc.omega_c = cyc.omega_c;
  rc.m = md.m;
  rc.m_dot = md.m_dot;
  rc.m_ddot = md.m_ddot;
  rc.c1 = c.c1;
  rc.c2 = c.c2;
  rc.c3 = c.c3;
  rc.d1 = d.d1;
  rc.d2 = d.d2;
  rc.d3 = d.d3;
  rc.phi = ph;
  rc.lambda1 = lam.lambda1;
  rc.lambda2 = lam.lambda2;
  rc.lambda3 = lam.lambda3;
  rc.omega_tilde1_sq = w.w1_sq;
  rc.omega_tilde2_sq = w.w2_sq;
  rc.theta = angle_.theta;
  rc.Omega1 = nf.Omega1;
  rc.Omega2 = nf.Omega2;
  rc.delta = nf.delta;
  return rc;
}

namespace {

PhaseSpaceState scale_map(const PhaseSpaceState& s, const SystemParams& params,
                          bool forward) {
  const double r =
      std::pow(params.m1.value(s.t) / params.m2.value(s.t), 0.25);
  PhaseSpaceState out = s;
  if (forward) {  // original -> scaled
    out.q1 = r * s.q1;
    out.q2 = s.q2 / r;
    out.p1 = s.p1 / r;
    out.p2 = r * s.p2;
    out.frame = Frame::Scaled;
  } else {
    out.q1 = s.q1 / r;
    out.q2 = r * s.q2;
    out.p1 = r * s.p1;
    out.p2 = s.p2 / r;
    out.frame = Frame::Original;
  }
  return out;
}

PhaseSpaceState rotate_map(const PhaseSpaceState& s, double phi, bool forward) {
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  PhaseSpaceState out = s;
  if (forward) {  // scaled -> rotated
    out.q1 = c * s.q1 - sn * s.q2;
    out.q2 = sn * s.q1 + c * s.q2;
    out.p1 = c * s.p1 - sn * s.p2;
    out.p2 = sn * s.p1 + c * s.p2;
    out.frame = Frame::Rotated;
  } else {
    out.q1 = c * s.q1 + sn * s.q2;
    out.q2 = -sn * s.q1 + c * s.q2;
    out.p1 = c * s.p1 + sn * s.p2;
    out.p2 = -sn * s.p1 + c * s.p2;
    out.frame = Frame::Scaled;
  }
  return out;
}

PhaseSpaceState mass_map(const PhaseSpaceState& s, const MassDerivatives& md,
                         double theta, bool forward) {
  const double c = std::cos(0.5 * theta);
  const double sn = std::sin(0.5 * theta);
  const double rm = std::sqrt(md.m);
  PhaseSpaceState out = s;
  if (forward) {  // rotated -> normal
    const double u1 = s.p1 + 0.5 * md.m_dot * s.q1;
    const double u2 = s.p2 + 0.5 * md.m_dot * s.q2;
    out.q1 = rm * (c * s.q1 - sn * s.q2);
    out.q2 = rm * (sn * s.q1 + c * s.q2);
    out.p1 = (c * u1 - sn * u2) / rm;
    out.p2 = (sn * u1 + c * u2) / rm;
    out.frame = Frame::Normal;
  } else {
    out.q1 = (c * s.q1 + sn * s.q2) / rm;
    out.q2 = (-sn * s.q1 + c * s.q2) / rm;
    out.p1 = rm * (c * s.p1 + sn * s.p2) - 0.5 * md.m_dot * out.q1;
    out.p2 = rm * (-sn * s.p1 + c * s.p2) - 0.5 * md.m_dot * out.q2;
    out.frame = Frame::Rotated;
  }
  return out;
}

}  // namespace

PhaseSpaceState ReductionPipeline::map_state(const PhaseSpaceState& state,
                                             Frame target) const {
  int cur = frame_index(state.frame);
  const int want = frame_index(target);
  PhaseSpaceState s = state;
  while (cur != want) {
    const bool up = want > cur;
    switch (cur) {
      case 0:  // original <-> scaled
        s = scale_map(s, params_, true);
        break;
      case 1:
        s = up ? rotate_map(s, phi(s.t), true) : scale_map(s, params_, false);
        break;
      case 2:
        s = up ? mass_map(s, mass_derivatives(params_, s.t), angle_.theta, true)
               : rotate_map(s, phi(s.t), false);
        break;
      case 3:  // normal <-> rotated
        s = mass_map(s, mass_derivatives(params_, s.t), angle_.theta, false);
        break;
    }
    cur += up ? 1 : -1;
  }
  return s;
}

}  // namespace tdosc
