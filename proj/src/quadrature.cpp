#include "tdosc/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace tdosc {
namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double kronrod;
  double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b,
                   int& evaluations) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  evaluations += 15;

  double gauss = kWg[3] * fc;
  double kron = kWgk[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kron += kWgk[i] * fsum;
    if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
  }
  gauss *= half;
  kron *= half;
  return {kron, std::abs(kron - gauss)};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol,
           int depth, int& panels, int max_panels, int& evaluations, double& total) {
  const PanelEstimate est = gk15(f, a, b, evaluations);
  if (est.error <= tol || depth >= 52) {
    if (est.error > tol)
      throw QuadratureFailure("quadrature tolerance unreachable on [" +
                              std::to_string(a) + ", " + std::to_string(b) + "]");
    total += est.kronrod;
    return;
  }
  if (++panels > max_panels)
    throw QuadratureFailure("quadrature subdivision budget exhausted");
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, 0.5 * tol, depth + 1, panels, max_panels, evaluations, total);
  adapt(f, mid, b, 0.5 * tol, depth + 1, panels, max_panels, evaluations, total);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_subdivisions) {
  if (a == b) return {0.0, 0.0, 0};
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);

  QuadratureResult result;
  int panels = 0;
  double total = 0.0;

  // One non-adaptive pass to seed the error estimate, then adapt.
  const PanelEstimate top = gk15(f, lo, hi, result.evaluations);
  if (top.error <= abs_tol) {
    result.value = sign * top.kronrod;
    result.error_estimate = top.error;
    return result;
  }
  adapt(f, lo, hi, abs_tol, 0, panels, max_subdivisions, result.evaluations, total);
  result.value = sign * total;
  result.error_estimate = abs_tol;
  return result;
}

PhaseAccumulator::PhaseAccumulator(std::function<double(double)> f, double t0, double t1,
                                   double abs_tol, int checkpoints)
    : f_(std::move(f)), t0_(t0), t1_(t1) {
  if (!(t1 > t0)) throw std::invalid_argument("accumulator needs t1 > t0");
  checkpoints = std::max(checkpoints, 1);
  abs_tol_ = abs_tol / (checkpoints + 1);
  grid_.resize(checkpoints + 1);
  prefix_.resize(checkpoints + 1);
  prefix_[0] = 0.0;
  for (int i = 0; i <= checkpoints; ++i)
    grid_[i] = t0 + (t1 - t0) * i / checkpoints;
  for (int i = 1; i <= checkpoints; ++i)
    prefix_[i] = prefix_[i - 1] + integrate(f_, grid_[i - 1], grid_[i], abs_tol_).value;
}

double PhaseAccumulator::integral_to(double t) const {
  if (t < t0_ - 1e-12 || t > t1_ + 1e-12)
    throw OutOfRange("accumulator query at t=" + std::to_string(t) +
                     " outside [" + std::to_string(t0_) + ", " + std::to_string(t1_) + "]");
  t = std::clamp(t, t0_, t1_);
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const int k = std::clamp(static_cast<int>(it - grid_.begin()) - 1, 0,
                           static_cast<int>(grid_.size()) - 2);
  if (t == grid_[k]) return prefix_[k];
  return prefix_[k] + integrate(f_, grid_[k], t, abs_tol_).value;
}

}  // namespace tdosc
