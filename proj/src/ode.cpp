#include "tdosc/ode.hpp"

#include <algorithm>
#include <cmath>

namespace tdosc {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                 kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
// b - b_hat (embedded 4th-order error weights).
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
// Dense-output weights (4th-order continuous extension).
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

double error_norm(const std::vector<double>& err, const std::vector<double>& y0,
                  const std::vector<double>& y1, double rtol, double atol) {
  double acc = 0.0;
  for (size_t i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    acc += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(acc / err.size());
}

double initial_step(const OdeRhs& rhs, int dim, const std::vector<double>& y0,
                    const std::vector<double>& f0, double t0, double dir, double span,
                    double rtol, double atol) {
  double d0 = 0.0, d1 = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double sc = atol + rtol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / dim);
  d1 = std::sqrt(d1 / dim);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);

  std::vector<double> y1(dim), f1(dim);
  for (int i = 0; i < dim; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
  rhs(t0 + dir * h0, y1.data(), f1.data());
  double d2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double sc = atol + rtol * std::abs(y0[i]);
    d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
  }
  d2 = std::sqrt(d2 / dim) / h0;

  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

int OdeSolution::find_segment(double t) const {
  const double dir = t1_ >= t0_ ? 1.0 : -1.0;
  int lo = 0, hi = static_cast<int>(segments_.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (dir * (segments_[mid].t + segments_[mid].h) >= dir * t)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

void OdeSolution::at(double t, double* y) const {
  const double dir = t1_ >= t0_ ? 1.0 : -1.0;
  const double eps = 1e-9 * (std::abs(t0_) + std::abs(t1_) + 1.0);
  if (dir * (t - t0_) < -eps || dir * (t - t1_) > eps)
    throw OutOfRange("dense output queried at t=" + std::to_string(t) +
                     " outside the integrated span");
  const Segment& s = segments_[find_segment(t)];
  const double th = std::clamp((t - s.t) / s.h, 0.0, 1.0);
  const double th1 = 1.0 - th;
  for (int i = 0; i < dim_; ++i) {
    const double* c = s.coeff.data() + 5 * i;
    y[i] = c[0] + th * (c[1] + th1 * (c[2] + th * (c[3] + th1 * c[4])));
  }
}

std::vector<double> OdeSolution::at(double t) const {
  std::vector<double> y(dim_);
  at(t, y.data());
  return y;
}

OdeSolution integrate_ode(const OdeRhs& rhs, int dim, const std::vector<double>& y0,
                          double t0, double t1, const SolverOptions& opts) {
  if (static_cast<int>(y0.size()) != dim)
    throw std::invalid_argument("initial state dimension mismatch");
  if (t0 == t1) throw std::invalid_argument("empty integration span");

  OdeSolution sol;
  sol.dim_ = dim;
  sol.t0_ = t0;
  sol.t1_ = t1;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  if (opts.fixed_step) {
    // Classical RK4 on a uniform grid, cubic Hermite dense output.
    const long n = std::max(1L, static_cast<long>(std::ceil(span / opts.h_fixed)));
    if (n > opts.max_steps) throw SolverFailure("fixed-step count exceeds budget");
    const double h = (t1 - t0) / static_cast<double>(n);
    std::vector<double> y = y0, k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim), y1(dim);
    double t = t0;
    for (long step = 0; step < n; ++step) {
      rhs(t, y.data(), k1.data());
      for (int i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      rhs(t + 0.5 * h, tmp.data(), k2.data());
      for (int i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      rhs(t + 0.5 * h, tmp.data(), k3.data());
      for (int i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
      rhs(t + h, tmp.data(), k4.data());
      for (int i = 0; i < dim; ++i)
        y1[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      rhs(t + h, y1.data(), k4.data());  // endpoint slope for the interpolant

      OdeSolution::Segment seg;
      seg.t = t;
      seg.h = h;
      seg.coeff.resize(5 * dim);
      for (int i = 0; i < dim; ++i) {
        // Cubic Hermite written in the quintic evaluation scheme (c4 = 0).
        const double dy = y1[i] - y[i];
        double* c = seg.coeff.data() + 5 * i;
        c[0] = y[i];
        c[1] = dy;
        c[2] = h * k1[i] - dy;
        c[3] = dy - h * k4[i] - c[2];
        c[4] = 0.0;
      }
      sol.segments_.push_back(std::move(seg));
      y = y1;
      t = t0 + h * static_cast<double>(step + 1);
      ++sol.stats_.steps;
    }
    sol.y_end_ = y;
    return sol;
  }

  std::vector<double> y = y0, k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
                      k7(dim), ytmp(dim), y1(dim), err(dim);
  rhs(t0, y.data(), k1.data());
  double h = initial_step(rhs, dim, y, k1, t0, dir, span, opts.rtol, opts.atol);
  double t = t0;
  double facold = 1e-4;
  const double hmin = 1e-14 * std::max(1.0, std::abs(t0) + std::abs(t1));
  bool last = false;

  while (!last) {
    if (sol.stats_.steps + sol.stats_.rejected > opts.max_steps)
      throw SolverFailure("step budget exhausted at t=" + std::to_string(t));
    if (h < hmin)
      throw SolverFailure("step size underflow at t=" + std::to_string(t));
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    const double hs = dir * h;

    for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + hs * kA21 * k1[i];
    rhs(t + kC[1] * hs, ytmp.data(), k2.data());
    for (int i = 0; i < dim; ++i) ytmp[i] = y[i] + hs * (kA31 * k1[i] + kA32 * k2[i]);
    rhs(t + kC[2] * hs, ytmp.data(), k3.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + hs * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    rhs(t + kC[3] * hs, ytmp.data(), k4.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + hs * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    rhs(t + kC[4] * hs, ytmp.data(), k5.data());
    for (int i = 0; i < dim; ++i)
      ytmp[i] = y[i] + hs * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                             kA64 * k4[i] + kA65 * k5[i]);
    rhs(t + hs, ytmp.data(), k6.data());
    for (int i = 0; i < dim; ++i)
      y1[i] = y[i] + hs * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] +
                           kA75 * k5[i] + kA76 * k6[i]);
    rhs(t + hs, y1.data(), k7.data());

    for (int i = 0; i < dim; ++i)
      err[i] = hs * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                     kE6 * k6[i] + kE7 * k7[i]);
    const double errn = error_norm(err, y, y1, opts.rtol, opts.atol);
    sol.stats_.max_error_estimate = std::max(sol.stats_.max_error_estimate, errn);

    if (errn <= 1.0) {
      OdeSolution::Segment seg;
      seg.t = t;
      seg.h = hs;
      seg.coeff.resize(5 * dim);
      for (int i = 0; i < dim; ++i) {
        const double dy = y1[i] - y[i];
        double* c = seg.coeff.data() + 5 * i;
        c[0] = y[i];
        c[1] = dy;
        c[2] = hs * k1[i] - dy;
        c[3] = dy - hs * k7[i] - c[2];
        c[4] = hs * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                     kD6 * k6[i] + kD7 * k7[i]);
      }
      sol.segments_.push_back(std::move(seg));
      t += hs;
      y = y1;
      k1 = k7;  // FSAL
      ++sol.stats_.steps;

      const double fac11 = std::pow(std::max(errn, 1e-16), 0.17);
      double fac = fac11 / std::pow(facold, 0.04);
      fac = std::max(0.1, std::min(5.0, fac / 0.9));
      h = h / fac;
      facold = std::max(errn, 1e-4);
    } else {
      ++sol.stats_.rejected;
      last = false;
      const double fac11 = std::pow(errn, 0.17);
      h = h / std::min(5.0, fac11 / 0.9);
    }
  }
  sol.y_end_ = y;
  return sol;
}

}  // namespace tdosc
