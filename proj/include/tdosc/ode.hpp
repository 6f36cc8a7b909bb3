#pragma once

#include <functional>
#include <vector>

#include "tdosc/errors.hpp"

namespace tdosc {

/// rhs(t, y, dydt) with y and dydt of the system dimension.
using OdeRhs = std::function<void(double, const double*, double*)>;

struct SolverOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  bool fixed_step = false;   // classical RK4 with step h_fixed (bit-reproducible)
  double h_fixed = 1e-3;
  long max_steps = 10'000'000;
};

struct OdeStats {
  long steps = 0;
  long rejected = 0;
  double max_error_estimate = 0.0;
};

/// Dense-output solution of an initial value problem on [t0, t1]; t1 < t0
/// integrates backward. Evaluable anywhere between the endpoints.
class OdeSolution {
 public:
  std::vector<double> at(double t) const;
  void at(double t, double* y) const;

  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  int dim() const { return dim_; }
  const OdeStats& stats() const { return stats_; }

 private:
  friend OdeSolution integrate_ode(const OdeRhs&, int, const std::vector<double>&,
                                   double, double, const SolverOptions&);
  struct Segment {
    double t, h;                  // covers [t, t+h] (h signed)
    std::vector<double> coeff;    // dim*5 dense coefficients
  };
  int find_segment(double t) const;

  int dim_ = 0;
  double t0_ = 0.0, t1_ = 0.0;
  std::vector<Segment> segments_;
  std::vector<double> y_end_;
  OdeStats stats_;
};

/// Dormand-Prince 5(4) with PI step-size control and a 4th-order continuous
/// extension; SolverOptions::fixed_step selects classical RK4 with cubic
/// Hermite dense output instead. Throws SolverFailure on step underflow or
/// step-budget exhaustion.
OdeSolution integrate_ode(const OdeRhs& rhs, int dim, const std::vector<double>& y0,
                          double t0, double t1, const SolverOptions& opts = {});

}  // namespace tdosc
