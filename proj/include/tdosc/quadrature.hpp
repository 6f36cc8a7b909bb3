#pragma once

#include <functional>
#include <vector>

#include "tdosc/errors.hpp"

namespace tdosc {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Gauss-Kronrod 7/15 integration of f over [a, b] (a > b allowed)
/// to the given absolute tolerance. Throws QuadratureFailure when the
/// tolerance is unreachable within the subdivision budget.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol, int max_subdivisions = 2000);

/// Cumulative integral of f from t0, precomputed on a fixed checkpoint grid
/// over [t0, t1] so repeated queries cost one short panel integration each.
/// Deterministic and independent of query order; immutable after construction.
class PhaseAccumulator {
 public:
  PhaseAccumulator(std::function<double(double)> f, double t0, double t1,
                   double abs_tol = 1e-10, int checkpoints = 64);

  /// Integral of f over [t0, t]; t may lie anywhere in [t0, t1].
  double integral_to(double t) const;

  double t0() const { return t0_; }
  double t1() const { return t1_; }

 private:
  std::function<double(double)> f_;
  double t0_, t1_, abs_tol_;
  std::vector<double> grid_, prefix_;
};

}  // namespace tdosc
