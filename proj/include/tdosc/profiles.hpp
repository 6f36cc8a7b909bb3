#pragma once

#include <string>
#include <vector>

#include "tdosc/errors.hpp"

namespace tdosc {

enum class ProfileKind { Constant, Polynomial, Sinusoidal, Exponential, Tabulated };

/// Natural cubic spline through (t_i, y_i); C2 on [t_front, t_back],
/// evaluation outside the knots throws OutOfRange.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> t, std::vector<double> y);

  double value(double t) const;
  double derivative(double t, int order) const;  // order 1 or 2
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }

 private:
  int segment(double t) const;
  std::vector<double> t_, y_, m_;  // m_: second derivatives at knots
};

/// A scalar function of time with analytic first and second derivatives.
/// One of: constant, polynomial (c0 + c1 t + ...), sinusoidal A sin(w t + phi0) + c,
/// exponential A e^{k t} + c, tabulated with natural cubic interpolation.
class ParameterProfile {
 public:
  ParameterProfile() : kind_(ProfileKind::Constant), coeffs_{0.0} {}

  static ParameterProfile constant(double value);
  static ParameterProfile polynomial(std::vector<double> coefficients);
  static ParameterProfile sinusoidal(double amplitude, double omega, double phase,
                                     double offset);
  static ParameterProfile exponential(double amplitude, double rate, double offset);
  static ParameterProfile tabulated(std::vector<double> times, std::vector<double> values);

  double value(double t) const;
  double derivative(double t, int order) const;  // order 1 or 2
  ProfileKind kind() const { return kind_; }

 private:
  ProfileKind kind_;
  std::vector<double> coeffs_;
  CubicSpline spline_;
};

/// Full parameter set of a scenario on the interval [t0, t1].
struct SystemParams {
  ParameterProfile m1, m2, C1, C2, C3, B;
  double e = 1.0;
  double hbar = 1.0;
  double t0 = 0.0;
  double t1 = 1.0;
};

struct ValidationIssue {
  std::string check;
  double t = 0.0;
  double value = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool valid() const { return issues.empty(); }
};

/// Checks mass positivity on a 1000-point sample of the interval plus the
/// endpoints, positivity of e and hbar, and interval ordering.
ValidationReport validate_params(const SystemParams& params);

}  // namespace tdosc
