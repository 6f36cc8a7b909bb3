#include "tdosc/profiles.hpp"

#include <algorithm>
#include <cmath>

namespace tdosc {

CubicSpline::CubicSpline(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
  const size_t n = t_.size();
  if (n < 3 || y_.size() != n)
    throw std::invalid_argument("tabulated profile needs >= 3 knots");
  for (size_t i = 1; i < n; ++i)
    if (!(t_[i] > t_[i - 1]))
      throw std::invalid_argument("tabulated knots must be strictly increasing");

  // Natural spline: solve the tridiagonal system for knot second derivatives.
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
  b[0] = b[n - 1] = 1.0;
  for (size_t i = 1; i + 1 < n; ++i) {
    const double hl = t_[i] - t_[i - 1];
    const double hr = t_[i + 1] - t_[i];
    a[i] = hl / 6.0;
    b[i] = (hl + hr) / 3.0;
    c[i] = hr / 6.0;
    r[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  m_.assign(n, 0.0);
  std::vector<double> cp(n, 0.0);
  cp[0] = c[0] / b[0];
  r[0] /= b[0];
  for (size_t i = 1; i < n; ++i) {
    const double den = b[i] - a[i] * cp[i - 1];
    cp[i] = c[i] / den;
    r[i] = (r[i] - a[i] * r[i - 1]) / den;
  }
  m_[n - 1] = r[n - 1];
  for (size_t i = n - 1; i-- > 0;) m_[i] = r[i] - cp[i] * m_[i + 1];
}

int CubicSpline::segment(double t) const {
  if (t < t_.front() || t > t_.back())
    throw OutOfRange("tabulated profile evaluated at t=" + std::to_string(t) +
                     " outside [" + std::to_string(t_.front()) + ", " +
                     std::to_string(t_.back()) + "]");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  int i = static_cast<int>(it - t_.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(t_.size()) - 2);
}

double CubicSpline::value(double t) const {
  const int i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double A = (t_[i + 1] - t) / h;
  const double B = (t - t_[i]) / h;
  return A * y_[i] + B * y_[i + 1] +
         ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t, int order) const {
  const int i = segment(t);
  const double h = t_[i + 1] - t_[i];
  const double A = (t_[i + 1] - t) / h;
  const double B = (t - t_[i]) / h;
  if (order == 1) {
    return (y_[i + 1] - y_[i]) / h -
           (3.0 * A * A - 1.0) / 6.0 * h * m_[i] +
           (3.0 * B * B - 1.0) / 6.0 * h * m_[i + 1];
  }
  if (order == 2) return A * m_[i] + B * m_[i + 1];
  throw std::invalid_argument("derivative order must be 1 or 2");
}

ParameterProfile ParameterProfile::constant(double value) {
  ParameterProfile p;
  p.kind_ = ProfileKind::Constant;
  p.coeffs_ = {value};
  return p;
}

ParameterProfile ParameterProfile::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  ParameterProfile p;
  p.kind_ = ProfileKind::Polynomial;
  p.coeffs_ = std::move(coefficients);
  return p;
}

ParameterProfile ParameterProfile::sinusoidal(double amplitude, double omega,
                                              double phase, double offset) {
  ParameterProfile p;
  p.kind_ = ProfileKind::Sinusoidal;
  p.coeffs_ = {amplitude, omega, phase, offset};
  return p;
}

ParameterProfile ParameterProfile::exponential(double amplitude, double rate,
                                               double offset) {
  ParameterProfile p;
  p.kind_ = ProfileKind::Exponential;
  p.coeffs_ = {amplitude, rate, offset};
  return p;
}

ParameterProfile ParameterProfile::tabulated(std::vector<double> times,
                                             std::vector<double> values) {
  ParameterProfile p;
  p.kind_ = ProfileKind::Tabulated;
  p.spline_ = CubicSpline(std::move(times), std::move(values));
  return p;
}

double ParameterProfile::value(double t) const {
  switch (kind_) {
    case ProfileKind::Constant:
      return coeffs_[0];
    case ProfileKind::Polynomial: {
      double acc = 0.0;
      for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * t + coeffs_[i];
      return acc;
    }
    case ProfileKind::Sinusoidal:
      return coeffs_[0] * std::sin(coeffs_[1] * t + coeffs_[2]) + coeffs_[3];
    case ProfileKind::Exponential:
      return coeffs_[0] * std::exp(coeffs_[1] * t) + coeffs_[2];
    case ProfileKind::Tabulated:
      return spline_.value(t);
  }
  return 0.0;
}

double ParameterProfile::derivative(double t, int order) const {
  if (order != 1 && order != 2)
    throw std::invalid_argument("derivative order must be 1 or 2");
  switch (kind_) {
    case ProfileKind::Constant:
      return 0.0;
    case ProfileKind::Polynomial: {
      double acc = 0.0;
      if (order == 1) {
        for (size_t i = coeffs_.size(); i-- > 1;)
          acc = acc * t + coeffs_[i] * static_cast<double>(i);
      } else {
        for (size_t i = coeffs_.size(); i-- > 2;)
          acc = acc * t + coeffs_[i] * static_cast<double>(i) * static_cast<double>(i - 1);
      }
      return acc;
    }
    case ProfileKind::Sinusoidal: {
      const double A = coeffs_[0], w = coeffs_[1], ph = coeffs_[2];
      return order == 1 ? A * w * std::cos(w * t + ph)
                        : -A * w * w * std::sin(w * t + ph);
    }
    case ProfileKind::Exponential: {
      const double A = coeffs_[0], k = coeffs_[1];
      return (order == 1 ? A * k : A * k * k) * std::exp(k * t);
    }
    case ProfileKind::Tabulated:
      return spline_.derivative(t, order);
  }
  return 0.0;
}

ValidationReport validate_params(const SystemParams& params) {
  ValidationReport report;
  auto fail = [&](const std::string& check, double t, double value,
                  const std::string& msg) {
    report.issues.push_back({check, t, value, msg});
  };

  if (!(params.t1 > params.t0))
    fail("interval", params.t0, params.t1 - params.t0, "interval end must exceed start");
  if (!(params.e > 0.0)) fail("charge", params.t0, params.e, "e must be positive");
  if (!(params.hbar > 0.0)) fail("hbar", params.t0, params.hbar, "hbar must be positive");
  if (!report.issues.empty() && !(params.t1 > params.t0)) return report;

  const int kSamples = 1000;
  bool m1_bad = false, m2_bad = false;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = params.t0 + (params.t1 - params.t0) * i / kSamples;
    double m1, m2;
    try {
      m1 = params.m1.value(t);
      m2 = params.m2.value(t);
    } catch (const OutOfRange&) {
      fail("profile_range", t, 0.0, "mass profile not evaluable on the interval");
      break;
    }
    if (!m1_bad && !(m1 > 0.0)) {
      fail("mass_positivity", t, m1, "m1(t) must be positive");
      m1_bad = true;
    }
    if (!m2_bad && !(m2 > 0.0)) {
      fail("mass_positivity", t, m2, "m2(t) must be positive");
      m2_bad = true;
    }
    if (m1_bad && m2_bad) break;
  }
  return report;
}

}  // namespace tdosc
