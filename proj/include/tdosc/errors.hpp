#pragma once

#include <stdexcept>
#include <string>

namespace tdosc {

/// Evaluation outside a tabulated profile's knot range.
struct OutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature could not reach the requested absolute tolerance.
struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// ODE step size underflowed or the step budget was exhausted.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation applied to a state in a frame it does not accept.
struct FrameMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A squared normal frequency is non-positive; the quantum layer has no
/// oscillatory solution there.
struct InvalidFrequency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// rho hit zero (cannot occur for a unit-Wronskian Pinney composition;
/// guarded anyway).
struct ZeroRho : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two wave fields with incompatible grids or times.
struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scenario fails a physics prerequisite (drifting decoupling angle,
/// non-positive squared frequency) rather than a parse error.
struct InvalidScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Scenario file cannot be parsed or violates the schema.
struct ScenarioParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tdosc
