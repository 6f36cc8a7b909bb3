#pragma once

#include "tdosc/ode.hpp"
#include "tdosc/reduction.hpp"

namespace tdosc {

struct Trajectory {
  Frame frame = Frame::Original;
  std::vector<PhaseSpaceState> samples;
  OdeStats solver_stats;
};

/// Energy of a state under the original-frame or normal-frame Hamiltonian.
/// Throws FrameMismatch for Scaled/Rotated states.
double hamiltonian_value(const PhaseSpaceState& state, const ReductionPipeline& pipe);

/// Integrates Hamilton's equations from state.t to t1 (backward when
/// t1 < state.t) and samples the dense solution at n_samples uniform times
/// including both endpoints. Frame must be Original or Normal.
Trajectory propagate(const PhaseSpaceState& state, const ReductionPipeline& pipe,
                     double t1, int n_samples = 200, const SolverOptions& opts = {});

/// Propagates in the original frame, separately maps the start state to the
/// normal frame, propagates there and maps back; returns the max absolute
/// component deviation over the shared sample times.
double consistency_check(const PhaseSpaceState& state, const ReductionPipeline& pipe,
                         double t1, int n_samples = 200, const SolverOptions& opts = {});

/// Classical Lewis invariant of a normal-frame state for auxiliary values
/// (rho_i, rho_dot_i). Throws ZeroRho / FrameMismatch.
double classical_invariant(const PhaseSpaceState& state, double rho1, double rho1_dot,
                           double rho2, double rho2_dot);

}  // namespace tdosc
