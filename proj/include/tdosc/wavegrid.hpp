#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "tdosc/quantum.hpp"

namespace tdosc {

enum class FieldFrame { Transformed, Original };

struct GridSpec {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  int nx = 0, ny = 0;

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return x_min + i * hx(); }
  double y(int j) const { return y_min + j * hy(); }
  bool operator==(const GridSpec&) const = default;
};

/// Complex samples on a uniform grid at one time; values row-major with the
/// x index major (values[i * ny + j]).
struct WaveField {
  GridSpec grid;
  std::vector<Complex> values;
  double t = 0.0;
  FieldFrame frame = FieldFrame::Transformed;
};

using PointFn = std::function<Complex(double, double)>;

/// Square grid of n x n points spanning +-(widths * max_t rho_i sqrt(hbar) *
/// frame scale); the original frame scales each axis by max_t m_i^{-1/2}.
GridSpec auto_grid(const QuantumContext& ctx, FieldFrame frame, int n = 256,
                   double widths = 8.0);

/// Serial reference sampler.
WaveField sample_field_serial(const GridSpec& grid, const PointFn& f, double t,
                              FieldFrame frame);

/// OpenMP sampler; bitwise identical to the serial reference (pure per-point
/// map, no cross-point arithmetic).
WaveField sample_field(const GridSpec& grid, const PointFn& f, double t,
                       FieldFrame frame);

WaveField sample_chi(const QuantumNumbers& n, double t, const QuantumContext& ctx,
                     const GridSpec& grid);
WaveField sample_psi(const QuantumNumbers& n, double t, const QuantumContext& ctx,
                     const GridSpec& grid, bool closed_form = false);

/// Integral of conj(a) * b by 2D composite Simpson (3/8 tail for odd interval
/// counts); serial pairwise summation, deterministic.
Complex grid_overlap(const WaveField& a, const WaveField& b);

double grid_norm(const WaveField& a);

/// Hamiltonian selector for residual checks.
struct TransformedHamiltonian {
  double Omega1_sq, Omega2_sq;
};
struct OriginalHamiltonian {
  double m1, m2, omega1c, omega2c, c1, c2, c3;
};

OriginalHamiltonian original_hamiltonian(const ReductionPipeline& pipe, double t);

/// Applies the Hamiltonian by 4th-order stencils (Laplacian and first
/// derivatives); OpenMP over rows with a serial reference.
WaveField apply_hamiltonian_serial(const WaveField& f, const TransformedHamiltonian& h,
                                   double hbar);
WaveField apply_hamiltonian_serial(const WaveField& f, const OriginalHamiltonian& h,
                                   double hbar);
WaveField apply_hamiltonian(const WaveField& f, const TransformedHamiltonian& h,
                            double hbar);
WaveField apply_hamiltonian(const WaveField& f, const OriginalHamiltonian& h,
                            double hbar);

/// Relative L2 norm of i hbar d(field)/dt - H field with a central time
/// difference over the three fields and a 4-point margin excluded (stencil
/// wrap-around). Denominator: L2 norm of H field.
template <class H>
double schrodinger_residual(const WaveField& minus, const WaveField& center,
                            const WaveField& plus, const H& ham, double dt,
                            double hbar);

/// Relative L2 residual of (I_hat - lambda) applied to a transformed-frame
/// field, with I_hat discretized by the same 4th-order stencils.
double invariant_residual(const WaveField& f, double rho1, double rho1_dot,
                          double rho2, double rho2_dot, double lambda, double hbar);

struct DiscrepancyReport {
  double max_abs_deviation = 0.0;
  double diff_l2_norm = 0.0;
  double ref_max_abs = 0.0;
  double ref_l2_norm = 0.0;
  double t = 0.0;
};

/// Pointwise comparison of two fields on the same grid (a is the reference).
DiscrepancyReport compare_fields(const WaveField& a, const WaveField& b);

/// Little-endian binary dump; layout documented in the README.
void write_wavefield(const WaveField& f, const std::string& path);
WaveField read_wavefield(const std::string& path);

}  // namespace tdosc
