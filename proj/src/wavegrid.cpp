#include "tdosc/wavegrid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <type_traits>

namespace tdosc {
namespace {

void check_grid(const GridSpec& g) {
  if (g.nx < 16 || g.ny < 16)
    throw std::invalid_argument("wave-field grids need at least 16x16 points");
  if (!std::isfinite(g.x_min) || !std::isfinite(g.x_max) || !std::isfinite(g.y_min) ||
      !std::isfinite(g.y_max) || g.x_max <= g.x_min || g.y_max <= g.y_min)
    throw std::invalid_argument("degenerate grid extents");
}

void check_same_grid(const WaveField& a, const WaveField& b) {
  if (!(a.grid == b.grid) || a.t != b.t || a.frame != b.frame)
    throw GridMismatch("wave fields live on different grids");
}

Complex pairwise_sum(const Complex* data, size_t n) {
  if (n <= 8) {
    Complex s = 0.0;
    for (size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

// Composite Simpson weights for n points; a 3/8 block closes the last three
// intervals when their count is odd.
std::vector<double> simpson_weights(int n, double h) {
  if (n < 4) throw std::invalid_argument("quadrature needs at least 4 points per axis");
  std::vector<double> w(n, 0.0);
  const int intervals = n - 1;
  const int simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  if (simpson_end > 0) {
    w[0] += h / 3.0;
    w[simpson_end] += h / 3.0;
    for (int i = 1; i < simpson_end; ++i)
      w[i] += (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  }
  if (simpson_end < intervals) {
    const double c = 3.0 * h / 8.0;
    w[simpson_end] += c;
    w[simpson_end + 1] += 3.0 * c;
    w[simpson_end + 2] += 3.0 * c;
    w[simpson_end + 3] += c;
  }
  return w;
}

// 4th-order stencils; callers guarantee 2 <= i < n-2 on the touched axis.
inline Complex second_derivative(const Complex* v, int stride, double h) {
  return (-v[-2 * stride] + 16.0 * v[-stride] - 30.0 * v[0] + 16.0 * v[stride] -
          v[2 * stride]) /
         (12.0 * h * h);
}

inline Complex first_derivative(const Complex* v, int stride, double h) {
  return (v[-2 * stride] - 8.0 * v[-stride] + 8.0 * v[stride] - v[2 * stride]) /
         (12.0 * h);
}

inline Complex transformed_point(const WaveField& f, const TransformedHamiltonian& h,
                                 double hbar, int i, int j) {
  const Complex* v = f.values.data() + i * f.grid.ny + j;
  const Complex lap =
      second_derivative(v, f.grid.ny, f.grid.hx()) + second_derivative(v, 1, f.grid.hy());
  const double x = f.grid.x(i);
  const double y = f.grid.y(j);
  return -0.5 * hbar * hbar * lap +
         0.5 * (h.Omega1_sq * x * x + h.Omega2_sq * y * y) * v[0];
}

inline Complex original_point(const WaveField& f, const OriginalHamiltonian& h,
                              double hbar, int i, int j) {
  const Complex* v = f.values.data() + i * f.grid.ny + j;
  const double hx = f.grid.hx();
  const double hy = f.grid.hy();
  const Complex dxx = second_derivative(v, f.grid.ny, hx);
  const Complex dyy = second_derivative(v, 1, hy);
  const Complex dx = first_derivative(v, f.grid.ny, hx);
  const Complex dy = first_derivative(v, 1, hy);
  const double x = f.grid.x(i);
  const double y = f.grid.y(j);
  const Complex ih(0.0, hbar);
  return -0.5 * hbar * hbar * (dxx / h.m1 + dyy / h.m2) -
         0.5 * h.omega2c * x * ih * dy + 0.5 * h.omega1c * y * ih * dx +
         0.5 * (h.c1 * x * x + h.c2 * y * y + h.c3 * x * y) * v[0];
}

template <class H>
WaveField apply_impl(const WaveField& f, const H& h, double hbar, bool parallel) {
  check_grid(f.grid);
  WaveField out;
  out.grid = f.grid;
  out.t = f.t;
  out.frame = f.frame;
  out.values.assign(f.values.size(), Complex(0.0, 0.0));
  const int nx = f.grid.nx;
  const int ny = f.grid.ny;
#ifdef _OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
  for (int i = 2; i < nx - 2; ++i)
    for (int j = 2; j < ny - 2; ++j) {
      if constexpr (std::is_same_v<H, TransformedHamiltonian>)
        out.values[i * ny + j] = transformed_point(f, h, hbar, i, j);
      else
        out.values[i * ny + j] = original_point(f, h, hbar, i, j);
    }
  (void)parallel;
  return out;
}

WaveField sample_impl(const GridSpec& grid, const PointFn& f, double t,
                      FieldFrame frame, bool parallel) {
  check_grid(grid);
  WaveField out;
  out.grid = grid;
  out.t = t;
  out.frame = frame;
  out.values.resize(static_cast<size_t>(grid.nx) * grid.ny);
#ifdef _OPENMP
#pragma omp parallel for if (parallel) schedule(static)
#endif
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    for (int j = 0; j < grid.ny; ++j)
      out.values[static_cast<size_t>(i) * grid.ny + j] = f(x, grid.y(j));
  }
  (void)parallel;
  return out;
}

}  // namespace

GridSpec auto_grid(const QuantumContext& ctx, FieldFrame frame, int n, double widths) {
  const ErmakovSolution& erm = ctx.ermakov();
  const SystemParams& params = ctx.pipeline().params();
  double rho1_max = 0.0, rho2_max = 0.0;
  double m1_min = params.m1.value(params.t0);
  double m2_min = params.m2.value(params.t0);
  for (double t : erm.mesh()) {
    rho1_max = std::max(rho1_max, erm.mode(0).rho(t));
    rho2_max = std::max(rho2_max, erm.mode(1).rho(t));
    m1_min = std::min(m1_min, params.m1.value(t));
    m2_min = std::min(m2_min, params.m2.value(t));
  }
  const double sh = std::sqrt(params.hbar);
  GridSpec g;
  g.nx = g.ny = n;
  if (frame == FieldFrame::Transformed) {
    g.x_max = widths * sh * rho1_max;
    g.y_max = widths * sh * rho2_max;
  } else {
    // the rotation mixes the two mode supports, so both axes take the wider one
    const double rho_max = std::max(rho1_max, rho2_max);
    g.x_max = widths * sh * rho_max / std::sqrt(m1_min);
    g.y_max = widths * sh * rho_max / std::sqrt(m2_min);
  }
  g.x_min = -g.x_max;
  g.y_min = -g.y_max;
  return g;
}

WaveField sample_field_serial(const GridSpec& grid, const PointFn& f, double t,
                              FieldFrame frame) {
  return sample_impl(grid, f, t, frame, false);
}

WaveField sample_field(const GridSpec& grid, const PointFn& f, double t,
                       FieldFrame frame) {
  return sample_impl(grid, f, t, frame, true);
}

WaveField sample_chi(const QuantumNumbers& n, double t, const QuantumContext& ctx,
                     const GridSpec& grid) {
  const ErmakovSolution& erm = ctx.ermakov();
  const double r1 = erm.mode(0).rho(t);
  const double r1d = erm.mode(0).rho_dot(t);
  const double r2 = erm.mode(1).rho(t);
  const double r2d = erm.mode(1).rho_dot(t);
  const double hbar = ctx.hbar();
  const Complex ph = std::exp(Complex(0.0, alpha_phase(n, t, erm)));
  PointFn f = [=](double x, double y) {
    return ph * xi(n, x, y, r1, r1d, r2, r2d, hbar);
  };
  return sample_field(grid, f, t, FieldFrame::Transformed);
}

WaveField sample_psi(const QuantumNumbers& n, double t, const QuantumContext& ctx,
                     const GridSpec& grid, bool closed_form) {
  const ReductionPipeline& pipe = ctx.pipeline();
  const SystemParams& params = pipe.params();
  const double m1 = params.m1.value(t);
  const double m2 = params.m2.value(t);
  const MassDerivatives md = mass_derivatives(params, t);
  const double hbar = ctx.hbar();
  const double phi = pipe.phi(t);
  const double theta = ctx.theta();
  const double a = phi + 0.5 * theta;
  const double ca = std::cos(a);
  const double sa = std::sin(a);
  const double s1 = std::sqrt(m1);
  const double s2 = std::sqrt(m2);
  const ErmakovSolution& erm = ctx.ermakov();
  const double r1 = erm.mode(0).rho(t);
  const double r1d = erm.mode(0).rho_dot(t);
  const double r2 = erm.mode(1).rho(t);
  const double r2d = erm.mode(1).rho_dot(t);

  PointFn f;
  if (!closed_form) {
    const double sqrt_m = std::sqrt(md.m);
    const double m_dot = md.m_dot;
    const double m = md.m;
    const Complex exp_alpha = std::exp(Complex(0.0, alpha_phase(n, t, erm)));
    f = [=](double X1, double X2) {
      const double Y1 = ca * s1 * X1 - sa * s2 * X2;
      const double Y2 = sa * s1 * X1 + ca * s2 * X2;
      const Complex phase = std::exp(
          Complex(0.0, -m_dot * (m1 * X1 * X1 + m2 * X2 * X2) / (4.0 * hbar * m)));
      return sqrt_m * phase * (exp_alpha * xi(n, Y1, Y2, r1, r1d, r2, r2d, hbar));
    };
  } else {
    const double log_pre =
        0.5 * (0.5 * std::log(m1 * m2) - std::log(std::numbers::pi * hbar) -
               std::lgamma(n.n1 + 1.0) - std::lgamma(n.n2 + 1.0) -
               (n.n1 + n.n2) * std::numbers::ln2 - std::log(r1) - std::log(r2));
    const double pre = std::exp(log_pre);
    const double sh = std::sqrt(hbar);
    const PhaseCoefficients pc = phase_coefficients(n, t, ctx);
    const Complex avg = 0.5 * (pc.gamma + pc.beta);
    const Complex half_diff = 0.5 * (pc.beta - pc.gamma);
    const double s2a = std::sin(theta + 2.0 * phi);
    const double c2a = std::cos(theta + 2.0 * phi);
    const int n1 = n.n1, n2 = n.n2;
    const double alpha = pc.alpha;
    const Complex gb = pc.beta - pc.gamma;
    f = [=](double X1, double X2) {
      const double h1 = hermite(n1, (s1 * ca * X1 - s2 * sa * X2) / (sh * r1));
      const double h2 = hermite(n2, (s1 * sa * X1 + s2 * ca * X2) / (sh * r2));
      const Complex expo =
          Complex(0.0, 0.5 * m1 / hbar) * (avg + half_diff * s2a) * (X1 * X1) +
          Complex(0.0, 0.5 * m2 / hbar) * (avg - half_diff * s2a) * (X2 * X2) +
          Complex(0.0, 0.5 / hbar) * s1 * s2 * gb * c2a * (X1 * X2) +
          Complex(0.0, alpha);
      return pre * h1 * h2 * std::exp(expo);
    };
  }
  return sample_field(grid, f, t, FieldFrame::Original);
}

Complex grid_overlap(const WaveField& a, const WaveField& b) {
  check_same_grid(a, b);
  const std::vector<double> wx = simpson_weights(a.grid.nx, a.grid.hx());
  const std::vector<double> wy = simpson_weights(a.grid.ny, a.grid.hy());
  std::vector<Complex> rows(a.grid.nx);
  std::vector<Complex> terms(a.grid.ny);
  for (int i = 0; i < a.grid.nx; ++i) {
    const Complex* av = a.values.data() + static_cast<size_t>(i) * a.grid.ny;
    const Complex* bv = b.values.data() + static_cast<size_t>(i) * a.grid.ny;
    for (int j = 0; j < a.grid.ny; ++j)
      terms[j] = wy[j] * std::conj(av[j]) * bv[j];
    rows[i] = wx[i] * pairwise_sum(terms.data(), terms.size());
  }
  return pairwise_sum(rows.data(), rows.size());
}

double grid_norm(const WaveField& a) {
  return std::sqrt(std::abs(grid_overlap(a, a).real()));
}

OriginalHamiltonian original_hamiltonian(const ReductionPipeline& pipe, double t) {
  const SystemParams& params = pipe.params();
  const Cyclotron cyc = cyclotron(params, t);
  const Stiffness c = stiffness(params, t);
  OriginalHamiltonian h;
  h.m1 = params.m1.value(t);
  h.m2 = params.m2.value(t);
  h.omega1c = cyc.omega1c;
  h.omega2c = cyc.omega2c;
  h.c1 = c.c1;
  h.c2 = c.c2;
  h.c3 = c.c3;
  return h;
}

WaveField apply_hamiltonian_serial(const WaveField& f, const TransformedHamiltonian& h,
                                   double hbar) {
  return apply_impl(f, h, hbar, false);
}

WaveField apply_hamiltonian_serial(const WaveField& f, const OriginalHamiltonian& h,
                                   double hbar) {
  return apply_impl(f, h, hbar, false);
}

WaveField apply_hamiltonian(const WaveField& f, const TransformedHamiltonian& h,
                            double hbar) {
  return apply_impl(f, h, hbar, true);
}

WaveField apply_hamiltonian(const WaveField& f, const OriginalHamiltonian& h,
                            double hbar) {
  return apply_impl(f, h, hbar, true);
}

template <class H>
double schrodinger_residual(const WaveField& minus, const WaveField& center,
                            const WaveField& plus, const H& ham, double dt,
                            double hbar) {
  if (!(minus.grid == center.grid) || !(plus.grid == center.grid) ||
      minus.frame != center.frame || plus.frame != center.frame)
    throw GridMismatch("residual fields live on different grids");
  const WaveField hf = apply_hamiltonian(center, ham, hbar);
  const int nx = center.grid.nx;
  const int ny = center.grid.ny;
  constexpr int kMargin = 4;
  double num = 0.0, den = 0.0;
  for (int i = kMargin; i < nx - kMargin; ++i)
    for (int j = kMargin; j < ny - kMargin; ++j) {
      const size_t k = static_cast<size_t>(i) * ny + j;
      const Complex dpsi_dt = (plus.values[k] - minus.values[k]) / (2.0 * dt);
      const Complex r = Complex(0.0, hbar) * dpsi_dt - hf.values[k];
      num += std::norm(r);
      den += std::norm(hf.values[k]);
    }
  if (den == 0.0) throw GridMismatch("Hamiltonian application vanished on the grid");
  return std::sqrt(num / den);
}

template double schrodinger_residual<TransformedHamiltonian>(
    const WaveField&, const WaveField&, const WaveField&, const TransformedHamiltonian&,
    double, double);
template double schrodinger_residual<OriginalHamiltonian>(
    const WaveField&, const WaveField&, const WaveField&, const OriginalHamiltonian&,
    double, double);

double invariant_residual(const WaveField& f, double rho1, double rho1_dot,
                          double rho2, double rho2_dot, double lambda, double hbar) {
  check_grid(f.grid);
  const int nx = f.grid.nx;
  const int ny = f.grid.ny;
  const double hx = f.grid.hx();
  const double hy = f.grid.hy();
  constexpr int kMargin = 4;
  double num = 0.0, den = 0.0;
  for (int i = kMargin; i < nx - kMargin; ++i)
    for (int j = kMargin; j < ny - kMargin; ++j) {
      const Complex* v = f.values.data() + static_cast<size_t>(i) * ny + j;
      const double x = f.grid.x(i);
      const double y = f.grid.y(j);
      const Complex fxx = second_derivative(v, ny, hx);
      const Complex fyy = second_derivative(v, 1, hy);
      const Complex fx = first_derivative(v, ny, hx);
      const Complex fy = first_derivative(v, 1, hy);
      const Complex i1 =
          0.5 * ((x * x / (rho1 * rho1) + rho1_dot * rho1_dot * x * x) * v[0] -
                 hbar * hbar * rho1 * rho1 * fxx +
                 Complex(0.0, hbar) * rho1 * rho1_dot * (2.0 * x * fx + v[0]));
      const Complex i2 =
          0.5 * ((y * y / (rho2 * rho2) + rho2_dot * rho2_dot * y * y) * v[0] -
                 hbar * hbar * rho2 * rho2 * fyy +
                 Complex(0.0, hbar) * rho2 * rho2_dot * (2.0 * y * fy + v[0]));
      num += std::norm(i1 + i2 - lambda * v[0]);
      den += std::norm(lambda * v[0]);
    }
  if (den == 0.0) throw GridMismatch("field vanished on the sampled interior");
  return std::sqrt(num / den);
}

DiscrepancyReport compare_fields(const WaveField& a, const WaveField& b) {
  check_same_grid(a, b);
  DiscrepancyReport rep;
  rep.t = a.t;
  const double cell = a.grid.hx() * a.grid.hy();
  double diff_sq = 0.0, ref_sq = 0.0;
  for (size_t k = 0; k < a.values.size(); ++k) {
    const double d = std::abs(a.values[k] - b.values[k]);
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, d);
    rep.ref_max_abs = std::max(rep.ref_max_abs, std::abs(a.values[k]));
    diff_sq += d * d;
    ref_sq += std::norm(a.values[k]);
  }
  rep.diff_l2_norm = std::sqrt(diff_sq * cell);
  rep.ref_l2_norm = std::sqrt(ref_sq * cell);
  return rep;
}

namespace {

constexpr char kMagic[8] = {'T', 'D', 'O', 'S', 'C', 'W', 'F', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

void write_wavefield(const WaveField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t version = kFormatVersion;
  const std::uint32_t frame = static_cast<std::uint32_t>(f.frame);
  const std::uint32_t nx = static_cast<std::uint32_t>(f.grid.nx);
  const std::uint32_t ny = static_cast<std::uint32_t>(f.grid.ny);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&frame), 4);
  out.write(reinterpret_cast<const char*>(&nx), 4);
  out.write(reinterpret_cast<const char*>(&ny), 4);
  const double header[5] = {f.t, f.grid.x_min, f.grid.x_max, f.grid.y_min,
                            f.grid.y_max};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  for (const Complex& z : f.values) {
    const double re = z.real(), im = z.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

WaveField read_wavefield(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error(path + " is not a wave-field dump");
  std::uint32_t version, frame, nx, ny;
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&frame), 4);
  in.read(reinterpret_cast<char*>(&nx), 4);
  in.read(reinterpret_cast<char*>(&ny), 4);
  if (!in || version != kFormatVersion)
    throw std::runtime_error(path + ": unsupported format version");
  if (frame > 1 || nx < 16 || ny < 16 || nx > 100000 || ny > 100000)
    throw std::runtime_error(path + ": corrupt header");
  double header[5];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  WaveField f;
  f.t = header[0];
  f.grid.x_min = header[1];
  f.grid.x_max = header[2];
  f.grid.y_min = header[3];
  f.grid.y_max = header[4];
  f.grid.nx = static_cast<int>(nx);
  f.grid.ny = static_cast<int>(ny);
  f.frame = static_cast<FieldFrame>(frame);
  check_grid(f.grid);
  f.values.resize(static_cast<size_t>(nx) * ny);
  for (Complex& z : f.values) {
    double re, im;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    z = Complex(re, im);
  }
  if (!in) throw std::runtime_error(path + ": truncated payload");
  return f;
}

}  // namespace tdosc
