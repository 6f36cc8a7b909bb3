// Scenario-driven front end: reduce / classical / ermakov / wavefunction /
// validate subcommands, CSV and binary outputs, documented exit codes
// (0 ok, 2 unusable scenario file, 3 invalid physics).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tdosc/dynamics.hpp"
#include "tdosc/scenario.hpp"
#include "tdosc/wavegrid.hpp"

namespace fs = std::filesystem;
using namespace tdosc;

namespace {

constexpr int kExitBadScenario = 2;
constexpr int kExitBadPhysics = 3;

struct CsvFile {
  explicit CsvFile(const fs::path& path) : f_(std::fopen(path.c_str(), "w")) {
    if (!f_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  ~CsvFile() {
    if (f_) std::fclose(f_);
  }
  CsvFile(const CsvFile&) = delete;
  CsvFile& operator=(const CsvFile&) = delete;

  void header(const std::string& names) { std::fprintf(f_, "%s\n", names.c_str()); }
  void row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i)
      std::fprintf(f_, i + 1 == values.size() ? "%.17g\n" : "%.17g,", values[i]);
  }

 private:
  std::FILE* f_;
};

fs::path prepare_out(const std::string& out_dir) {
  fs::path dir(out_dir);
  fs::create_directories(dir);
  return dir;
}

void require_valid_angle(const ReductionPipeline& pipe) {
  if (!pipe.angle().valid)
    throw InvalidScenario(
        "decoupling-angle constancy violated: the angle drifts by " +
        std::to_string(pipe.angle().max_deviation) + " (tolerance exceeded); " +
        "the normal-mode decomposition does not apply");
}

std::vector<double> sample_times(double t0, double t1, int n) {
  std::vector<double> ts(std::max(2, n));
  const int m = static_cast<int>(ts.size());
  for (int i = 0; i < m; ++i)
    ts[i] = i + 1 == m ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / (m - 1);
  return ts;
}

int cmd_reduce(const Scenario& sc, const std::string& out_dir, int samples) {
  const ReductionPipeline pipe(sc.params, sc.theta_tolerance);
  require_valid_angle(pipe);
  const fs::path path = prepare_out(out_dir) / (sc.name + "_reduce.csv");
  CsvFile csv(path);
  csv.header(
      "t,omega1c,omega2c,omega_c,m,m_dot,m_ddot,c1,c2,c3,d1,d2,d3,phi,"
      "lambda1,lambda2,lambda3,omega_tilde1_sq,omega_tilde2_sq,theta,"
      "Omega1,Omega2,delta");
  for (double t : sample_times(sc.params.t0, sc.params.t1, samples)) {
    const ReducedCoefficients rc = pipe.coefficients(t);
    csv.row({rc.t, rc.omega1c, rc.omega2c, rc.omega_c, rc.m, rc.m_dot, rc.m_ddot,
             rc.c1, rc.c2, rc.c3, rc.d1, rc.d2, rc.d3, rc.phi, rc.lambda1,
             rc.lambda2, rc.lambda3, rc.omega_tilde1_sq, rc.omega_tilde2_sq,
             rc.theta, rc.Omega1, rc.Omega2, rc.delta});
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_classical(const Scenario& sc, const std::string& out_dir, const std::string& frame,
                  double q1, double q2, double p1, double p2, double t_end, int samples,
                  bool fixed_step) {
  const ReductionPipeline pipe(sc.params, sc.theta_tolerance);
  PhaseSpaceState state;
  state.frame = frame == "normal" ? Frame::Normal : Frame::Original;
  state.q1 = q1;
  state.q2 = q2;
  state.p1 = p1;
  state.p2 = p2;
  state.t = sc.params.t0;
  if (state.frame == Frame::Normal) require_valid_angle(pipe);

  SolverOptions opts = sc.solver;
  opts.fixed_step = fixed_step;
  if (std::isnan(t_end)) t_end = sc.params.t1;
  const Trajectory traj = propagate(state, pipe, t_end, samples, opts);

  // The invariant needs the auxiliary amplitudes, hence a valid decoupling
  // angle and positive normal frequencies; degrade to NaN otherwise.
  bool have_invariant = pipe.angle().valid;
  std::unique_ptr<ErmakovSolution> erm;
  if (have_invariant) {
    try {
      erm = std::make_unique<ErmakovSolution>(solve_ermakov(
          [&pipe](double t) {
            const ReducedCoefficients rc = pipe.coefficients(t);
            return rc.Omega1 * rc.Omega1;
          },
          [&pipe](double t) {
            const ReducedCoefficients rc = pipe.coefficients(t);
            return rc.Omega2 * rc.Omega2;
          },
          sc.params.t0, sc.params.t1, 257, opts));
    } catch (const InvalidFrequency&) {
      have_invariant = false;
    }
  }
  if (!have_invariant)
    std::fprintf(stderr,
                 "warning: invariant column written as nan "
                 "(decoupling angle or normal frequencies unusable)\n");

  const fs::path path = prepare_out(out_dir) / (sc.name + "_classical.csv");
  CsvFile csv(path);
  csv.header("t,q1,q2,p1,p2,H,I");
  for (const PhaseSpaceState& s : traj.samples) {
    double inv = std::nan("");
    if (have_invariant) {
      const PhaseSpaceState ns = pipe.map_state(s, Frame::Normal);
      inv = classical_invariant(ns, erm->mode(0).rho(s.t), erm->mode(0).rho_dot(s.t),
                                erm->mode(1).rho(s.t), erm->mode(1).rho_dot(s.t));
    }
    csv.row({s.t, s.q1, s.q2, s.p1, s.p2, hamiltonian_value(s, pipe), inv});
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_ermakov(const Scenario& sc, const std::string& out_dir, int samples,
                bool fixed_step) {
  const ReductionPipeline pipe(sc.params, sc.theta_tolerance);
  require_valid_angle(pipe);
  SolverOptions opts = sc.solver;
  opts.fixed_step = fixed_step;
  const FrequencyFn w1 = [&pipe](double t) {
    const ReducedCoefficients rc = pipe.coefficients(t);
    return rc.Omega1 * rc.Omega1;
  };
  const FrequencyFn w2 = [&pipe](double t) {
    const ReducedCoefficients rc = pipe.coefficients(t);
    return rc.Omega2 * rc.Omega2;
  };
  const ErmakovSolution erm =
      solve_ermakov(w1, w2, sc.params.t0, sc.params.t1, samples, opts);

  const fs::path path = prepare_out(out_dir) / (sc.name + "_ermakov.csv");
  CsvFile csv(path);
  csv.header("t,rho1,rho1_dot,rho2,rho2_dot,residual1,residual2");
  for (double t : erm.mesh())
    csv.row({t, erm.mode(0).rho(t), erm.mode(0).rho_dot(t), erm.mode(1).rho(t),
             erm.mode(1).rho_dot(t), ermakov_residual(erm.mode(0), w1, t),
             ermakov_residual(erm.mode(1), w2, t)});
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_wavefunction(const Scenario& sc, const std::string& out_dir, int n1, int n2,
                     std::vector<double> times, int grid_n, const std::string& field,
                     bool binary, bool fixed_step) {
  const ReductionPipeline pipe(sc.params, sc.theta_tolerance);
  SolverOptions opts = sc.solver;
  opts.fixed_step = fixed_step;
  const QuantumContext ctx(pipe, 257, opts);  // throws on drift / bad frequencies
  const QuantumNumbers n{n1, n2};
  if (times.empty()) times.push_back(sc.params.t0);
  const int gn = grid_n > 0 ? grid_n : sc.grid.n;
  const FieldFrame ff =
      field == "chi" ? FieldFrame::Transformed : FieldFrame::Original;
  const GridSpec grid = auto_grid(ctx, ff, gn, sc.grid.widths);

  const fs::path dir = prepare_out(out_dir);
  for (size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    WaveField wf;
    if (field == "chi")
      wf = sample_chi(n, t, ctx, grid);
    else
      wf = sample_psi(n, t, ctx, grid, field == "psi_closed");
    const std::string stem = sc.name + "_" + field + "_n" + std::to_string(n1) +
                             std::to_string(n2) + "_t" + std::to_string(k);
    if (binary) {
      const fs::path path = dir / (stem + ".wf");
      write_wavefield(wf, path.string());
      std::printf("wrote %s\n", path.c_str());
    } else {
      const fs::path path = dir / (stem + ".csv");
      CsvFile csv(path);
      csv.header("x,y,re,im,abs2");
      for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.ny; ++j) {
          const Complex z = wf.values[static_cast<size_t>(i) * grid.ny + j];
          csv.row({grid.x(i), grid.y(j), z.real(), z.imag(), std::norm(z)});
        }
      std::printf("wrote %s\n", path.c_str());
    }
  }
  return 0;
}

struct CheckResult {
  std::string name;
  std::string status;  // "pass" | "fail" | "skip"
  double value = 0.0;
  double tolerance = 0.0;
};

int cmd_validate(const Scenario& sc, const std::string& out_dir) {
  std::vector<CheckResult> results;
  bool physics_broken = false;
  auto record = [&results](const std::string& name, double value, double tol) {
    results.push_back({name, value < tol ? "pass" : "fail", value, tol});
    return value < tol;
  };
  auto skip = [&results](const std::string& name, double tol) {
    results.push_back({name, "skip", 0.0, tol});
  };

  const ReductionPipeline pipe(sc.params, sc.theta_tolerance);
  const double t0 = sc.params.t0, t1 = sc.params.t1;
  const std::vector<double> ts = sample_times(t0, t1, 256);

  // Algebraic identities of the derived coefficients.
  double dev_product = 0.0, dev_mass = 0.0, dev_lambda_trace = 0.0;
  for (double t : ts) {
    const Cyclotron cyc = cyclotron(sc.params, t);
    const double m1 = sc.params.m1.value(t), m2 = sc.params.m2.value(t);
    dev_product = std::max(dev_product,
                           std::abs(cyc.omega_c * cyc.omega_c -
                                    cyc.omega1c * cyc.omega2c) /
                               std::max(1.0, std::abs(cyc.omega1c * cyc.omega2c)));
    dev_mass = std::max(dev_mass, std::abs(cyc.m * cyc.m - m1 * m2) / (m1 * m2));
    const ScaledStiffness d = scaled_stiffness(sc.params, t);
    const RotatedCoefficients lam = rotated_coefficients(d, pipe.phi(t));
    dev_lambda_trace =
        std::max(dev_lambda_trace, std::abs(lam.lambda1 + lam.lambda2 - d.d1 - d.d2) /
                                       std::max(1.0, std::abs(d.d1 + d.d2)));
  }
  record("cyclotron_product", dev_product, 1e-12);
  record("geometric_mean_mass", dev_mass, 1e-12);
  record("lambda_trace", dev_lambda_trace, 1e-12);

  const bool angle_ok =
      record("theta_constancy", pipe.angle().max_deviation, sc.theta_tolerance);
  if (!angle_ok) physics_broken = true;

  // Frequency trace and decoupling need a usable angle.
  bool frequencies_ok = angle_ok;
  if (angle_ok) {
    double dev_trace = 0.0, dev_delta = 0.0;
    try {
      for (double t : ts) {
        const ReducedCoefficients rc = pipe.coefficients(t);
        const double sum = rc.omega_tilde1_sq + rc.omega_tilde2_sq;
        dev_trace = std::max(
            dev_trace, std::abs(rc.Omega1 * rc.Omega1 + rc.Omega2 * rc.Omega2 - sum) /
                           std::max(1.0, std::abs(sum)));
        dev_delta = std::max(
            dev_delta,
            std::abs(rc.delta) /
                std::max(1.0, std::abs(rc.omega_tilde1_sq - rc.omega_tilde2_sq)));
      }
      record("frequency_trace", dev_trace, 1e-10);
      record("delta_vanishes", dev_delta, 1e-10);
    } catch (const InvalidFrequency&) {
      results.push_back({"positive_normal_frequencies", "fail", -1.0, 0.0});
      physics_broken = true;
      frequencies_ok = false;
      skip("frequency_trace", 1e-10);
      skip("delta_vanishes", 1e-10);
    }
  } else {
    skip("frequency_trace", 1e-10);
    skip("delta_vanishes", 1e-10);
  }

  // Rotation phase additivity against one-shot quadrature.
  double dev_phi = 0.0;
  for (int k = 0; k + 1 < 8; ++k) {
    const double a = t0 + (t1 - t0) * k / 8.0;
    const double b = t0 + (t1 - t0) * (k + 1) / 8.0;
    SystemParams shifted = sc.params;
    shifted.t0 = a;
    const double direct = rotation_phase(shifted, b);
    dev_phi = std::max(dev_phi, std::abs(pipe.phi(b) - pipe.phi(a) - direct));
  }
  record("phi_additivity", dev_phi, 1e-9);

  // Symplectic Jacobians of the full chain by central differences.
  {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    double worst = 0.0;
    const double eps = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
      PhaseSpaceState s;
      s.frame = Frame::Original;
      s.q1 = uni(rng);
      s.q2 = uni(rng);
      s.p1 = uni(rng);
      s.p2 = uni(rng);
      s.t = t0 + (t1 - t0) * (trial + 0.5) / 20.0;
      double J[4][4];
      for (int col = 0; col < 4; ++col) {
        PhaseSpaceState plus = s, minus = s;
        double* pf = col == 0 ? &plus.q1 : col == 1 ? &plus.q2 : col == 2 ? &plus.p1 : &plus.p2;
        double* mf = col == 0 ? &minus.q1 : col == 1 ? &minus.q2 : col == 2 ? &minus.p1 : &minus.p2;
        *pf += eps;
        *mf -= eps;
        const PhaseSpaceState fp = pipe.map_state(plus, Frame::Normal);
        const PhaseSpaceState fm = pipe.map_state(minus, Frame::Normal);
        J[0][col] = (fp.q1 - fm.q1) / (2 * eps);
        J[1][col] = (fp.q2 - fm.q2) / (2 * eps);
        J[2][col] = (fp.p1 - fm.p1) / (2 * eps);
        J[3][col] = (fp.p2 - fm.p2) / (2 * eps);
      }
      // S has block form [[0, I], [-I, 0]] in the (q1, q2, p1, p2) ordering.
      const double S[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double jtsj = 0.0;
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) jtsj += J[a][i] * S[a][b] * J[b][j];
          worst = std::max(worst, std::abs(jtsj - S[i][j]));
        }
    }
    record("symplectic_chain", worst, 1e-8);
  }

  // Round trip through all four frames.
  {
    PhaseSpaceState s;
    s.frame = Frame::Original;
    s.q1 = 0.3;
    s.q2 = -1.2;
    s.p1 = 0.7;
    s.p2 = 0.1;
    s.t = 0.5 * (t0 + t1);
    const PhaseSpaceState back =
        pipe.map_state(pipe.map_state(s, Frame::Normal), Frame::Original);
    const double dev = std::max({std::abs(back.q1 - s.q1), std::abs(back.q2 - s.q2),
                                 std::abs(back.p1 - s.p1), std::abs(back.p2 - s.p2)});
    record("map_round_trip", dev, 1e-12);
  }

  if (frequencies_ok) {
    const FrequencyFn w1 = [&pipe](double t) {
      const ReducedCoefficients rc = pipe.coefficients(t);
      return rc.Omega1 * rc.Omega1;
    };
    const FrequencyFn w2 = [&pipe](double t) {
      const ReducedCoefficients rc = pipe.coefficients(t);
      return rc.Omega2 * rc.Omega2;
    };
    const ErmakovSolution erm = solve_ermakov(w1, w2, t0, t1, 257, sc.solver);

    double res = 0.0, wdrift = 0.0;
    for (double t : erm.mesh()) {
      res = std::max({res, ermakov_residual(erm.mode(0), w1, t),
                      ermakov_residual(erm.mode(1), w2, t)});
      wdrift = std::max({wdrift, std::abs(erm.mode(0).wronskian(t) - 1.0),
                         std::abs(erm.mode(1).wronskian(t) - 1.0)});
    }
    record("ermakov_residual", res, 1e-8);
    // The residual equals |W^2 - 1| on the default branch, so the Wronskian
    // bound matches it.
    record("wronskian_constancy", wdrift, 1e-8);

    // Classical invariant drift along a propagated normal-frame trajectory.
    {
      PhaseSpaceState s;
      s.frame = Frame::Normal;
      s.q1 = 1.0;
      s.q2 = 0.5;
      s.p1 = 0.0;
      s.p2 = -0.3;
      s.t = t0;
      const Trajectory traj = propagate(s, pipe, t1, 200, sc.solver);
      const double i0 = classical_invariant(s, 1.0, 0.0, 1.0, 0.0);
      double drift = 0.0;
      for (const PhaseSpaceState& st : traj.samples) {
        const double inv = classical_invariant(
            st, erm.mode(0).rho(st.t), erm.mode(0).rho_dot(st.t),
            erm.mode(1).rho(st.t), erm.mode(1).rho_dot(st.t));
        drift = std::max(drift, std::abs(inv - i0) / i0);
      }
      record("invariant_drift", drift, 1e-7);
    }

    // Cross-frame propagation agreement.
    {
      PhaseSpaceState s;
      s.frame = Frame::Original;
      s.q1 = 1.0;
      s.q2 = 0.0;
      s.p1 = 0.0;
      s.p2 = 0.5;
      s.t = t0;
      record("cross_frame_consistency",
             consistency_check(s, pipe, t1, 100, sc.solver), 1e-6);
    }

    // Grid norms of the transformed and original constructions.
    {
      const QuantumContext ctx(pipe, 257, sc.solver);
      const QuantumNumbers n{0, 0};
      const double tm = 0.5 * (t0 + t1);
      const GridSpec gt = auto_grid(ctx, FieldFrame::Transformed, sc.grid.n, sc.grid.widths);
      const GridSpec go = auto_grid(ctx, FieldFrame::Original, sc.grid.n, sc.grid.widths);
      record("chi_norm", std::abs(grid_norm(sample_chi(n, tm, ctx, gt)) - 1.0), 1e-6);
      record("psi_norm", std::abs(grid_norm(sample_psi(n, tm, ctx, go)) - 1.0), 1e-6);
    }
  } else {
    for (const char* name :
         {"ermakov_residual", "wronskian_constancy", "invariant_drift",
          "cross_frame_consistency", "chi_norm", "psi_norm"})
      skip(name, 0.0);
  }

  const fs::path path = prepare_out(out_dir) / (sc.name + "_validate.json");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  bool all_pass = true;
  std::fprintf(f, "{\n  \"scenario\": \"%s\",\n  \"checks\": [\n", sc.name.c_str());
  for (size_t i = 0; i < results.size(); ++i) {
    const CheckResult& r = results[i];
    if (r.status == "fail") all_pass = false;
    std::fprintf(f,
                 "    {\"name\": \"%s\", \"status\": \"%s\", \"value\": %.17g, "
                 "\"tolerance\": %.17g}%s\n",
                 r.name.c_str(), r.status.c_str(), r.value, r.tolerance,
                 i + 1 == results.size() ? "" : ",");
    if (r.status == "fail")
      std::fprintf(stderr, "check failed: %s (value %.3g, tolerance %.3g)\n",
                   r.name.c_str(), r.value, r.tolerance);
  }
  std::fprintf(f, "  ],\n  \"all_pass\": %s\n}\n", all_pass ? "true" : "false");
  std::fclose(f);
  std::printf("wrote %s\n", path.c_str());

  if (physics_broken) return kExitBadPhysics;
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-dependent coupled-oscillator toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string scenario_path;
  std::string out_dir = ".";
  bool fixed_step = false;
  app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
  app.add_option("--out", out_dir, "output directory (default: current)");
  app.add_flag("--fixed-step", fixed_step, "fixed-step RK4 (bit-reproducible outputs)");

  auto* reduce = app.add_subcommand("reduce", "emit derived coefficients as CSV");
  int reduce_samples = 256;
  reduce->add_option("--samples", reduce_samples, "number of time samples");

  auto* classical = app.add_subcommand("classical", "propagate Hamilton's equations");
  std::string frame = "original";
  double q1 = 1.0, q2 = 0.0, p1 = 0.0, p2 = 0.0;
  double t_end = std::nan("");
  int classical_samples = 200;
  classical->add_option("--frame", frame, "original or normal")
      ->check(CLI::IsMember({"original", "normal"}));
  classical->add_option("--q1", q1, "initial q1");
  classical->add_option("--q2", q2, "initial q2");
  classical->add_option("--p1", p1, "initial p1");
  classical->add_option("--p2", p2, "initial p2");
  classical->add_option("--t-end", t_end, "propagation end (default: interval end)");
  classical->add_option("--samples", classical_samples, "number of output samples");

  auto* ermakov = app.add_subcommand("ermakov", "solve the auxiliary equations");
  int ermakov_samples = 257;
  ermakov->add_option("--samples", ermakov_samples, "mesh size");

  auto* wavefunction = app.add_subcommand("wavefunction", "sample wave functions on a grid");
  int n1 = 0, n2 = 0, grid_n = 0;
  std::vector<double> times;
  std::string field = "psi";
  bool binary = false;
  wavefunction->add_option("--n1", n1, "first quantum number");
  wavefunction->add_option("--n2", n2, "second quantum number");
  wavefunction->add_option("--times", times, "sample times (comma separated)")
      ->delimiter(',');
  wavefunction->add_option("--grid-n", grid_n, "points per axis (default: scenario)");
  wavefunction->add_option("--field", field, "psi, psi_closed or chi")
      ->check(CLI::IsMember({"psi", "psi_closed", "chi"}));
  wavefunction->add_flag("--binary", binary, "write the binary dump instead of CSV");

  auto* validate = app.add_subcommand("validate", "run the invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    const Scenario sc = load_scenario(scenario_path);
    if (reduce->parsed()) return cmd_reduce(sc, out_dir, reduce_samples);
    if (classical->parsed())
      return cmd_classical(sc, out_dir, frame, q1, q2, p1, p2, t_end,
                           classical_samples, fixed_step);
    if (ermakov->parsed()) return cmd_ermakov(sc, out_dir, ermakov_samples, fixed_step);
    if (wavefunction->parsed())
      return cmd_wavefunction(sc, out_dir, n1, n2, times, grid_n, field, binary,
                              fixed_step);
    if (validate->parsed()) return cmd_validate(sc, out_dir);
  } catch (const ScenarioParseError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return kExitBadScenario;
  } catch (const InvalidScenario& e) {
    std::fprintf(stderr, "invalid physics: %s\n", e.what());
    return kExitBadPhysics;
  } catch (const InvalidFrequency& e) {
    std::fprintf(stderr, "invalid physics: %s\n", e.what());
    return kExitBadPhysics;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
