#pragma once

#include <optional>
#include <vector>

#include "l1dg/assembly.hpp"
#include "l1dg/errors.hpp"
#include "l1dg/fppa.hpp"
#include "l1dg/multiscale.hpp"
#include "l1dg/problems.hpp"

namespace l1dg {

/// Knobs of one convergence run; unset optionals fall back to the automatic
/// parameter selection.
struct StudyConfig {
  double tau = 1.0;
  double alpha = 1.0;
  std::optional<double> lambda;
  std::optional<double> eps_stop;
  long max_iterations = 200000;
  bool warm_start = true;
  int linf_samples = 5;

  double stop_tolerance() const { return eps_stop.value_or(1e-9); }
};

struct RunResult {
  ErrorRow row;
  FppaState state;
  FppaConfig fppa;
};

inline RunResult run_level(const Problem& problem, int N, const StudyConfig& cfg) {
  const Mesh mesh = problem.build_mesh(N);
  const DofLayout layout = DofLayout::of(mesh);
  const AssembledSystem sys =
      assemble_system(mesh, layout, problem.coeff, problem.exact.f, problem.exact.g, cfg.tau);
  const SelectedParameters params = select_parameters(sys);
  FppaConfig fc;
  fc.alpha = cfg.alpha;
  fc.lambda = cfg.lambda.value_or(params.lambda);
  fc.q = params.q;
  fc.eps_stop = cfg.stop_tolerance();
  fc.max_iterations = cfg.max_iterations;
  fc.monitor_interval = 0;  // convergence studies do not need the iteration trace

  std::optional<Eigen::VectorXd> x0;
  if (cfg.warm_start) x0 = l2_warm_start(sys);
  RunResult out;
  out.state = solve(sys, fc, x0);
  out.fppa = fc;
  out.row.N = N;
  out.row.l2 = broken_error(out.state.x, layout, mesh, problem.exact, 0);
  out.row.h1 = broken_error(out.state.x, layout, mesh, problem.exact, 1);
  out.row.h2 = broken_error(out.state.x, layout, mesh, problem.exact, 2);
  out.row.q_l2 = q_error(out.state.x, layout, mesh, problem.exact);
  out.row.linf = linf_error(out.state.x, layout, mesh, problem.exact, cfg.linf_samples);
  out.row.residual2 = residual_error(out.state.x, layout, mesh, problem.coeff.A, problem.exact.f);
  out.row.iterations = out.state.iterations;
  out.row.converged = out.state.converged;
  return out;
}

inline ErrorReport run_convergence(const Problem& problem, const std::vector<int>& Ns,
                                   const StudyConfig& cfg) {
  ErrorReport report;
  for (int N : Ns) report.rows.push_back(run_level(problem, N, cfg).row);
  return report;
}

/// Compression study of the 1D kink solution: solve on the level-J dyadic
/// mesh, change the scalar unknowns to the multiscale basis, truncate at each
/// threshold and measure the L2 error of the reconstructed field.
struct MultiscaleStudy {
  int level = 0;
  double single_scale_error = 0.0;
  std::vector<TruncationReport> rows;
  Eigen::VectorXd coefficients;  // untruncated multiscale coefficients
  long iterations = 0;
  bool converged = false;
};

inline MultiscaleStudy run_multiscale(double t, double kink_n, int J,
                                      const std::vector<double>& thresholds,
                                      const StudyConfig& cfg) {
  if (J < 1) throw std::invalid_argument("run_multiscale: level must be >= 1");
  const Problem problem = make_kink_problem(t, kink_n);
  const int N = 1 << J;
  const Mesh mesh = problem.build_mesh(N);
  const DofLayout layout = DofLayout::of(mesh);
  const RunResult run = run_level(problem, N, cfg);

  MultiscaleStudy out;
  out.level = J;
  out.iterations = run.state.iterations;
  out.converged = run.state.converged;
  out.single_scale_error = run.row.l2;

  const Eigen::MatrixXd T = build_transform(J);
  const Eigen::VectorXd x_w = run.state.x.head(layout.n_w());
  out.coefficients = to_multiscale(x_w, T);
  for (double thr : thresholds) {
    const TruncationResult tr = truncate(out.coefficients, thr);
    Eigen::VectorXd x_rec = run.state.x;
    x_rec.head(layout.n_w()) = from_multiscale(tr.coefficients, T);
    TruncationReport row;
    row.threshold = thr;
    row.sparsity_percent = tr.sparsity_percent;
    row.l2_error = broken_error(x_rec, layout, mesh, problem.exact, 0);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace l1dg
