#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "l1dg/assembly.hpp"

namespace l1dg {

/// Parameters of the explicit fixed-point proximity iteration with
/// P = lambda*I and Q = diag(q).
struct FppaConfig {
  double alpha = 1.0;
  double lambda = 1.0;
  Eigen::VectorXd q;
  long max_iterations = 200000;
  double eps_stop = 1e-10;  // relative successive-iterate change
  long monitor_interval = 50;

  void validate() const {
    if (alpha <= 0.0 || lambda <= 0.0) throw std::invalid_argument("FppaConfig: alpha, lambda must be > 0");
    if ((q.array() <= 0.0).any()) throw std::invalid_argument("FppaConfig: q must be positive");
  }
};

struct IterationRecord {
  long iteration = 0;
  double objective = 0.0;
  double successive_change = 0.0;
  double fp_residual = 0.0;
};

struct FppaState {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  long iterations = 0;
  bool converged = false;
  bool condition_satisfied = true;  // ||Q^-1/2 L P^-1/2|| <= 1 at start
  double fp_residual = 0.0;
  std::vector<IterationRecord> history;
};

inline double objective(const AssembledSystem& sys, const Eigen::VectorXd& x) {
  return x.dot(sys.B * x) + sys.b.dot(x) + (sys.L * x - sys.d).lpNorm<1>();
}

/// Cached SPD factorization of (lambda I + 2 alpha B); applies
/// prox_{alpha g, lambda I}-type solves.
class QuadraticProx {
 public:
  QuadraticProx(const Eigen::SparseMatrix<double>& B, double alpha, double lambda) {
    Eigen::SparseMatrix<double> M = 2.0 * alpha * B;
    Eigen::SparseMatrix<double> I(B.rows(), B.cols());
    I.setIdentity();
    M += lambda * I;
    solver_.compute(M);
    if (solver_.info() != Eigen::Success)
      throw std::runtime_error("QuadraticProx: factorization failed (B not PSD or lambda <= 0?)");
  }

  /// Solves (P + 2 alpha B) u = rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return solver_.solve(rhs); }

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

/// prox_{alpha g, lambda I}(x) = (P + 2 alpha B)^-1 (P x - alpha b).
inline Eigen::VectorXd prox_quadratic(const Eigen::VectorXd& x, double alpha, double lambda,
                                      const Eigen::SparseMatrix<double>& B, const Eigen::VectorXd& b) {
  QuadraticProx prox(B, alpha, lambda);
  return prox.solve(lambda * x - alpha * b);
}

/// prox_{(alpha h)*, Q}(y) = Proj_[-alpha,alpha](y_i - d_i / q_i) componentwise.
inline Eigen::VectorXd prox_conjugate_l1(const Eigen::VectorXd& y, double alpha,
                                         const Eigen::VectorXd& q, const Eigen::VectorXd& d) {
  return (y - d.cwiseQuotient(q)).cwiseMax(-alpha).cwiseMin(alpha);
}

/// Power-iteration estimate of ||Q^-1/2 L P^-1/2|| with P = lambda I.
inline double operator_norm_estimate(const Eigen::SparseMatrix<double>& L, double lambda,
                                     const Eigen::VectorXd& q, int max_iter = 20000, double tol = 1e-9) {
  if (L.rows() == 0 || L.nonZeros() == 0) return 0.0;
  const Eigen::VectorXd qi_sqrt_inv = q.cwiseSqrt().cwiseInverse();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(L.rows());
  v += Eigen::VectorXd::LinSpaced(L.rows(), 0.0, 1.0);  // break symmetry deterministically
  v.normalize();
  double mu = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    // S v = Q^-1/2 L (1/lambda) L' Q^-1/2 v
    Eigen::VectorXd w = qi_sqrt_inv.cwiseProduct(v);
    w = L.transpose() * w;
    w /= lambda;
    w = L * w;
    w = qi_sqrt_inv.cwiseProduct(w);
    const double mu_new = w.norm();
    if (mu_new == 0.0) return 0.0;
    w /= mu_new;
    const bool done = std::abs(mu_new - mu) <= tol * std::max(1.0, mu_new);
    mu = mu_new;
    v = w;
    if (done && it > 3) break;
  }
  return std::sqrt(mu);
}

enum class ParameterStrategy { rowsum, one_d_paper };

struct SelectedParameters {
  double lambda = 1.0;
  Eigen::VectorXd q;
};

/// "rowsum": q_i = sum_j |L_ij|, lambda = ||Q^-1/2 L||_1 ||Q^-1/2 L||_inf,
/// which gives ||Q^-1/2 L P^-1/2||^2 <= 1.
/// "one_d_paper": lambda at equality in the 1D convergence condition, for a
/// caller-supplied q (defaults to ones).
inline SelectedParameters select_parameters(const AssembledSystem& sys,
                                            ParameterStrategy strategy = ParameterStrategy::rowsum,
                                            std::optional<Eigen::VectorXd> q_user = std::nullopt) {
  const Eigen::SparseMatrix<double>& L = sys.L;
  SelectedParameters out;
  if (strategy == ParameterStrategy::one_d_paper) {
    out.q = q_user.value_or(Eigen::VectorXd::Ones(L.rows()));
    const int jump_rows = sys.rows_vn + sys.rows_w;
    const double h = sys.h;
    double m = 0.0;
    for (int i = 0; i < L.rows(); ++i) {
      const double qi_inv = 1.0 / out.q[i];
      m = std::max(m, i < jump_rows ? 2.0 * h * h * qi_inv : qi_inv);
    }
    out.lambda = sys.tau * sys.tau / (h * h * h * h) * m;
    return out;
  }
  Eigen::VectorXd row_abs = Eigen::VectorXd::Zero(L.rows());
  Eigen::VectorXd col_abs = Eigen::VectorXd::Zero(L.cols());
  for (int k = 0; k < L.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(L, k); it; ++it)
      row_abs[it.row()] += std::abs(it.value());
  if ((row_abs.array() == 0.0).any()) throw std::invalid_argument("select_parameters: L has an empty row");
  out.q = row_abs;
  const Eigen::VectorXd scale = row_abs.cwiseSqrt().cwiseInverse();
  double norm_inf = 0.0;  // max row sum of |Q^-1/2 L|
  for (int i = 0; i < L.rows(); ++i) norm_inf = std::max(norm_inf, scale[i] * row_abs[i]);
  for (int k = 0; k < L.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(L, k); it; ++it)
      col_abs[it.col()] += scale[it.row()] * std::abs(it.value());
  out.lambda = norm_inf * col_abs.maxCoeff();
  return out;
}

/// Fixed-point residual of the optimality system at (x, y).
inline double fixed_point_residual(const AssembledSystem& sys, const FppaConfig& cfg,
                                   const QuadraticProx& prox, const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y) {
  const Eigen::VectorXd px = prox.solve(cfg.lambda * x - sys.L.transpose() * y - cfg.alpha * sys.b);
  const Eigen::VectorXd py =
      prox_conjugate_l1(y + (sys.L * x).cwiseQuotient(cfg.q), cfg.alpha, cfg.q, sys.d);
  return (x - px).norm() + (y - py).norm();
}

/// Explicit FP2A iteration:
///   y_{k+1} = Proj_[-a,a](y_k + (L x_k - d) ./ q)
///   x_{k+1} = (P + 2 a B)^-1 (L'(y_k - 2 y_{k+1}) + P x_k - a b)
inline FppaState solve(const AssembledSystem& sys, const FppaConfig& cfg,
                       std::optional<Eigen::VectorXd> x0 = std::nullopt,
                       std::optional<Eigen::VectorXd> y0 = std::nullopt) {
  cfg.validate();
  if (cfg.q.size() != sys.L.rows()) throw std::invalid_argument("solve: q size mismatch");
  FppaState st;
  st.x = x0.value_or(Eigen::VectorXd::Zero(sys.layout.n_total()));
  st.y = y0.value_or(Eigen::VectorXd::Zero(sys.L.rows()));
  const double op_norm = operator_norm_estimate(sys.L, cfg.lambda, cfg.q);
  st.condition_satisfied = op_norm <= 1.0 + 1e-6;

  QuadraticProx prox(sys.B, cfg.alpha, cfg.lambda);
  const Eigen::VectorXd alpha_b = cfg.alpha * sys.b;
  Eigen::VectorXd y_next, x_next;
  for (long k = 0; k < cfg.max_iterations; ++k) {
    y_next = ((sys.L * st.x - sys.d).cwiseQuotient(cfg.q) + st.y).cwiseMax(-cfg.alpha).cwiseMin(cfg.alpha);
    x_next = prox.solve(sys.L.transpose() * (st.y - 2.0 * y_next) + cfg.lambda * st.x - alpha_b);
    const double z_norm = std::sqrt(st.x.squaredNorm() + st.y.squaredNorm());
    const double change = std::sqrt((x_next - st.x).squaredNorm() + (y_next - st.y).squaredNorm());
    const double rel_change = change / std::max(1.0, z_norm);
    st.x.swap(x_next);
    st.y.swap(y_next);
    st.iterations = k + 1;
    const bool candidate = rel_change < cfg.eps_stop;
    if (candidate || (cfg.monitor_interval > 0 && (k + 1) % cfg.monitor_interval == 0)) {
      IterationRecord rec;
      rec.iteration = k + 1;
      rec.objective = objective(sys, st.x);
      rec.successive_change = rel_change;
      rec.fp_residual = fixed_point_residual(sys, cfg, prox, st.x, st.y);
      st.history.push_back(rec);
      if (candidate) {
        const double z1 = std::sqrt(st.x.squaredNorm() + st.y.squaredNorm());
        if (rec.fp_residual <= 10.0 * cfg.eps_stop * (1.0 + z1)) {
          st.converged = true;
          st.fp_residual = rec.fp_residual;
          return st;
        }
      }
    }
  }
  st.fp_residual = fixed_point_residual(sys, cfg, prox, st.x, st.y);
  return st;
}

/// Minimizer of the smooth surrogate x'Bx + b'x + ||Lx - d||_2^2; a cheap
/// warm start for the L1 iteration.
inline Eigen::VectorXd l2_warm_start(const AssembledSystem& sys) {
  Eigen::SparseMatrix<double> M = 2.0 * sys.B;
  const Eigen::SparseMatrix<double> Lt = sys.L.transpose();
  M += 2.0 * (Lt * sys.L).pruned();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(M);
  if (solver.info() != Eigen::Success) {
    Eigen::SparseMatrix<double> I(M.rows(), M.cols());
    I.setIdentity();
    M += 1e-10 * I;
    solver.compute(M);
    if (solver.info() != Eigen::Success) throw std::runtime_error("l2_warm_start: factorization failed");
  }
  return solver.solve(2.0 * (Lt * sys.d) - sys.b);
}

}  // namespace l1dg
