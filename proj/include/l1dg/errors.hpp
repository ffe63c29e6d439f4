#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "l1dg/dgspace.hpp"
#include "l1dg/mesh.hpp"
#include "l1dg/quadrature.hpp"

namespace l1dg {

/// Closed-form exact solution data. q = grad u; f defaults to A : D2u and
/// may be overridden (e.g. f = 0 for harmonic solutions); g is u on the
/// boundary.
struct ExactSolution {
  std::function<double(const Point&)> u;
  std::function<Eigen::Vector2d(const Point&)> grad;
  std::function<Eigen::Matrix2d(const Point&)> hess;
  std::function<double(const Point&)> f;  // source A : D2u
  std::function<double(const Point&)> g;  // boundary data (u on the boundary)
};

namespace detail {

inline int error_quad_degree(int dim) { return dim == 1 ? 10 : 8; }

}  // namespace detail

/// Broken Sobolev-norm error of the scalar field: accumulates all derivative
/// orders 0..l (full norm convention).
inline double broken_error(const Eigen::VectorXd& x, const DofLayout& layout, const Mesh& mesh,
                           const ExactSolution& exact, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("broken_error: order must be 0, 1 or 2");
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const QuadratureRule rule = quadrature(kind, detail::error_quad_degree(mesh.dim));
  double acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      const double wq = rule.weights[qp] * geo.det;
      const Point xq = geo.to_physical(rule.points[qp]);
      const FieldValue fv = evaluate_field(x, layout, mesh, e, rule.points[qp]);
      double s = std::pow(fv.w - exact.u(xq), 2);
      if (order >= 1) s += (fv.grad_w - exact.grad(xq)).head(mesh.dim).squaredNorm();
      if (order >= 2)
        s += (fv.hess_w - exact.hess(xq)).topLeftCorner(mesh.dim, mesh.dim).squaredNorm();
      acc += wq * s;
    }
  }
  return std::sqrt(acc);
}

/// Broken L2 error of the auxiliary vector field against q = grad u.
inline double q_error(const Eigen::VectorXd& x, const DofLayout& layout, const Mesh& mesh,
                      const ExactSolution& exact) {
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const QuadratureRule rule = quadrature(kind, detail::error_quad_degree(mesh.dim));
  double acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      const double wq = rule.weights[qp] * geo.det;
      const Point xq = geo.to_physical(rule.points[qp]);
      const FieldValue fv = evaluate_field(x, layout, mesh, e, rule.points[qp]);
      acc += wq * (fv.v - exact.grad(xq)).head(mesh.dim).squaredNorm();
    }
  }
  return std::sqrt(acc);
}

/// Broken L2 norm of the second-order residual A : grad(v_h) - f. For exact
/// solutions whose second derivatives are not square integrable this residual
/// is the natural finite measure of second-order accuracy.
inline double residual_error(const Eigen::VectorXd& x, const DofLayout& layout, const Mesh& mesh,
                             const std::function<Eigen::Matrix2d(const Point&)>& A,
                             const std::function<double(const Point&)>& f) {
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const QuadratureRule rule = quadrature(kind, detail::error_quad_degree(mesh.dim));
  double acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      const double wq = rule.weights[qp] * geo.det;
      const Point xq = geo.to_physical(rule.points[qp]);
      const FieldValue fv = evaluate_field(x, layout, mesh, e, rule.points[qp]);
      const double r = (A(xq).topLeftCorner(mesh.dim, mesh.dim)
                            .cwiseProduct(fv.jac_v.topLeftCorner(mesh.dim, mesh.dim)))
                           .sum() -
                       f(xq);
      acc += wq * r * r;
    }
  }
  return std::sqrt(acc);
}

/// Max |u - u_h| over a per-element lattice of sample points.
inline double linf_error(const Eigen::VectorXd& x, const DofLayout& layout, const Mesh& mesh,
                         const ExactSolution& exact, int samples = 5) {
  if (samples < 3) throw std::invalid_argument("linf_error: samples must be >= 3");
  double worst = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    if (mesh.dim == 1) {
      for (int i = 0; i < samples; ++i) {
        const Point ref(static_cast<double>(i) / (samples - 1), 0.0);
        const FieldValue fv = evaluate_field(x, layout, mesh, e, ref);
        worst = std::max(worst, std::abs(fv.w - exact.u(geo.to_physical(ref))));
      }
      continue;
    }
    for (int i = 0; i < samples; ++i)
      for (int j = 0; j < samples - i; ++j) {
        const Point ref(static_cast<double>(i) / (samples - 1), static_cast<double>(j) / (samples - 1));
        const FieldValue fv = evaluate_field(x, layout, mesh, e, ref);
        worst = std::max(worst, std::abs(fv.w - exact.u(geo.to_physical(ref))));
      }
  }
  return worst;
}

/// Elementwise best-approximation errors of the broken spaces: the scalar
/// field in P2 under the L2 and full-H1 metrics, and grad u in the P1 vector
/// space under L2. These are solver-independent floors; for solutions with
/// corner singularities they characterize the attainable accuracy.
struct BestApproximationErrors {
  double l2 = 0.0;
  double h1 = 0.0;
  double q_l2 = 0.0;
};

inline BestApproximationErrors best_approximation_errors(const Mesh& mesh,
                                                         const ExactSolution& exact) {
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const ShapeSet ws = shape_functions(kind, 2);
  const ShapeSet vs = shape_functions(kind, 1);
  const QuadratureRule rule = quadrature(kind, detail::error_quad_degree(mesh.dim));
  const int nw = ws.size();
  const int nv = vs.size();
  double l2_acc = 0.0, h1_acc = 0.0, q_acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    Eigen::MatrixXd M0 = Eigen::MatrixXd::Zero(nw, nw);
    Eigen::MatrixXd M1 = Eigen::MatrixXd::Zero(nw, nw);
    Eigen::VectorXd r0 = Eigen::VectorXd::Zero(nw);
    Eigen::VectorXd r1 = Eigen::VectorXd::Zero(nw);
    Eigen::MatrixXd Mv = Eigen::MatrixXd::Zero(nv, nv);
    Eigen::MatrixXd rv = Eigen::MatrixXd::Zero(nv, mesh.dim);
    double u_sq = 0.0, u_h1_sq = 0.0, g_sq = 0.0;
    Eigen::VectorXd phi(nw), psi(nv);
    Eigen::MatrixXd gphi(nw, mesh.dim);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      const double wq = rule.weights[qp] * geo.det;
      const Point xq = geo.to_physical(rule.points[qp]);
      const double u = exact.u(xq);
      const Eigen::VectorXd gu = exact.grad(xq).head(mesh.dim);
      for (int i = 0; i < nw; ++i) {
        const ShapeEval s = ws.evaluate(i, rule.points[qp]);
        phi[i] = s.value;
        gphi.row(i) = geo.grad(s).head(mesh.dim).transpose();
      }
      for (int i = 0; i < nv; ++i) psi[i] = vs.evaluate(i, rule.points[qp]).value;
      M0 += wq * phi * phi.transpose();
      M1 += wq * (phi * phi.transpose() + gphi * gphi.transpose());
      r0 += wq * u * phi;
      r1 += wq * (u * phi + gphi * gu);
      Mv += wq * psi * psi.transpose();
      rv += wq * psi * gu.transpose();
      u_sq += wq * u * u;
      u_h1_sq += wq * (u * u + gu.squaredNorm());
      g_sq += wq * gu.squaredNorm();
    }
    l2_acc += u_sq - M0.ldlt().solve(r0).dot(r0);
    h1_acc += u_h1_sq - M1.ldlt().solve(r1).dot(r1);
    const Eigen::MatrixXd cv = Mv.ldlt().solve(rv);
    for (int c = 0; c < mesh.dim; ++c) g_sq -= cv.col(c).dot(rv.col(c));
    q_acc += g_sq;
  }
  BestApproximationErrors out;
  out.l2 = std::sqrt(std::max(0.0, l2_acc));
  out.h1 = std::sqrt(std::max(0.0, h1_acc));
  out.q_l2 = std::sqrt(std::max(0.0, q_acc));
  return out;
}

/// Experimental orders of convergence log2(e_{i-1}/e_i) for N doubling.
inline std::vector<double> convergence_orders(const std::vector<double>& errors,
                                              const std::vector<int>& Ns) {
  if (errors.size() != Ns.size()) throw std::invalid_argument("convergence_orders: size mismatch");
  for (std::size_t i = 1; i < Ns.size(); ++i)
    if (Ns[i] != 2 * Ns[i - 1]) throw std::invalid_argument("convergence_orders: Ns must double");
  std::vector<double> orders;
  for (std::size_t i = 1; i < errors.size(); ++i) orders.push_back(std::log2(errors[i - 1] / errors[i]));
  return orders;
}

/// One refinement level of a convergence study.
struct ErrorRow {
  int N = 0;
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double q_l2 = 0.0;
  double linf = 0.0;
  double residual2 = 0.0;  // || A : grad(v_h) - f ||
  long iterations = 0;
  bool converged = true;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;

  std::vector<double> column(double ErrorRow::* field) const {
    std::vector<double> out;
    for (const auto& r : rows) out.push_back(r.*field);
    return out;
  }
  std::vector<int> Ns() const {
    std::vector<int> out;
    for (const auto& r : rows) out.push_back(r.N);
    return out;
  }
};

}  // namespace l1dg
