#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <vector>

#include "l1dg/dgspace.hpp"
#include "l1dg/mesh.hpp"
#include "l1dg/quadrature.hpp"

namespace l1dg {

enum class CoefficientSmoothness { constant, continuous, piecewise };

/// Symmetric positive definite coefficient matrix A(x). 1D problems use the
/// (0,0) entry only.
struct CoefficientField {
  std::function<Eigen::Matrix2d(const Point&)> A;
  CoefficientSmoothness smoothness = CoefficientSmoothness::constant;
};

inline CoefficientField constant_coefficient(const Eigen::Matrix2d& A) {
  return {[A](const Point&) { return A; }, CoefficientSmoothness::constant};
}

/// Exponent profile of the face penalty rows (powers of 1/h on the
/// [[v.n]], [[w]] and boundary blocks).
struct PenaltyProfile {
  int vn_jump = 1;
  int w_jump = 1;
  int boundary = 2;

  /// Matrix-form weights: tau/h on both interior jump blocks, tau/h^2 on the
  /// boundary block. Used by all convergence studies.
  static PenaltyProfile standard() { return {1, 1, 2}; }
  /// Alias emphasizing that the 1D matrix algebra uses the same exponents.
  static PenaltyProfile one_dimensional() { return {1, 1, 2}; }
  /// Variant with the h^-2 interior w-jump weight of the continuous
  /// energy-functional scaling.
  static PenaltyProfile strong_w() { return {1, 2, 2}; }
};

/// Discrete optimization data: min x'Bx + b'x + ||Lx - d||_1.
struct AssembledSystem {
  Eigen::SparseMatrix<double> B;
  Eigen::VectorXd b;
  Eigen::SparseMatrix<double> L;
  Eigen::VectorXd d;
  double h = 0.0;
  double tau = 1.0;
  double f_sq_norm = 0.0;  // ||f||^2 over the mesh, for objective bookkeeping
  DofLayout layout;
  int rows_vn = 0;
  int rows_w = 0;
  int rows_boundary = 0;
};

namespace detail {

inline void check_layout(const Mesh& mesh, const DofLayout& layout) {
  if (layout.dim != mesh.dim || layout.num_elements != mesh.num_elements())
    throw std::invalid_argument("assembly: layout does not match mesh");
}

/// A : J for the Jacobian of a vector shape function chi * e_c, whose only
/// nonzero row is c with entries grad(chi).
inline double a_contract(const Eigen::Matrix2d& A, const Eigen::Vector2d& grad_chi, int comp, int dim) {
  double s = 0.0;
  for (int b = 0; b < dim; ++b) s += A(comp, b) * grad_chi[b];
  return s;
}

}  // namespace detail

inline Eigen::SparseMatrix<double> assemble_B(const Mesh& mesh, const DofLayout& layout,
                                              const CoefficientField& coeff, int quad_degree = 6) {
  detail::check_layout(mesh, layout);
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const ShapeSet w_shapes = shape_functions(kind, 2);
  const ShapeSet v_shapes = shape_functions(kind, 1);
  const QuadratureRule rule = quadrature(kind, quad_degree);
  const double inv_h2 = 1.0 / (mesh.h * mesh.h);
  const int nw = w_shapes.size();
  const int nv = v_shapes.size() * mesh.dim;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(mesh.num_elements()) * static_cast<std::size_t>((nw + nv) * (nw + nv)));
  Eigen::MatrixXd local(nw + nv, nw + nv);
  std::vector<Eigen::Vector2d> gw(static_cast<std::size_t>(nw));
  std::vector<Eigen::Vector2d> gv(static_cast<std::size_t>(v_shapes.size()));
  std::vector<double> val_v(static_cast<std::size_t>(v_shapes.size()));

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    local.setZero();
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      const double wq = rule.weights[qp] * geo.det;
      const Point xq = geo.to_physical(rule.points[qp]);
      const Eigen::Matrix2d A = coeff.A(xq);
      for (int i = 0; i < nw; ++i) gw[static_cast<std::size_t>(i)] = geo.grad(w_shapes.evaluate(i, rule.points[qp]));
      for (int i = 0; i < v_shapes.size(); ++i) {
        const ShapeEval s = v_shapes.evaluate(i, rule.points[qp]);
        gv[static_cast<std::size_t>(i)] = geo.grad(s);
        val_v[static_cast<std::size_t>(i)] = s.value;
      }
      // B11 = h^-2 (grad w_i, grad w_j)
      for (int i = 0; i < nw; ++i)
        for (int j = 0; j <= i; ++j) {
          const double v = wq * inv_h2 * gw[static_cast<std::size_t>(i)].dot(gw[static_cast<std::size_t>(j)]);
          local(i, j) += v;
          if (i != j) local(j, i) += v;
        }
      // B12 = -h^-2 (grad w_i, v_j); B22 = (A:grad v_i, A:grad v_j) + h^-2 (v_i, v_j)
      for (int jn = 0; jn < v_shapes.size(); ++jn) {
        for (int jc = 0; jc < mesh.dim; ++jc) {
          const int j = nw + jn * mesh.dim + jc;
          const double av_j = detail::a_contract(A, gv[static_cast<std::size_t>(jn)], jc, mesh.dim);
          for (int i = 0; i < nw; ++i) {
            const double v = -wq * inv_h2 * gw[static_cast<std::size_t>(i)][jc] * val_v[static_cast<std::size_t>(jn)];
            local(i, j) += v;
            local(j, i) += v;
          }
          for (int in = 0; in < v_shapes.size(); ++in)
            for (int ic = 0; ic < mesh.dim; ++ic) {
              const int i = nw + in * mesh.dim + ic;
              if (i > j) continue;
              const double av_i = detail::a_contract(A, gv[static_cast<std::size_t>(in)], ic, mesh.dim);
              double v = wq * av_i * av_j;
              if (ic == jc) v += wq * inv_h2 * val_v[static_cast<std::size_t>(in)] * val_v[static_cast<std::size_t>(jn)];
              local(i, j) += v;
              if (i != j) local(j, i) += v;
            }
        }
      }
    }
    auto gdof = [&](int local_idx) {
      if (local_idx < nw) return layout.w_index(e, local_idx);
      const int k = local_idx - nw;
      return layout.v_index(e, k / mesh.dim, k % mesh.dim);
    };
    for (int i = 0; i < nw + nv; ++i)
      for (int j = 0; j < nw + nv; ++j)
        if (local(i, j) != 0.0) trip.emplace_back(gdof(i), gdof(j), local(i, j));
  }

  Eigen::SparseMatrix<double> B(layout.n_total(), layout.n_total());
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

inline Eigen::VectorXd assemble_b(const Mesh& mesh, const DofLayout& layout,
                                  const CoefficientField& coeff,
                                  const std::function<double(const Point&)>& f,
                                  int quad_degree = 6) {
  detail::check_layout(mesh, layout);
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const ShapeSet v_shapes = shape_functions(kind, 1);
  const QuadratureRule rule = quadrature(kind, quad_degree);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(layout.n_total());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      const double wq = rule.weights[qp] * geo.det;
      const Point xq = geo.to_physical(rule.points[qp]);
      const Eigen::Matrix2d A = coeff.A(xq);
      const double fq = f(xq);
      for (int jn = 0; jn < v_shapes.size(); ++jn) {
        const Eigen::Vector2d g = geo.grad(v_shapes.evaluate(jn, rule.points[qp]));
        for (int jc = 0; jc < mesh.dim; ++jc)
          b[layout.v_index(e, jn, jc)] += -2.0 * wq * detail::a_contract(A, g, jc, mesh.dim) * fq;
      }
    }
  }
  return b;
}

/// Penalty rows: tau h^-e1 [[v.n]] nodal values on interior faces, then
/// tau h^-e2 [[w]] nodal values on interior faces, then tau h^-e3 w nodal
/// values on boundary faces; d carries the matching boundary data values.
inline std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> assemble_L_d(
    const Mesh& mesh, const DofLayout& layout, double tau,
    const std::function<double(const Point&)>& g,
    PenaltyProfile profile = PenaltyProfile::standard()) {
  detail::check_layout(mesh, layout);
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const ShapeSet w_shapes = shape_functions(kind, 2);
  const ShapeSet v_shapes = shape_functions(kind, 1);
  const int n_vn_nodes = mesh.dim == 1 ? 1 : 2;
  const int n_w_nodes = mesh.dim == 1 ? 1 : 3;
  const int n_interior = mesh.num_interior_faces();
  const int n_boundary = mesh.num_boundary_faces();
  const int rows_vn = n_vn_nodes * n_interior;
  const int rows_w = n_w_nodes * n_interior;
  const int rows_bd = n_w_nodes * n_boundary;
  const double s_vn = tau * std::pow(mesh.h, -profile.vn_jump);
  const double s_w = tau * std::pow(mesh.h, -profile.w_jump);
  const double s_bd = tau * std::pow(mesh.h, -profile.boundary);

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(rows_vn + rows_w + rows_bd);

  auto add_vn_side = [&](int row, const Face& f, int elem, int node, double sign) {
    const Point ref = detail::face_node_ref(mesh, f, elem, node);
    for (int i = 0; i < v_shapes.size(); ++i) {
      const double val = v_shapes.evaluate(i, ref).value;
      if (val == 0.0) continue;
      for (int c = 0; c < mesh.dim; ++c) {
        const double entry = sign * s_vn * val * f.normal[c];
        if (entry != 0.0) trip.emplace_back(row, layout.v_index(elem, i, c), entry);
      }
    }
  };
  auto add_w_side = [&](int row, const Face& f, int elem, int node, double scaled_sign) {
    const Point ref = detail::face_node_ref(mesh, f, elem, node);
    for (int i = 0; i < w_shapes.size(); ++i) {
      const double val = w_shapes.evaluate(i, ref).value;
      if (val != 0.0) trip.emplace_back(row, layout.w_index(elem, i), scaled_sign * val);
    }
  };

  int row_vn = 0;
  int row_w = rows_vn;
  int row_bd = rows_vn + rows_w;
  for (const auto& f : mesh.faces) {
    if (f.is_boundary()) continue;
    for (int node = 0; node < n_vn_nodes; ++node) {
      add_vn_side(row_vn, f, f.left, node, +1.0);
      add_vn_side(row_vn, f, f.right, node, -1.0);
      ++row_vn;
    }
    for (int node = 0; node < n_w_nodes; ++node) {
      add_w_side(row_w, f, f.left, node, +s_w);
      add_w_side(row_w, f, f.right, node, -s_w);
      ++row_w;
    }
  }
  for (const auto& f : mesh.faces) {
    if (!f.is_boundary()) continue;
    const auto nodes = mesh.face_nodes(f);
    for (int node = 0; node < n_w_nodes; ++node) {
      add_w_side(row_bd, f, f.left, node, s_bd);
      d[row_bd] = s_bd * g(nodes[static_cast<std::size_t>(node)]);
      ++row_bd;
    }
  }

  Eigen::SparseMatrix<double> L(rows_vn + rows_w + rows_bd, layout.n_total());
  L.setFromTriplets(trip.begin(), trip.end());
  return {L, d};
}

inline AssembledSystem assemble_system(const Mesh& mesh, const DofLayout& layout,
                                       const CoefficientField& coeff,
                                       const std::function<double(const Point&)>& f,
                                       const std::function<double(const Point&)>& g, double tau,
                                       PenaltyProfile profile = {},
                                       int quad_degree = 6) {
  AssembledSystem sys;
  sys.layout = layout;
  sys.h = mesh.h;
  sys.tau = tau;
  sys.B = assemble_B(mesh, layout, coeff, quad_degree);
  sys.b = assemble_b(mesh, layout, coeff, f, quad_degree);
  std::tie(sys.L, sys.d) = assemble_L_d(mesh, layout, tau, g, profile);
  const int n_vn_nodes = mesh.dim == 1 ? 1 : 2;
  const int n_w_nodes = mesh.dim == 1 ? 1 : 3;
  sys.rows_vn = n_vn_nodes * mesh.num_interior_faces();
  sys.rows_w = n_w_nodes * mesh.num_interior_faces();
  sys.rows_boundary = n_w_nodes * mesh.num_boundary_faces();
  // ||f||^2 over the mesh, evaluated at the assembly quadrature
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const QuadratureRule rule = quadrature(kind, quad_degree);
  double fsq = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      const double fq = f(geo.to_physical(rule.points[qp]));
      fsq += rule.weights[qp] * geo.det * fq * fq;
    }
  }
  sys.f_sq_norm = fsq;
  return sys;
}

}  // namespace l1dg
