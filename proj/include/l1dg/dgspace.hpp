#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <vector>

#include "l1dg/mesh.hpp"
#include "l1dg/quadrature.hpp"

namespace l1dg {

/// Value, gradient and Hessian of one Lagrange shape function at a
/// reference-element point.
struct ShapeEval {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

/// Nodal Lagrange bases on the reference interval [0,1] and the reference
/// triangle (0,0),(1,0),(0,1).
///
/// P2 interval nodes: {0, 1/2, 1}. P1 interval nodes: {0, 1}.
/// P2 triangle nodes: vertices 0,1,2 then midpoints of edges (0,1),(1,2),(2,0).
/// P1 triangle nodes: vertices.
struct ShapeSet {
  CellKind kind;
  int degree;

  int size() const {
    if (kind == CellKind::interval) return degree == 1 ? 2 : 3;
    return degree == 1 ? 3 : 6;
  }

  /// Reference coordinates of the Lagrange nodes.
  std::vector<Point> nodes() const {
    if (kind == CellKind::interval) {
      if (degree == 1) return {{0.0, 0.0}, {1.0, 0.0}};
      return {{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
    }
    if (degree == 1) return {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    return {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
  }

  ShapeEval evaluate(int i, const Point& p) const {
    if (kind == CellKind::interval) return eval_interval(i, p.x());
    return eval_triangle(i, p.x(), p.y());
  }

 private:
  static ShapeEval eval_interval_p1(int i, double x) {
    ShapeEval s;
    s.value = (i == 0) ? 1.0 - x : x;
    s.grad.x() = (i == 0) ? -1.0 : 1.0;
    return s;
  }

  static ShapeEval eval_interval_p2(int i, double x) {
    ShapeEval s;
    switch (i) {
      case 0:
        s.value = (1.0 - x) * (1.0 - 2.0 * x);
        s.grad.x() = 4.0 * x - 3.0;
        s.hess(0, 0) = 4.0;
        break;
      case 1:
        s.value = 4.0 * x * (1.0 - x);
        s.grad.x() = 4.0 - 8.0 * x;
        s.hess(0, 0) = -8.0;
        break;
      default:
        s.value = x * (2.0 * x - 1.0);
        s.grad.x() = 4.0 * x - 1.0;
        s.hess(0, 0) = 4.0;
        break;
    }
    return s;
  }

  ShapeEval eval_interval(int i, double x) const {
    if (degree == 1) return eval_interval_p1(i, x);
    if (degree == 2) return eval_interval_p2(i, x);
    throw std::invalid_argument("ShapeSet: unsupported degree");
  }

  ShapeEval eval_triangle(int i, double x, double y) const {
    // barycentric coordinates and their constant gradients
    const double l[3] = {1.0 - x - y, x, y};
    const Eigen::Vector2d dl[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    ShapeEval s;
    if (degree == 1) {
      s.value = l[i];
      s.grad = dl[i];
      return s;
    }
    if (degree != 2) throw std::invalid_argument("ShapeSet: unsupported degree");
    if (i < 3) {
      s.value = l[i] * (2.0 * l[i] - 1.0);
      s.grad = (4.0 * l[i] - 1.0) * dl[i];
      s.hess = 4.0 * dl[i] * dl[i].transpose();
      return s;
    }
    static constexpr int ea[3] = {0, 1, 2};
    static constexpr int eb[3] = {1, 2, 0};
    const int a = ea[i - 3], b = eb[i - 3];
    s.value = 4.0 * l[a] * l[b];
    s.grad = 4.0 * (l[a] * dl[b] + l[b] * dl[a]);
    s.hess = 4.0 * (dl[a] * dl[b].transpose() + dl[b] * dl[a].transpose());
    return s;
  }
};

inline ShapeSet shape_functions(CellKind kind, int degree) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("shape_functions: degree must be 1 or 2");
  return ShapeSet{kind, degree};
}

/// Affine map between the reference cell and a physical element.
struct ElementGeometry {
  Point origin = Point::Zero();
  Eigen::Matrix2d jac = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d jac_inv = Eigen::Matrix2d::Identity();
  double det = 1.0;  // measure scale: |J| in 2D, element length in 1D
  int dim = 2;

  static ElementGeometry of(const Mesh& mesh, int elem) {
    ElementGeometry g;
    g.dim = mesh.dim;
    g.origin = mesh.vertex_of(elem, 0);
    if (mesh.dim == 1) {
      const double len = (mesh.vertex_of(elem, 1) - g.origin).x();
      g.jac = Eigen::Matrix2d::Identity();
      g.jac(0, 0) = len;
      g.jac_inv = Eigen::Matrix2d::Identity();
      g.jac_inv(0, 0) = 1.0 / len;
      g.det = len;
      return g;
    }
    const Point v1 = mesh.vertex_of(elem, 1) - g.origin;
    const Point v2 = mesh.vertex_of(elem, 2) - g.origin;
    g.jac.col(0) = v1;
    g.jac.col(1) = v2;
    g.det = g.jac.determinant();
    g.jac_inv = g.jac.inverse();
    return g;
  }

  Point to_physical(const Point& ref) const { return origin + jac * ref; }
  Point to_reference(const Point& phys) const { return jac_inv * (phys - origin); }

  /// Physical gradient / Hessian of a reference shape evaluation.
  Eigen::Vector2d grad(const ShapeEval& s) const { return jac_inv.transpose() * s.grad; }
  Eigen::Matrix2d hess(const ShapeEval& s) const { return jac_inv.transpose() * s.hess * jac_inv; }
};

/// Global numbering of the broken spaces: scalar P2 block first, then the
/// vector P1 block, element-major inside each.
struct DofLayout {
  int dim = 0;
  int num_elements = 0;

  static DofLayout of(const Mesh& mesh) { return DofLayout{mesh.dim, mesh.num_elements()}; }

  int w_nodes_per_elem() const { return dim == 1 ? 3 : 6; }
  int v_nodes_per_elem() const { return dim == 1 ? 2 : 3; }

  int n_w() const { return num_elements * w_nodes_per_elem(); }
  int n_v() const { return num_elements * v_nodes_per_elem() * dim; }
  int n_total() const { return n_w() + n_v(); }

  int w_index(int elem, int node) const {
    check(elem, node, w_nodes_per_elem());
    return elem * w_nodes_per_elem() + node;
  }
  int v_index(int elem, int node, int comp) const {
    check(elem, node, v_nodes_per_elem());
    if (comp < 0 || comp >= dim) throw std::out_of_range("DofLayout: component out of range");
    return n_w() + (elem * v_nodes_per_elem() + node) * dim + comp;
  }

 private:
  void check(int elem, int node, int per) const {
    if (elem < 0 || elem >= num_elements || node < 0 || node >= per)
      throw std::out_of_range("DofLayout: index out of range");
  }
};

/// Pointwise values of the broken field encoded by a coefficient vector.
struct FieldValue {
  double w = 0.0;
  Eigen::Vector2d grad_w = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess_w = Eigen::Matrix2d::Zero();
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  Eigen::Matrix2d jac_v = Eigen::Matrix2d::Zero();  // row c = gradient of v_c
};

inline FieldValue evaluate_field(const Eigen::VectorXd& x, const DofLayout& layout,
                                 const Mesh& mesh, int elem, const Point& ref) {
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const ShapeSet w_shapes = shape_functions(kind, 2);
  const ShapeSet v_shapes = shape_functions(kind, 1);
  const ElementGeometry geo = ElementGeometry::of(mesh, elem);
  FieldValue out;
  for (int i = 0; i < w_shapes.size(); ++i) {
    const ShapeEval s = w_shapes.evaluate(i, ref);
    const double c = x[layout.w_index(elem, i)];
    out.w += c * s.value;
    out.grad_w += c * geo.grad(s);
    out.hess_w += c * geo.hess(s);
  }
  for (int i = 0; i < v_shapes.size(); ++i) {
    const ShapeEval s = v_shapes.evaluate(i, ref);
    const Eigen::Vector2d g = geo.grad(s);
    for (int c = 0; c < mesh.dim; ++c) {
      const double coef = x[layout.v_index(elem, i, c)];
      out.v[c] += coef * s.value;
      out.jac_v.row(c) += coef * g.transpose();
    }
  }
  return out;
}

namespace detail {

/// Local edge index (0,1,2 for edges (0,1),(1,2),(2,0)) of face f in element
/// elem, plus whether the element traverses the edge in the stored vertex
/// order. 1D: returns the local vertex index in [0] instead.
inline std::pair<int, bool> local_edge(const Mesh& mesh, const Face& f, int elem) {
  const auto& el = mesh.elements[static_cast<std::size_t>(elem)];
  if (mesh.dim == 1) {
    if (el[0] == f.vertices[0]) return {0, true};
    if (el[1] == f.vertices[0]) return {1, true};
    throw std::logic_error("local_edge: face not on element");
  }
  for (int k = 0; k < 3; ++k) {
    const int va = el[static_cast<std::size_t>(k)];
    const int vb = el[static_cast<std::size_t>((k + 1) % 3)];
    if (va == f.vertices[0] && vb == f.vertices[1]) return {k, true};
    if (vb == f.vertices[0] && va == f.vertices[1]) return {k, false};
  }
  throw std::logic_error("local_edge: face not on element");
}

/// Reference coordinates in element elem of face node `node` (0,1 the stored
/// endpoints, 2 the midpoint). Exact: built from reference vertices only.
inline Point face_node_ref(const Mesh& mesh, const Face& f, int elem, int node) {
  if (mesh.dim == 1) {
    const auto [local, fwd] = local_edge(mesh, f, elem);
    (void)fwd;
    return {local == 0 ? 0.0 : 1.0, 0.0};
  }
  static const Point ref_vertex[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const auto [k, forward] = local_edge(mesh, f, elem);
  const Point a = ref_vertex[k];
  const Point b = ref_vertex[(k + 1) % 3];
  const Point pa = forward ? a : b;
  const Point pb = forward ? b : a;
  if (node == 0) return pa;
  if (node == 1) return pb;
  return 0.5 * (pa + pb);
}

}  // namespace detail

/// Nodal penalty data on one face: [[v.n]] at endpoints and [[w]] at
/// endpoints+midpoint (interior), or w at the nodes (boundary).
struct FaceTrace {
  std::vector<double> vn_jump;  // empty on boundary faces
  std::vector<double> w_jump;   // boundary: trace values of w
};

inline FaceTrace face_trace_values(const Eigen::VectorXd& x, const DofLayout& layout,
                                   const Mesh& mesh, const Face& f) {
  const int n_w_nodes = mesh.dim == 1 ? 1 : 3;
  const int n_v_nodes = mesh.dim == 1 ? 1 : 2;
  FaceTrace out;
  auto value = [&](int elem, int node) {
    const Point ref = detail::face_node_ref(mesh, f, elem, node);
    return evaluate_field(x, layout, mesh, elem, ref);
  };
  if (f.is_boundary()) {
    for (int node = 0; node < n_w_nodes; ++node) out.w_jump.push_back(value(f.left, node).w);
    return out;
  }
  for (int node = 0; node < n_v_nodes; ++node) {
    const FieldValue a = value(f.left, node);
    const FieldValue b = value(f.right, node);
    out.vn_jump.push_back((a.v - b.v).dot(f.normal.head<2>()));
  }
  for (int node = 0; node < n_w_nodes; ++node)
    out.w_jump.push_back(value(f.left, node).w - value(f.right, node).w);
  return out;
}

}  // namespace l1dg
