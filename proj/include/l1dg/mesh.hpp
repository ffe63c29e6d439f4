#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace l1dg {

using Point = Eigen::Vector2d;

/// A mesh face: a point in 1D, an edge in 2D. The stored normal points
/// outward from the left element; for an interior face the right element
/// sees the negated normal.
struct Face {
  std::array<int, 2> vertices{-1, -1};  // 1D uses vertices[0] only
  int left = -1;
  int right = -1;  // -1 on boundary faces
  Point normal = Point::Zero();
  double measure = 1.0;  // edge length in 2D, 1 in 1D

  bool is_boundary() const { return right < 0; }
};

/// Conforming simplicial mesh of the unit interval, the unit square or the
/// 2D L-shaped domain. Immutable after construction.
struct Mesh {
  int dim = 0;
  int n = 0;       // subdivision parameter (cells per unit length)
  double h = 0.0;  // grid spacing 1/n
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> elements;  // 1D: {v0, v1, -1}
  std::vector<Face> faces;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }

  int num_interior_faces() const {
    int c = 0;
    for (const auto& f : faces) c += f.is_boundary() ? 0 : 1;
    return c;
  }
  int num_boundary_faces() const { return num_faces() - num_interior_faces(); }

  Point vertex_of(int elem, int local) const {
    return vertices[static_cast<std::size_t>(elements[static_cast<std::size_t>(elem)][static_cast<std::size_t>(local)])];
  }

  Point centroid(int elem) const {
    const auto& e = elements[static_cast<std::size_t>(elem)];
    if (dim == 1) return 0.5 * (vertices[static_cast<std::size_t>(e[0])] + vertices[static_cast<std::size_t>(e[1])]);
    return (vertices[static_cast<std::size_t>(e[0])] + vertices[static_cast<std::size_t>(e[1])] + vertices[static_cast<std::size_t>(e[2])]) / 3.0;
  }

  double element_measure(int elem) const {
    const auto& e = elements[static_cast<std::size_t>(elem)];
    if (dim == 1) return (vertices[static_cast<std::size_t>(e[1])] - vertices[static_cast<std::size_t>(e[0])]).x();
    const Point a = vertices[static_cast<std::size_t>(e[0])];
    const Point b = vertices[static_cast<std::size_t>(e[1])];
    const Point c = vertices[static_cast<std::size_t>(e[2])];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
  }

  /// Nodes on a face carrying penalty values: {endpoint} in 1D,
  /// {endpoints, midpoint} in 2D.
  std::vector<Point> face_nodes(const Face& f) const {
    if (dim == 1) return {vertices[static_cast<std::size_t>(f.vertices[0])]};
    const Point a = vertices[static_cast<std::size_t>(f.vertices[0])];
    const Point b = vertices[static_cast<std::size_t>(f.vertices[1])];
    return {a, b, 0.5 * (a + b)};
  }
};

namespace detail {

inline void build_faces_2d(Mesh& mesh) {
  // Edge (a,b) keyed by sorted vertex pair; first element encountered is
  // the left element and fixes the normal orientation.
  std::map<std::pair<int, int>, int> edge_to_face;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& tri = mesh.elements[static_cast<std::size_t>(e)];
    for (int k = 0; k < 3; ++k) {
      const int va = tri[static_cast<std::size_t>(k)];
      const int vb = tri[static_cast<std::size_t>((k + 1) % 3)];
      const auto key = std::minmax(va, vb);
      auto it = edge_to_face.find(key);
      if (it == edge_to_face.end()) {
        Face f;
        f.vertices = {va, vb};
        f.left = e;
        const Point pa = mesh.vertices[static_cast<std::size_t>(va)];
        const Point pb = mesh.vertices[static_cast<std::size_t>(vb)];
        const Point t = pb - pa;
        f.measure = t.norm();
        // CCW triangle, edge traversed in CCW order: outward normal is the
        // clockwise rotation of the tangent.
        f.normal = Point(t.y(), -t.x()) / f.measure;
        edge_to_face.emplace(key, mesh.num_faces());
        mesh.faces.push_back(f);
      } else {
        mesh.faces[static_cast<std::size_t>(it->second)].right = e;
      }
    }
  }
}

}  // namespace detail

inline Mesh build_interval_mesh(int n) {
  if (n < 2) throw std::invalid_argument("build_interval_mesh: n must be >= 2");
  Mesh mesh;
  mesh.dim = 1;
  mesh.n = n;
  mesh.h = 1.0 / n;
  for (int i = 0; i <= n; ++i) mesh.vertices.emplace_back(static_cast<double>(i) / n, 0.0);
  for (int i = 0; i < n; ++i) mesh.elements.push_back({i, i + 1, -1});
  for (int i = 1; i < n; ++i) {
    Face f;
    f.vertices = {i, -1};
    f.left = i - 1;
    f.right = i;
    f.normal = Point(1.0, 0.0);
    mesh.faces.push_back(f);
  }
  {
    Face f0;
    f0.vertices = {0, -1};
    f0.left = 0;
    f0.normal = Point(-1.0, 0.0);
    mesh.faces.push_back(f0);
    Face f1;
    f1.vertices = {n, -1};
    f1.left = n - 1;
    f1.normal = Point(1.0, 0.0);
    mesh.faces.push_back(f1);
  }
  return mesh;
}

/// Uniform triangulation of [0,1]^2: n x n cells, each split along the
/// same diagonal into two CCW triangles. n must be even so coefficient
/// discontinuities at x=0.5, y=0.5 fall on mesh lines.
inline Mesh build_square_mesh(int n) {
  if (n < 2) throw std::invalid_argument("build_square_mesh: n must be >= 2");
  if (n % 2 != 0) throw std::invalid_argument("build_square_mesh: n must be even");
  Mesh mesh;
  mesh.dim = 2;
  mesh.n = n;
  mesh.h = 1.0 / n;
  const int m = n + 1;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      mesh.vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto vid = [m](int i, int j) { return j * m + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.elements.push_back({v00, v10, v11});
      mesh.elements.push_back({v00, v11, v01});
    }
  }
  detail::build_faces_2d(mesh);
  return mesh;
}

/// L-shaped domain [-1,1]^2 \ (0,1]x[-1,0): 2n x 2n cells of side 1/n with
/// the fourth quadrant removed. The reentrant corner (0,0) is a vertex and
/// no element crosses the coordinate axes. The mesh-size parameter h that
/// enters the energy functional follows the side-length convention h = 2/n
/// (the domain has side 2); the cell side is h/2.
inline Mesh build_lshape_mesh(int n) {
  if (n < 2) throw std::invalid_argument("build_lshape_mesh: n must be >= 2");
  if (n % 2 != 0) throw std::invalid_argument("build_lshape_mesh: n must be even");
  Mesh mesh;
  mesh.dim = 2;
  mesh.n = n;
  mesh.h = 2.0 / n;
  const int m = 2 * n + 1;
  std::vector<int> vmap(static_cast<std::size_t>(m * m), -1);
  auto coord = [n](int i) { return static_cast<double>(i - n) / n; };
  auto cell_kept = [n](int i, int j) { return !(i >= n && j < n); };
  for (int j = 0; j < 2 * n; ++j) {
    for (int i = 0; i < 2 * n; ++i) {
      if (!cell_kept(i, j)) continue;
      for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) {
          const int idx = (j + dj) * m + (i + di);
          if (vmap[static_cast<std::size_t>(idx)] < 0) {
            vmap[static_cast<std::size_t>(idx)] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.emplace_back(coord(i + di), coord(j + dj));
          }
        }
    }
  }
  for (int j = 0; j < 2 * n; ++j) {
    for (int i = 0; i < 2 * n; ++i) {
      if (!cell_kept(i, j)) continue;
      const int v00 = vmap[static_cast<std::size_t>(j * m + i)];
      const int v10 = vmap[static_cast<std::size_t>(j * m + i + 1)];
      const int v01 = vmap[static_cast<std::size_t>((j + 1) * m + i)];
      const int v11 = vmap[static_cast<std::size_t>((j + 1) * m + i + 1)];
      mesh.elements.push_back({v00, v10, v11});
      mesh.elements.push_back({v00, v11, v01});
    }
  }
  detail::build_faces_2d(mesh);
  return mesh;
}

/// Plain-text dump: vertices, elements, faces. For debugging and plot scripts.
inline std::string dump_mesh(const Mesh& mesh) {
  std::string out;
  out += "dim " + std::to_string(mesh.dim) + " n " + std::to_string(mesh.n) + "\n";
  for (const auto& v : mesh.vertices)
    out += "v " + std::to_string(v.x()) + " " + std::to_string(v.y()) + "\n";
  for (const auto& e : mesh.elements) {
    out += "e";
    for (int k = 0; k < (mesh.dim == 1 ? 2 : 3); ++k) out += " " + std::to_string(e[static_cast<std::size_t>(k)]);
    out += "\n";
  }
  for (const auto& f : mesh.faces) {
    out += f.is_boundary() ? "fb" : "fi";
    out += " " + std::to_string(f.vertices[0]);
    if (mesh.dim == 2) out += " " + std::to_string(f.vertices[1]);
    out += " n " + std::to_string(f.normal.x()) + " " + std::to_string(f.normal.y()) + "\n";
  }
  return out;
}

}  // namespace l1dg
