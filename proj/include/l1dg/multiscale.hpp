#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "l1dg/dgspace.hpp"
#include "l1dg/mesh.hpp"

namespace l1dg {

/// A piecewise quadratic on the uniform dyadic mesh of [0,1] with 2^level
/// cells: per-cell monomial coefficients (c0 + c1 x + c2 x^2) in global x.
struct PiecewiseQuadratic {
  int level = 0;
  std::vector<std::array<double, 3>> cells;  // size 2^level

  double evaluate_in_cell(int cell, double x) const {
    const auto& c = cells[static_cast<std::size_t>(cell)];
    return c[0] + x * (c[1] + x * c[2]);
  }

  /// One-sided evaluation: the covering cell of x taken from [k 2^-level,
  /// (k+1) 2^-level) with the last cell closed.
  double operator()(double x) const {
    const int m = static_cast<int>(cells.size());
    int cell = static_cast<int>(std::floor(x * m));
    cell = std::max(0, std::min(m - 1, cell));
    return evaluate_in_cell(cell, x);
  }
};

namespace detail {

/// tau_0 f(x) = f(2x) on [0,1/2]; tau_1 f(x) = f(2x-1) on [1/2,1];
/// zero elsewhere (no renormalization).
inline PiecewiseQuadratic dilate(const PiecewiseQuadratic& f, int which) {
  PiecewiseQuadratic g;
  g.level = f.level + 1;
  g.cells.assign(static_cast<std::size_t>(1) << g.level, {0.0, 0.0, 0.0});
  const int m = static_cast<int>(f.cells.size());
  const int offset = which == 0 ? 0 : m;  // child cells live in [0,1/2] or [1/2,1]
  const double shift = which == 0 ? 0.0 : -1.0;
  for (int i = 0; i < m; ++i) {
    // f(2x + shift): substitute into the monomial coefficients
    const auto& c = f.cells[static_cast<std::size_t>(i)];
    auto& o = g.cells[static_cast<std::size_t>(offset + i)];
    o[0] = c[0] + c[1] * shift + c[2] * shift * shift;
    o[1] = 2.0 * c[1] + 4.0 * c[2] * shift;
    o[2] = 4.0 * c[2];
  }
  return g;
}

inline PiecewiseQuadratic refine_to(const PiecewiseQuadratic& f, int level) {
  if (level < f.level) throw std::invalid_argument("refine_to: level below function level");
  PiecewiseQuadratic g;
  g.level = level;
  const int m = 1 << level;
  g.cells.resize(static_cast<std::size_t>(m));
  const int ratio = 1 << (level - f.level);
  for (int i = 0; i < m; ++i) g.cells[static_cast<std::size_t>(i)] = f.cells[static_cast<std::size_t>(i / ratio)];
  return g;
}

inline std::vector<PiecewiseQuadratic> scaling_generators() {
  // orthonormal Legendre-type basis of the global quadratics
  PiecewiseQuadratic w00{0, {{{1.0, 0.0, 0.0}}}};
  PiecewiseQuadratic w01{0, {{{-std::sqrt(3.0), 2.0 * std::sqrt(3.0), 0.0}}}};
  PiecewiseQuadratic w02{0, {{{std::sqrt(5.0), -6.0 * std::sqrt(5.0), 6.0 * std::sqrt(5.0)}}}};
  return {w00, w01, w02};
}

inline std::vector<PiecewiseQuadratic> detail_generators() {
  const double r = std::sqrt(91.0) / 31.0;
  PiecewiseQuadratic w10{1, {{{1.0, -6.0, 0.0}, {5.0, -6.0, 0.0}}}};
  PiecewiseQuadratic w11{1, {{{9.0 * r, -116.0 * r, 240.0 * r}, {3.0 * r, -4.0 * r, 0.0}}}};
  PiecewiseQuadratic w12{1, {{{-r, 4.0 * r, 0.0}, {133.0 * r, -364.0 * r, 240.0 * r}}}};
  return {w10, w11, w12};
}

}  // namespace detail

/// The multiscale piecewise-quadratic basis up to level J, each function
/// sampled onto the level-J single-scale nodal P2 DG basis (one-sided nodal
/// values per cell). Columns ordered X0, M1, M2, ..., MJ.
struct MultiscaleBasis {
  int level = 0;
  std::vector<PiecewiseQuadratic> functions;
  std::vector<int> function_level;  // 0 for X0 columns, n for Mn columns

  int size() const { return static_cast<int>(functions.size()); }
};

inline MultiscaleBasis build_multiscale_basis(int J) {
  if (J < 1) throw std::invalid_argument("build_multiscale_basis: J must be >= 1");
  MultiscaleBasis basis;
  basis.level = J;
  for (const auto& f : detail::scaling_generators()) {
    basis.functions.push_back(f);
    basis.function_level.push_back(0);
  }
  std::vector<PiecewiseQuadratic> current = detail::detail_generators();
  for (int n = 1; n <= J; ++n) {
    for (const auto& f : current) {
      basis.functions.push_back(f);
      basis.function_level.push_back(n);
    }
    if (n == J) break;
    std::vector<PiecewiseQuadratic> next;
    next.reserve(current.size() * 2);
    for (const auto& f : current) next.push_back(detail::dilate(f, 0));
    for (const auto& f : current) next.push_back(detail::dilate(f, 1));
    current = std::move(next);
  }
  return basis;
}

/// Single-scale nodal coefficients (left, mid, right per cell of the level-J
/// mesh) of one piecewise quadratic.
inline Eigen::VectorXd single_scale_coefficients(const PiecewiseQuadratic& f, int J) {
  const PiecewiseQuadratic g = detail::refine_to(f, J);
  const int m = 1 << J;
  const double h = 1.0 / m;
  Eigen::VectorXd out(3 * m);
  for (int i = 0; i < m; ++i) {
    const double a = i * h;
    out[3 * i] = g.evaluate_in_cell(i, a);
    out[3 * i + 1] = g.evaluate_in_cell(i, a + 0.5 * h);
    out[3 * i + 2] = g.evaluate_in_cell(i, a + h);
  }
  return out;
}

/// Columns are single-scale representations of the multiscale functions;
/// invertible square matrix of size 3 * 2^J.
inline Eigen::MatrixXd build_transform(int J) {
  const MultiscaleBasis basis = build_multiscale_basis(J);
  const int n = 3 * (1 << J);
  if (basis.size() != n) throw std::logic_error("build_transform: basis size mismatch");
  Eigen::MatrixXd T(n, n);
  for (int j = 0; j < n; ++j) T.col(j) = single_scale_coefficients(basis.functions[static_cast<std::size_t>(j)], J);
  return T;
}

inline Eigen::VectorXd to_multiscale(const Eigen::VectorXd& x_w, const Eigen::MatrixXd& transform) {
  if (x_w.size() != transform.rows()) throw std::invalid_argument("to_multiscale: size mismatch");
  return transform.partialPivLu().solve(x_w);
}

inline Eigen::VectorXd from_multiscale(const Eigen::VectorXd& c, const Eigen::MatrixXd& transform) {
  if (c.size() != transform.cols()) throw std::invalid_argument("from_multiscale: size mismatch");
  return transform * c;
}

struct TruncationResult {
  Eigen::VectorXd coefficients;
  double sparsity_percent = 0.0;  // share of zero entries after truncation
};

inline TruncationResult truncate(const Eigen::VectorXd& c, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("truncate: threshold must be >= 0");
  TruncationResult out;
  out.coefficients = c;
  int zeros = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) < threshold) out.coefficients[i] = 0.0;
    if (out.coefficients[i] == 0.0) ++zeros;
  }
  out.sparsity_percent = 100.0 * zeros / static_cast<double>(c.size());
  return out;
}

/// One row of the truncation study.
struct TruncationReport {
  double threshold = 0.0;
  double l2_error = 0.0;
  double sparsity_percent = 0.0;
};

}  // namespace l1dg
