#include "doctest.h"

#include "l1dg/assembly.hpp"
#include "l1dg/dgspace.hpp"
#include "l1dg/mesh.hpp"
#include "l1dg/problems.hpp"

#include <random>

using namespace l1dg;

namespace {

CoefficientField unit_coefficient() { return constant_coefficient(Eigen::Matrix2d::Identity()); }

/// Independent evaluation of ||A:grad v - f||^2 + h^-2 ||v - grad w||^2 via
/// the field-evaluation path. Uses the same quadrature degree as assembly so
/// the quadratic identity holds to rounding even for non-polynomial data.
double residual_energy(const Mesh& mesh, const DofLayout& layout, const CoefficientField& coeff,
                       const std::function<double(const Point&)>& f, const Eigen::VectorXd& x,
                       int quad_degree = 6) {
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const QuadratureRule rule = quadrature(kind, quad_degree);
  const double inv_h2 = 1.0 / (mesh.h * mesh.h);
  double acc = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    for (std::size_t qp = 0; qp < rule.size(); ++qp) {
      const double wq = rule.weights[qp] * geo.det;
      const Point xq = geo.to_physical(rule.points[qp]);
      const FieldValue fv = evaluate_field(x, layout, mesh, e, rule.points[qp]);
      const Eigen::Matrix2d A = coeff.A(xq);
      double a_dv = 0.0;
      for (int i = 0; i < mesh.dim; ++i)
        for (int j = 0; j < mesh.dim; ++j) a_dv += A(i, j) * fv.jac_v(i, j);
      acc += wq * (std::pow(a_dv - f(xq), 2) +
                   inv_h2 * (fv.v - fv.grad_w).head(mesh.dim).squaredNorm());
    }
  }
  return acc;
}

/// Direct face-node evaluation of the penalty tau(h^-1 |[[v.n]]| + h^-1 |[[w]]|
/// + h^-2 |w - g|), the standard exponent profile.
double penalty_value(const Mesh& mesh, const DofLayout& layout, double tau,
                     const std::function<double(const Point&)>& g, const Eigen::VectorXd& x) {
  const double inv_h = 1.0 / mesh.h;
  double acc = 0.0;
  for (const auto& f : mesh.faces) {
    const FaceTrace tr = face_trace_values(x, layout, mesh, f);
    if (f.is_boundary()) {
      const auto nodes = mesh.face_nodes(f);
      for (std::size_t i = 0; i < tr.w_jump.size(); ++i)
        acc += tau * inv_h * inv_h * std::abs(tr.w_jump[i] - g(nodes[i]));
    } else {
      for (double j : tr.vn_jump) acc += tau * inv_h * std::abs(j);
      for (double j : tr.w_jump) acc += tau * inv_h * std::abs(j);
    }
  }
  return acc;
}

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = dist(rng);
  return x;
}

/// Encode a global C1 pair (w, v = grad w) by nodal interpolation.
Eigen::VectorXd interpolate_pair(const Mesh& mesh, const DofLayout& layout,
                                 const std::function<double(const Point&)>& w,
                                 const std::function<Eigen::Vector2d(const Point&)>& grad_w) {
  const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
  const ShapeSet ws = shape_functions(kind, 2);
  const ShapeSet vs = shape_functions(kind, 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.n_total());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    const auto wn = ws.nodes();
    for (int i = 0; i < ws.size(); ++i)
      x[layout.w_index(e, i)] = w(geo.to_physical(wn[static_cast<std::size_t>(i)]));
    const auto vn = vs.nodes();
    for (int i = 0; i < vs.size(); ++i) {
      const Eigen::Vector2d gr = grad_w(geo.to_physical(vn[static_cast<std::size_t>(i)]));
      for (int c = 0; c < mesh.dim; ++c) x[layout.v_index(e, i, c)] = gr[c];
    }
  }
  return x;
}

}  // namespace

TEST_CASE("1D element blocks match hand integration") {
  const Mesh mesh = build_interval_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);
  const double h = mesh.h;
  const Eigen::MatrixXd B = Eigen::MatrixXd(assemble_B(mesh, layout, unit_coefficient()));

  // B22 block of element 0: h^-2 * (h/6)[[2,1],[1,2]] + (1/h)[[1,-1],[-1,1]]
  const int i0 = layout.v_index(0, 0, 0);
  const int i1 = layout.v_index(0, 1, 0);
  CHECK(B(i0, i0) == doctest::Approx(2.0 / (6.0 * h) + 1.0 / h).epsilon(1e-12));
  CHECK(B(i0, i1) == doctest::Approx(1.0 / (6.0 * h) - 1.0 / h).epsilon(1e-12));
  CHECK(B(i1, i1) == doctest::Approx(2.0 / (6.0 * h) + 1.0 / h).epsilon(1e-12));

  // b entries for f = 1: -2 * int v_j' = -/+ 2
  const Eigen::VectorXd b =
      assemble_b(mesh, layout, unit_coefficient(), [](const Point&) { return 1.0; });
  CHECK(b[layout.w_index(0, 0)] == 0.0);
  CHECK(b[i0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b[i1] == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("b vanishes for f = 0") {
  const Mesh mesh = build_square_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);
  const Eigen::VectorXd b =
      assemble_b(mesh, layout, unit_coefficient(), [](const Point&) { return 0.0; });
  CHECK(b.norm() == 0.0);
}

TEST_CASE("B is symmetric PSD") {
  for (int dim_case = 0; dim_case < 2; ++dim_case) {
    const Mesh mesh = dim_case == 0 ? build_interval_mesh(4) : build_square_mesh(2);
    const DofLayout layout = DofLayout::of(mesh);
    const auto B = assemble_B(mesh, layout, make_problem(dim_case == 0 ? "kink-1d" : "square-constant").coeff);
    const Eigen::SparseMatrix<double> Bt = Eigen::SparseMatrix<double>(B.transpose());
    CHECK((Eigen::MatrixXd(B) - Eigen::MatrixXd(Bt)).norm() < 1e-12 * Eigen::MatrixXd(B).norm());
    for (unsigned seed = 0; seed < 10; ++seed) {
      const Eigen::VectorXd x = random_vector(layout.n_total(), seed);
      CHECK(x.dot(B * x) >= -1e-10 * x.squaredNorm());
    }
  }
}

TEST_CASE("quadratic identity against independent quadrature") {
  auto check_identity = [](const Mesh& mesh, const Problem& pr) {
    const DofLayout layout = DofLayout::of(mesh);
    const auto B = assemble_B(mesh, layout, pr.coeff);
    const Eigen::VectorXd b = assemble_b(mesh, layout, pr.coeff, pr.exact.f);
    const CellKind kind = mesh.dim == 1 ? CellKind::interval : CellKind::triangle;
    const QuadratureRule rule = quadrature(kind, 6);
    double fsq = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const ElementGeometry geo = ElementGeometry::of(mesh, e);
      for (std::size_t qp = 0; qp < rule.size(); ++qp)
        fsq += rule.weights[qp] * geo.det * std::pow(pr.exact.f(geo.to_physical(rule.points[qp])), 2);
    }
    for (unsigned seed = 0; seed < 20; ++seed) {
      const Eigen::VectorXd x = random_vector(layout.n_total(), 100 + seed);
      const double lhs = x.dot(B * x) + b.dot(x) + fsq;
      const double rhs = residual_energy(mesh, layout, pr.coeff, pr.exact.f, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  };
  check_identity(build_interval_mesh(4), make_problem("kink-1d", 1.0 / 6.0, 2.0));
  check_identity(build_square_mesh(2), make_problem("square-constant"));
}

TEST_CASE("residual vanishes when v = grad w exactly and f = A:D2w") {
  const Mesh mesh = build_square_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);
  Eigen::Matrix2d A;
  A << 2.0, 1.0, 1.0, 2.0;
  const CoefficientField coeff = constant_coefficient(A);
  // w = x^2 + x y, v = grad w, f = A : D2 w = 2*2 + 2*1*1 = 6
  auto w = [](const Point& p) { return p.x() * p.x() + p.x() * p.y(); };
  auto gw = [](const Point& p) { return Eigen::Vector2d(2.0 * p.x() + p.y(), p.x()); };
  const Eigen::VectorXd x = interpolate_pair(mesh, layout, w, gw);
  const auto B = assemble_B(mesh, layout, coeff);
  const Eigen::VectorXd b = assemble_b(mesh, layout, coeff, [](const Point&) { return 6.0; });
  const double fsq = 36.0;  // ||f||^2 over the unit square
  CHECK(std::abs(x.dot(B * x) + b.dot(x) + fsq) < 1e-9);
}

TEST_CASE("1D penalty matrix has the reference row patterns") {
  const int n = 4;
  const Mesh mesh = build_interval_mesh(n);
  const DofLayout layout = DofLayout::of(mesh);
  const double tau = 1.0, h = mesh.h;
  const auto [L, d] =
      assemble_L_d(mesh, layout, tau, [](const Point&) { return 0.0; }, PenaltyProfile::one_dimensional());
  REQUIRE(L.rows() == 2 * n);
  const Eigen::MatrixXd Ld(L);

  // interior [[v.n]] rows: +1 on the left element's right v node, -1 opposite
  for (int i = 0; i < n - 1; ++i) {
    int nnz = 0;
    for (int j = 0; j < Ld.cols(); ++j)
      if (Ld(i, j) != 0.0) ++nnz;
    CHECK(nnz == 2);
    CHECK(Ld(i, layout.v_index(i, 1, 0)) == doctest::Approx(tau / h));
    CHECK(Ld(i, layout.v_index(i + 1, 0, 0)) == doctest::Approx(-tau / h));
  }
  // interior [[w]] rows
  for (int i = 0; i < n - 1; ++i) {
    const int row = (n - 1) + i;
    CHECK(Ld(row, layout.w_index(i, 2)) == doctest::Approx(tau / h));
    CHECK(Ld(row, layout.w_index(i + 1, 0)) == doctest::Approx(-tau / h));
  }
  // boundary rows: single entries at w(0) and w(1)
  CHECK(Ld(2 * (n - 1), layout.w_index(0, 0)) == doctest::Approx(tau / (h * h)));
  CHECK(Ld(2 * n - 1, layout.w_index(n - 1, 2)) == doctest::Approx(tau / (h * h)));

  // L L' = tau^2/h^4 Diag(2 h^2 I, I) under this profile
  const Eigen::MatrixXd LLt = Ld * Ld.transpose();
  for (int i = 0; i < LLt.rows(); ++i)
    for (int j = 0; j < LLt.cols(); ++j) {
      const double expected =
          i != j ? 0.0 : (i < 2 * (n - 1) ? 2.0 * tau * tau / (h * h) : tau * tau / (h * h * h * h));
      CHECK(std::abs(LLt(i, j) - expected) < 1e-12 * tau * tau / (h * h * h * h));
    }
}

TEST_CASE("square n=4 system dimensions") {
  const Mesh mesh = build_square_mesh(4);
  const DofLayout layout = DofLayout::of(mesh);
  const Problem pr = make_problem("square-constant");
  const AssembledSystem sys = assemble_system(mesh, layout, pr.coeff, pr.exact.f, pr.exact.g, 1.0);
  CHECK(layout.n_total() == 384);
  CHECK(sys.L.rows() == 2 * 40 + 3 * 40 + 3 * 16);
  CHECK(sys.rows_vn == 80);
  CHECK(sys.rows_w == 120);
  CHECK(sys.rows_boundary == 48);
}

TEST_CASE("L scales linearly in tau") {
  const Mesh mesh = build_interval_mesh(4);
  const DofLayout layout = DofLayout::of(mesh);
  auto g = [](const Point&) { return 0.0; };
  const auto [L1, d1] = assemble_L_d(mesh, layout, 1.0, g);
  const auto [L2, d2] = assemble_L_d(mesh, layout, 2.0, g);
  CHECK((Eigen::MatrixXd(L2) - 2.0 * Eigen::MatrixXd(L1)).norm() < 1e-14);
}

TEST_CASE("continuous field with w = g on the boundary satisfies Lx = d") {
  const Mesh mesh = build_square_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);
  auto w = [](const Point& p) { return 1.0 + p.x() + p.y() * p.y(); };
  auto gw = [](const Point& p) { return Eigen::Vector2d(1.0, 2.0 * p.y()); };
  const Eigen::VectorXd x = interpolate_pair(mesh, layout, w, gw);
  const auto [L, d] = assemble_L_d(mesh, layout, 1.0, w);
  CHECK((L * x - d).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("||Lx - d||_1 equals the direct nodal penalty evaluation") {
  const Mesh mesh = build_square_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);
  const double tau = 1.5;
  auto g = [](const Point& p) { return p.x() - p.y(); };
  const auto [L, d] = assemble_L_d(mesh, layout, tau, g);
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Eigen::VectorXd x = random_vector(layout.n_total(), 300 + seed);
    const double lhs = (L * x - d).lpNorm<1>();
    const double rhs = penalty_value(mesh, layout, tau, g, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("objective at x = 0 is ||f||^2 + ||d||_1") {
  const Mesh mesh = build_square_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);
  const Problem pr = make_problem("lshape-constant");  // reuse its nonzero g on the square
  const AssembledSystem sys = assemble_system(mesh, layout, pr.coeff, pr.exact.f, pr.exact.g, 1.0);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(layout.n_total());
  const double obj = zero.dot(sys.B * zero) + sys.b.dot(zero) + (sys.L * zero - sys.d).lpNorm<1>();
  CHECK(obj == doctest::Approx(sys.d.lpNorm<1>()));
  CHECK(sys.f_sq_norm >= 0.0);
}

TEST_CASE("assembly is deterministic") {
  const Mesh mesh = build_square_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);
  const Problem pr = make_problem("square-continuous");
  const auto B1 = assemble_B(mesh, layout, pr.coeff);
  const auto B2 = assemble_B(mesh, layout, pr.coeff);
  REQUIRE(B1.nonZeros() == B2.nonZeros());
  for (int k = 0; k < B1.outerSize(); ++k) {
    Eigen::SparseMatrix<double>::InnerIterator it1(B1, k), it2(B2, k);
    for (; it1; ++it1, ++it2) {
      CHECK(it1.row() == it2.row());
      CHECK(it1.value() == it2.value());
    }
  }
}

TEST_CASE("layout mismatch is rejected") {
  const Mesh mesh = build_interval_mesh(4);
  const DofLayout wrong = DofLayout::of(build_interval_mesh(8));
  CHECK_THROWS_AS(assemble_B(mesh, wrong, unit_coefficient()), std::invalid_argument);
}
