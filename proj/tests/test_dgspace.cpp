#include "doctest.h"

#include "l1dg/dgspace.hpp"
#include "l1dg/mesh.hpp"
#include "l1dg/quadrature.hpp"

#include <random>

using namespace l1dg;

TEST_CASE("Lagrange delta property") {
  for (auto kind : {CellKind::interval, CellKind::triangle}) {
    for (int degree : {1, 2}) {
      const ShapeSet s = shape_functions(kind, degree);
      const auto nodes = s.nodes();
      for (int i = 0; i < s.size(); ++i)
        for (int j = 0; j < s.size(); ++j) {
          const double v = s.evaluate(i, nodes[static_cast<std::size_t>(j)]).value;
          CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-13);
        }
    }
  }
}

TEST_CASE("partition of unity on the triangle") {
  const ShapeSet s = shape_functions(CellKind::triangle, 2);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double a = dist(rng), b = dist(rng);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    double sum = 0.0;
    Eigen::Vector2d gsum = Eigen::Vector2d::Zero();
    for (int i = 0; i < s.size(); ++i) {
      const ShapeEval e = s.evaluate(i, Point(a, b));
      sum += e.value;
      gsum += e.grad;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gsum.norm() < 1e-12);
  }
}

TEST_CASE("shape_functions rejects unsupported degree") {
  CHECK_THROWS_AS(shape_functions(CellKind::interval, 3), std::invalid_argument);
}

TEST_CASE("quadrature exactness") {
  SUBCASE("interval degree 6 integrates x^6") {
    const QuadratureRule rule = quadrature(CellKind::interval, 6);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
      s += rule.weights[i] * std::pow(rule.points[i].x(), 6);
    CHECK(std::abs(s - 1.0 / 7.0) < 1e-14);
  }
  SUBCASE("interval rule approximates sin(pi x)") {
    const QuadratureRule rule = quadrature(CellKind::interval, 12);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
      s += rule.weights[i] * std::sin(M_PI * rule.points[i].x());
    CHECK(std::abs(s - 2.0 / M_PI) < 1e-10);
  }
  SUBCASE("triangle rules integrate constants to the area") {
    for (int degree : {2, 4, 6, 8}) {
      const QuadratureRule rule = quadrature(CellKind::triangle, degree);
      double s = 0.0;
      for (double w : rule.weights) {
        CHECK(w > 0.0);
        s += w;
      }
      CHECK(s == doctest::Approx(0.5).epsilon(1e-13));
    }
  }
  SUBCASE("triangle monomial exactness up to stated degree") {
    // reference integrals: int x^p y^q = p! q! / (p+q+2)!
    auto exact = [](int p, int q) {
      double num = 1.0, den = 1.0;
      for (int k = 2; k <= p; ++k) num *= k;
      for (int k = 2; k <= q; ++k) num *= k;
      for (int k = 2; k <= p + q + 2; ++k) den *= k;
      return num / den;
    };
    for (int degree : {2, 4, 6, 8}) {
      const QuadratureRule rule = quadrature(CellKind::triangle, degree);
      for (int p = 0; p <= degree; ++p)
        for (int q = 0; p + q <= degree; ++q) {
          double s = 0.0;
          for (std::size_t i = 0; i < rule.size(); ++i)
            s += rule.weights[i] * std::pow(rule.points[i].x(), p) * std::pow(rule.points[i].y(), q);
          CHECK(std::abs(s - exact(p, q)) < 1e-13);
        }
    }
  }
  SUBCASE("unsupported degrees throw") {
    CHECK_THROWS_AS(quadrature(CellKind::triangle, 9), std::invalid_argument);
  }
}

TEST_CASE("evaluate_field reproduces linear and quadratic data") {
  const Mesh mesh = build_square_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);

  SUBCASE("w = x + y has gradient (1,1)") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.n_total());
    const ShapeSet s = shape_functions(CellKind::triangle, 2);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const ElementGeometry geo = ElementGeometry::of(mesh, e);
      const auto nodes = s.nodes();
      for (int i = 0; i < s.size(); ++i) {
        const Point p = geo.to_physical(nodes[static_cast<std::size_t>(i)]);
        x[layout.w_index(e, i)] = p.x() + p.y();
      }
    }
    const FieldValue fv = evaluate_field(x, layout, mesh, 3, Point(0.3, 0.2));
    CHECK(fv.grad_w.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fv.grad_w.y() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fv.hess_w.norm() < 1e-10);
  }

  SUBCASE("constant v has zero Jacobian") {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.n_total());
    for (int e = 0; e < mesh.num_elements(); ++e)
      for (int i = 0; i < 3; ++i) x[layout.v_index(e, i, 0)] = 1.0;
    const FieldValue fv = evaluate_field(x, layout, mesh, 0, Point(0.25, 0.25));
    CHECK(fv.v.x() == doctest::Approx(1.0));
    CHECK(fv.v.y() == doctest::Approx(0.0));
    CHECK(fv.jac_v.norm() < 1e-13);
  }
}

TEST_CASE("1D second derivative of x^2 is 2") {
  const Mesh mesh = build_interval_mesh(2);
  const DofLayout layout = DofLayout::of(mesh);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.n_total());
  const ShapeSet s = shape_functions(CellKind::interval, 2);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = ElementGeometry::of(mesh, e);
    const auto nodes = s.nodes();
    for (int i = 0; i < s.size(); ++i) {
      const double xp = geo.to_physical(nodes[static_cast<std::size_t>(i)]).x();
      x[layout.w_index(e, i)] = xp * xp;
    }
  }
  const FieldValue fv = evaluate_field(x, layout, mesh, 1, Point(0.37, 0.0));
  CHECK(fv.hess_w(0, 0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("face traces") {
  SUBCASE("continuous w has zero jumps; constant v has zero normal jumps") {
    const Mesh mesh = build_square_mesh(2);
    const DofLayout layout = DofLayout::of(mesh);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.n_total());
    const ShapeSet s = shape_functions(CellKind::triangle, 2);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const ElementGeometry geo = ElementGeometry::of(mesh, e);
      const auto nodes = s.nodes();
      for (int i = 0; i < s.size(); ++i) {
        const Point p = geo.to_physical(nodes[static_cast<std::size_t>(i)]);
        x[layout.w_index(e, i)] = p.x() * p.x() + p.y();
      }
      for (int i = 0; i < 3; ++i) {
        x[layout.v_index(e, i, 0)] = 2.0;
        x[layout.v_index(e, i, 1)] = -1.0;
      }
    }
    for (const auto& f : mesh.faces) {
      const FaceTrace tr = face_trace_values(x, layout, mesh, f);
      if (f.is_boundary()) continue;
      for (double j : tr.w_jump) CHECK(std::abs(j) < 1e-12);
      for (double j : tr.vn_jump) CHECK(std::abs(j) < 1e-12);
    }
  }

  SUBCASE("1D discontinuity gives unit jump") {
    const Mesh mesh = build_interval_mesh(2);
    const DofLayout layout = DofLayout::of(mesh);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.n_total());
    for (int i = 0; i < 3; ++i) x[layout.w_index(0, i)] = 1.0;  // w = 1 on [0, 1/2]
    const Face& f = mesh.faces.front();
    REQUIRE_FALSE(f.is_boundary());
    const FaceTrace tr = face_trace_values(x, layout, mesh, f);
    REQUIRE(tr.w_jump.size() == 1);
    CHECK(tr.w_jump[0] == doctest::Approx(1.0));
  }

  SUBCASE("trace equals one-sided field evaluation at face nodes") {
    const Mesh mesh = build_square_mesh(2);
    const DofLayout layout = DofLayout::of(mesh);
    std::mt19937 rng(3);
    std::normal_distribution<double> dist;
    Eigen::VectorXd x(layout.n_total());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = dist(rng);
    for (const auto& f : mesh.faces) {
      if (f.is_boundary()) continue;
      const FaceTrace tr = face_trace_values(x, layout, mesh, f);
      const auto nodes = mesh.face_nodes(f);
      for (int node = 0; node < 3; ++node) {
        const ElementGeometry gl = ElementGeometry::of(mesh, f.left);
        const ElementGeometry gr = ElementGeometry::of(mesh, f.right);
        const FieldValue a = evaluate_field(x, layout, mesh, f.left,
                                            gl.to_reference(nodes[static_cast<std::size_t>(node)]));
        const FieldValue b = evaluate_field(x, layout, mesh, f.right,
                                            gr.to_reference(nodes[static_cast<std::size_t>(node)]));
        CHECK(tr.w_jump[static_cast<std::size_t>(node)] == doctest::Approx(a.w - b.w).epsilon(1e-10));
        if (node < 2) {
          const double vn = (a.v - b.v).dot(f.normal);
          CHECK(tr.vn_jump[static_cast<std::size_t>(node)] == doctest::Approx(vn).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("DofLayout counts follow the broken-space dimensions") {
  const Mesh mesh1 = build_interval_mesh(8);
  const DofLayout l1 = DofLayout::of(mesh1);
  CHECK(l1.n_w() == 24);  // 3/h
  CHECK(l1.n_v() == 16);  // 2/h
  const Mesh mesh2 = build_square_mesh(4);
  const DofLayout l2 = DofLayout::of(mesh2);
  CHECK(l2.n_w() == 6 * 32);
  CHECK(l2.n_v() == 6 * 32);
  CHECK_THROWS_AS(l2.w_index(0, 6), std::out_of_range);
  CHECK_THROWS_AS(l2.v_index(0, 0, 2), std::out_of_range);
}
