#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "l1dg/assembly.hpp"
#include "l1dg/errors.hpp"
#include "l1dg/mesh.hpp"

namespace l1dg {

enum class DomainKind { interval, square, lshape };

/// A named experiment: domain, coefficient matrix and manufactured exact
/// solution (f and g derived from it).
struct Problem {
  std::string name;
  DomainKind domain = DomainKind::square;
  CoefficientField coeff;
  ExactSolution exact;

  Mesh build_mesh(int n) const {
    switch (domain) {
      case DomainKind::interval:
        return build_interval_mesh(n);
      case DomainKind::square:
        return build_square_mesh(n);
      default:
        return build_lshape_mesh(n);
    }
  }
};

namespace detail {

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline ExactSolution sine_product_solution(const CoefficientField& coeff) {
  ExactSolution ex;
  ex.u = [](const Point& p) { return std::sin(M_PI * p.x()) * std::sin(M_PI * p.y()); };
  ex.grad = [](const Point& p) {
    return Eigen::Vector2d(M_PI * std::cos(M_PI * p.x()) * std::sin(M_PI * p.y()),
                           M_PI * std::sin(M_PI * p.x()) * std::cos(M_PI * p.y()));
  };
  ex.hess = [](const Point& p) {
    const double s = std::sin(M_PI * p.x()) * std::sin(M_PI * p.y());
    const double c = std::cos(M_PI * p.x()) * std::cos(M_PI * p.y());
    Eigen::Matrix2d H;
    H << -M_PI * M_PI * s, M_PI * M_PI * c, M_PI * M_PI * c, -M_PI * M_PI * s;
    return H;
  };
  auto A = coeff.A;
  auto hess = ex.hess;
  ex.f = [A, hess](const Point& p) {
    const Eigen::Matrix2d a = A(p);
    const Eigen::Matrix2d H = hess(p);
    return a.cwiseProduct(H).sum();
  };
  ex.g = [](const Point&) { return 0.0; };
  return ex;
}

/// u = r^(2/3) sin(2 theta / 3) with theta in [0, 2 pi): the imaginary part
/// of z^(2/3) on that branch. Derivatives via complex differentiation.
struct LshapeSingular {
  static void polar(const Point& p, double& r, double& theta) {
    r = p.norm();
    theta = std::atan2(p.y(), p.x());
    if (theta < 0.0) theta += 2.0 * M_PI;
  }
  static double u(const Point& p) {
    double r, t;
    polar(p, r, t);
    return std::pow(r, 2.0 / 3.0) * std::sin(2.0 * t / 3.0);
  }
  // f'(z) = (2/3) z^(-1/3); gradient = (Im f', Re f')
  static Eigen::Vector2d grad(const Point& p) {
    double r, t;
    polar(p, r, t);
    const double m = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0);
    const double a = -t / 3.0;
    return Eigen::Vector2d(m * std::sin(a), m * std::cos(a));
  }
  // f''(z) = -(2/9) z^(-4/3); Hessian = [[Im f'', Re f''],[Re f'', -Im f'']]
  static Eigen::Matrix2d hess(const Point& p) {
    double r, t;
    polar(p, r, t);
    const double m = -(2.0 / 9.0) * std::pow(r, -4.0 / 3.0);
    const double a = -4.0 * t / 3.0;
    const double im = m * std::sin(a);
    const double re = m * std::cos(a);
    Eigen::Matrix2d H;
    H << im, re, re, -im;
    return H;
  }
};

inline ExactSolution lshape_solution(const CoefficientField& coeff, bool identity_coeff) {
  ExactSolution ex;
  ex.u = &LshapeSingular::u;
  ex.grad = &LshapeSingular::grad;
  ex.hess = &LshapeSingular::hess;
  if (identity_coeff) {
    ex.f = [](const Point&) { return 0.0; };  // harmonic
  } else {
    auto A = coeff.A;
    ex.f = [A](const Point& p) {
      return A(p).cwiseProduct(LshapeSingular::hess(p)).sum();
    };
  }
  ex.g = ex.u;
  return ex;
}

}  // namespace detail

inline Problem make_square_problem(const std::string& kind) {
  Problem pr;
  pr.domain = DomainKind::square;
  pr.name = "square-" + kind;
  if (kind == "constant") {
    Eigen::Matrix2d A;
    A << 2.0, 1.0, 1.0, 2.0;
    pr.coeff = constant_coefficient(A);
  } else if (kind == "continuous") {
    pr.coeff = {[](const Point& p) {
                  Eigen::Matrix2d A;
                  const double c = std::sqrt(std::max(0.0, p.x() * p.y()));
                  A << 1.0 + p.x(), c, c, 1.0 + p.y();
                  return A;
                },
                CoefficientSmoothness::continuous};
  } else if (kind == "discontinuous") {
    pr.coeff = {[](const Point& p) {
                  Eigen::Matrix2d A;
                  const double s = detail::sgn((p.x() - 0.5) * (p.y() - 0.5));
                  A << 2.0, s, s, 2.0;
                  return A;
                },
                CoefficientSmoothness::piecewise};
  } else {
    throw std::invalid_argument("make_square_problem: unknown kind " + kind);
  }
  pr.exact = detail::sine_product_solution(pr.coeff);
  return pr;
}

inline Problem make_lshape_problem(const std::string& kind) {
  Problem pr;
  pr.domain = DomainKind::lshape;
  pr.name = "lshape-" + kind;
  bool identity = false;
  if (kind == "constant") {
    pr.coeff = constant_coefficient(Eigen::Matrix2d::Identity());
    identity = true;
  } else if (kind == "continuous") {
    pr.coeff = {[](const Point& p) {
                  Eigen::Matrix2d A;
                  const double c = std::sqrt(std::abs(p.x() * p.y()));
                  A << 1.0 + std::abs(p.x()), c, c, 1.0 + std::abs(p.y());
                  return A;
                },
                CoefficientSmoothness::continuous};
  } else if (kind == "discontinuous") {
    pr.coeff = {[](const Point& p) {
                  Eigen::Matrix2d A;
                  const double s = detail::sgn(p.x() * p.y());
                  A << 2.0, s, s, 2.0;
                  return A;
                },
                CoefficientSmoothness::piecewise};
  } else {
    throw std::invalid_argument("make_lshape_problem: unknown kind " + kind);
  }
  pr.exact = detail::lshape_solution(pr.coeff, identity);
  return pr;
}

/// 1D model with a gradient kink at x = t: u vanishes at both endpoints and
/// q = u' is continuous with a corner at t.
inline ExactSolution kink_solution(double t, double n) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("kink_solution: t must be in (0,1)");
  if (!(n > 0.0)) throw std::invalid_argument("kink_solution: n must be > 0");
  ExactSolution ex;
  ex.u = [t, n](const Point& p) {
    const double x = p.x();
    if (x <= t) return t * (std::pow(x / t, n + 1.0) - x / t);
    const double s = (1.0 - x) / (1.0 - t);
    return (1.0 - t) * (s - std::pow(s, n + 1.0));
  };
  ex.grad = [t, n](const Point& p) {
    const double x = p.x();
    double q;
    if (x <= t)
      q = (n + 1.0) * std::pow(x / t, n) - 1.0;
    else
      q = (n + 1.0) * std::pow((1.0 - x) / (1.0 - t), n) - 1.0;
    return Eigen::Vector2d(q, 0.0);
  };
  ex.hess = [t, n](const Point& p) {
    const double x = p.x();
    Eigen::Matrix2d H = Eigen::Matrix2d::Zero();
    if (x <= t)
      H(0, 0) = n * (n + 1.0) / t * std::pow(x / t, n - 1.0);
    else
      H(0, 0) = -n * (n + 1.0) / (1.0 - t) * std::pow((1.0 - x) / (1.0 - t), n - 1.0);
    return H;
  };
  auto hess = ex.hess;
  ex.f = [hess](const Point& p) { return hess(p)(0, 0); };  // A = 1
  ex.g = [](const Point&) { return 0.0; };
  return ex;
}

inline Problem make_kink_problem(double t, double n) {
  Problem pr;
  pr.domain = DomainKind::interval;
  pr.name = "kink-1d";
  pr.coeff = constant_coefficient(Eigen::Matrix2d::Identity());
  pr.exact = kink_solution(t, n);
  return pr;
}

inline Problem make_problem(const std::string& name, double kink_t = 1.0 / 6.0, double kink_n = 3.0) {
  if (name == "square-constant") return make_square_problem("constant");
  if (name == "square-continuous") return make_square_problem("continuous");
  if (name == "square-discontinuous") return make_square_problem("discontinuous");
  if (name == "lshape-constant") return make_lshape_problem("constant");
  if (name == "lshape-continuous") return make_lshape_problem("continuous");
  if (name == "lshape-discontinuous") return make_lshape_problem("discontinuous");
  if (name == "kink-1d") return make_kink_problem(kink_t, kink_n);
  throw std::invalid_argument("make_problem: unknown problem " + name);
}

}  // namespace l1dg
