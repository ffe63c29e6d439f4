#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "l1dg/mesh.hpp"

namespace l1dg {

enum class CellKind { interval, triangle };

/// Quadrature rule on the reference cell: [0,1] or the unit triangle
/// (0,0),(1,0),(0,1). Weights sum to the reference measure.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int exactness = 0;

  std::size_t size() const { return points.size(); }
};

namespace detail {

/// Gauss-Legendre nodes on [0,1] via Newton iteration on P_n.
inline QuadratureRule gauss_legendre_unit(int npoints) {
  QuadratureRule rule;
  rule.exactness = 2 * npoints - 1;
  for (int i = 0; i < npoints; ++i) {
    // initial guess on [-1,1]
    double x = std::cos(M_PI * (i + 0.75) / (npoints + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (npoints == 1) p1 = x;
      for (int k = 2; k <= npoints; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = npoints * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= npoints; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = npoints * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points.emplace_back(0.5 * (x + 1.0), 0.0);
    rule.weights.push_back(0.5 * w);
  }
  return rule;
}

struct TriOrbit {
  double a, b, c, w;
  int mult;  // 1 (centroid), 3, or 6
};

inline QuadratureRule triangle_rule_from_orbits(const std::vector<TriOrbit>& orbits, int exactness) {
  QuadratureRule rule;
  rule.exactness = exactness;
  auto push = [&rule](double l0, double l1, double l2, double w) {
    // barycentric -> reference coordinates with vertices (0,0),(1,0),(0,1)
    rule.points.emplace_back(l1, l2);
    rule.weights.push_back(0.5 * w);
    (void)l0;
  };
  for (const auto& o : orbits) {
    if (o.mult == 1) {
      push(o.a, o.b, o.c, o.w);
    } else if (o.mult == 3) {
      push(o.a, o.b, o.c, o.w);
      push(o.b, o.c, o.a, o.w);
      push(o.c, o.a, o.b, o.w);
    } else {
      push(o.a, o.b, o.c, o.w);
      push(o.a, o.c, o.b, o.w);
      push(o.b, o.a, o.c, o.w);
      push(o.b, o.c, o.a, o.w);
      push(o.c, o.a, o.b, o.w);
      push(o.c, o.b, o.a, o.w);
    }
  }
  return rule;
}

// Dunavant symmetric rules; barycentric weights sum to 1.
inline QuadratureRule triangle_rule(int degree) {
  if (degree <= 2) {
    return triangle_rule_from_orbits({{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 3}}, 2);
  }
  if (degree <= 4) {
    return triangle_rule_from_orbits(
        {{0.108103018168070, 0.445948490915965, 0.445948490915965, 0.223381589678011, 3},
         {0.816847572980459, 0.091576213509771, 0.091576213509771, 0.109951743655322, 3}},
        4);
  }
  if (degree <= 6) {
    return triangle_rule_from_orbits(
        {{0.873821971016996, 0.063089014491502, 0.063089014491502, 0.050844906370207, 3},
         {0.501426509658179, 0.249286745170910, 0.249286745170910, 0.116786275726379, 3},
         {0.636502499121399, 0.310352451033785, 0.053145049844816, 0.082851075618374, 6}},
        6);
  }
  if (degree <= 8) {
    return triangle_rule_from_orbits(
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.14431560767787168251091110489065, 1},
         {0.08141482341455368794236897101166, 0.45929258829272315602881551449417,
          0.45929258829272315602881551449417, 0.09509163426728462479389610431161, 3},
         {0.65886138449647958675541299701707, 0.17056930775176020662229350149146,
          0.17056930775176020662229350149146, 0.10321737053471825028179155029213, 3},
         {0.89890554336593804908315289880680, 0.05054722831703097545842355059660,
          0.05054722831703097545842355059660, 0.03245849762319808031092592834178, 3},
         {0.00839477740995760533721383453930, 0.26311282963463811342178578628464,
          0.72849239295540428124100037917606, 0.02723031417443499426484469007391, 6}},
        8);
  }
  throw std::invalid_argument("triangle quadrature: degree > 8 unsupported");
}

}  // namespace detail

inline QuadratureRule quadrature(CellKind kind, int degree) {
  if (degree < 0) throw std::invalid_argument("quadrature: negative degree");
  if (kind == CellKind::interval) {
    if (degree > 19) throw std::invalid_argument("interval quadrature: degree > 19 unsupported");
    return detail::gauss_legendre_unit(degree / 2 + 1);
  }
  return detail::triangle_rule(degree);
}

}  // namespace l1dg
