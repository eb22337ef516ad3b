#pragma once

#include <functional>
#include <vector>

#include "femkit/common.hpp"

namespace femkit {

/// Quadrature rule on a reference domain. 1D rules store their abscissae in Point2::x.
struct QuadratureRule {
  int dim = 1;
  std::vector<Point2> points;
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Three-point Gauss-Legendre rule on [-1, 1]: nodes 0, +-sqrt(15)/5; weights 8/9, 5/9.
QuadratureRule gauss3_interval();

/// Affine image of a rule on [-1, 1] onto [a, b]; weights scale by (b - a)/2.
QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b);

/// Symmetric rule on {xi, eta >= 0, xi + eta <= 1}. Always the 7-point degree-5 rule.
QuadratureRule triangle_rule(int min_degree);

/// Integral over [a, b] of `f` using a rule defined on [-1, 1].
double integrate(const QuadratureRule& rule, double a, double b, const std::function<double(double)>& f);

/// Integral over the triangle (p0, p1, p2) using a reference-triangle rule; |J| = 2 * area.
double integrate(const QuadratureRule& rule, const std::array<Point2, 3>& triangle,
                 const std::function<double(Point2)>& f);

}  // namespace femkit
