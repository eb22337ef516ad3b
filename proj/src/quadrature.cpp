#include "femkit/quadrature.hpp"

namespace femkit {

QuadratureRule gauss3_interval() {
  static const QuadratureRule rule = [] {
    const double node = std::sqrt(15.0) / 5.0;
    QuadratureRule r;
    r.dim = 1;
    r.points = {{-node, 0.0}, {0.0, 0.0}, {node, 0.0}};
    r.weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    r.exact_degree = 5;
    return r;
  }();
  return rule;
}

QuadratureRule map_to_interval(const QuadratureRule& rule, double a, double b) {
  if (rule.dim != 1) throw InputError("map_to_interval: rule is not one-dimensional");
  if (!(a < b)) throw InputError("map_to_interval: need a < b");
  QuadratureRule out = rule;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    out.points[q] = {half * rule.points[q].x + mid, 0.0};
    out.weights[q] = half * rule.weights[q];
  }
  return out;
}

QuadratureRule triangle_rule(int min_degree) {
  if (min_degree > 5) throw InputError("triangle_rule: degree " + std::to_string(min_degree) + " unsupported (max 5)");
  static const QuadratureRule rule = [] {
    // Centroid plus two three-point orbits (Radon's degree-5 formula), weights scaled to area 1/2.
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w0 = 9.0 / 80.0;
    const double w1 = (155.0 - s15) / 2400.0;
    const double w2 = (155.0 + s15) / 2400.0;
    QuadratureRule r;
    r.dim = 2;
    r.points = {{1.0 / 3.0, 1.0 / 3.0}, {a1, a1}, {b1, a1}, {a1, b1}, {a2, a2}, {b2, a2}, {a2, b2}};
    r.weights = {w0, w1, w1, w1, w2, w2, w2};
    r.exact_degree = 5;
    return r;
  }();
  return rule;
}

double integrate(const QuadratureRule& rule, double a, double b, const std::function<double(double)>& f) {
  const auto mapped = map_to_interval(rule, a, b);
  double sum = 0.0;
  for (std::size_t q = 0; q < mapped.size(); ++q) sum += mapped.weights[q] * f(mapped.points[q].x);
  return sum;
}

double integrate(const QuadratureRule& rule, const std::array<Point2, 3>& tri,
                 const std::function<double(Point2)>& f) {
  if (rule.dim != 2) throw InputError("integrate: rule is not a triangle rule");
  const Vec2 e1 = tri[1] - tri[0], e2 = tri[2] - tri[0];
  const double jac = std::abs(cross(e1, e2));
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Point2 r = rule.points[q];
    sum += rule.weights[q] * f(tri[0] + r.x * e1 + r.y * e2);
  }
  return jac * sum;
}

}  // namespace femkit
