#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "femkit/common.hpp"

namespace femkit {

/// Malformed expression; position() is the 0-based character offset.
class ExpressionError : public InputError {
 public:
  ExpressionError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Closed-form expression in x, y, t: numbers, pi, + - * / ^, sin, cos, exp and
/// box(x0, x1, y0, y1), the indicator of the open rectangle.
class Expression {
 public:
  struct Node;

  Expression();  // the constant 0
  static Expression parse(std::string_view source);
  static Expression constant(double value);

  double operator()(double x, double y = 0.0, double t = 0.0) const;
  double operator()(Point2 p, double t = 0.0) const { return (*this)(p.x, p.y, t); }

  const std::string& source() const { return source_; }
  bool depends_on_time() const;
  /// True when the expression has no variables.
  bool is_constant() const;

  friend bool operator==(const Expression& a, const Expression& b) { return a.source_ == b.source_; }

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace femkit
