#include "femkit/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "text_util.hpp"

namespace femkit {

struct Expression::Node {
  enum class Kind { number, x, y, t, neg, add, sub, mul, div, pow, sin, cos, exp, box };
  Kind kind = Kind::number;
  double value = 0.0;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(double x, double y, double t) const {
    auto arg = [&](std::size_t i) { return args[i]->eval(x, y, t); };
    switch (kind) {
      case Kind::number: return value;
      case Kind::x: return x;
      case Kind::y: return y;
      case Kind::t: return t;
      case Kind::neg: return -arg(0);
      case Kind::add: return arg(0) + arg(1);
      case Kind::sub: return arg(0) - arg(1);
      case Kind::mul: return arg(0) * arg(1);
      case Kind::div: return arg(0) / arg(1);
      case Kind::pow: return std::pow(arg(0), arg(1));
      case Kind::sin: return std::sin(arg(0));
      case Kind::cos: return std::cos(arg(0));
      case Kind::exp: return std::exp(arg(0));
      case Kind::box: return (x > arg(0) && x < arg(1) && y > arg(2) && y < arg(3)) ? 1.0 : 0.0;
    }
    return 0.0;
  }

  bool uses(Kind variable) const {
    if (kind == variable) return true;
    for (const auto& a : args) {
      if (a->uses(variable)) return true;
    }
    // box reads x and y implicitly
    return kind == Kind::box && (variable == Kind::x || variable == Kind::y);
  }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, std::vector<NodePtr> args = {}, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  n->value = value;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    if (peek() == '\0') fail("empty expression");
    NodePtr n = expr();
    if (peek() != '\0') fail(std::string("unexpected '") + s_[pos_] + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression '" + std::string(s_) + "': " + what, pos_);
  }

  char peek() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (peek() == '\0') fail(std::string("expected '") + c + "' but reached the end");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::Kind::add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Node::Kind::sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::Kind::mul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Node::Kind::div, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::neg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Kind::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    const char c = peek();
    if (c == '\0') fail("unexpected end of expression");
    if (accept('(')) {
      NodePtr n = expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const auto value = text::parse_double(s_.substr(start, pos_ - start));
    if (!value) {
      pos_ = start;
      fail("malformed number");
    }
    return make(Node::Kind::number, {}, *value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "x") return make(Node::Kind::x);
    if (name == "y") return make(Node::Kind::y);
    if (name == "t") return make(Node::Kind::t);
    if (name == "pi") return make(Node::Kind::number, {}, std::numbers::pi);
    Node::Kind kind;
    std::size_t arity = 1;
    if (name == "sin") {
      kind = Node::Kind::sin;
    } else if (name == "cos") {
      kind = Node::Kind::cos;
    } else if (name == "exp") {
      kind = Node::Kind::exp;
    } else if (name == "box") {
      kind = Node::Kind::box;
      arity = 4;
    } else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    std::vector<NodePtr> args{expr()};
    while (accept(',')) args.push_back(expr());
    if (args.size() != arity) {
      fail(std::string(name) + " takes " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s"));
    }
    expect(')');
    return make(kind, std::move(args));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : source_("0"), root_(make(Node::Kind::number)) {}

Expression Expression::parse(std::string_view source) {
  Expression e;
  e.root_ = Parser(source).parse();
  e.source_ = std::string(text::trim(source));
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  e.root_ = make(Node::Kind::number, {}, value);
  e.source_ = text::shortest(value);
  return e;
}

double Expression::operator()(double x, double y, double t) const { return root_->eval(x, y, t); }

bool Expression::depends_on_time() const { return root_->uses(Node::Kind::t); }

bool Expression::is_constant() const {
  return !root_->uses(Node::Kind::x) && !root_->uses(Node::Kind::y) && !root_->uses(Node::Kind::t);
}

}  // namespace femkit
