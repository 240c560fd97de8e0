#include "curvetrace/expr.hpp"

#include "expr_detail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

namespace curvetrace {

struct Expression::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  std::size_t index = 0;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::optional<Expression> a;
  std::optional<Expression> b;
};

double integer_power(double base, std::int64_t exponent) {
  if (exponent < 0) return 1.0 / integer_power(base, -exponent);
  double result = 1.0;
  double factor = base;
  auto k = static_cast<std::uint64_t>(exponent);
  while (k != 0) {
    if (k & 1U) result *= factor;
    k >>= 1U;
    if (k != 0) factor *= factor;
  }
  return result;
}

namespace detail {

bool integral_exponent(double v, std::int64_t& out) {
  if (!std::isfinite(v) || std::floor(v) != v || std::fabs(v) > 1e15) return false;
  out = static_cast<std::int64_t>(v);
  return true;
}

namespace {

double sign_of(double v) {
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  return v;  // keeps 0 and NaN
}

}  // namespace

double apply_unary(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::Neg: return -x;
    case UnaryOp::Sin: return std::sin(x);
    case UnaryOp::Cos: return std::cos(x);
    case UnaryOp::Tan: return std::tan(x);
    case UnaryOp::Atan: return std::atan(x);
    case UnaryOp::Exp: return std::exp(x);
    case UnaryOp::Log: return std::log(x);
    case UnaryOp::Sqrt: return std::sqrt(x);
    case UnaryOp::Abs: return std::fabs(x);
    case UnaryOp::Sign: return sign_of(x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double apply_binary(BinaryOp op, double x, double y) {
  switch (op) {
    case BinaryOp::Add: return x + y;
    case BinaryOp::Sub: return x - y;
    case BinaryOp::Mul: return x * y;
    case BinaryOp::Div: return x / y;
    case BinaryOp::Pow: return std::exp(y * std::log(x));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

using detail::apply_binary;
using detail::apply_unary;
using detail::integral_exponent;

Expression::Expression() : Expression(constant(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expression(std::move(n));
}

Expression Expression::unary(UnaryOp op, Expression child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->uop = op;
  n->a = std::move(child);
  return Expression(std::move(n));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expression(std::move(n));
}

Expression::Kind Expression::kind() const { return node_->kind; }
double Expression::value() const { return node_->value; }
std::size_t Expression::index() const { return node_->index; }
UnaryOp Expression::unary_op() const { return node_->uop; }
BinaryOp Expression::binary_op() const { return node_->bop; }
const Expression& Expression::child() const { return *node_->a; }
const Expression& Expression::lhs() const { return *node_->a; }
const Expression& Expression::rhs() const { return *node_->b; }

bool Expression::depends_on(std::size_t var) const {
  switch (kind()) {
    case Kind::Constant: return false;
    case Kind::Variable: return index() == var;
    case Kind::Unary: return child().depends_on(var);
    case Kind::Binary: return lhs().depends_on(var) || rhs().depends_on(var);
  }
  return false;
}

std::size_t Expression::variable_extent() const {
  switch (kind()) {
    case Kind::Constant: return 0;
    case Kind::Variable: return index() + 1;
    case Kind::Unary: return child().variable_extent();
    case Kind::Binary: return std::max(lhs().variable_extent(), rhs().variable_extent());
  }
  return 0;
}

bool Expression::structurally_equal(const Expression& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Constant:
      return value() == other.value() || (std::isnan(value()) && std::isnan(other.value()));
    case Kind::Variable: return index() == other.index();
    case Kind::Unary:
      return unary_op() == other.unary_op() && child().structurally_equal(other.child());
    case Kind::Binary:
      return binary_op() == other.binary_op() && lhs().structurally_equal(other.lhs()) &&
             rhs().structurally_equal(other.rhs());
  }
  return false;
}

std::size_t Expression::node_count() const {
  switch (kind()) {
    case Kind::Constant:
    case Kind::Variable: return 1;
    case Kind::Unary: return 1 + child().node_count();
    case Kind::Binary: return 1 + lhs().node_count() + rhs().node_count();
  }
  return 1;
}

double Expression::evaluate(std::span<const double> point) const {
  switch (kind()) {
    case Kind::Constant: return value();
    case Kind::Variable: return point[index()];
    case Kind::Unary: return apply_unary(unary_op(), child().evaluate(point));
    case Kind::Binary: {
      const double x = lhs().evaluate(point);
      std::int64_t k = 0;
      if (binary_op() == BinaryOp::Pow && rhs().is_constant() && integral_exponent(rhs().value(), k))
        return integer_power(x, k);
      return apply_binary(binary_op(), x, rhs().evaluate(point));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Expression Expression::remap_variables(std::span<const std::size_t> mapping) const {
  switch (kind()) {
    case Kind::Constant: return *this;
    case Kind::Variable: return variable(mapping[index()]);
    case Kind::Unary: return unary(unary_op(), child().remap_variables(mapping));
    case Kind::Binary:
      return binary(binary_op(), lhs().remap_variables(mapping), rhs().remap_variables(mapping));
  }
  return *this;
}

// Raw constructors used by the corpus builders and the parser.

Expression operator+(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Sub, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Mul, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return Expression::binary(BinaryOp::Div, a, b); }
Expression operator-(const Expression& a) { return Expression::unary(UnaryOp::Neg, a); }
Expression operator+(const Expression& a, double b) { return a + Expression::constant(b); }
Expression operator+(double a, const Expression& b) { return Expression::constant(a) + b; }
Expression operator-(const Expression& a, double b) { return a - Expression::constant(b); }
Expression operator-(double a, const Expression& b) { return Expression::constant(a) - b; }
Expression operator*(double a, const Expression& b) { return Expression::constant(a) * b; }
Expression operator*(const Expression& a, double b) { return a * Expression::constant(b); }
Expression operator/(const Expression& a, double b) { return a / Expression::constant(b); }
Expression operator/(double a, const Expression& b) { return Expression::constant(a) / b; }
Expression pow(const Expression& base, const Expression& exponent) { return Expression::binary(BinaryOp::Pow, base, exponent); }
Expression pow(const Expression& base, double exponent) { return pow(base, Expression::constant(exponent)); }
Expression sin(const Expression& e) { return Expression::unary(UnaryOp::Sin, e); }
Expression cos(const Expression& e) { return Expression::unary(UnaryOp::Cos, e); }
Expression tan(const Expression& e) { return Expression::unary(UnaryOp::Tan, e); }
Expression atan(const Expression& e) { return Expression::unary(UnaryOp::Atan, e); }
Expression exp(const Expression& e) { return Expression::unary(UnaryOp::Exp, e); }
Expression log(const Expression& e) { return Expression::unary(UnaryOp::Log, e); }
Expression sqrt(const Expression& e) { return Expression::unary(UnaryOp::Sqrt, e); }
Expression abs(const Expression& e) { return Expression::unary(UnaryOp::Abs, e); }

// ---------------------------------------------------------------------------
// Simplification. Every smart constructor below returns a node that is locally
// simplified when its children already are, so a bottom-up rebuild is a fixed
// point of itself.

namespace {

Expression make_unary(UnaryOp op, const Expression& u);
Expression make_binary(BinaryOp op, const Expression& u, const Expression& v);

Expression make_unary(UnaryOp op, const Expression& u) {
  if (u.is_constant()) {
    const double v = apply_unary(op, u.value());
    if (std::isfinite(v)) return Expression::constant(v);
  }
  if (op == UnaryOp::Neg && u.kind() == Expression::Kind::Unary && u.unary_op() == UnaryOp::Neg)
    return u.child();
  return Expression::unary(op, u);
}

Expression make_binary(BinaryOp op, const Expression& u, const Expression& v) {
  if (u.is_constant() && v.is_constant()) {
    const Expression folded = Expression::constant(
        Expression::binary(op, u, v).evaluate(std::span<const double>{}));
    if (std::isfinite(folded.value())) return folded;
  }
  switch (op) {
    case BinaryOp::Add:
      if (u.is_constant(0.0)) return v;
      if (v.is_constant(0.0)) return u;
      break;
    case BinaryOp::Sub:
      if (v.is_constant(0.0)) return u;
      if (u.is_constant(0.0)) return make_unary(UnaryOp::Neg, v);
      break;
    case BinaryOp::Mul:
      if (u.is_constant(0.0) || v.is_constant(0.0)) return Expression::constant(0.0);
      if (u.is_constant(1.0)) return v;
      if (v.is_constant(1.0)) return u;
      break;
    case BinaryOp::Div:
      if (u.is_constant(0.0)) return Expression::constant(0.0);
      if (v.is_constant(1.0)) return u;
      break;
    case BinaryOp::Pow:
      if (v.is_constant(1.0)) return u;
      if (v.is_constant(0.0)) return Expression::constant(1.0);
      break;
  }
  return Expression::binary(op, u, v);
}

}  // namespace

Expression simplify(const Expression& e) {
  switch (e.kind()) {
    case Expression::Kind::Constant:
    case Expression::Kind::Variable: return e;
    case Expression::Kind::Unary: return make_unary(e.unary_op(), simplify(e.child()));
    case Expression::Kind::Binary:
      return make_binary(e.binary_op(), simplify(e.lhs()), simplify(e.rhs()));
  }
  return e;
}

// ---------------------------------------------------------------------------

namespace {

Expression C(double v) { return Expression::constant(v); }
Expression add(const Expression& a, const Expression& b) { return make_binary(BinaryOp::Add, a, b); }
Expression sub(const Expression& a, const Expression& b) { return make_binary(BinaryOp::Sub, a, b); }
Expression mul(const Expression& a, const Expression& b) { return make_binary(BinaryOp::Mul, a, b); }
Expression divide(const Expression& a, const Expression& b) { return make_binary(BinaryOp::Div, a, b); }
Expression power(const Expression& a, const Expression& b) { return make_binary(BinaryOp::Pow, a, b); }
Expression un(UnaryOp op, const Expression& a) { return make_unary(op, a); }

// Inputs are simplified, outputs are simplified.
Expression derive(const Expression& e, std::size_t var) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Constant: return C(0.0);
    case K::Variable: return C(e.index() == var ? 1.0 : 0.0);
    case K::Unary: {
      const Expression& u = e.child();
      const Expression du = derive(u, var);
      if (du.is_constant(0.0)) return C(0.0);
      switch (e.unary_op()) {
        case UnaryOp::Neg: return un(UnaryOp::Neg, du);
        case UnaryOp::Sin: return mul(un(UnaryOp::Cos, u), du);
        case UnaryOp::Cos: return mul(un(UnaryOp::Neg, un(UnaryOp::Sin, u)), du);
        case UnaryOp::Tan:
          return mul(add(C(1.0), power(un(UnaryOp::Tan, u), C(2.0))), du);
        case UnaryOp::Atan: return divide(du, add(C(1.0), power(u, C(2.0))));
        case UnaryOp::Exp: return mul(un(UnaryOp::Exp, u), du);
        case UnaryOp::Log: return divide(du, u);
        case UnaryOp::Sqrt: return divide(du, mul(C(2.0), un(UnaryOp::Sqrt, u)));
        case UnaryOp::Abs: return mul(un(UnaryOp::Sign, u), du);
        case UnaryOp::Sign: return C(0.0);
      }
      break;
    }
    case K::Binary: {
      const Expression& u = e.lhs();
      const Expression& v = e.rhs();
      const Expression du = derive(u, var);
      const Expression dv = derive(v, var);
      switch (e.binary_op()) {
        case BinaryOp::Add: return add(du, dv);
        case BinaryOp::Sub: return sub(du, dv);
        case BinaryOp::Mul: return add(mul(du, v), mul(u, dv));
        case BinaryOp::Div:
          if (dv.is_constant(0.0)) return divide(du, v);
          return divide(sub(mul(du, v), mul(u, dv)), power(v, C(2.0)));
        case BinaryOp::Pow:
          if (v.is_constant()) {
            // c * u^(c-1) * u'
            return mul(mul(v, power(u, C(v.value() - 1.0))), du);
          }
          if (du.is_constant(0.0)) {
            // u^v * log(u) * v'
            return mul(mul(e, un(UnaryOp::Log, u)), dv);
          }
          // u^v * (v' log u + v u'/u)
          return mul(e, add(mul(dv, un(UnaryOp::Log, u)), divide(mul(v, du), u)));
      }
      break;
    }
  }
  return C(0.0);
}

}  // namespace

Expression differentiate(const Expression& e, std::size_t var) {
  return simplify(derive(simplify(e), var));
}

Dependence dependence(const Expression& derivative, std::size_t var) {
  const Expression d = simplify(derivative);
  if (d.is_constant(0.0)) return Dependence::Independent;
  if (d.depends_on(var)) return Dependence::Nonlinear;
  return Dependence::Linear;
}

// ---------------------------------------------------------------------------

namespace {

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Atan: return "atan";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Abs: return "abs";
    case UnaryOp::Sign: return "sign";
  }
  return "?";
}

char binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

void print_to(const Expression& e, std::span<const std::string> names, std::string& out) {
  switch (e.kind()) {
    case Expression::Kind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.value());
      if (e.value() < 0.0) {
        out += "(";
        out += buf;
        out += ")";
      } else {
        out += buf;
      }
      return;
    }
    case Expression::Kind::Variable:
      if (e.index() < names.size()) {
        out += names[e.index()];
      } else {
        out += "x" + std::to_string(e.index() + 1);
      }
      return;
    case Expression::Kind::Unary:
      if (e.unary_op() == UnaryOp::Neg) {
        out += "(-";
        print_to(e.child(), names, out);
        out += ")";
      } else {
        out += unary_name(e.unary_op());
        out += "(";
        print_to(e.child(), names, out);
        out += ")";
      }
      return;
    case Expression::Kind::Binary:
      out += "(";
      print_to(e.lhs(), names, out);
      out += ' ';
      out += binary_symbol(e.binary_op());
      out += ' ';
      print_to(e.rhs(), names, out);
      out += ")";
      return;
  }
}

}  // namespace

std::string print(const Expression& e, std::span<const std::string> variables) {
  std::string out;
  print_to(e, variables, out);
  return out;
}

}  // namespace curvetrace
