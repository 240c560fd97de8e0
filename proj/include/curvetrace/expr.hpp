#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace curvetrace {

enum class UnaryOp { Neg, Sin, Cos, Tan, Atan, Exp, Log, Sqrt, Abs, Sign };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Dependence of an equation on a variable, coded as in the D matrix.
enum class Dependence : int { Independent = 0, Linear = 1, Nonlinear = 2 };

/// Immutable arithmetic expression over indexed variables.
///
/// Nodes are shared, so copies are cheap and an Expression may be read from
/// any number of threads. Variables are referenced by position only; names
/// live with the owning system.
class Expression {
 public:
  enum class Kind { Constant, Variable, Unary, Binary };

  /// The constant zero.
  Expression();

  static Expression constant(double value);
  static Expression variable(std::size_t index);
  static Expression unary(UnaryOp op, Expression child);
  static Expression binary(BinaryOp op, Expression lhs, Expression rhs);

  Kind kind() const;
  double value() const;
  std::size_t index() const;
  UnaryOp unary_op() const;
  BinaryOp binary_op() const;
  const Expression& child() const;
  const Expression& lhs() const;
  const Expression& rhs() const;

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  bool depends_on(std::size_t var) const;
  /// One past the largest variable index referenced; 0 for closed expressions.
  std::size_t variable_extent() const;
  bool structurally_equal(const Expression& other) const;
  std::size_t node_count() const;

  /// Tree-walking evaluation. Domain violations produce NaN/Inf, never throw.
  double evaluate(std::span<const double> point) const;

  /// Rewrites every Variable(i) as Variable(mapping[i]).
  Expression remap_variables(std::span<const std::size_t> mapping) const;

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression operator+(const Expression& a, double b);
Expression operator+(double a, const Expression& b);
Expression operator-(const Expression& a, double b);
Expression operator-(double a, const Expression& b);
Expression operator*(double a, const Expression& b);
Expression operator*(const Expression& a, double b);
Expression operator/(const Expression& a, double b);
Expression operator/(double a, const Expression& b);
Expression pow(const Expression& base, const Expression& exponent);
Expression pow(const Expression& base, double exponent);
Expression sin(const Expression& e);
Expression cos(const Expression& e);
Expression tan(const Expression& e);
Expression atan(const Expression& e);
Expression exp(const Expression& e);
Expression log(const Expression& e);
Expression sqrt(const Expression& e);
Expression abs(const Expression& e);

/// Raised for malformed input. offset() is the 1-based character position
/// where parsing stopped; end of input is text.size() + 1.
class ParseError : public std::runtime_error {
 public:
  enum class Code { Syntax, UnknownIdentifier, Arity };
  ParseError(Code code, std::size_t offset, const std::string& what);
  Code code() const { return code_; }
  std::size_t offset() const { return offset_; }

 private:
  Code code_;
  std::size_t offset_;
};

Expression parse(std::string_view text, std::span<const std::string> variables);

/// Fully parenthesized text that parse() accepts back.
std::string print(const Expression& e, std::span<const std::string> variables);

/// Constant folding plus the identities 0+u, u-0, 1*u, 0*u, u/1, u^1, u^0
/// and -(-u). Idempotent.
Expression simplify(const Expression& e);

/// Simplified symbolic partial derivative with respect to variable `var`.
Expression differentiate(const Expression& e, std::size_t var);

/// Classifies the Jacobian entry `derivative` = df/dx_var.
Dependence dependence(const Expression& derivative, std::size_t var);

/// Integer power by repeated squaring; the semantics of `u ^ k` for an
/// integral constant k.
double integer_power(double base, std::int64_t exponent);

/// Flat postfix program compiled from an Expression. Evaluates to the same
/// bits as Expression::evaluate.
class CompiledExpression {
 public:
  CompiledExpression() = default;
  explicit CompiledExpression(const Expression& e);

  double operator()(std::span<const double> point) const;
  std::size_t size() const { return code_.size(); }

 private:
  enum class Op : std::uint8_t {
    Const, Var, Neg, Sin, Cos, Tan, Atan, Exp, Log, Sqrt, Abs, Sign,
    Add, Sub, Mul, Div, PowInt, PowReal
  };
  struct Instr {
    Op op;
    std::int64_t arg;
    double value;
  };
  void emit(const Expression& e);

  std::vector<Instr> code_;
  std::size_t max_depth_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace curvetrace
