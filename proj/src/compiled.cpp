#include <array>
#include <cmath>

#include "curvetrace/expr.hpp"
#include "expr_detail.hpp"

namespace curvetrace {

CompiledExpression::CompiledExpression(const Expression& e) {
  code_.reserve(e.node_count());
  emit(e);
}

void CompiledExpression::emit(const Expression& e) {
  using K = Expression::Kind;
  auto push = [this](Op op, std::int64_t arg = 0, double value = 0.0) {
    code_.push_back(Instr{op, arg, value});
  };
  switch (e.kind()) {
    case K::Constant:
      push(Op::Const, 0, e.value());
      max_depth_ = std::max(max_depth_, ++depth_);
      return;
    case K::Variable:
      push(Op::Var, static_cast<std::int64_t>(e.index()));
      max_depth_ = std::max(max_depth_, ++depth_);
      return;
    case K::Unary: {
      emit(e.child());
      static constexpr std::array<Op, 10> table = {Op::Neg, Op::Sin,  Op::Cos,  Op::Tan, Op::Atan,
                                                   Op::Exp, Op::Log,  Op::Sqrt, Op::Abs, Op::Sign};
      push(table[static_cast<std::size_t>(e.unary_op())]);
      return;
    }
    case K::Binary: {
      std::int64_t k = 0;
      emit(e.lhs());
      if (e.binary_op() == BinaryOp::Pow && e.rhs().is_constant() &&
          detail::integral_exponent(e.rhs().value(), k)) {
        push(Op::PowInt, k);
        return;
      }
      emit(e.rhs());
      static constexpr std::array<Op, 5> table = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::PowReal};
      push(table[static_cast<std::size_t>(e.binary_op())]);
      --depth_;
      return;
    }
  }
}

double CompiledExpression::operator()(std::span<const double> point) const {
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> inline_stack;
  std::vector<double> heap_stack;
  double* stack = inline_stack.data();
  if (max_depth_ > kInline) {
    heap_stack.resize(max_depth_);
    stack = heap_stack.data();
  }
  std::size_t top = 0;  // number of live entries
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::Const: stack[top++] = in.value; break;
      case Op::Var: stack[top++] = point[static_cast<std::size_t>(in.arg)]; break;
      case Op::Neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::Sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::Cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::Tan: stack[top - 1] = std::tan(stack[top - 1]); break;
      case Op::Atan: stack[top - 1] = std::atan(stack[top - 1]); break;
      case Op::Exp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::Log: stack[top - 1] = std::log(stack[top - 1]); break;
      case Op::Sqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
      case Op::Abs: stack[top - 1] = std::fabs(stack[top - 1]); break;
      case Op::Sign: stack[top - 1] = detail::apply_unary(UnaryOp::Sign, stack[top - 1]); break;
      case Op::PowInt: stack[top - 1] = integer_power(stack[top - 1], in.arg); break;
      case Op::Add: --top; stack[top - 1] += stack[top]; break;
      case Op::Sub: --top; stack[top - 1] -= stack[top]; break;
      case Op::Mul: --top; stack[top - 1] *= stack[top]; break;
      case Op::Div: --top; stack[top - 1] /= stack[top]; break;
      case Op::PowReal:
        --top;
        stack[top - 1] = detail::apply_binary(BinaryOp::Pow, stack[top - 1], stack[top]);
        break;
    }
  }
  return top == 0 ? 0.0 : stack[0];
}

}  // namespace curvetrace
