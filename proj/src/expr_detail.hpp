#pragma once

#include "curvetrace/expr.hpp"

namespace curvetrace::detail {

double apply_unary(UnaryOp op, double x);
double apply_binary(BinaryOp op, double x, double y);
bool integral_exponent(double v, std::int64_t& out);

}  // namespace curvetrace::detail
