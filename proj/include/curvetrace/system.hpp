#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "curvetrace/expr.hpp"

namespace curvetrace {

/// An n x n system f_i(x_1..x_n) = 0 posed on the box [lower, upper], with
/// its symbolic Jacobian.
class SystemDefinition {
 public:
  SystemDefinition() = default;

  /// Validates shapes and variable references and differentiates every
  /// equation. Throws std::invalid_argument on inconsistent input.
  SystemDefinition(std::vector<std::string> names, std::vector<Expression> equations,
                   std::vector<double> lower, std::vector<double> upper);

  /// Builds from already differentiated parts (used by row/column swaps).
  static SystemDefinition from_parts(std::vector<std::string> names,
                                     std::vector<Expression> equations,
                                     std::vector<double> lower, std::vector<double> upper,
                                     std::vector<Expression> jacobian);

  std::size_t n() const { return equations_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Expression>& equations() const { return equations_; }
  const Expression& equation(std::size_t i) const { return equations_[i]; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  /// Row-major n x n; entry (i, j) = d f_i / d x_j, simplified.
  const std::vector<Expression>& jacobian() const { return jacobian_; }
  const Expression& jacobian(std::size_t i, std::size_t j) const { return jacobian_[i * n() + j]; }

  SystemDefinition with_box(std::vector<double> lower, std::vector<double> upper) const;

  std::vector<double> residual(std::span<const double> x) const;
  double residual_norm(std::span<const double> x) const;
  bool in_box(std::span<const double> x, double slack = 0.0) const;

 private:
  void validate() const;

  std::vector<std::string> names_;
  std::vector<Expression> equations_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Expression> jacobian_;
};

}  // namespace curvetrace
