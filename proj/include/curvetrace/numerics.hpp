#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace curvetrace {

/// Solves A x = b for a dense row-major m x m matrix by LU with partial
/// pivoting. Returns nullopt when a pivot falls below 1e-14 * max|A|.
std::optional<std::vector<double>> solve_linear(std::vector<double> a, std::vector<double> b);

/// In-place variant used on the Newton hot path: `a` is overwritten by its
/// factors and `b` by the solution. Returns false on a singular pivot.
bool solve_linear_in_place(std::span<double> a, std::span<double> b);

double max_norm(std::span<const double> v);

/// Square system F: R^dim -> R^dim with Jacobian, evaluated together.
class SquareSystem {
 public:
  virtual ~SquareSystem() = default;
  virtual std::size_t dim() const = 0;
  /// Fills f (dim) and jac (dim*dim, row-major).
  virtual void evaluate(std::span<const double> x, std::span<double> f,
                        std::span<double> jac) const = 0;
};

struct NewtonOptions {
  std::size_t max_iterations = 100;
  double divergence_bound = 1e8;
};

struct NewtonOutcome {
  std::vector<double> point;
  bool found = false;
  std::size_t iterations = 0;
  double residual_norm = std::numeric_limits<double>::infinity();
};

/// Plain Newton iteration x <- x - J(x)^{-1} F(x) with a residual stopping
/// test ||F||_inf <= acc, applied only where J is regular. Reports
/// found=false on iteration cap, singular Jacobian, non-finite values, or
/// ||x||_inf above the divergence bound.
NewtonOutcome newton(const SquareSystem& system, std::span<const double> start, double acc,
                     const NewtonOptions& options = {});

}  // namespace curvetrace
