#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "curvetrace/expr.hpp"
#include "curvetrace/system.hpp"

namespace curvetrace {

/// n x n matrix of Dependence codes, row-major.
struct DependenceMatrix {
  std::size_t n = 0;
  std::vector<Dependence> entries;

  Dependence operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
  int code(std::size_t i, std::size_t j) const { return static_cast<int>((*this)(i, j)); }
};

/// Suggested equation/variable ordering. Both permutations are 0-based and
/// are the identity except for at most one transposition with position n-1.
struct Ordering {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> columns;
  bool solvable = true;
  bool swapped_rows = false;
  bool swapped_cols = false;

  static Ordering identity(std::size_t n);
  /// "no reord.", "swap x5,x8", "swap rows 1,2" or "not solvable".
  std::string describe() const;
  bool is_identity() const { return !swapped_rows && !swapped_cols; }
};

DependenceMatrix build_dependence_matrix(const SystemDefinition& sys);

/// Suggests at most one row or one column transposition with the last
/// position so that the followed subsystem has full rank and the running
/// variable is the one the subsystem depends on least linearly.
Ordering reorder(const DependenceMatrix& d);

/// Exchanges equation i with the last equation (0-based, i < n-1).
SystemDefinition swap_rows(const SystemDefinition& sys, std::size_t i);

/// Exchanges variable x_j with the last variable x_n in every expression,
/// the bounds and the Jacobian columns (0-based, j < n-1).
SystemDefinition swap_columns(const SystemDefinition& sys, std::size_t j);

/// Applies a suggestion from reorder().
SystemDefinition apply_ordering(const SystemDefinition& sys, const Ordering& ordering);

/// Maps a point of the reordered system back to the original variable order.
std::vector<double> restore_coordinates(const Ordering& ordering, std::vector<double> x);

}  // namespace curvetrace
