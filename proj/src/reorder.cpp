#include "curvetrace/reorder.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace curvetrace {

Ordering Ordering::identity(std::size_t n) {
  Ordering o;
  o.rows.resize(n);
  o.columns.resize(n);
  std::iota(o.rows.begin(), o.rows.end(), std::size_t{0});
  std::iota(o.columns.begin(), o.columns.end(), std::size_t{0});
  return o;
}

std::string Ordering::describe() const {
  if (!solvable) return "not solvable";
  const std::size_t n = rows.size();
  if (swapped_rows) {
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (rows[i] != i) return "swap rows " + std::to_string(i + 1) + "," + std::to_string(n);
  }
  if (swapped_cols) {
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (columns[j] != j) return "swap x" + std::to_string(j + 1) + ",x" + std::to_string(n);
  }
  return "no reord.";
}

DependenceMatrix build_dependence_matrix(const SystemDefinition& sys) {
  DependenceMatrix d;
  d.n = sys.n();
  d.entries.reserve(d.n * d.n);
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t j = 0; j < d.n; ++j) d.entries.push_back(dependence(sys.jacobian(i, j), j));
  return d;
}

Ordering reorder(const DependenceMatrix& d) {
  const std::size_t n = d.n;
  Ordering out = Ordering::identity(n);
  if (n < 2) return out;
  const std::size_t last = n - 1;

  auto leading_sum = [&](std::size_t row) {
    int s = 0;
    for (std::size_t j = 0; j < last; ++j) s += d.code(out.rows[row], j);
    return s;
  };

  // A followed equation that depends on the running variable only leaves the
  // slice subsystem rank deficient; trade it for the left-out equation.
  for (std::size_t i = 0; i < last; ++i) {
    if (leading_sum(i) != 0) continue;
    if (leading_sum(last) == 0 || out.swapped_rows) {
      out.solvable = false;
      return out;
    }
    std::swap(out.rows[i], out.rows[last]);
    out.swapped_rows = true;
  }
  if (out.swapped_rows) return out;

  std::vector<int> ones(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < last; ++i)
      if (d(i, j) == Dependence::Linear) ++ones[j];
  const int min_ones = *std::min_element(ones.begin(), ones.end());
  if (ones[last] == min_ones) return out;
  for (std::size_t j = 0; j < last; ++j) {
    if (ones[j] == min_ones) {
      std::swap(out.columns[j], out.columns[last]);
      out.swapped_cols = true;
      break;
    }
  }
  return out;
}

SystemDefinition swap_rows(const SystemDefinition& sys, std::size_t i) {
  const std::size_t n = sys.n();
  if (n < 2 || i >= n - 1) throw std::out_of_range("swap_rows: row index out of range");
  std::vector<Expression> eqs = sys.equations();
  std::swap(eqs[i], eqs[n - 1]);
  std::vector<Expression> jac = sys.jacobian();
  for (std::size_t c = 0; c < n; ++c) std::swap(jac[i * n + c], jac[(n - 1) * n + c]);
  return SystemDefinition::from_parts(sys.names(), std::move(eqs), sys.lower(), sys.upper(),
                                      std::move(jac));
}

SystemDefinition swap_columns(const SystemDefinition& sys, std::size_t j) {
  const std::size_t n = sys.n();
  if (n < 2 || j >= n - 1) throw std::out_of_range("swap_columns: column index out of range");
  std::vector<std::size_t> mapping(n);
  std::iota(mapping.begin(), mapping.end(), std::size_t{0});
  std::swap(mapping[j], mapping[n - 1]);

  std::vector<Expression> eqs;
  eqs.reserve(n);
  for (const Expression& e : sys.equations()) eqs.push_back(e.remap_variables(mapping));

  std::vector<Expression> jac;
  jac.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      jac.push_back(sys.jacobian(r, mapping[c]).remap_variables(mapping));

  std::vector<std::string> names = sys.names();
  std::swap(names[j], names[n - 1]);
  std::vector<double> lower = sys.lower();
  std::vector<double> upper = sys.upper();
  std::swap(lower[j], lower[n - 1]);
  std::swap(upper[j], upper[n - 1]);
  return SystemDefinition::from_parts(std::move(names), std::move(eqs), std::move(lower),
                                      std::move(upper), std::move(jac));
}

SystemDefinition apply_ordering(const SystemDefinition& sys, const Ordering& ordering) {
  if (!ordering.solvable) throw std::invalid_argument("apply_ordering: system is not solvable");
  const std::size_t n = sys.n();
  SystemDefinition out = sys;
  if (ordering.swapped_rows)
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (ordering.rows[i] != i) out = swap_rows(out, i);
  if (ordering.swapped_cols)
    for (std::size_t j = 0; j + 1 < n; ++j)
      if (ordering.columns[j] != j) out = swap_columns(out, j);
  return out;
}

std::vector<double> restore_coordinates(const Ordering& ordering, std::vector<double> x) {
  // A single transposition is its own inverse.
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[ordering.columns[j]] = x[j];
  return out;
}

}  // namespace curvetrace
