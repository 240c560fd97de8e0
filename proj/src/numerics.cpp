#include "curvetrace/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace curvetrace {

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    const double ax = std::fabs(x);
    if (!(ax <= m)) m = ax;  // propagates NaN
  }
  return m;
}

bool solve_linear_in_place(std::span<double> a, std::span<double> b) {
  const std::size_t m = b.size();
  if (m == 0 || a.size() != m * m) throw std::invalid_argument("solve_linear: shape mismatch");

  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::fabs(x));
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  const double tiny = 1e-14 * scale;

  for (std::size_t k = 0; k < m; ++k) {
    std::size_t pivot = k;
    double best = std::fabs(a[k * m + k]);
    for (std::size_t r = k + 1; r < m; ++r) {
      const double v = std::fabs(a[r * m + k]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (!(best >= tiny)) return false;
    if (pivot != k) {
      for (std::size_t c = 0; c < m; ++c) std::swap(a[k * m + c], a[pivot * m + c]);
      std::swap(b[k], b[pivot]);
    }
    const double diag = a[k * m + k];
    for (std::size_t r = k + 1; r < m; ++r) {
      const double factor = a[r * m + k] / diag;
      if (factor == 0.0) continue;
      a[r * m + k] = factor;
      for (std::size_t c = k + 1; c < m; ++c) a[r * m + c] -= factor * a[k * m + c];
      b[r] -= factor * b[k];
    }
  }
  for (std::size_t k = m; k-- > 0;) {
    double sum = b[k];
    for (std::size_t c = k + 1; c < m; ++c) sum -= a[k * m + c] * b[c];
    b[k] = sum / a[k * m + k];
  }
  return true;
}

std::optional<std::vector<double>> solve_linear(std::vector<double> a, std::vector<double> b) {
  if (!solve_linear_in_place(a, b)) return std::nullopt;
  return b;
}

NewtonOutcome newton(const SquareSystem& system, std::span<const double> start, double acc,
                     const NewtonOptions& options) {
  const std::size_t dim = system.dim();
  NewtonOutcome out;
  out.point.assign(start.begin(), start.end());
  std::vector<double> f(dim);
  std::vector<double> jac(dim * dim);

  for (;;) {
    system.evaluate(out.point, f, jac);
    out.residual_norm = max_norm(f);
    if (!std::isfinite(out.residual_norm)) return out;
    for (double v : jac)
      if (!std::isfinite(v)) return out;
    // Acceptance also needs a regular Jacobian: a point where the system is
    // rank deficient is not an isolated root Newton can certify.
    if (!solve_linear_in_place(jac, f)) return out;
    if (out.residual_norm <= acc) {
      out.found = true;
      return out;
    }
    if (out.iterations >= options.max_iterations) return out;
    for (std::size_t i = 0; i < dim; ++i) out.point[i] -= f[i];
    ++out.iterations;
    if (!(max_norm(out.point) <= options.divergence_bound)) return out;
  }
}

}  // namespace curvetrace
