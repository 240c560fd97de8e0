#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "curvetrace/corpus.hpp"
#include "curvetrace/geometry.hpp"
#include "curvetrace/numerics.hpp"

namespace curvetrace {

namespace {

class FullSystem final : public SquareSystem {
 public:
  explicit FullSystem(const SystemDefinition& sys) : n_(sys.n()) {
    for (const Expression& e : sys.equations()) f_.emplace_back(e);
    for (const Expression& e : sys.jacobian()) j_.emplace_back(e);
  }
  std::size_t dim() const override { return n_; }
  void evaluate(std::span<const double> x, std::span<double> f,
                std::span<double> jac) const override {
    for (std::size_t i = 0; i < n_; ++i) f[i] = f_[i](x);
    for (std::size_t k = 0; k < j_.size(); ++k) jac[k] = j_[k](x);
  }

 private:
  std::size_t n_;
  std::vector<CompiledExpression> f_;
  std::vector<CompiledExpression> j_;
};

// Converging well past acc lets roots of even multiplicity, where Newton
// is only linear, settle within the merge radius.
constexpr double kPolishResidual = 1e-13;

}  // namespace

std::vector<std::vector<double>> oracle_solve(const SystemDefinition& sys, double grid_step,
                                              double acc, std::size_t threads) {
  if (sys.n() > 3) throw std::invalid_argument("oracle_solve: limited to n <= 3");
  if (!(grid_step > 0.0) || !(acc > 0.0))
    throw std::invalid_argument("oracle_solve: grid_step and acc must be positive");

  const FullSystem full(sys);
  const Mesh mesh = rmesh(sys.lower(), sys.upper(), grid_step);
  double extent = 0.0;
  for (std::size_t j = 0; j < sys.n(); ++j)
    extent = std::max({extent, std::fabs(sys.lower()[j]), std::fabs(sys.upper()[j])});
  NewtonOptions options;
  options.max_iterations = 200;
  options.divergence_bound = 1e8 * (1.0 + extent);

  const std::size_t rows = mesh.rows();
  std::vector<std::vector<double>> found(rows);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t r = begin; r < rows; r += stride) {
      NewtonOutcome out = newton(full, mesh.row(r), std::min(acc, kPolishResidual), options);
      if (!out.found) {
        // Residual floors above the polish target still count if within acc.
        out = newton(full, mesh.row(r), acc, options);
        if (!out.found) continue;
      }
      if (sys.in_box(out.point, acc) && sys.residual_norm(out.point) <= acc)
        found[r] = std::move(out.point);
    }
  };
  const std::size_t nthreads = std::max<std::size_t>(1, std::min(threads, rows));
  if (nthreads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
    for (auto& th : pool) th.join();
  }

  std::vector<std::vector<double>> roots;
  for (auto& p : found)
    if (!p.empty()) roots.push_back(std::move(p));
  std::sort(roots.begin(), roots.end());
  PointRegistry unique(sys.n(), 10.0 * acc);
  std::vector<std::vector<double>> out;
  for (auto& p : roots)
    if (unique.append_unique(p)) out.push_back(std::move(p));
  return out;
}

OracleResult oracle_solve_stabilized(const SystemDefinition& sys, double initial_step, double acc,
                                     std::size_t max_runs, std::size_t threads) {
  OracleResult result;
  double h = initial_step;
  std::size_t previous = 0;
  std::size_t unchanged = 0;
  for (std::size_t run = 0; run < max_runs; ++run, h /= 2.0) {
    auto roots = oracle_solve(sys, h, acc, threads);
    ++result.runs;
    if (run > 0 && roots.size() == previous) {
      ++unchanged;
    } else {
      unchanged = 0;
    }
    previous = roots.size();
    result.solutions = std::move(roots);
    result.grid_step = h;
    if (unchanged >= 2) {
      result.stable = true;
      break;
    }
  }
  return result;
}

}  // namespace curvetrace
