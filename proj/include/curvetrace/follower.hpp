#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "curvetrace/expr.hpp"
#include "curvetrace/geometry.hpp"
#include "curvetrace/numerics.hpp"
#include "curvetrace/system.hpp"

namespace curvetrace {

/// The system split into the n-1 followed equations F_l, the left-out
/// equation F_u and the leading Jacobian block J_l = dF_l/d(x_1..x_{n-1}).
/// The last variable x_n is the running variable.
class SplitSystem {
 public:
  explicit SplitSystem(const SystemDefinition& sys);

  std::size_t n() const { return n_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<Expression>& f_lead() const { return f_lead_; }
  const Expression& f_left_out() const { return f_left_out_; }
  /// Row-major (n-1) x (n-1).
  const std::vector<Expression>& j_lead() const { return j_lead_; }

  /// F_u at a full n-point.
  double left_out(std::span<const double> point) const { return fu_(point); }
  /// ||F_l||_inf at a full n-point.
  double lead_residual(std::span<const double> point) const;

  /// Fills F_l (n-1) and J_l ((n-1)^2) at a full n-point.
  void evaluate_lead(std::span<const double> point, std::span<double> f,
                     std::span<double> jac) const;

 private:
  std::size_t n_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Expression> f_lead_;
  Expression f_left_out_;
  std::vector<Expression> j_lead_;
  std::vector<CompiledExpression> fl_;
  CompiledExpression fu_;
  std::vector<CompiledExpression> jl_;
};

/// F_l restricted to the slice x_n = z, as an (n-1)-dimensional system.
class SliceSystem final : public SquareSystem {
 public:
  SliceSystem(const SplitSystem& split, double z) : split_(split), z_(z) {}
  std::size_t dim() const override { return split_.n() - 1; }
  void evaluate(std::span<const double> x, std::span<double> f,
                std::span<double> jac) const override;

 private:
  const SplitSystem& split_;
  double z_;
};

/// Newton on the slice x_n = z from `lead_start` (length n-1).
NewtonOutcome solve_on_slice(const SplitSystem& split, double z,
                             std::span<const double> lead_start, double acc1,
                             const NewtonOptions& options);

struct StepOutcome {
  std::vector<double> point;  // full n-vector
  bool done = false;
  std::size_t halvings = 0;
  double effective_h = 0.0;
  /// The first attempt was shortened to land on z_limit.
  bool clamped = false;
};

/// Advances the curve from vz0 by one x_n increment. The first attempt uses
/// h = step (or the distance to `z_limit` if that is nearer); rejected
/// attempts restart from vz0 with h halved until |h| < thresh. A result is
/// accepted when Newton converges and the leading coordinates moved by at
/// most |step|.
StepOutcome proceed_one_step(const SplitSystem& split, double step, std::span<const double> vz0,
                             double acc1, double thresh, const NewtonOptions& options,
                             const double* z_limit = nullptr);

enum class BisectionFailure { None, NewtonMidpoint, NoProgress, IterationLimit };

struct BisectionResult {
  std::vector<double> solution;
  bool found = false;
  BisectionFailure failure = BisectionFailure::None;
  std::size_t iterations = 0;
  /// |z1 - z0| of the bracket before each midpoint evaluation.
  std::vector<double> widths;
};

/// Pins the crossing of F_u = 0 between the curve points vz0 and vz1 by
/// halving the x_n interval. Each midpoint is put back on the curve by Newton
/// started from the most recent curve point of the bracket.
BisectionResult bisection(const SplitSystem& split, std::span<const double> vz0,
                          std::span<const double> vz1, double acc1, double acc2,
                          const NewtonOptions& options, std::size_t max_iterations = 200);

enum class SolutionMechanism : int { DirectHit = 1, Bisection = 2 };

struct FollowParams {
  double acc1 = 1e-10;
  double acc2 = 1e-4;
  double thresh = 0.1;
  bool boundary_clamp = true;
  NewtonOptions newton;
};

struct TraceRow {
  int branch = 0;
  int direction = 0;
  std::vector<double> point;
  double fu = 0.0;
  std::size_t halvings = 0;
  bool clamped = false;
};

struct FollowStats {
  std::size_t steps = 0;
  std::size_t halvings = 0;
  std::size_t direct_hits = 0;
  std::size_t bisection_calls = 0;
  std::size_t bisection_failures = 0;
  /// Intervals where F_u changed sign but the far end was already within
  /// acc2; handled by the direct-hit path on the next iteration.
  std::size_t near_zero_sign_flips = 0;
};

/// Sweeps one branch from the verified curve point vz0 in the direction of
/// `step`, recording visited points into `curve_parts` and solutions of the
/// full system into `solutions`. Stops when the branch cannot be advanced or
/// x_n leaves [lower(n), upper(n)].
void follow_curve(const SplitSystem& split, double step, std::span<const double> vz0,
                  const FollowParams& params, int branch, PointRegistry& curve_parts,
                  PointRegistry& solutions, FollowStats& stats,
                  std::vector<TraceRow>* trace = nullptr);

}  // namespace curvetrace
