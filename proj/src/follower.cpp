#include "curvetrace/follower.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace curvetrace {

namespace {

double lead_distance(std::span<const double> a, std::span<const double> b, std::size_t m) {
  double d = 0.0;
  for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

std::vector<double> with_slice(std::span<const double> lead, double z) {
  std::vector<double> p(lead.begin(), lead.end());
  p.push_back(z);
  return p;
}

}  // namespace

SplitSystem::SplitSystem(const SystemDefinition& sys)
    : n_(sys.n()), lower_(sys.lower()), upper_(sys.upper()) {
  if (n_ < 2) throw std::invalid_argument("curve following needs n >= 2");
  const std::size_t m = n_ - 1;
  for (std::size_t i = 0; i < m; ++i) {
    f_lead_.push_back(sys.equation(i));
    fl_.emplace_back(sys.equation(i));
    for (std::size_t j = 0; j < m; ++j) {
      j_lead_.push_back(sys.jacobian(i, j));
      jl_.emplace_back(sys.jacobian(i, j));
    }
  }
  f_left_out_ = sys.equation(m);
  fu_ = CompiledExpression(f_left_out_);
}

double SplitSystem::lead_residual(std::span<const double> point) const {
  double r = 0.0;
  for (const auto& f : fl_) {
    const double v = std::fabs(f(point));
    if (!(v <= r)) r = v;
  }
  return r;
}

void SplitSystem::evaluate_lead(std::span<const double> point, std::span<double> f,
                                std::span<double> jac) const {
  for (std::size_t i = 0; i < fl_.size(); ++i) f[i] = fl_[i](point);
  for (std::size_t k = 0; k < jl_.size(); ++k) jac[k] = jl_[k](point);
}

void SliceSystem::evaluate(std::span<const double> x, std::span<double> f,
                           std::span<double> jac) const {
  double buffer[16];
  std::vector<double> heap;
  double* p = buffer;
  const std::size_t n = split_.n();
  if (n > 16) {
    heap.resize(n);
    p = heap.data();
  }
  for (std::size_t i = 0; i + 1 < n; ++i) p[i] = x[i];
  p[n - 1] = z_;
  split_.evaluate_lead(std::span<const double>(p, n), f, jac);
}

NewtonOutcome solve_on_slice(const SplitSystem& split, double z,
                             std::span<const double> lead_start, double acc1,
                             const NewtonOptions& options) {
  return newton(SliceSystem(split, z), lead_start, acc1, options);
}

// ---------------------------------------------------------------------------

StepOutcome proceed_one_step(const SplitSystem& split, double step, std::span<const double> vz0,
                             double acc1, double thresh, const NewtonOptions& options,
                             const double* z_limit) {
  const std::size_t m = split.n() - 1;
  const double base = vz0[m];
  const std::span<const double> lead0 = vz0.first(m);
  const double radius = std::fabs(step);

  StepOutcome out;
  double h = step;
  if (z_limit != nullptr) {
    const double remaining = *z_limit - base;
    if (step > 0.0 ? remaining <= 0.0 : remaining >= 0.0) return out;
    if (std::fabs(remaining) < std::fabs(h)) {
      h = remaining;
      out.clamped = true;
    }
  }

  auto attempt = [&](double increment) {
    const double z = base + increment;
    NewtonOutcome r = solve_on_slice(split, z, lead0, acc1, options);
    if (r.found && lead_distance(r.point, lead0, m) <= radius) {
      out.point = with_slice(r.point, z);
      out.done = true;
    }
  };

  attempt(h);
  while (!out.done && std::fabs(h) >= thresh) {
    h /= 2.0;
    ++out.halvings;
    attempt(h);
  }
  out.effective_h = h;
  return out;
}

// ---------------------------------------------------------------------------

BisectionResult bisection(const SplitSystem& split, std::span<const double> vz0,
                          std::span<const double> vz1, double acc1, double acc2,
                          const NewtonOptions& options, std::size_t max_iterations) {
  const std::size_t m = split.n() - 1;
  BisectionResult out;

  std::vector<double> a(vz0.begin(), vz0.end());
  std::vector<double> b(vz1.begin(), vz1.end());
  double ga = split.left_out(a);
  double gb = split.left_out(b);

  // The first midpoint starts from vz0; later ones from the newest bracket end.
  std::vector<double> start(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(m));

  auto midpoint = [&](std::vector<double>& vm) {
    const double zm = 0.5 * (a[m] + b[m]);
    out.widths.push_back(std::fabs(b[m] - a[m]));
    NewtonOutcome r = solve_on_slice(split, zm, start, acc1, options);
    if (!r.found) return false;
    vm = with_slice(r.point, zm);
    return true;
  };

  std::vector<double> vm;
  if (!midpoint(vm)) {
    out.failure = BisectionFailure::NewtonMidpoint;
    return out;
  }
  double gm = split.left_out(vm);

  while (!(std::fabs(gm) <= acc2)) {
    if (ga * gm < 0.0 && std::fabs(gm) <= std::fabs(gb)) {
      b = vm;
      gb = gm;
    } else if (gm * gb < 0.0 && std::fabs(gm) <= std::fabs(ga)) {
      a = vm;
      ga = gm;
    } else {
      out.failure = BisectionFailure::NoProgress;
      return out;
    }
    ++out.iterations;
    const double width = std::fabs(b[m] - a[m]);
    if (out.iterations >= max_iterations ||
        width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(a[m]))) {
      out.failure = BisectionFailure::IterationLimit;
      return out;
    }
    start.assign(vm.begin(), vm.begin() + static_cast<std::ptrdiff_t>(m));
    if (!midpoint(vm)) {
      out.failure = BisectionFailure::NewtonMidpoint;
      return out;
    }
    gm = split.left_out(vm);
  }
  out.solution = std::move(vm);
  out.found = true;
  return out;
}

// ---------------------------------------------------------------------------

void follow_curve(const SplitSystem& split, double step, std::span<const double> vz0,
                  const FollowParams& params, int branch, PointRegistry& curve_parts,
                  PointRegistry& solutions, FollowStats& stats, std::vector<TraceRow>* trace) {
  const std::size_t m = split.n() - 1;
  const double lo = split.lower()[m];
  const double hi = split.upper()[m];
  const double limit = step > 0.0 ? hi : lo;
  const double* z_limit = params.boundary_clamp ? &limit : nullptr;
  const int direction = step > 0.0 ? 1 : -1;
  const double origin_slice = vz0[m];

  std::vector<double> vz(vz0.begin(), vz0.end());
  double u0 = split.left_out(vz);
  std::size_t halvings = 0;
  bool clamped = false;

  auto advance = [&](StepOutcome& s) {
    s = proceed_one_step(split, step, vz, params.acc1, params.thresh, params.newton, z_limit);
    stats.halvings += s.halvings;
    if (s.done) ++stats.steps;
    return s.done;
  };

  while (vz[m] >= lo && vz[m] <= hi) {
    curve_parts.append_unique(vz, Provenance{branch, origin_slice, direction});
    if (trace != nullptr) trace->push_back(TraceRow{branch, direction, vz, u0, halvings, clamped});

    StepOutcome s;
    if (std::fabs(u0) <= params.acc2) {
      ++stats.direct_hits;
      solutions.append_unique(
          vz, Provenance{branch, origin_slice, static_cast<int>(SolutionMechanism::DirectHit)});
      if (!advance(s)) break;
      clamped = s.clamped;
      halvings = s.halvings;
      vz = std::move(s.point);
      u0 = split.left_out(vz);
      continue;
    }

    if (!advance(s)) break;
    clamped = s.clamped;
    halvings = s.halvings;
    const double u1 = split.left_out(s.point);
    if (u0 * u1 < 0.0) {
      if (std::fabs(u1) > params.acc2) {
        ++stats.bisection_calls;
        BisectionResult r = bisection(split, vz, s.point, params.acc1, params.acc2, params.newton);
        if (r.found) {
          solutions.append_unique(r.solution,
                                  Provenance{branch, origin_slice,
                                             static_cast<int>(SolutionMechanism::Bisection)});
        } else {
          ++stats.bisection_failures;
        }
      } else {
        ++stats.near_zero_sign_flips;
      }
    }
    vz = std::move(s.point);
    u0 = u1;
  }
}

}  // namespace curvetrace
