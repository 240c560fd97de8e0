#include "curvetrace/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "curvetrace/geometry.hpp"
#include "curvetrace/numerics.hpp"

namespace curvetrace {

ReorderMode ReorderMode::parse(const std::string& text) {
  ReorderMode m;
  if (text == "auto") return m;
  if (text == "none") {
    m.kind = Kind::None;
    return m;
  }
  auto indexed = [&](const std::string& prefix, Kind kind) {
    const std::string digits = text.substr(prefix.size());
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad reorder index in '" + text + "'");
    m.kind = kind;
    m.index = std::stoul(digits);
    if (m.index == 0) throw std::invalid_argument("reorder indices are 1-based");
    return m;
  };
  if (text.rfind("rows=", 0) == 0) return indexed("rows=", Kind::Rows);
  if (text.rfind("cols=", 0) == 0) return indexed("cols=", Kind::Cols);
  throw std::invalid_argument("reorder mode must be auto, none, rows=I or cols=J");
}

std::string ReorderMode::to_string() const {
  switch (kind) {
    case Kind::Auto: return "auto";
    case Kind::None: return "none";
    case Kind::Rows: return "rows=" + std::to_string(index);
    case Kind::Cols: return "cols=" + std::to_string(index);
  }
  return "auto";
}

void SolverConfig::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(what); };
  if (!(stepx > 0.0) || !std::isfinite(stepx)) fail("stepx must be positive");
  if (!(stepz > 0.0) || !std::isfinite(stepz)) fail("stepz must be positive");
  if (!(step != 0.0) || !std::isfinite(step)) fail("step must be nonzero");
  if (!(thresh > 0.0) || thresh > std::fabs(step)) fail("thresh must lie in (0, |step|]");
  if (!(acc1 > 0.0) || !(acc1 <= acc2)) fail("accuracies must satisfy 0 < acc1 <= acc2");
  if (maxit == 0) fail("maxit must be positive");
  if (tol_dedup < 0.0 || tol_belongs < 0.0 || divergence_bound < 0.0)
    fail("tolerances must be non-negative");
}

double SolverConfig::effective_tol_belongs() const {
  return tol_belongs > 0.0 ? tol_belongs : std::fabs(step);
}

namespace {

Ordering choose_ordering(const SolverConfig& cfg, std::size_t n, const Ordering& suggestion,
                         bool& unsolvable) {
  Ordering o = Ordering::identity(n);
  switch (cfg.reorder.kind) {
    case ReorderMode::Kind::Auto:
      if (suggestion.solvable) return suggestion;
      unsolvable = true;
      return o;
    case ReorderMode::Kind::None:
      return o;
    case ReorderMode::Kind::Rows:
    case ReorderMode::Kind::Cols: {
      const std::size_t k = cfg.reorder.index;
      if (k < 1 || k > n) throw std::invalid_argument("reorder index out of range");
      if (k == n) return o;
      if (cfg.reorder.kind == ReorderMode::Kind::Rows) {
        std::swap(o.rows[k - 1], o.rows[n - 1]);
        o.swapped_rows = true;
      } else {
        std::swap(o.columns[k - 1], o.columns[n - 1]);
        o.swapped_cols = true;
      }
      return o;
    }
  }
  return o;
}

struct SliceResult {
  std::vector<double> lead;
  bool found = false;
};

// Newton from every mesh row on one slice. Results are stored per row so the
// merge order never depends on thread scheduling.
std::vector<SliceResult> solve_slice(const SplitSystem& split, const Mesh& mesh, double z,
                                     double acc1, const NewtonOptions& options,
                                     std::size_t threads) {
  const std::size_t rows = mesh.rows();
  std::vector<SliceResult> results(rows);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t r = begin; r < rows; r += stride) {
      NewtonOutcome out = solve_on_slice(split, z, mesh.row(r), acc1, options);
      if (out.found) results[r] = SliceResult{std::move(out.point), true};
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
  return results;
}

}  // namespace

SolveReport locate_curve_parts(const SystemDefinition& input, const SolverConfig& cfg) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = input.n();
  if (n < 2) throw std::invalid_argument("locate_curve_parts needs n >= 2");

  SolveReport report;
  report.config = cfg;
  report.names = input.names();
  report.suggestion = reorder(build_dependence_matrix(input));
  report.applied = choose_ordering(cfg, n, report.suggestion, report.unsolvable);
  const SystemDefinition sys = apply_ordering(input, report.applied);
  const SplitSystem split(sys);
  const std::size_t m = n - 1;

  double extent = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    extent = std::max({extent, std::fabs(sys.lower()[j]), std::fabs(sys.upper()[j])});

  FollowParams params;
  params.acc1 = cfg.acc1;
  params.acc2 = cfg.acc2;
  params.thresh = cfg.thresh;
  params.boundary_clamp = cfg.boundary_clamp;
  params.newton.max_iterations = cfg.maxit;
  params.newton.divergence_bound =
      cfg.divergence_bound > 0.0 ? cfg.divergence_bound : 1e8 * (1.0 + extent);

  const double tol_dedup = cfg.effective_tol_dedup();
  const double tol_belongs = cfg.effective_tol_belongs();
  const double step = std::fabs(cfg.step);

  PointRegistry curve_parts(n, cfg.acc1, tol_belongs);
  PointRegistry solutions(n, tol_dedup);
  FollowStats stats;
  std::vector<TraceRow>* trace = cfg.record_trace ? &report.trace : nullptr;

  const std::span<const double> lower(sys.lower());
  const std::span<const double> upper(sys.upper());
  const Mesh mesh = rmesh(lower.first(m), upper.first(m), cfg.stepx);
  const std::size_t nslices = grid_count(lower[m], upper[m], cfg.stepz);
  SolveCounters& c = report.counters;
  c.mesh_points = mesh.rows();

  int branch = 0;
  for (std::size_t k = 0; k < nslices; ++k) {
    const double z0 = std::min(upper[m], lower[m] + static_cast<double>(k) * cfg.stepz);
    ++c.slices;
    c.mesh_newton_calls += mesh.rows();
    const auto results = solve_slice(split, mesh, z0, cfg.acc1, params.newton, cfg.threads);

    PointRegistry slice_points(m, tol_dedup);
    std::vector<std::vector<double>> starts;
    for (const SliceResult& r : results) {
      if (!r.found) continue;
      ++c.slice_points;
      bool inside = true;
      for (std::size_t j = 0; j < m; ++j)
        if (r.lead[j] < lower[j] - cfg.stepx || r.lead[j] > upper[j] + cfg.stepx) inside = false;
      if (!inside) {
        ++c.discarded_out_of_box;
        continue;
      }
      if (slice_points.append_unique(r.lead)) starts.push_back(r.lead);
    }
    c.starting_points += starts.size();

    for (std::vector<double>& lead : starts) {
      lead.push_back(z0);
      if (belongs(lead, curve_parts, tol_belongs)) {
        ++c.skipped_by_belongs;
        // A root the visited branch only touched (no sign change of F_u) is
        // still caught when a slice lands on it.
        if (cfg.slice_hits && std::fabs(split.left_out(lead)) <= cfg.acc2) {
          ++c.slice_hits;
          solutions.append_unique(
              lead, Provenance{0, z0, static_cast<int>(SolutionMechanism::DirectHit)});
        }
        continue;
      }
      ++branch;
      follow_curve(split, step, lead, params, branch, curve_parts, solutions, stats, trace);
      follow_curve(split, -step, lead, params, branch, curve_parts, solutions, stats, trace);
    }
  }

  c.branches = static_cast<std::size_t>(branch);
  c.curve_points = curve_parts.size();
  c.steps = stats.steps;
  c.halvings = stats.halvings;
  c.direct_hits = stats.direct_hits;
  c.bisection_calls = stats.bisection_calls;
  c.bisection_failures = stats.bisection_failures;
  c.near_zero_sign_flips = stats.near_zero_sign_flips;

  std::set<int> productive;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    const std::span<const double> p = solutions.point(i);
    const double residual = sys.residual_norm(p);
    if (!sys.in_box(p, cfg.acc2) || !(residual <= cfg.acc2)) {
      ++c.filtered_solutions;
      continue;
    }
    const Provenance& prov = solutions.provenance(i);
    if (prov.branch > 0) productive.insert(prov.branch);
    SolutionRecord rec;
    rec.x = restore_coordinates(report.applied, std::vector<double>(p.begin(), p.end()));
    rec.residual = residual;
    rec.slice = prov.slice;
    rec.branch = prov.branch;
    rec.mechanism = static_cast<SolutionMechanism>(prov.kind);
    report.solutions.push_back(std::move(rec));
  }
  c.barren_branches = c.branches - productive.size();

  for (TraceRow& row : report.trace) row.point = restore_coordinates(report.applied, row.point);

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace curvetrace
