#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvetrace/follower.hpp"
#include "curvetrace/reorder.hpp"
#include "curvetrace/system.hpp"

namespace curvetrace {

struct ReorderMode {
  enum class Kind { Auto, None, Rows, Cols };
  Kind kind = Kind::Auto;
  /// 1-based row or column exchanged with position n for Rows/Cols.
  std::size_t index = 0;

  static ReorderMode parse(const std::string& text);
  std::string to_string() const;
};

struct SolverConfig {
  double stepx = 1.0;
  double stepz = 1.0;
  double step = 0.1;
  double thresh = 0.1;
  double acc1 = 1e-10;
  double acc2 = 1e-4;
  std::size_t maxit = 100;
  /// Merge radius for slice starting points and solutions; 0 selects 10 * acc2.
  double tol_dedup = 0.0;
  /// Radius of the visited-branch test; 0 selects |step|.
  double tol_belongs = 0.0;
  /// Newton divergence bound; 0 selects 1e8 * (1 + largest box bound).
  double divergence_bound = 0.0;
  bool boundary_clamp = true;
  /// Also record starting points skipped as already visited when they solve
  /// F_u. Catches roots a branch only touches without a sign change of F_u.
  bool slice_hits = false;
  ReorderMode reorder;
  std::size_t threads = 1;
  bool record_trace = false;

  /// Throws std::invalid_argument unless 0 < acc1 <= acc2, 0 < thresh <=
  /// |step|, stepx > 0, stepz > 0 and maxit > 0.
  void validate() const;
  double effective_tol_dedup() const { return tol_dedup > 0.0 ? tol_dedup : 10.0 * acc2; }
  double effective_tol_belongs() const;
};

struct SolutionRecord {
  /// Coordinates in the caller's variable order.
  std::vector<double> x;
  double residual = 0.0;
  double slice = 0.0;
  int branch = 0;
  SolutionMechanism mechanism = SolutionMechanism::Bisection;
};

struct SolveCounters {
  std::size_t slices = 0;
  std::size_t mesh_points = 0;
  std::size_t mesh_newton_calls = 0;
  std::size_t slice_points = 0;
  std::size_t discarded_out_of_box = 0;
  std::size_t starting_points = 0;
  std::size_t skipped_by_belongs = 0;
  /// Skipped starting points that were themselves roots (recorded with branch 0).
  std::size_t slice_hits = 0;
  std::size_t branches = 0;
  std::size_t curve_points = 0;
  std::size_t steps = 0;
  std::size_t halvings = 0;
  std::size_t direct_hits = 0;
  std::size_t bisection_calls = 0;
  std::size_t bisection_failures = 0;
  std::size_t near_zero_sign_flips = 0;
  /// Registry entries dropped from the output by the final box/residual filter.
  std::size_t filtered_solutions = 0;
  /// Branches that produced no solution.
  std::size_t barren_branches = 0;
};

struct SolveReport {
  std::vector<std::string> names;
  std::vector<SolutionRecord> solutions;
  SolveCounters counters;
  Ordering suggestion;
  Ordering applied;
  /// Set when reorder mode is Auto and the suggestion is not solvable; the
  /// run then proceeds with the identity ordering.
  bool unsolvable = false;
  SolverConfig config;
  double wall_seconds = 0.0;
  /// Visited points in the caller's variable order, when requested.
  std::vector<TraceRow> trace;
};

/// Sweeps x_n slices, seeds branches of F_l = 0 by mesh Newton and follows
/// each new branch in both directions, collecting the roots of F in the box.
SolveReport locate_curve_parts(const SystemDefinition& sys, const SolverConfig& cfg);

}  // namespace curvetrace
