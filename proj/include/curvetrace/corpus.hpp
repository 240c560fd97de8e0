#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curvetrace/driver.hpp"
#include "curvetrace/system.hpp"

namespace curvetrace {

/// Step sizes and tolerances under which a problem is expected to resolve.
struct RecommendedConfig {
  double stepx = 1.0;
  double stepz = 1.0;
  double step = 0.1;
  double thresh = 0.1;
  double acc1 = 1e-10;
  double acc2 = 1e-4;
  /// 0 keeps the solver default of 10 * acc2.
  double tol_dedup = 0.0;
  std::string reorder = "auto";
  bool slice_hits = false;
};

/// A point expected to solve the system; `tolerance` bounds ||F||_inf there.
struct KnownSolution {
  std::vector<double> x;
  double tolerance = 1e-12;
};

struct ProblemSpec {
  std::string id;
  std::size_t n = 0;
  bool variable_n = false;
  SystemDefinition system;
  /// Number of real roots in the box; empty when the set is infinite or
  /// has to be established by the oracle.
  std::optional<std::size_t> known_count;
  std::vector<KnownSolution> known_solutions;
  RecommendedConfig config;
  /// Expected reorder() description, e.g. "swap x1,x6".
  std::string expected_suggestion;
};

/// Raised when a problem needs a data file that cannot be found.
class MissingDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// T1..T11, EX2, EX4.
std::vector<std::string> problem_ids();

/// Builds problem `id` for dimension `n`; n = 0 selects the default size.
/// Throws std::invalid_argument for unknown ids or unsupported sizes and
/// MissingDataError when T3's coefficient file is absent.
ProblemSpec make_problem(std::string_view id, std::size_t n = 0);

/// Solver settings for a recommended config; throws std::invalid_argument
/// on a malformed reorder string.
SolverConfig solver_config(const RecommendedConfig& rc);

SystemDefinition generate(std::string_view id, std::size_t n = 0);

/// Parses "ID" or "ID:n".
std::pair<std::string, std::size_t> parse_problem_selector(std::string_view selector);

/// Directory searched for corpus data: $CURVETRACE_DATA_DIR, else the
/// directory configured at build time.
std::filesystem::path data_directory();

/// Reads the 19 coefficients a1..a19 of the robot kinematics problem from
/// lines of the form "a<k> <value>"; '#' starts a comment.
std::vector<double> load_t3_constants(const std::filesystem::path& file);

/// Multi-start Newton on the full system from every node of a grid of
/// pitch `grid_step`. Roots are accepted at ||F||_inf <= acc, kept inside
/// the box (slack acc), sorted lexicographically and merged at 10 * acc.
std::vector<std::vector<double>> oracle_solve(const SystemDefinition& sys, double grid_step,
                                              double acc, std::size_t threads = 1);

struct OracleResult {
  std::vector<std::vector<double>> solutions;
  double grid_step = 0.0;
  std::size_t runs = 0;
  bool stable = false;
};

/// Halves the grid pitch until the root count is unchanged over two
/// consecutive refinements or `max_runs` grids have been tried.
OracleResult oracle_solve_stabilized(const SystemDefinition& sys, double initial_step, double acc,
                                     std::size_t max_runs = 6, std::size_t threads = 1);

}  // namespace curvetrace
