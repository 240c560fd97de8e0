#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "curvetrace/driver.hpp"
#include "curvetrace/system.hpp"

namespace curvetrace {

/// A problem file could not be read or does not describe a valid system.
class ProblemFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedProblem {
  SystemDefinition system;
  /// Starts from the defaults; fields present under "config" override them.
  SolverConfig config;
};

/// {"variables": [...], "equations": [...], "lower": [...], "upper": [...],
///  "config": {"stepx": .., "stepz": .., "step": .., "thresh": ..,
///             "acc1": .., "acc2": .., "reorder": "auto"}}
LoadedProblem load_problem_json(std::string_view text);
LoadedProblem load_problem_file(const std::filesystem::path& path);

/// Array of {x, residual, slice, branch, mechanism}.
std::string solutions_json(const SolveReport& report);
/// Full report: solutions, counters, orderings and the config echo. The
/// wall time is included only when `with_timing` is set.
std::string report_json(const SolveReport& report, bool with_timing = true);
/// Header: branch,direction,<names>,fu,halvings.
void write_trace_csv(std::ostream& out, const SolveReport& report);

}  // namespace curvetrace
