#include "curvetrace/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "curvetrace/corpus.hpp"
#include "curvetrace/driver.hpp"
#include "curvetrace/report_io.hpp"

namespace curvetrace {

namespace {

constexpr std::size_t kPrintedSolutions = 30;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path);
  if (!(f << content)) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

void print_summary(std::ostream& out, const std::string& label, const SolveReport& r) {
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %3s %7s %9s  %-16s %s\n", "problem", "n", "#sols",
                "secs", "alg. sugg.", "applied");
  out << line;
  std::snprintf(line, sizeof line, "%-10s %3zu %7zu %9.3f  %-16s %s\n", label.c_str(),
                r.names.size(), r.solutions.size(), r.wall_seconds,
                r.suggestion.describe().c_str(), r.applied.describe().c_str());
  out << line;
  const SolveCounters& c = r.counters;
  out << "slices " << c.slices << ", mesh points " << c.mesh_points << ", starting points "
      << c.starting_points << ", branches " << c.branches << " (" << c.barren_branches
      << " without roots), halvings " << c.halvings << ", bisections " << c.bisection_calls
      << " (" << c.bisection_failures << " failed)\n";
  if (r.applied.swapped_rows) out << "note: equations reordered (" << r.applied.describe() << ")\n";

  std::size_t shown = 0;
  for (const SolutionRecord& s : r.solutions) {
    if (shown++ == kPrintedSolutions) {
      out << "  ... " << (r.solutions.size() - kPrintedSolutions) << " more\n";
      break;
    }
    out << "  (";
    for (std::size_t j = 0; j < s.x.size(); ++j) out << (j ? ", " : "") << fmt("%.10g", s.x[j]);
    out << ")  |F|=" << fmt("%.2e", s.residual) << "\n";
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Locate all real roots of a nonlinear system in a box by curve following"};
  std::string problem;
  std::string system_file;
  SolverConfig flags;
  std::string reorder_text = "auto";
  std::string solutions_out;
  std::string trace_out;
  std::string report_out;
  bool oracle = false;
  bool no_clamp = false;
  bool slice_hits = false;
  bool no_slice_hits = false;

  auto* o_problem = app.add_option("--problem", problem, "Builtin problem ID[:n] (T1..T11, EX2, EX2s, EX4)");
  auto* o_system = app.add_option("--system", system_file, "JSON problem file");
  o_problem->excludes(o_system);
  auto* o_stepx = app.add_option("--stepx", flags.stepx, "Mesh pitch of the starting grid");
  auto* o_stepz = app.add_option("--stepz", flags.stepz, "Pitch of the running-variable slices");
  auto* o_step = app.add_option("--step", flags.step, "Curve following increment");
  auto* o_thresh = app.add_option("--thresh", flags.thresh, "Smallest increment before a branch ends");
  auto* o_acc1 = app.add_option("--acc1", flags.acc1, "Curve accuracy");
  auto* o_acc2 = app.add_option("--acc2", flags.acc2, "Solution accuracy");
  auto* o_dedup = app.add_option("--tol-dedup", flags.tol_dedup,
                                 "Merge radius for roots and starting points (default 10*acc2)");
  auto* o_belongs = app.add_option("--tol-belongs", flags.tol_belongs,
                                   "Radius of the visited-branch test (default |step|)");
  auto* o_reorder =
      app.add_option("--reorder", reorder_text, "auto | none | rows=I | cols=J");
  app.add_option("--solutions", solutions_out, "Write solutions as JSON");
  app.add_option("--trace", trace_out, "Write visited curve points as CSV");
  app.add_option("--report", report_out, "Write the full report as JSON");
  app.add_flag("--oracle", oracle, "Cross-check with multi-start Newton (n <= 3)");
  app.add_flag("--no-boundary-clamp", no_clamp, "Do not shorten the last step onto the box face");
  auto* o_hits = app.add_flag("--slice-hits", slice_hits,
                              "Also test starting points of already visited branches as roots");
  app.add_flag("--no-slice-hits", no_slice_hits, "Turn off --slice-hits")->excludes(o_hits);
  auto* o_threads = app.add_option("--threads", flags.threads, "Threads for mesh Newton solves");
  o_threads->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitBadArguments;
  }
  if (problem.empty() == system_file.empty()) {
    err << "error: exactly one of --problem or --system is required\n";
    return kExitBadArguments;
  }

  SystemDefinition sys;
  SolverConfig cfg;
  std::string label;
  if (!problem.empty()) {
    try {
      const auto [id, n] = parse_problem_selector(problem);
      ProblemSpec spec = make_problem(id, n);
      sys = spec.system;
      label = spec.id + (spec.variable_n ? ":" + std::to_string(spec.n) : "");
      cfg = solver_config(spec.config);
    } catch (const MissingDataError& e) {
      err << "error: " << e.what() << "\n";
      return kExitBadArguments;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitBadArguments;
    }
  } else {
    try {
      LoadedProblem loaded = load_problem_file(system_file);
      sys = std::move(loaded.system);
      cfg = loaded.config;
      label = system_file;
    } catch (const ProblemFileError& e) {
      err << "error: " << system_file << ": " << e.what() << "\n";
      return kExitBadProblemFile;
    }
  }

  if (o_stepx->count()) cfg.stepx = flags.stepx;
  if (o_stepz->count()) cfg.stepz = flags.stepz;
  if (o_step->count()) cfg.step = flags.step;
  if (o_thresh->count()) cfg.thresh = flags.thresh;
  if (o_acc1->count()) cfg.acc1 = flags.acc1;
  if (o_acc2->count()) cfg.acc2 = flags.acc2;
  if (o_dedup->count()) cfg.tol_dedup = flags.tol_dedup;
  if (o_belongs->count()) cfg.tol_belongs = flags.tol_belongs;
  cfg.threads = flags.threads;
  cfg.boundary_clamp = !no_clamp;
  if (slice_hits) cfg.slice_hits = true;
  if (no_slice_hits) cfg.slice_hits = false;
  cfg.record_trace = !trace_out.empty();
  try {
    if (o_reorder->count()) cfg.reorder = ReorderMode::parse(reorder_text);
    cfg.validate();
    if (sys.n() < 2) throw std::invalid_argument("curve following needs at least 2 equations");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  }

  if (cfg.reorder.kind == ReorderMode::Kind::Auto &&
      !reorder(build_dependence_matrix(sys)).solvable) {
    err << "error: system cannot be uniquely solved (no row exchange gives a full-rank "
           "followed subsystem)\n";
    return kExitUnsolvable;
  }

  SolveReport report;
  try {
    report = locate_curve_parts(sys, cfg);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadArguments;
  }
  print_summary(out, label, report);

  if (!solutions_out.empty() && !write_file(solutions_out, solutions_json(report), err))
    return kExitBadArguments;
  if (!report_out.empty() && !write_file(report_out, report_json(report), err))
    return kExitBadArguments;
  if (!trace_out.empty()) {
    std::ofstream f(trace_out);
    write_trace_csv(f, report);
    if (!f) {
      err << "error: cannot write " << trace_out << "\n";
      return kExitBadArguments;
    }
  }

  if (oracle) {
    if (sys.n() > 3) {
      err << "warning: --oracle skipped, limited to n <= 3\n";
    } else {
      double width = 0.0;
      for (std::size_t j = 0; j < sys.n(); ++j)
        width = std::max(width, sys.upper()[j] - sys.lower()[j]);
      const OracleResult o =
          oracle_solve_stabilized(sys, width / 8.0, cfg.acc2, 6, cfg.threads);
      out << "oracle: " << o.solutions.size() << " roots (grid " << fmt("%.4g", o.grid_step)
          << (o.stable ? ", stable" : ", not stabilized") << ")\n";
    }
  }
  return kExitOk;
}

}  // namespace curvetrace
