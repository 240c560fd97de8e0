#include "curvetrace/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace curvetrace {

namespace {

using nlohmann::json;

const char* mechanism_name(SolutionMechanism m) {
  return m == SolutionMechanism::DirectHit ? "direct-hit" : "bisection";
}

json solutions_array(const SolveReport& report) {
  json arr = json::array();
  for (const SolutionRecord& s : report.solutions) {
    arr.push_back({{"x", s.x},
                   {"residual", s.residual},
                   {"slice", s.slice},
                   {"branch", s.branch},
                   {"mechanism", mechanism_name(s.mechanism)}});
  }
  return arr;
}

json ordering_json(const Ordering& o) {
  return {{"description", o.describe()},
          {"rows", o.rows},
          {"columns", o.columns},
          {"solvable", o.solvable}};
}

template <typename T>
void read_number(const json& cfg, const char* key, T& target) {
  if (!cfg.contains(key)) return;
  if (!cfg.at(key).is_number())
    throw ProblemFileError(std::string("config.") + key + " must be a number");
  target = cfg.at(key).get<T>();
}

std::vector<double> read_bounds(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array())
    throw ProblemFileError(std::string("missing array '") + key + "'");
  std::vector<double> out;
  for (const json& v : doc.at(key)) {
    if (!v.is_number()) throw ProblemFileError(std::string(key) + " entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

LoadedProblem load_problem_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ProblemFileError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProblemFileError("problem file must hold a JSON object");

  std::vector<std::string> names;
  if (!doc.contains("variables") || !doc.at("variables").is_array())
    throw ProblemFileError("missing array 'variables'");
  for (const json& v : doc.at("variables")) {
    if (!v.is_string()) throw ProblemFileError("variable names must be strings");
    names.push_back(v.get<std::string>());
  }
  if (!doc.contains("equations") || !doc.at("equations").is_array())
    throw ProblemFileError("missing array 'equations'");
  std::vector<Expression> eqs;
  std::size_t k = 0;
  for (const json& e : doc.at("equations")) {
    ++k;
    if (!e.is_string()) throw ProblemFileError("equations must be strings");
    try {
      eqs.push_back(parse(e.get<std::string>(), names));
    } catch (const ParseError& err) {
      throw ProblemFileError("equation " + std::to_string(k) + ": " + err.what());
    }
  }

  LoadedProblem out;
  try {
    out.system = SystemDefinition(names, std::move(eqs), read_bounds(doc, "lower"),
                                  read_bounds(doc, "upper"));
  } catch (const std::invalid_argument& err) {
    throw ProblemFileError(err.what());
  }

  if (doc.contains("config")) {
    const json& cfg = doc.at("config");
    if (!cfg.is_object()) throw ProblemFileError("'config' must be an object");
    SolverConfig& c = out.config;
    read_number(cfg, "stepx", c.stepx);
    read_number(cfg, "stepz", c.stepz);
    read_number(cfg, "step", c.step);
    read_number(cfg, "thresh", c.thresh);
    read_number(cfg, "acc1", c.acc1);
    read_number(cfg, "acc2", c.acc2);
    read_number(cfg, "maxit", c.maxit);
    read_number(cfg, "tol_dedup", c.tol_dedup);
    read_number(cfg, "tol_belongs", c.tol_belongs);
    if (cfg.contains("slice_hits")) {
      if (!cfg.at("slice_hits").is_boolean())
        throw ProblemFileError("config.slice_hits must be a boolean");
      c.slice_hits = cfg.at("slice_hits").get<bool>();
    }
    if (cfg.contains("reorder")) {
      if (!cfg.at("reorder").is_string()) throw ProblemFileError("config.reorder must be a string");
      try {
        c.reorder = ReorderMode::parse(cfg.at("reorder").get<std::string>());
      } catch (const std::invalid_argument& err) {
        throw ProblemFileError(err.what());
      }
    }
  }
  return out;
}

LoadedProblem load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ProblemFileError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_problem_json(buffer.str());
}

std::string solutions_json(const SolveReport& report) {
  return solutions_array(report).dump(2) + "\n";
}

std::string report_json(const SolveReport& report, bool with_timing) {
  const SolveCounters& c = report.counters;
  const SolverConfig& cfg = report.config;
  json doc = {
      {"variables", report.names},
      {"solutions", solutions_array(report)},
      {"counters",
       {{"slices", c.slices},
        {"mesh_points", c.mesh_points},
        {"mesh_newton_calls", c.mesh_newton_calls},
        {"slice_points", c.slice_points},
        {"discarded_out_of_box", c.discarded_out_of_box},
        {"starting_points", c.starting_points},
        {"skipped_by_belongs", c.skipped_by_belongs},
        {"slice_hits", c.slice_hits},
        {"branches", c.branches},
        {"barren_branches", c.barren_branches},
        {"curve_points", c.curve_points},
        {"steps", c.steps},
        {"halvings", c.halvings},
        {"direct_hits", c.direct_hits},
        {"bisection_calls", c.bisection_calls},
        {"bisection_failures", c.bisection_failures},
        {"near_zero_sign_flips", c.near_zero_sign_flips},
        {"filtered_solutions", c.filtered_solutions}}},
      {"suggestion", ordering_json(report.suggestion)},
      {"applied", ordering_json(report.applied)},
      {"unsolvable", report.unsolvable},
      {"config",
       {{"stepx", cfg.stepx},
        {"stepz", cfg.stepz},
        {"step", cfg.step},
        {"thresh", cfg.thresh},
        {"acc1", cfg.acc1},
        {"acc2", cfg.acc2},
        {"maxit", cfg.maxit},
        {"tol_dedup", cfg.effective_tol_dedup()},
        {"tol_belongs", cfg.effective_tol_belongs()},
        {"boundary_clamp", cfg.boundary_clamp},
        {"slice_hits", cfg.slice_hits},
        {"reorder", cfg.reorder.to_string()},
        {"threads", cfg.threads}}},
  };
  if (with_timing) doc["wall_seconds"] = report.wall_seconds;
  return doc.dump(2) + "\n";
}

void write_trace_csv(std::ostream& out, const SolveReport& report) {
  out << "branch,direction";
  for (const std::string& name : report.names) out << ',' << name;
  out << ",fu,halvings\n";
  char buf[32];
  for (const TraceRow& row : report.trace) {
    out << row.branch << ',' << row.direction;
    for (double v : row.point) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", row.fu);
    out << ',' << buf << ',' << row.halvings << '\n';
  }
}

}  // namespace curvetrace
