#include <cmath>
#include <string>
#include <vector>

#include "curvetrace/corpus.hpp"
#include "curvetrace/driver.hpp"
#include "curvetrace/geometry.hpp"
#include "curvetrace/report_io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace curvetrace;

namespace {

SolveReport run(const char* id, SolverConfig (*tweak)(SolverConfig) = nullptr) {
  const ProblemSpec spec = make_problem(id);
  SolverConfig cfg = solver_config(spec.config);
  if (tweak) cfg = tweak(cfg);
  return locate_curve_parts(spec.system, cfg);
}

}  // namespace

TEST_CASE("runs are deterministic") {
  for (const char* id : {"EX2s", "T10", "EX4", "T9"}) {
    INFO(id);
    CHECK(report_json(run(id), false) == report_json(run(id), false));
  }
}

TEST_CASE("thread count does not change the result") {
  for (const char* id : {"EX2", "T10", "T7"}) {
    INFO(id);
    const SolveReport one = run(id);
    SolveReport four = run(id, [](SolverConfig c) {
      c.threads = 4;
      return c;
    });
    four.config.threads = 1;  // echoed in the report
    CHECK(report_json(one, false) == report_json(four, false));
  }
}

TEST_CASE("one slice per grid value of the running variable") {
  for (const char* id : {"EX2", "T6", "T11", "T1"}) {
    const ProblemSpec spec = make_problem(id);
    const SolverConfig cfg = solver_config(spec.config);
    const SolveReport r = locate_curve_parts(spec.system, cfg);
    const std::size_t n = spec.n;
    INFO(id);
    CHECK(r.counters.slices ==
          grid_count(spec.system.lower()[n - 1], spec.system.upper()[n - 1], cfg.stepz));
  }
}

TEST_CASE("solutions are in the box, are roots and are distinct") {
  for (const std::string& id : problem_ids()) {
    if (id == "T6" || id == "T8" || id == "T3" || id == "T11") continue;  // slow ones live in acceptance
    const ProblemSpec spec = make_problem(id);
    const SolverConfig cfg = solver_config(spec.config);
    const SolveReport r = locate_curve_parts(spec.system, cfg);
    INFO(id);
    for (std::size_t i = 0; i < r.solutions.size(); ++i) {
      const auto& x = r.solutions[i].x;
      CHECK(spec.system.in_box(x, cfg.acc2));
      CHECK(spec.system.residual_norm(x) <= cfg.acc2);
      CHECK(r.solutions[i].residual == doctest::Approx(spec.system.residual_norm(x)));
      for (std::size_t j = i + 1; j < r.solutions.size(); ++j)
        CHECK(testing::inf_distance(x, r.solutions[j].x) > cfg.effective_tol_dedup());
    }
    if (spec.known_count) CHECK(r.solutions.size() == *spec.known_count);
  }
}

TEST_CASE("a followed equation without the running variable gives no branches") {
  const std::vector<std::string> names{"x1", "x2"};
  const SystemDefinition sys(names, {parse("x1^2+1", names), parse("x2", names)}, {-2, -2}, {2, 2});
  SolverConfig cfg;
  cfg.reorder = ReorderMode::parse("none");
  const SolveReport r = locate_curve_parts(sys, cfg);
  CHECK(r.counters.branches == 0);
  CHECK(r.solutions.empty());
}

TEST_CASE("auto reordering applies the suggestion") {
  const SolveReport t9 = run("T9");
  CHECK(t9.applied.swapped_rows);
  REQUIRE(t9.solutions.size() == 1);
  CHECK(testing::inf_distance(t9.solutions[0].x, {-1.0, -1.0}) <= 1e-10);

  const SolveReport none = run("T9", [](SolverConfig c) {
    c.reorder = ReorderMode::parse("none");
    return c;
  });
  CHECK(none.solutions.empty());

  const SolveReport t7 = run("T7");
  CHECK(t7.applied.describe() == "swap x1,x4");
  CHECK(t7.solutions.size() == 2);
}

TEST_CASE("finer following does not lose roots") {
  for (const char* id : {"T1", "T7", "T9", "T10", "EX2s"}) {
    const ProblemSpec spec = make_problem(id);
    SolverConfig cfg = solver_config(spec.config);
    const std::size_t coarse = locate_curve_parts(spec.system, cfg).solutions.size();
    cfg.step /= 2;
    cfg.thresh /= 2;
    const std::size_t fine = locate_curve_parts(spec.system, cfg).solutions.size();
    INFO(id);
    CHECK(fine >= coarse);
  }
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.acc1 = 1e-3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.thresh = 0.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.stepx = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(SolverConfig{}.effective_tol_dedup() == doctest::Approx(1e-3));
  CHECK(SolverConfig{}.effective_tol_belongs() == doctest::Approx(0.1));
}

TEST_CASE("reorder mode parsing") {
  CHECK(ReorderMode::parse("auto").kind == ReorderMode::Kind::Auto);
  CHECK(ReorderMode::parse("none").kind == ReorderMode::Kind::None);
  const ReorderMode r = ReorderMode::parse("rows=1");
  CHECK(r.kind == ReorderMode::Kind::Rows);
  CHECK(ReorderMode::parse("cols=2").to_string() == "cols=2");
  CHECK_THROWS_AS(ReorderMode::parse("cols"), std::invalid_argument);
  CHECK_THROWS_AS(ReorderMode::parse("sideways"), std::invalid_argument);
}

TEST_CASE("problem files") {
  const LoadedProblem p = load_problem_json(R"({
    "variables": ["x", "y"],
    "equations": ["x^2 + y^2 - 1", "x - y"],
    "lower": [-2, -2], "upper": [2, 2],
    "config": {"stepx": 0.5, "stepz": 0.5, "reorder": "none", "slice_hits": false}
  })");
  CHECK(p.system.n() == 2);
  CHECK(p.config.stepx == 0.5);
  CHECK(p.config.reorder.kind == ReorderMode::Kind::None);
  const SolveReport r = locate_curve_parts(p.system, p.config);
  CHECK(r.solutions.size() == 2);
  for (const SolutionRecord& s : r.solutions) CHECK(std::fabs(std::fabs(s.x[0]) - std::sqrt(0.5)) <= 1e-4);

  CHECK_THROWS_AS(load_problem_json("{"), ProblemFileError);
  CHECK_THROWS_AS(load_problem_json(R"({"variables": ["x"], "equations": ["x +"], "lower": [0], "upper": [1]})"),
                  ProblemFileError);
  CHECK_THROWS_AS(load_problem_json(R"({"variables": ["x", "y"], "equations": ["x", "y"],
                                        "lower": [0, 0], "upper": [1, 1], "config": {"slice_hits": 1}})"),
                  ProblemFileError);
  CHECK_THROWS_AS(load_problem_json(R"({"variables": ["x", "y"], "equations": ["x", "y"],
                                        "lower": [0], "upper": [1, 1]})"),
                  ProblemFileError);
}
