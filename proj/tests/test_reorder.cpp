#include <algorithm>
#include <string>
#include <vector>

#include "curvetrace/corpus.hpp"
#include "curvetrace/reorder.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace curvetrace;

namespace {

std::vector<std::vector<int>> codes(const DependenceMatrix& d) {
  std::vector<std::vector<int>> out(d.n, std::vector<int>(d.n));
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t j = 0; j < d.n; ++j) out[i][j] = d.code(i, j);
  return out;
}

DependenceMatrix from_codes(const std::vector<std::vector<int>>& c) {
  DependenceMatrix d;
  d.n = c.size();
  for (const auto& row : c)
    for (int v : row) d.entries.push_back(static_cast<Dependence>(v));
  return d;
}

SystemDefinition two_by_two(const std::string& f1, const std::string& f2) {
  const std::vector<std::string> names{"x1", "x2"};
  return SystemDefinition(names, {parse(f1, names), parse(f2, names)}, {-5, -5}, {5, 5});
}

}  // namespace

TEST_CASE("dependence matrix of the robot kinematics system") {
  const std::vector<std::vector<int>> expected{
      {1, 1, 1, 1, 0, 0, 1, 0}, {1, 1, 1, 1, 0, 0, 0, 0}, {1, 1, 0, 0, 0, 1, 0, 1},
      {1, 1, 0, 0, 0, 0, 0, 0}, {2, 2, 0, 0, 0, 0, 0, 0}, {0, 0, 2, 2, 0, 0, 0, 0},
      {0, 0, 0, 0, 2, 2, 0, 0}, {0, 0, 0, 0, 0, 0, 2, 2}};
  const DependenceMatrix d = build_dependence_matrix(make_problem("T3").system);
  CHECK(codes(d) == expected);
  CHECK(reorder(d).describe() == "swap x5,x8");
}

TEST_CASE("dependence matrix of the system of quadratics") {
  const std::vector<std::vector<int>> expected{{2, 1, 0, 0}, {0, 2, 1, 0}, {0, 0, 2, 1}, {1, 0, 0, 2}};
  const DependenceMatrix d = build_dependence_matrix(make_problem("T7").system);
  CHECK(codes(d) == expected);
  CHECK(reorder(d).describe() == "swap x1,x4");
}

TEST_CASE("dependence matrix of the linear function") {
  const DependenceMatrix d = build_dependence_matrix(make_problem("T9").system);
  CHECK(codes(d) == std::vector<std::vector<int>>{{0, 1}, {1, 0}});
  const Ordering o = reorder(d);
  CHECK(o.swapped_rows);
  CHECK_FALSE(o.swapped_cols);
  CHECK(o.describe() == "swap rows 1,2");
}

TEST_CASE("suggestions for every corpus problem") {
  for (const std::string& id : problem_ids()) {
    INFO(id);
    ProblemSpec spec;
    try {
      spec = make_problem(id);
    } catch (const MissingDataError&) {
      continue;
    }
    CHECK(reorder(build_dependence_matrix(spec.system)).describe() == spec.expected_suggestion);
  }
}

TEST_CASE("row rule wins over the column rule") {
  // Row 1 has only its last entry set; column 1 would otherwise be chosen.
  const Ordering o = reorder(from_codes({{0, 0, 2}, {2, 2, 1}, {1, 2, 2}}));
  CHECK(o.swapped_rows);
  CHECK_FALSE(o.swapped_cols);
  CHECK(o.rows == std::vector<std::size_t>{2, 1, 0});
}

TEST_CASE("first column with the fewest ones is chosen") {
  const Ordering o = reorder(from_codes({{1, 2, 2, 1}, {1, 2, 1, 1}, {2, 2, 1, 1}, {1, 1, 1, 1}}));
  CHECK(o.swapped_cols);
  CHECK(o.columns == std::vector<std::size_t>{0, 3, 2, 1});
  CHECK(o.describe() == "swap x2,x4");
  // last column already minimal: nothing to do
  CHECK(reorder(from_codes({{1, 2}, {1, 1}})).is_identity());
}

TEST_CASE("a rank-deficient subsystem is reported unsolvable") {
  const SystemDefinition sys = two_by_two("x2-1", "x2+1");
  const Ordering o = reorder(build_dependence_matrix(sys));
  CHECK_FALSE(o.solvable);
  CHECK(o.describe() == "not solvable");
  CHECK_FALSE(reorder(from_codes({{0, 0, 1}, {0, 0, 2}, {1, 1, 1}})).solvable);
}

TEST_CASE("swaps are involutions") {
  for (const char* id : {"T3", "T5", "T7", "EX2"}) {
    const SystemDefinition sys = make_problem(id).system;
    for (std::size_t k = 0; k + 1 < sys.n(); ++k) {
      const SystemDefinition rr = swap_rows(swap_rows(sys, k), k);
      const SystemDefinition cc = swap_columns(swap_columns(sys, k), k);
      for (std::size_t i = 0; i < sys.n(); ++i) {
        CHECK(rr.equation(i).structurally_equal(sys.equation(i)));
        CHECK(cc.equation(i).structurally_equal(sys.equation(i)));
      }
      CHECK(cc.lower() == sys.lower());
      CHECK(cc.upper() == sys.upper());
    }
  }
}

TEST_CASE("column swap permutes the box and the residual") {
  const SystemDefinition sys = make_problem("T7").system;
  const SystemDefinition sw = swap_columns(sys, 0);
  const std::vector<double> x{0.3, -0.2, 0.7, 0.1};
  const std::vector<double> y{0.1, -0.2, 0.7, 0.3};
  CHECK(sys.residual(x) == sw.residual(y));
  Ordering o = Ordering::identity(4);
  std::swap(o.columns[0], o.columns[3]);
  o.swapped_cols = true;
  CHECK(restore_coordinates(o, y) == x);
}

// Oracle: an independent multistart solve on each ordering.
TEST_CASE("root sets are invariant under reordering") {
  for (const char* id : {"T9", "EX2s", "T10"}) {
    const SystemDefinition sys = make_problem(id).system;
    const Ordering o = reorder(build_dependence_matrix(sys));
    const SystemDefinition applied = apply_ordering(sys, o);
    const auto base = oracle_solve(sys, 0.25, 1e-12);
    auto permuted = oracle_solve(applied, 0.25, 1e-12);
    for (auto& p : permuted) p = restore_coordinates(o, p);
    INFO(id);
    CHECK(testing::match_sets(base, permuted, 1e-6).bijective());
  }
}
