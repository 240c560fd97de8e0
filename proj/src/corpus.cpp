#include "curvetrace/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace curvetrace {

namespace {

Expression x(std::size_t i) { return Expression::variable(i); }

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

SystemDefinition make_system(std::vector<Expression> eqs, double lo, double hi) {
  const std::size_t n = eqs.size();
  return SystemDefinition(default_names(n), std::move(eqs), std::vector<double>(n, lo),
                          std::vector<double>(n, hi));
}

void require(bool ok, std::string_view id, std::size_t n) {
  if (!ok)
    throw std::invalid_argument("problem " + std::string(id) + " is not defined for n=" +
                                std::to_string(n));
}

// Broyden tridiagonal.
std::vector<Expression> tridiagonal(std::size_t n) {
  std::vector<Expression> f;
  for (std::size_t i = 0; i < n; ++i) {
    Expression e = (3.0 - 2.0 * x(i)) * x(i) + 1.0;
    if (i > 0) e = e - x(i - 1);
    if (i + 1 < n) e = e - 2.0 * x(i + 1);
    f.push_back(e);
  }
  return f;
}

// Brown almost-linear.
std::vector<Expression> almost_linear(std::size_t n) {
  Expression sum = x(0);
  for (std::size_t j = 1; j < n; ++j) sum = sum + x(j);
  std::vector<Expression> f;
  for (std::size_t i = 0; i + 1 < n; ++i) f.push_back(x(i) + sum - static_cast<double>(n + 1));
  Expression prod = x(0);
  for (std::size_t j = 1; j < n; ++j) prod = prod * x(j);
  f.push_back(prod - 1.0);
  return f;
}

std::vector<Expression> robot_kinematics(const std::vector<double>& a) {
  auto c = [&](std::size_t k) { return a[k - 1]; };
  return {
      c(1) * x(0) * x(2) + c(2) * x(1) * x(2) + c(3) * x(0) + c(4) * x(1) + c(5) * x(3) +
          c(6) * x(6) + c(7),
      c(8) * x(0) * x(2) + c(9) * x(1) * x(2) + c(10) * x(0) + c(11) * x(1) + c(12) * x(3) +
          c(13),
      c(14) * x(5) * x(7) + c(15) * x(0) + c(16) * x(1),
      c(17) * x(0) + c(18) * x(1) + c(19),
      x(0) * x(0) + x(1) * x(1) - 1.0,
      x(2) * x(2) + x(3) * x(3) - 1.0,
      x(4) * x(4) + x(5) * x(5) - 1.0,
      x(6) * x(6) + x(7) * x(7) - 1.0,
  };
}

// Discrete integral equation, t_i = i h with h = 1/(n+1).
std::vector<Expression> discrete_integral(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n + 1);
  auto cube = [&](std::size_t j) {
    const double t = static_cast<double>(j + 1) * h;
    return pow(x(j) + (t + 1.0), 3.0);
  };
  std::vector<Expression> f;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i + 1) * h;
    Expression left = Expression::constant(0.0);
    for (std::size_t j = 0; j <= i; ++j)
      left = left + (static_cast<double>(j + 1) * h) * cube(j);
    Expression right = Expression::constant(0.0);
    for (std::size_t j = i + 1; j < n; ++j)
      right = right + (1.0 - static_cast<double>(j + 1) * h) * cube(j);
    f.push_back(x(i) + (h / 2.0) * ((1.0 - ti) * left + ti * right));
  }
  return f;
}

// Biggs EXP6.
std::vector<Expression> exp6() {
  std::vector<Expression> f;
  for (int i = 1; i <= 6; ++i) {
    const double t = 0.1 * i;
    const double y = std::exp(-t) - 5.0 * std::exp(-10.0 * t) + 3.0 * std::exp(-4.0 * t);
    f.push_back(x(2) * exp(-t * x(0)) - x(3) * exp(-t * x(1)) + x(5) * exp(-t * x(4)) - y);
  }
  return f;
}

// Chebyquad with shifted Chebyshev polynomials on [0,1].
std::vector<Expression> chebyquad(std::size_t n) {
  std::vector<Expression> sums(n, Expression::constant(0.0));
  for (std::size_t j = 0; j < n; ++j) {
    Expression prev = Expression::constant(1.0);
    Expression cur = 2.0 * x(j) - 1.0;
    sums[0] = sums[0] + cur;
    for (std::size_t k = 1; k < n; ++k) {
      Expression next = (4.0 * x(j) - 2.0) * cur - prev;
      prev = cur;
      cur = next;
      sums[k] = sums[k] + cur;
    }
  }
  std::vector<Expression> f;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k + 1;
    Expression e = sums[k] / static_cast<double>(n);
    if (i % 2 == 0) e = e + 1.0 / static_cast<double>(i * i - 1);
    f.push_back(e);
  }
  return f;
}

std::vector<Expression> quadratics(std::size_t n) {
  std::vector<Expression> f;
  for (std::size_t i = 0; i < n; ++i) {
    const Expression d = x(i) - 0.1;
    f.push_back(d * d + x((i + 1) % n) - 0.1);
  }
  return f;
}

// Box three-dimensional.
std::vector<Expression> box3() {
  std::vector<Expression> f;
  for (int i = 1; i <= 3; ++i) {
    const double t = 0.1 * i;
    f.push_back(exp(-t * x(0)) - exp(-t * x(1)) - (std::exp(-t) - std::exp(-10.0 * t)) * x(2));
  }
  return f;
}

std::vector<Expression> kuiken1() {
  const Expression r2 = x(0) * x(0) + x(1) * x(1);
  const Expression q = 1.0 + x(0) * x(0);
  return {
      (x(1) - 1.0 / (3.0 * x(0))) * (x(1) + atan(x(0))),
      (x(1) * x(1) - 1.0 / (q * q)) * sin(1.0 / (0.07 + r2)),
  };
}

std::vector<Expression> kuiken2() {
  const Expression s1 = x(0) * x(0);
  const Expression s2 = x(1) * x(1);
  const Expression r = 1.0 + s1 + s2;
  return {
      sin(r) - cos(r) * atan(1.0 + s1 + 2.0 * s2) * exp((s1 + s2) / r),
      s1 * exp((s1 - s2) / r) -
          sqrt(abs(3.0 * s1 - 2.0 * exp((x(0) - x(1)) / (1.0 + abs(x(0)) + abs(x(1)))))),
  };
}

// Trigonometric function for n = 3.
std::vector<Expression> trigonometric(std::size_t n) {
  Expression cos_sum = cos(x(0));
  for (std::size_t j = 1; j < n; ++j) cos_sum = cos_sum + cos(x(j));
  std::vector<Expression> f;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = static_cast<double>(i + 1);
    f.push_back(static_cast<double>(n) - cos_sum + w * (1.0 - cos(x(i))) - sin(x(i)));
  }
  return f;
}

std::vector<Expression> sin_tan() {
  const Expression s1 = x(0) * x(0);
  const Expression s2 = x(1) * x(1);
  return {sin(s1 + 2.0 * s2), tan(s1 - 2.0 * s2)};
}

std::vector<KnownSolution> permutations_of(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<KnownSolution> out;
  do {
    out.push_back(KnownSolution{values, tol});
  } while (std::next_permutation(values.begin(), values.end()));
  return out;
}

RecommendedConfig steps(double stepx, double stepz, double step = 0.1, double thresh = 0.1) {
  RecommendedConfig c;
  c.stepx = stepx;
  c.stepz = stepz;
  c.step = step;
  c.thresh = thresh;
  return c;
}

}  // namespace

std::vector<std::string> problem_ids() {
  return {"T1", "T2", "T3", "T4", "T5", "T6", "T7", "T8", "T9", "T10", "T11", "EX2", "EX2s", "EX4"};
}

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("CURVETRACE_DATA_DIR"); env != nullptr && *env != '\0')
    return env;
#ifdef CURVETRACE_DEFAULT_DATA_DIR
  return CURVETRACE_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

std::vector<double> load_t3_constants(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw MissingDataError("cannot open " + file.string());
  std::vector<double> a(19, std::nan(""));
  std::vector<bool> seen(19, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string label;
    std::string value;
    if (!(fields >> label)) continue;
    auto bad = [&](const std::string& why) {
      return std::invalid_argument(file.string() + ":" + std::to_string(lineno) + ": " + why);
    };
    if (!(fields >> value)) throw bad("missing value for " + label);
    if (label.size() < 2 || label[0] != 'a') throw bad("expected label a1..a19");
    std::size_t k = 0;
    const auto [kp, kec] = std::from_chars(label.data() + 1, label.data() + label.size(), k);
    if (kec != std::errc() || kp != label.data() + label.size() || k < 1 || k > 19)
      throw bad("expected label a1..a19");
    double v = 0.0;
    const auto [vp, vec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (vec != std::errc() || vp != value.data() + value.size()) throw bad("bad number " + value);
    if (seen[k - 1]) throw bad("duplicate " + label);
    seen[k - 1] = true;
    a[k - 1] = v;
  }
  for (std::size_t k = 0; k < 19; ++k)
    if (!seen[k])
      throw std::invalid_argument(file.string() + ": missing a" + std::to_string(k + 1));
  return a;
}

std::pair<std::string, std::size_t> parse_problem_selector(std::string_view selector) {
  const auto colon = selector.find(':');
  if (colon == std::string_view::npos) return {std::string(selector), 0};
  const std::string_view digits = selector.substr(colon + 1);
  std::size_t n = 0;
  const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size() || n == 0)
    throw std::invalid_argument("bad problem size in '" + std::string(selector) + "'");
  return {std::string(selector.substr(0, colon)), n};
}

ProblemSpec make_problem(std::string_view id, std::size_t n) {
  ProblemSpec p;
  p.id = std::string(id);
  p.expected_suggestion = "no reord.";

  if (id == "T1") {
    p.n = n == 0 ? 10 : n;
    p.variable_n = true;
    require(p.n >= 2, id, p.n);
    p.system = make_system(tridiagonal(p.n), -3.0, 3.0);
    if (p.n == 10) p.known_count = 2;
    p.config = steps(6, 6);
  } else if (id == "T2") {
    p.n = n == 0 ? 9 : n;
    p.variable_n = true;
    require(p.n >= 2, id, p.n);
    p.system = make_system(almost_linear(p.n), -20.0, 20.0);
    std::vector<double> ones(p.n, 1.0);
    p.known_solutions.push_back(KnownSolution{ones, 1e-12});
    if (p.n == 9) {
      p.known_count = 3;
      for (double alpha : {0.974543355846, -0.7052133225}) {
        std::vector<double> r(9, alpha);
        r[8] = std::pow(alpha, -8.0);
        p.known_solutions.push_back(KnownSolution{r, 1e-8});
      }
    }
    p.config = steps(40, 40);
  } else if (id == "T3") {
    p.n = n == 0 ? 8 : n;
    require(p.n == 8, id, p.n);
    const auto file = data_directory() / "t3_constants";
    if (!std::filesystem::exists(file))
      throw MissingDataError("T3 needs " + file.string() + " (coefficients a1..a19)");
    p.system = make_system(robot_kinematics(load_t3_constants(file)), -1.0, 1.0);
    p.known_count = 16;
    p.config = steps(2, 2);
    p.config.reorder = "none";
    p.expected_suggestion = "swap x5,x8";
  } else if (id == "T4") {
    p.n = n == 0 ? 7 : n;
    p.variable_n = true;
    require(p.n >= 2, id, p.n);
    p.system = make_system(discrete_integral(p.n), -5.0, 5.0);
    if (p.n == 7) p.known_count = 1;
    p.config = steps(10, 10);
  } else if (id == "T5") {
    p.n = n == 0 ? 6 : n;
    require(p.n == 6, id, p.n);
    p.system = make_system(exp6(), -12.0, 12.0);
    p.known_count = 6;
    // Each of the terms e^-t, 3e^-4t, -5e^-10t can sit in any exponential slot.
    const std::array<std::pair<double, double>, 3> terms{{{1, 1}, {4, 3}, {10, -5}}};
    std::array<int, 3> slot{0, 1, 2};
    do {
      const auto& a = terms[slot[0]];
      const auto& b = terms[slot[1]];
      const auto& c = terms[slot[2]];
      p.known_solutions.push_back(
          KnownSolution{{a.first, b.first, a.second, -b.second, c.first, c.second}, 1e-12});
    } while (std::next_permutation(slot.begin(), slot.end()));
    p.config = steps(12, 3, 0.5, 0.1);
    p.expected_suggestion = "swap x1,x6";
  } else if (id == "T6") {
    p.n = n == 0 ? 5 : n;
    require(p.n == 5, id, p.n);
    p.system = make_system(chebyquad(5), 0.0, 1.0);
    p.known_count = 120;
    p.known_solutions = permutations_of({0.0838, 0.3127, 0.5000, 0.6873, 0.9162}, 1e-3);
    p.config = steps(0.25, 0.005, 0.1, 0.01);
  } else if (id == "T7") {
    p.n = n == 0 ? 4 : n;
    p.variable_n = true;
    require(p.n >= 2, id, p.n);
    p.system = make_system(quadratics(p.n), -1.0, 1.0);
    p.known_count = 2;
    p.known_solutions.push_back(KnownSolution{std::vector<double>(p.n, 0.1), 1e-12});
    p.known_solutions.push_back(KnownSolution{std::vector<double>(p.n, -0.9), 1e-12});
    p.config = steps(2, 2, 0.1, 0.01);
    p.expected_suggestion = "swap x1,x" + std::to_string(p.n);
  } else if (id == "T8") {
    p.n = n == 0 ? 3 : n;
    require(p.n == 3, id, p.n);
    const auto eqs = box3();
    p.system = SystemDefinition(default_names(3), eqs, {0.0, 0.0, -2.0}, {11.0, 11.0, 2.0});
    p.known_solutions = {{{1, 10, 1}, 1e-12}, {{10, 1, -1}, 1e-12}, {{2, 2, 0}, 1e-12}};
    p.config = steps(1, 1);
    p.config.acc1 = 1e-10;
    p.config.acc2 = 1e-10;
    p.expected_suggestion = "swap x1,x3";
  } else if (id == "T9") {
    p.n = n == 0 ? 2 : n;
    require(p.n == 2, id, p.n);
    p.system = make_system({-x(1) - 1.0, -x(0) - 1.0}, -5.0, 5.0);
    p.known_count = 1;
    p.known_solutions = {{{-1, -1}, 0.0}};
    p.config = steps(1, 1);
    p.expected_suggestion = "swap rows 1,2";
  } else if (id == "T10") {
    p.n = n == 0 ? 2 : n;
    require(p.n == 2, id, p.n);
    p.system = SystemDefinition(default_names(2), kuiken1(), {-1.6, -1.04}, {1.6, 1.04});
    p.known_count = 12;
    p.config = steps(0.7, 0.7, 0.05, 0.005);
  } else if (id == "T11") {
    p.n = n == 0 ? 2 : n;
    require(p.n == 2, id, p.n);
    p.system = SystemDefinition(default_names(2), kuiken2(), {-3.1, 0.11}, {3.8, 3.1});
    p.known_count = 20;
    p.config = steps(0.6, 1.4, 0.01, 0.001);
  } else if (id == "EX2") {
    p.n = n == 0 ? 3 : n;
    require(p.n == 3, id, p.n);
    p.system = make_system(trigonometric(3), -10.0, 10.0);
    p.known_count = 54;
    p.config = steps(1, 1);
  } else if (id == "EX2s") {
    p.n = n == 0 ? 3 : n;
    require(p.n == 3, id, p.n);
    p.system = make_system(trigonometric(3), -2.0, 2.0);
    p.known_count = 2;
    p.config = steps(1, 1);
  } else if (id == "EX4") {
    p.n = n == 0 ? 2 : n;
    require(p.n == 2, id, p.n);
    p.system = make_system(sin_tan(), -2.0, 2.0);
    p.known_solutions = {{{0, 0}, 0.0}};
    // Four roots sit on turning points of the followed curve and two are only
    // touched by it; a fine threshold and a loose merge radius resolve them.
    p.config = steps(0.5, 0.5, 0.1, 1e-10);
    p.config.acc2 = 1e-7;
    p.config.tol_dedup = 1e-3;
    p.config.slice_hits = true;
  } else {
    throw std::invalid_argument("unknown problem '" + std::string(id) + "'");
  }
  return p;
}

SolverConfig solver_config(const RecommendedConfig& rc) {
  SolverConfig cfg;
  cfg.stepx = rc.stepx;
  cfg.stepz = rc.stepz;
  cfg.step = rc.step;
  cfg.thresh = rc.thresh;
  cfg.acc1 = rc.acc1;
  cfg.acc2 = rc.acc2;
  cfg.tol_dedup = rc.tol_dedup;
  cfg.reorder = ReorderMode::parse(rc.reorder);
  cfg.slice_hits = rc.slice_hits;
  return cfg;
}

SystemDefinition generate(std::string_view id, std::size_t n) {
  return make_problem(id, n).system;
}

}  // namespace curvetrace
