#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "curvetrace/corpus.hpp"
#include "curvetrace/expr.hpp"
#include "doctest.h"

using namespace curvetrace;

namespace {

const std::vector<std::string> kXY{"x1", "x2"};
const std::vector<std::string> kXYZ{"x1", "x2", "x3"};

double eval(const std::string& text, std::vector<double> point,
            const std::vector<std::string>& names = kXYZ) {
  return parse(text, names).evaluate(point);
}

}  // namespace

TEST_CASE("parse builds the expected tree for the sin/tan example") {
  const Expression e = parse("sin(x1^2+2*x2^2)", kXY);
  const Expression x1 = Expression::variable(0);
  const Expression x2 = Expression::variable(1);
  const Expression expected = Expression::unary(
      UnaryOp::Sin,
      Expression::binary(BinaryOp::Add, pow(x1, 2.0),
                         Expression::binary(BinaryOp::Mul, Expression::constant(2.0), pow(x2, 2.0))));
  CHECK(e.structurally_equal(expected));
  CHECK(parse("x1", kXY).structurally_equal(Expression::variable(0)));
}

TEST_CASE("parse precedence and associativity") {
  CHECK(eval("-x1^2", {3, 0, 0}) == doctest::Approx(-9));
  CHECK(eval("2^3^2", {0, 0, 0}) == doctest::Approx(512));
  CHECK(eval("x1-x2-x3", {10, 3, 2}) == doctest::Approx(5));
  CHECK(eval("x1/x2/x3", {12, 3, 2}) == doctest::Approx(2));
  CHECK(eval("2^-1", {0, 0, 0}) == doctest::Approx(0.5));
  CHECK(eval("pi", {0, 0, 0}) == doctest::Approx(std::acos(-1.0)));
  CHECK(eval("e", {0, 0, 0}) == doctest::Approx(std::exp(1.0)));
  CHECK(eval("1.5e2 + .5", {0, 0, 0}) == doctest::Approx(150.5));
  CHECK(eval("abs(x1)*sign(x2)", {-4, -2, 0}) == doctest::Approx(-4));
}

TEST_CASE("parse errors carry code and 1-based offset") {
  auto offset_of = [](const std::string& text) -> std::pair<ParseError::Code, std::size_t> {
    try {
      parse(text, kXY);
    } catch (const ParseError& e) {
      return {e.code(), e.offset()};
    }
    FAIL("no error for " << text);
    return {};
  };
  CHECK(offset_of("sin(x1") == std::pair{ParseError::Code::Syntax, std::size_t{7}});
  CHECK(offset_of("x1 + y") == std::pair{ParseError::Code::UnknownIdentifier, std::size_t{6}});
  CHECK(offset_of("atan(x1, x2)").first == ParseError::Code::Arity);
  CHECK(offset_of("x1 * * x2").second == 6);
  CHECK(offset_of("").second == 1);
  CHECK(offset_of("(x1").first == ParseError::Code::Syntax);
}

TEST_CASE("evaluation examples") {
  CHECK(eval("-x2-1", {0, -1, 0}) == 0.0);
  CHECK(Expression::constant(5).evaluate(std::vector<double>{7, 8}) == 5.0);
  // f1 of the 3-variable trigonometric system expanded by hand at the origin:
  // 3 - (cos 0 + cos 0 + cos 0) + 1*(1 - cos 0) - sin 0 = 0.
  const Expression f1 = generate("EX2").equation(0);
  CHECK(f1.evaluate(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(std::isnan(eval("log(x1)", {-1, 0, 0})));
  CHECK(std::isinf(eval("1/x1", {0, 0, 0})));
  CHECK(std::isnan(eval("sqrt(x1)", {-1, 0, 0})));
  // integral exponent keeps negative bases defined
  CHECK(eval("(x1-0.1)^2", {-0.9, 0, 0}) == doctest::Approx(1.0));
  CHECK(std::isnan(eval("x1^0.5", {-1, 0, 0})));
}

TEST_CASE("integer_power matches repeated multiplication") {
  CHECK(integer_power(2.0, 10) == 1024.0);
  CHECK(integer_power(-3.0, 3) == -27.0);
  CHECK(integer_power(2.0, -2) == 0.25);
  CHECK(integer_power(5.0, 0) == 1.0);
}

TEST_CASE("differentiate examples") {
  const std::vector<std::string> v4{"x1", "x2", "x3", "x4"};
  const Expression f = parse("(x1-0.1)^2+x2-0.1", v4);
  const Expression d1 = differentiate(f, 0);
  for (double x : {-1.0, 0.1, 0.7}) {
    const std::vector<double> p{x, 0.3, 0, 0};
    CHECK(d1.evaluate(p) == doctest::Approx(2 * (x - 0.1)));
  }
  CHECK(differentiate(f, 1).is_constant(1.0));
  CHECK(differentiate(f, 2).is_constant(0.0));

  const Expression g = parse("sin(x1^2+2*x2^2)", kXY);
  const Expression d2 = differentiate(g, 1);
  const std::vector<double> p{0.4, -0.7};
  CHECK(d2.evaluate(p) == doctest::Approx(4 * -0.7 * std::cos(0.16 + 2 * 0.49)));

  const Expression a = parse("abs(x1)", kXY);
  CHECK(differentiate(a, 0).evaluate(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(differentiate(a, 0).evaluate(std::vector<double>{-2.0, 0.0}) == -1.0);

  // non-constant exponent goes through exp/log
  const Expression h = parse("x1^x2", kXY);
  const std::vector<double> q{1.7, 2.3};
  CHECK(differentiate(h, 1).evaluate(q) ==
        doctest::Approx(std::pow(1.7, 2.3) * std::log(1.7)));
}

TEST_CASE("dependence classification") {
  const std::vector<std::string> v4{"x1", "x2", "x3", "x4"};
  const Expression f = parse("(x1-0.1)^2+x2-0.1", v4);
  CHECK(dependence(differentiate(f, 0), 0) == Dependence::Nonlinear);
  CHECK(dependence(differentiate(f, 1), 1) == Dependence::Linear);
  CHECK(dependence(differentiate(f, 2), 2) == Dependence::Independent);
  const Expression g = parse("-x2-1", kXY);
  CHECK(dependence(differentiate(g, 0), 0) == Dependence::Independent);
  CHECK(dependence(differentiate(g, 1), 1) == Dependence::Linear);
  CHECK(dependence(differentiate(Expression::constant(7), 0), 0) == Dependence::Independent);
  CHECK(static_cast<int>(Dependence::Linear) == 1);
  CHECK(static_cast<int>(Dependence::Nonlinear) == 2);
}

TEST_CASE("simplify folds identities and is idempotent") {
  const Expression x = Expression::variable(0);
  CHECK(simplify(Expression::binary(BinaryOp::Add, Expression::constant(0), x)).structurally_equal(x));
  CHECK(simplify(Expression::binary(BinaryOp::Mul, Expression::constant(1), x)).structurally_equal(x));
  CHECK(simplify(Expression::binary(BinaryOp::Mul, x, Expression::constant(0))).is_constant(0.0));
  CHECK(simplify(Expression::binary(BinaryOp::Pow, x, Expression::constant(1))).structurally_equal(x));
  CHECK(simplify(Expression::binary(BinaryOp::Pow, x, Expression::constant(0))).is_constant(1.0));
  CHECK(simplify(Expression::binary(BinaryOp::Div, x, Expression::constant(1))).structurally_equal(x));
  CHECK(simplify(Expression::unary(UnaryOp::Neg, Expression::unary(UnaryOp::Neg, x))).structurally_equal(x));
  CHECK(simplify(Expression::binary(BinaryOp::Add, Expression::constant(2), Expression::constant(3)))
            .is_constant(5.0));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const std::string& id : problem_ids()) {
    const SystemDefinition sys = generate(id);
    for (std::size_t i = 0; i < sys.n(); ++i) {
      const Expression s = simplify(sys.equation(i));
      CHECK(simplify(s).structurally_equal(s));
      std::vector<double> p(sys.n());
      for (double& v : p) v = u(rng);
      const double a = sys.equation(i).evaluate(p);
      const double b = s.evaluate(p);
      if (std::isfinite(a)) CHECK(b == doctest::Approx(a).epsilon(1e-12));
    }
  }
}

TEST_CASE("compiled expressions reproduce tree evaluation bit for bit") {
  std::mt19937_64 rng(11);
  for (const std::string& id : problem_ids()) {
    const SystemDefinition sys = generate(id);
    std::vector<double> p(sys.n());
    for (int trial = 0; trial < 20; ++trial) {
      for (std::size_t j = 0; j < sys.n(); ++j)
        p[j] = std::uniform_real_distribution<double>(sys.lower()[j], sys.upper()[j])(rng);
      for (const Expression& e : sys.equations()) {
        const double a = e.evaluate(p);
        const double b = CompiledExpression(e)(p);
        if (std::isnan(a))
          CHECK(std::isnan(b));
        else
          CHECK(a == b);
      }
    }
  }
}

TEST_CASE("print/parse round trip") {
  std::mt19937_64 rng(3);
  for (const std::string& id : problem_ids()) {
    const SystemDefinition sys = generate(id);
    for (const Expression& e : sys.equations()) {
      const Expression back = parse(print(e, sys.names()), sys.names());
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> p(sys.n());
        for (std::size_t j = 0; j < sys.n(); ++j)
          p[j] = std::uniform_real_distribution<double>(sys.lower()[j], sys.upper()[j])(rng);
        const double a = e.evaluate(p);
        const double b = back.evaluate(p);
        if (std::isfinite(a)) CHECK(b == doctest::Approx(a).epsilon(1e-12));
      }
    }
  }
}

// Oracle: central finite differences. Points near kinks or poles are skipped
// when two step sizes disagree with each other.
TEST_CASE("Jacobian entries match finite differences over the corpus") {
  std::mt19937_64 rng(2024);
  std::size_t compared = 0;
  for (const std::string& id : problem_ids()) {
    const SystemDefinition sys = generate(id);
    const std::size_t n = sys.n();
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j)
        p[j] = std::uniform_real_distribution<double>(sys.lower()[j], sys.upper()[j])(rng);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          auto central = [&](double h) {
            std::vector<double> a = p, b = p;
            a[j] += h;
            b[j] -= h;
            return (sys.equation(i).evaluate(a) - sys.equation(i).evaluate(b)) / (2 * h);
          };
          const double fd = central(1e-6);
          const double fd_coarse = central(1e-4);
          const double exact = sys.jacobian(i, j).evaluate(p);
          if (!std::isfinite(fd) || !std::isfinite(exact)) continue;
          if (std::fabs(fd - fd_coarse) > 1e-3 * (1.0 + std::fabs(fd))) continue;
          ++compared;
          INFO(id << " J(" << i << "," << j << ")");
          CHECK(std::fabs(exact - fd) <= 1e-5 * (1.0 + std::fabs(exact)));
        }
      }
    }
  }
  CHECK(compared > 10000);
}

TEST_CASE("zero derivative implies linearity in that variable") {
  std::mt19937_64 rng(5);
  for (const std::string& id : problem_ids()) {
    const SystemDefinition sys = generate(id);
    const std::size_t n = sys.n();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (dependence(sys.jacobian(i, j), j) == Dependence::Nonlinear) continue;
        for (int trial = 0; trial < 5; ++trial) {
          std::vector<double> p(n);
          for (std::size_t k = 0; k < n; ++k)
            p[k] = std::uniform_real_distribution<double>(sys.lower()[k], sys.upper()[k])(rng);
          const double f0 = sys.equation(i).evaluate(p);
          std::vector<double> q1 = p, q2 = p;
          q1[j] += 0.5;
          q2[j] += 1.0;
          const double f1 = sys.equation(i).evaluate(q1);
          const double f2 = sys.equation(i).evaluate(q2);
          if (!std::isfinite(f0) || !std::isfinite(f1) || !std::isfinite(f2)) continue;
          INFO(id << " f" << i + 1 << " in x" << j + 1);
          CHECK(std::fabs((f2 - f1) - (f1 - f0)) <= 1e-9 * (1.0 + std::fabs(f0)));
        }
      }
    }
  }
}
