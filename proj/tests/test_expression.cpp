#include <cmath>

#include "catch_amalgamated.hpp"
#include "fdlab/expression.hpp"

using namespace fdlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double eval(const char* text, double x = 0.0) {
  Env env;
  env.set(Var::x, x);
  return Expression::parse(text).evaluate(env);
}

}  // namespace

TEST_CASE("precedence and associativity", "[expression]") {
  CHECK(eval("1 + 2 * 3") == 7.0);
  CHECK(eval("(1 + 2) * 3") == 9.0);
  CHECK(eval("2 ^ 3 ^ 2") == 512.0);  // right associative
  CHECK(eval("-2 ^ 2") == -4.0);
  CHECK(eval("8 / 4 / 2") == 1.0);
  CHECK(eval("10 - 4 - 3") == 3.0);
  CHECK(eval("2 * -x", 3.0) == -6.0);
  CHECK(eval("+x", 5.0) == 5.0);
}

TEST_CASE("functions and numbers", "[expression]") {
  CHECK(eval("abs(x)", -3.5) == 3.5);
  CHECK(eval("sqrt(16)") == 4.0);
  CHECK(eval("min(x, 2)", 5.0) == 2.0);
  CHECK(eval("max(x, 2)", 5.0) == 5.0);
  CHECK_THAT(eval("exp(1)"), WithinRel(std::exp(1.0), 1e-15));
  CHECK(eval("1.5e2") == 150.0);
  CHECK(eval(".25") == 0.25);
  CHECK(eval("x*x - 2", 2.0) == 2.0);
}

TEST_CASE("unicode minus sign is accepted", "[expression]") {
  CHECK(eval("−2 * x", 3.0) == -6.0);
  CHECK(eval("x − 1", 3.0) == 2.0);
  const auto c = IntervalCondition::parse("[−1, 1]");
  CHECK(c.lo == -1.0);
}

TEST_CASE("variables and uses()", "[expression]") {
  const auto e = Expression::parse("t + 2*s");
  CHECK(e.uses(Var::t));
  CHECK(e.uses(Var::s));
  CHECK_FALSE(e.uses(Var::x));
  Env env;
  env.set(Var::t, 1.0).set(Var::s, 2.0);
  CHECK(e.evaluate(env) == 5.0);
  CHECK(Expression::parse("3/4").is_constant());  // constant subtrees fold
  CHECK(Expression::parse("0.75").is_constant());
}

TEST_CASE("parse errors carry a column", "[expression]") {
  CHECK_THROWS_AS(Expression::parse("1 +"), ParseError);
  CHECK_THROWS_AS(Expression::parse("(1 + 2"), ParseError);
  CHECK_THROWS_AS(Expression::parse("foo(1)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("min(1)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("1 $ 2"), ParseError);
  try {
    Expression::parse("x + q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.column() == 4);
  }
}

TEST_CASE("evaluation errors", "[expression]") {
  CHECK_THROWS_AS(eval("1 / (x - 1)", 1.0), EvaluationError);
  CHECK_THROWS_AS(eval("sqrt(x)", -1.0), EvaluationError);
  CHECK_THROWS_AS(eval("exp(x)", 1000.0), EvaluationError);
  // y is unbound in a default Env.
  CHECK_THROWS_AS(Expression::parse("y").evaluate(Env{}), EvaluationError);
}

TEST_CASE("interval conditions", "[expression]") {
  const auto closed = IntervalCondition::parse("[-1, 1]");
  CHECK(closed.contains(-1.0));
  CHECK(closed.contains(1.0));
  CHECK_FALSE(closed.contains(1.0000001));

  const auto half = IntervalCondition::parse("(0, inf)");
  CHECK_FALSE(half.contains(0.0));
  CHECK(half.contains(1e300));

  const auto c = IntervalCondition::parse("[-sqrt(2), 1/2)");
  CHECK_THAT(c.lo, WithinAbs(-std::sqrt(2.0), 1e-15));
  CHECK_FALSE(c.contains(0.5));

  CHECK(IntervalCondition::parse("otherwise").contains(-1e9));
  CHECK_THROWS_AS(IntervalCondition::parse("[2, 1]"), ParseError);
  CHECK_THROWS_AS(IntervalCondition::parse("[-inf, 1]"), ParseError);
  CHECK_THROWS_AS(IntervalCondition::parse("[x, 1]"), ParseError);
  CHECK_THROWS_AS(IntervalCondition::parse("1, 2"), ParseError);
}

TEST_CASE("piecewise first match", "[expression]") {
  PiecewiseExpression pw(Var::x);
  pw.add_piece("[-1, 1] : x");
  pw.add_piece("[-3, 3] : 100");  // overlaps the first piece; first match wins
  pw.add_piece("otherwise : 2*x");
  auto at = [&](double x) {
    Env env;
    env.set(Var::x, x);
    return pw.evaluate(env);
  };
  CHECK(at(1.0) == 1.0);
  CHECK(at(2.0) == 100.0);
  CHECK(at(-5.0) == -10.0);
  CHECK(pw.breakpoints() == std::vector<double>{-3.0, -1.0, 1.0, 3.0});
  CHECK_THROWS_AS(pw.add_piece("[5, 6] : x"), ParseError);  // after otherwise
}

TEST_CASE("piecewise gaps are evaluation errors", "[expression]") {
  PiecewiseExpression pw(Var::x);
  pw.add_piece("[0, 1] : x");
  Env env;
  env.set(Var::x, 2.0);
  CHECK_THROWS_AS(pw.evaluate(env), EvaluationError);
  CHECK_THROWS_AS(pw.add_piece("[0, 1] x"), ParseError);
}

TEST_CASE("to_lines round-trips", "[expression]") {
  PiecewiseExpression pw(Var::x);
  pw.add_piece("(-inf, 0) : 0.5*x");
  pw.add_piece("[0, 2.5] : x");
  pw.add_piece("otherwise : x + sqrt(2)");
  PiecewiseExpression again(Var::x);
  for (const auto& line : pw.to_lines()) again.add_piece(line);
  REQUIRE(again.to_lines() == pw.to_lines());
  for (double x : {-3.0, 0.0, 1.0, 2.5, 2.6, 40.0}) {
    Env env;
    env.set(Var::x, x);
    CHECK(again.evaluate(env) == pw.evaluate(env));
  }
}
