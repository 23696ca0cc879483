#include <doctest.h>

#include "tangent/expr.hpp"
#include "tangent/verify.hpp"

using namespace tangent;
using Q = RationalScalar;

TEST_SUITE("expr") {
  TEST_CASE("grammar and precedence") {
    const ExprPtr e = parse("x^2 + 3*x*y");
    REQUIRE(e->kind == ExprKind::Add);
    CHECK(e->lhs->kind == ExprKind::Pow);
    CHECK(e->lhs->exponent == 2);
    CHECK(e->rhs->kind == ExprKind::Mul);
    CHECK(e->rhs->lhs->kind == ExprKind::Mul);  // (3*x)*y
    CHECK(e->rhs->rhs->name == "y");

    const ExprPtr neg = parse("-(x - y)^2");
    REQUIRE(neg->kind == ExprKind::Neg);
    REQUIRE(neg->lhs->kind == ExprKind::Pow);
    CHECK(neg->lhs->lhs->kind == ExprKind::Sub);

    CHECK(parse("-x^2")->kind == ExprKind::Neg);  // ^ binds tighter than unary -
    CHECK(parse("x - y - z")->lhs->kind == ExprKind::Sub);  // left associative
    CHECK(parse("x^2^3")->exponent == 8);  // right-associative exponent tower
  }

  TEST_CASE("constant quotients are rational literals") {
    const ExprPtr half = parse("1/2");
    REQUIRE(half->kind == ExprKind::Const);
    CHECK(half->value == Q(1, 2));
    CHECK(parse("x/2")->kind == ExprKind::Div);
    CHECK(parse("1/x")->kind == ExprKind::Div);
    CHECK(parse("1/0")->kind == ExprKind::Div);  // folding never divides by zero
  }

  TEST_CASE("syntax errors carry a column") {
    try {
      parse("x + ");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parse("x +* y"), ParseError);
    CHECK_THROWS_AS(parse("(x"), ParseError);
    CHECK_THROWS_AS(parse("x $ y"), ParseError);
    CHECK_THROWS_AS(parse("x ^ y"), ParseError);       // non-constant exponent
    CHECK_THROWS_AS(parse("x ^ (1/2)"), ParseError);   // fractional exponent
    CHECK_THROWS_AS(parse("x ^ -1"), ParseError);      // negative exponent
  }

  TEST_CASE("decimals only in float mode, converted exactly") {
    CHECK_THROWS_AS(parse("0.25"), ParseError);
    const ExprPtr e = parse("0.25", /*allow_decimal=*/true);
    REQUIRE(e->kind == ExprKind::Const);
    CHECK(e->value == Q(1, 4));
    CHECK(parse("2.50", true)->value == Q(5, 2));
  }

  TEST_CASE("printer round trip") {
    const char* samples[] = {
        "x^2 + 3*x*y", "-(x - y)^2", "1/2 * x + x/y", "(x + y)^3 - -z",
        "a*b*c - a/(b + 1/3)", "x", "7",
    };
    for (const char* text : samples) {
      const ExprPtr once = parse(text);
      const ExprPtr twice = parse(print(once));
      CHECK(equals(*once, *twice));
    }
  }

  TEST_CASE("evaluation over rationals") {
    const std::map<std::string, Q> env{{"x", Q(2, 3)}, {"y", Q(-5)}};
    CHECK(eval_scalar<Q>(*parse("x*y - y*x"), env).is_zero());
    CHECK(eval_scalar<Q>(*parse("x^2"), env) == Q(4, 9));
    CHECK(eval_scalar<Q>(*parse("1/x"), env) == Q(3, 2));
    CHECK(eval_scalar<Q>(*parse("x^0"), env) == Q(1));
    CHECK_THROWS_AS(eval_scalar<Q>(*parse("1/(x - x)"), env), NotInvertibleError);
    CHECK_THROWS_AS(eval_scalar<Q>(*parse("x + z"), env), UnboundVariableError);
  }

  TEST_CASE("evaluation over floats") {
    const std::map<std::string, FloatScalar> env{{"x", FloatScalar(0.5)}};
    CHECK(eval_scalar<FloatScalar>(*parse("x^2 + 0.25", true), env).value() ==
          doctest::Approx(0.5));
  }

  TEST_CASE("free variables and substitution") {
    const ExprPtr e = parse("x^2 + y*z");
    CHECK(free_vars(*e) == std::set<std::string>{"x", "y", "z"});
    const ExprPtr composed = substitute(parse("y^2 + y"), "y", parse("x + 1"));
    const std::map<std::string, Q> env{{"x", Q(3)}};
    CHECK(eval_scalar<Q>(*composed, env) == Q(20));  // 16 + 4
  }

  TEST_CASE("symbolic derivative on the named rules") {
    const std::map<std::string, Q> env{{"x", Q(7, 2)}, {"y", Q(-2, 3)}};
    CHECK(eval_scalar<Q>(*symbolic_derivative(parse("x^3"), "x"), env) ==
          Q(3) * Q(7, 2) * Q(7, 2));
    CHECK(eval_scalar<Q>(*symbolic_derivative(parse("5"), "x"), env).is_zero());
    CHECK(eval_scalar<Q>(*symbolic_derivative(parse("x*y"), "x"), env) == Q(-2, 3));
    // quotient rule: d/dx (x^2/y) = 2x/y
    CHECK(eval_scalar<Q>(*symbolic_derivative(parse("x^2/y"), "x"), env) ==
          Q(2) * Q(7, 2) * *Q(-2, 3).try_invert());
  }

  TEST_CASE("symbolic derivative matches exact central differences") {
    // For degree <= 4 the central difference is f' + c h^2 exactly, so one
    // Richardson step recovers f' with no error term at all.
    for (int i = 0; i < 60; ++i) {
      verify::Rng rng(verify::case_seed(41, "expr", "fd", i));
      const ExprPtr f = rng.poly({"x"}, 4, 4);
      const Q x0 = rng.rational();
      const Q exact = eval_scalar<Q>(*symbolic_derivative(f, "x"), {{"x", x0}});
      auto central = [&](const Q& h) {
        const Q plus = eval_scalar<Q>(*f, {{"x", x0 + h}});
        const Q minus = eval_scalar<Q>(*f, {{"x", x0 - h}});
        return (plus - minus) * *(h + h).try_invert();
      };
      const Q d1 = central(Q(1, 2)), d2 = central(Q(1, 4));
      CHECK((Q(4) * d2 - d1) * *Q(3).try_invert() == exact);
    }
  }
}
