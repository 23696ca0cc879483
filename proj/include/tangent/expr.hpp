#pragma once

/**
 * @file expr.hpp
 * @brief Small arithmetic-expression language over any ring instantiation.
 *
 * Grammar (standard precedence, ^ highest and right-associative, then
 * unary minus, then * /, then + -):
 *
 *   expr   := term (('+'|'-') term)*
 *   term   := factor (('*'|'/') factor)*
 *   factor := '-' factor | power
 *   power  := atom ('^' factor)?          -- exponent must fold to an
 *   atom   := NUMBER | IDENT | '(' expr ')'  integer >= 0
 *
 * Constants are exact rational literals; a quotient of two literals folds
 * to one ("1/2" is a constant, "1/x" is a division).  Decimal literals are
 * accepted only when requested (float ring), and are converted exactly.
 */

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "tangent/ring.hpp"

namespace tangent {

enum class ExprKind { Const, Var, Add, Sub, Mul, Div, Neg, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  RationalScalar value;     // Const
  std::string name;         // Var
  ExprPtr lhs;              // binary ops; operand of Neg and Pow
  ExprPtr rhs;              // binary ops
  unsigned long exponent = 0;  // Pow, always >= 0
};

ExprPtr make_const(RationalScalar value);
ExprPtr make_var(std::string name);
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_neg(ExprPtr a);
ExprPtr make_pow(ExprPtr base, unsigned long exponent);

/// Syntax error with a 1-based column position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t column)
      : std::runtime_error(message + " at column " + std::to_string(column)), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

class UnboundVariableError : public std::runtime_error {
 public:
  explicit UnboundVariableError(const std::string& name)
      : std::runtime_error("unbound variable '" + name + "'") {}
};

/// Parses expression text.  allow_decimal admits literals like "0.25"
/// (converted exactly); they are rejected otherwise.
ExprPtr parse(const std::string& text, bool allow_decimal = false);

/// Canonical fully-parenthesized form; parse(print(e)) == e structurally.
std::string print(const Expr& e);
inline std::string print(const ExprPtr& e) { return print(*e); }

bool equals(const Expr& a, const Expr& b);

/// Free variables, sorted.
std::set<std::string> free_vars(const Expr& e);

/// Replaces every occurrence of a variable by an expression (composition).
ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& replacement);

/**
 * Symbolic partial derivative with respect to one variable: the test
 * oracle for the slope engine.  Handles Div by the quotient rule.
 */
ExprPtr symbolic_derivative(const ExprPtr& e, const std::string& var);

/**
 * Evaluation over any commutative algebra.  Ops supplies the arithmetic
 * and the lift of rational constants:
 *
 *   V from_rational(const RationalScalar&)
 *   V add/sub/mul(const V&, const V&), V neg(const V&)
 *   V invert(const V&)            -- throws NotInvertibleError
 */
template <class V, class Ops>
V eval(const Expr& e, const std::map<std::string, V>& env, const Ops& ops) {
  switch (e.kind) {
    case ExprKind::Const:
      return ops.from_rational(e.value);
    case ExprKind::Var: {
      auto it = env.find(e.name);
      if (it == env.end()) throw UnboundVariableError(e.name);
      return it->second;
    }
    case ExprKind::Add:
      return ops.add(eval(*e.lhs, env, ops), eval(*e.rhs, env, ops));
    case ExprKind::Sub:
      return ops.sub(eval(*e.lhs, env, ops), eval(*e.rhs, env, ops));
    case ExprKind::Mul:
      return ops.mul(eval(*e.lhs, env, ops), eval(*e.rhs, env, ops));
    case ExprKind::Div:
      return ops.mul(eval(*e.lhs, env, ops), ops.invert(eval(*e.rhs, env, ops)));
    case ExprKind::Neg:
      return ops.neg(eval(*e.lhs, env, ops));
    case ExprKind::Pow: {
      V base = eval(*e.lhs, env, ops);
      V acc = ops.from_rational(RationalScalar(1));
      unsigned long k = e.exponent;
      while (k > 0) {
        if (k & 1u) acc = ops.mul(acc, base);
        k >>= 1u;
        if (k > 0) base = ops.mul(base, base);
      }
      return acc;
    }
  }
  throw std::logic_error("eval: bad node");
}

/// Plain ring evaluation.
template <Ring R>
struct ScalarOps {
  R from_rational(const RationalScalar& q) const { return tangent::from_rational<R>(q); }
  R add(const R& a, const R& b) const { return a + b; }
  R sub(const R& a, const R& b) const { return a - b; }
  R mul(const R& a, const R& b) const { return a * b; }
  R neg(const R& a) const { return -a; }
  R invert(const R& a) const { return invert_or_throw(a, "expression division"); }
};

template <Ring R>
R eval_scalar(const Expr& e, const std::map<std::string, R>& env) {
  return eval(e, env, ScalarOps<R>{});
}

}  // namespace tangent
