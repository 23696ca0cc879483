#include "tangent/expr.hpp"

#include <cctype>
#include <utility>
#include <vector>

namespace tangent {

ExprPtr make_const(RationalScalar value) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Const;
  e->value = std::move(value);
  return e;
}

ExprPtr make_var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->name = std::move(name);
  return e;
}

namespace {

ExprPtr make_binary(ExprKind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

}  // namespace

ExprPtr make_add(ExprPtr a, ExprPtr b) { return make_binary(ExprKind::Add, std::move(a), std::move(b)); }
ExprPtr make_sub(ExprPtr a, ExprPtr b) { return make_binary(ExprKind::Sub, std::move(a), std::move(b)); }
ExprPtr make_mul(ExprPtr a, ExprPtr b) { return make_binary(ExprKind::Mul, std::move(a), std::move(b)); }

ExprPtr make_div(ExprPtr a, ExprPtr b) {
  // A quotient of literals is a rational constant, not a division node.
  if (a->kind == ExprKind::Const && b->kind == ExprKind::Const && !b->value.is_zero())
    return make_const(a->value * *b->value.try_invert());
  return make_binary(ExprKind::Div, std::move(a), std::move(b));
}

ExprPtr make_neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Neg;
  e->lhs = std::move(a);
  return e;
}

ExprPtr make_pow(ExprPtr base, unsigned long exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Pow;
  e->lhs = std::move(base);
  e->exponent = exponent;
  return e;
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

class Lexer {
 public:
  Lexer(const std::string& text, bool allow_decimal) : text_(text), allow_decimal_(allow_decimal) {
    next();
  }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    next();
    return t;
  }

 private:
  void next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t col = pos_ + 1;
    if (pos_ >= text_.size()) {
      current_ = {Tok::End, "", col};
      return;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '.') {
        if (!allow_decimal_)
          throw ParseError("decimal literal not allowed with an exact ring", pos_ + 1);
        ++pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
          throw ParseError("expected digits after decimal point", pos_ + 1);
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
      current_ = {Tok::Number, text_.substr(start, pos_ - start), col};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      current_ = {Tok::Ident, text_.substr(start, pos_ - start), col};
      return;
    }
    ++pos_;
    switch (c) {
      case '+': current_ = {Tok::Plus, "+", col}; return;
      case '-': current_ = {Tok::Minus, "-", col}; return;
      case '*': current_ = {Tok::Star, "*", col}; return;
      case '/': current_ = {Tok::Slash, "/", col}; return;
      case '^': current_ = {Tok::Caret, "^", col}; return;
      case '(': current_ = {Tok::LParen, "(", col}; return;
      case ')': current_ = {Tok::RParen, ")", col}; return;
      default: throw ParseError(std::string("unexpected character '") + c + "'", col);
    }
  }

  const std::string& text_;
  bool allow_decimal_;
  std::size_t pos_ = 0;
  Token current_{Tok::End, "", 1};
};

RationalScalar number_value(const Token& tok) {
  const auto dot = tok.text.find('.');
  if (dot == std::string::npos) return RationalScalar::parse(tok.text);
  // Finite decimals are exact rationals: d.f -> (d*10^k + f) / 10^k.
  const std::string digits = tok.text.substr(0, dot) + tok.text.substr(dot + 1);
  RationalScalar::Int den = 1;
  for (std::size_t i = dot + 1; i < tok.text.size(); ++i) den *= 10;
  return RationalScalar(RationalScalar::parse_integer(digits), den);
}

class Parser {
 public:
  Parser(const std::string& text, bool allow_decimal) : lexer_(text, allow_decimal) {}

  ExprPtr parse_all() {
    ExprPtr e = parse_expr();
    if (lexer_.peek().kind != Tok::End)
      throw ParseError("unexpected trailing input", lexer_.peek().column);
    return e;
  }

 private:
  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (true) {
      const Tok k = lexer_.peek().kind;
      if (k == Tok::Plus) {
        lexer_.take();
        e = make_add(e, parse_term());
      } else if (k == Tok::Minus) {
        lexer_.take();
        e = make_sub(e, parse_term());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (true) {
      const Tok k = lexer_.peek().kind;
      if (k == Tok::Star) {
        lexer_.take();
        e = make_mul(e, parse_factor());
      } else if (k == Tok::Slash) {
        lexer_.take();
        e = make_div(e, parse_factor());
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_factor() {
    if (lexer_.peek().kind == Tok::Minus) {
      lexer_.take();
      return make_neg(parse_factor());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (lexer_.peek().kind != Tok::Caret) return base;
    const Token caret = lexer_.take();
    // Right-associative; the exponent must fold to an integer >= 0.
    ExprPtr exponent = parse_factor();
    RationalScalar folded;
    try {
      folded = eval_scalar<RationalScalar>(*exponent, {});
    } catch (const std::runtime_error&) {
      throw ParseError("exponent must be a constant", caret.column);
    }
    if (folded.den() != 1 || folded.num() < 0)
      throw ParseError("exponent must be a non-negative integer", caret.column);
    return make_pow(base, folded.num().convert_to<unsigned long>());
  }

  ExprPtr parse_atom() {
    const Token tok = lexer_.peek();
    switch (tok.kind) {
      case Tok::Number:
        lexer_.take();
        return make_const(number_value(tok));
      case Tok::Ident:
        lexer_.take();
        return make_var(tok.text);
      case Tok::LParen: {
        lexer_.take();
        ExprPtr e = parse_expr();
        if (lexer_.peek().kind != Tok::RParen)
          throw ParseError("expected ')'", lexer_.peek().column);
        lexer_.take();
        return e;
      }
      default:
        throw ParseError("expected expression", tok.column);
    }
  }

  Lexer lexer_;
};

}  // namespace

ExprPtr parse(const std::string& text, bool allow_decimal) {
  return Parser(text, allow_decimal).parse_all();
}

std::string print(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Const: return e.value.to_string();
    case ExprKind::Var: return e.name;
    case ExprKind::Add: return "(" + print(*e.lhs) + " + " + print(*e.rhs) + ")";
    case ExprKind::Sub: return "(" + print(*e.lhs) + " - " + print(*e.rhs) + ")";
    case ExprKind::Mul: return "(" + print(*e.lhs) + " * " + print(*e.rhs) + ")";
    case ExprKind::Div: return "(" + print(*e.lhs) + " / " + print(*e.rhs) + ")";
    case ExprKind::Neg: return "(-" + print(*e.lhs) + ")";
    case ExprKind::Pow: return "(" + print(*e.lhs) + "^" + std::to_string(e.exponent) + ")";
  }
  return "?";
}

bool equals(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Const: return a.value == b.value;
    case ExprKind::Var: return a.name == b.name;
    case ExprKind::Neg: return equals(*a.lhs, *b.lhs);
    case ExprKind::Pow: return a.exponent == b.exponent && equals(*a.lhs, *b.lhs);
    default: return equals(*a.lhs, *b.lhs) && equals(*a.rhs, *b.rhs);
  }
}

namespace {
void collect_vars(const Expr& e, std::set<std::string>& out) {
  switch (e.kind) {
    case ExprKind::Const: return;
    case ExprKind::Var: out.insert(e.name); return;
    case ExprKind::Neg:
    case ExprKind::Pow: collect_vars(*e.lhs, out); return;
    default:
      collect_vars(*e.lhs, out);
      collect_vars(*e.rhs, out);
  }
}
}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

ExprPtr substitute(const ExprPtr& e, const std::string& var, const ExprPtr& replacement) {
  switch (e->kind) {
    case ExprKind::Const: return e;
    case ExprKind::Var: return e->name == var ? replacement : e;
    case ExprKind::Neg: return make_neg(substitute(e->lhs, var, replacement));
    case ExprKind::Pow: return make_pow(substitute(e->lhs, var, replacement), e->exponent);
    case ExprKind::Add: return make_add(substitute(e->lhs, var, replacement), substitute(e->rhs, var, replacement));
    case ExprKind::Sub: return make_sub(substitute(e->lhs, var, replacement), substitute(e->rhs, var, replacement));
    case ExprKind::Mul: return make_mul(substitute(e->lhs, var, replacement), substitute(e->rhs, var, replacement));
    case ExprKind::Div: return make_div(substitute(e->lhs, var, replacement), substitute(e->rhs, var, replacement));
  }
  throw std::logic_error("substitute: bad node");
}

namespace {

bool is_const_value(const Expr& e, long v) {
  return e.kind == ExprKind::Const && e.value == RationalScalar(v);
}

// Light simplification so derivative trees stay small.
ExprPtr sadd(ExprPtr a, ExprPtr b) {
  if (is_const_value(*a, 0)) return b;
  if (is_const_value(*b, 0)) return a;
  return make_add(std::move(a), std::move(b));
}

ExprPtr smul(ExprPtr a, ExprPtr b) {
  if (is_const_value(*a, 0) || is_const_value(*b, 0)) return make_const(RationalScalar(0));
  if (is_const_value(*a, 1)) return b;
  if (is_const_value(*b, 1)) return a;
  return make_mul(std::move(a), std::move(b));
}

ExprPtr spow(ExprPtr base, unsigned long k) {
  if (k == 0) return make_const(RationalScalar(1));
  if (k == 1) return base;
  return make_pow(std::move(base), k);
}

}  // namespace

ExprPtr symbolic_derivative(const ExprPtr& e, const std::string& var) {
  switch (e->kind) {
    case ExprKind::Const:
      return make_const(RationalScalar(0));
    case ExprKind::Var:
      return make_const(RationalScalar(e->name == var ? 1 : 0));
    case ExprKind::Add:
      return sadd(symbolic_derivative(e->lhs, var), symbolic_derivative(e->rhs, var));
    case ExprKind::Sub: {
      ExprPtr db = symbolic_derivative(e->rhs, var);
      if (is_const_value(*db, 0)) return symbolic_derivative(e->lhs, var);
      return make_sub(symbolic_derivative(e->lhs, var), db);
    }
    case ExprKind::Neg:
      return make_neg(symbolic_derivative(e->lhs, var));
    case ExprKind::Mul:
      return sadd(smul(symbolic_derivative(e->lhs, var), e->rhs),
                  smul(e->lhs, symbolic_derivative(e->rhs, var)));
    case ExprKind::Div: {
      // (a/b)' = (a'b - ab') / b^2
      ExprPtr num = make_sub(smul(symbolic_derivative(e->lhs, var), e->rhs),
                             smul(e->lhs, symbolic_derivative(e->rhs, var)));
      return make_div(std::move(num), make_pow(e->rhs, 2));
    }
    case ExprKind::Pow: {
      if (e->exponent == 0) return make_const(RationalScalar(0));
      ExprPtr k = make_const(RationalScalar(static_cast<long>(e->exponent)));
      return smul(smul(std::move(k), spow(e->lhs, e->exponent - 1)),
                  symbolic_derivative(e->lhs, var));
    }
  }
  throw std::logic_error("symbolic_derivative: bad node");
}

}  // namespace tangent
