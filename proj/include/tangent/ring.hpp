#pragma once

/**
 * @file ring.hpp
 * @brief Commutative ring abstraction and the two concrete scalar types.
 *
 * Everything downstream (hypercube labels, tangent algebras, anchor
 * matrices, the slope engine) is generic over a scalar type modelling a
 * commutative unital ring with an invertibility test.  Two models are
 * provided:
 *
 *   - RationalScalar: exact arbitrary-precision rationals.  All algebraic
 *     identities hold with exact equality; this is the type the test and
 *     verification suites run on.
 *   - FloatScalar: double precision with a configurable invertibility
 *     threshold.  Exists for performance work; identities only hold up to
 *     rounding.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <concepts>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tangent {

/// Thrown when an operation requires a unit and the element is not one.
class NotInvertibleError : public std::runtime_error {
 public:
  explicit NotInvertibleError(const std::string& what) : std::runtime_error(what) {}
};

/// A commutative unital ring with decidable invertibility.
template <class R>
concept Ring = std::regular<R> && requires(const R& a, const R& b) {
  { R::zero() } -> std::same_as<R>;
  { R::one() } -> std::same_as<R>;
  { a + b } -> std::same_as<R>;
  { a - b } -> std::same_as<R>;
  { a * b } -> std::same_as<R>;
  { -a } -> std::same_as<R>;
  { a.try_invert() } -> std::same_as<std::optional<R>>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.to_string() } -> std::same_as<std::string>;
};

/**
 * Exact rational scalar on top of boost::multiprecision integers.
 *
 * Invariants: gcd(num, den) == 1 and den > 0.  Invertible iff nonzero.
 * Serializes as "p" when the denominator is 1, as "p/q" otherwise.
 */
class RationalScalar {
 public:
  using Int = boost::multiprecision::cpp_int;

  RationalScalar() : num_(0), den_(1) {}
  RationalScalar(long v) : num_(v), den_(1) {}
  RationalScalar(Int num, Int den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw std::invalid_argument("RationalScalar: zero denominator");
    normalize();
  }

  static RationalScalar zero() { return RationalScalar(0); }
  static RationalScalar one() { return RationalScalar(1); }

  /// Decimal integer parsing.  Leading zeros are stripped first; the
  /// boost string constructor would read them as an octal prefix.
  static Int parse_integer(const std::string& text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      negative = text[i] == '-';
      ++i;
    }
    if (i >= text.size()) throw std::invalid_argument("not an integer: '" + text + "'");
    for (std::size_t k = i; k < text.size(); ++k)
      if (text[k] < '0' || text[k] > '9')
        throw std::invalid_argument("not an integer: '" + text + "'");
    while (i + 1 < text.size() && text[i] == '0') ++i;
    Int v(text.substr(i));
    return negative ? -v : v;
  }

  /// Parses "p", "-p", or "p/q".  Throws std::invalid_argument on junk.
  static RationalScalar parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return RationalScalar(parse_integer(text), 1);
    return RationalScalar(parse_integer(text.substr(0, slash)),
                          parse_integer(text.substr(slash + 1)));
  }

  RationalScalar operator+(const RationalScalar& o) const {
    return RationalScalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RationalScalar operator-(const RationalScalar& o) const {
    return RationalScalar(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  RationalScalar operator*(const RationalScalar& o) const {
    return RationalScalar(num_ * o.num_, den_ * o.den_);
  }
  RationalScalar operator-() const {
    RationalScalar r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  std::optional<RationalScalar> try_invert() const {
    if (num_ == 0) return std::nullopt;
    return RationalScalar(den_, num_);
  }

  bool is_zero() const { return num_ == 0; }
  bool operator==(const RationalScalar& o) const = default;

  const Int& num() const { return num_; }
  const Int& den() const { return den_; }

  std::string to_string() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Int g = boost::multiprecision::gcd(num_ < 0 ? Int(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  Int num_;
  Int den_;
};

/**
 * Double-precision scalar.  Invertibility means |value| > epsilon; the
 * threshold is process-global and settable once at startup.
 */
class FloatScalar {
 public:
  FloatScalar() : value_(0.0) {}
  FloatScalar(double v) : value_(v) {} 

  static FloatScalar zero() { return FloatScalar(0.0); }
  static FloatScalar one() { return FloatScalar(1.0); }

  static double invert_epsilon() { return epsilon_; }
  static void set_invert_epsilon(double eps) { epsilon_ = eps; }

  static FloatScalar parse(const std::string& text) {
    std::size_t pos = 0;
    // Accept the rational syntax too, so CLI inputs work in both rings.
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      const double p = std::stod(text.substr(0, slash), &pos);
      const double q = std::stod(text.substr(slash + 1));
      return FloatScalar(p / q);
    }
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
    return FloatScalar(v);
  }

  FloatScalar operator+(const FloatScalar& o) const { return FloatScalar(value_ + o.value_); }
  FloatScalar operator-(const FloatScalar& o) const { return FloatScalar(value_ - o.value_); }
  FloatScalar operator*(const FloatScalar& o) const { return FloatScalar(value_ * o.value_); }
  FloatScalar operator-() const { return FloatScalar(-value_); }

  std::optional<FloatScalar> try_invert() const {
    if (std::abs(value_) <= epsilon_) return std::nullopt;
    return FloatScalar(1.0 / value_);
  }

  bool is_zero() const { return value_ == 0.0; }
  bool operator==(const FloatScalar& o) const = default;

  double value() const { return value_; }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
  }

 private:
  inline static double epsilon_ = 1e-12;
  double value_;
};

/// a + b + ... convenience for generic code.
template <Ring R>
R& operator+=(R& a, const R& b) {
  a = a + b;
  return a;
}

template <Ring R>
R& operator-=(R& a, const R& b) {
  a = a - b;
  return a;
}

template <Ring R>
R& operator*=(R& a, const R& b) {
  a = a * b;
  return a;
}

/// Converts an exact rational into the target ring.
template <Ring R>
R from_rational(const RationalScalar& q);

template <>
inline RationalScalar from_rational<RationalScalar>(const RationalScalar& q) {
  return q;
}

template <>
inline FloatScalar from_rational<FloatScalar>(const RationalScalar& q) {
  return FloatScalar(q.to_double());
}

/// Invert-or-throw wrapper for contexts where failure is a caller error.
template <Ring R>
R invert_or_throw(const R& a, const char* context) {
  auto inv = a.try_invert();
  if (!inv) throw NotInvertibleError(std::string(context) + ": " + a.to_string() + " is not a unit");
  return *inv;
}

}  // namespace tangent
