#pragma once

/**
 * @file slope.hpp
 * @brief The differentiation engine.
 *
 * Three routes to the order-n extension of a map:
 *
 *   slope_n          anchor conjugation: pull the argument to the 2^n
 *                    evaluation points, apply f componentwise, pull back.
 *                    Works for black-box functions at regular labels.
 *   slope_n_formula  the explicit weighted-sum formula for each output
 *                    coefficient; same domain, independent code path.
 *   extend_expr      evaluate an expression with tangent-algebra
 *                    arithmetic.  Works at every label, including the
 *                    singular ones where coefficients become exact
 *                    derivatives.
 *
 * Black-box functions at singular labels are rejected: their extension is
 * a continuity statement with no finite algorithm.
 */

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tangent/anchor.hpp"
#include "tangent/expr.hpp"
#include "tangent/hypercube.hpp"
#include "tangent/ring.hpp"
#include "tangent/talg.hpp"

namespace tangent {

/// An evaluation point fell outside the declared domain of a PointFn.
class EvalDomainError : public std::runtime_error {
 public:
  EvalDomainError(std::string point_desc, std::string index_desc)
      : std::runtime_error("evaluation point " + point_desc + " (component " + index_desc +
                           ") is outside the declared domain"),
        point_(std::move(point_desc)),
        index_(std::move(index_desc)) {}

  const std::string& point() const { return point_; }
  const std::string& index() const { return index_; }

 private:
  std::string point_;
  std::string index_;
};

/**
 * A black-box map K^d -> K^d' with a domain membership test.  The 2^n
 * evaluations fan out independently; set parallel_safe to false for
 * callbacks that must run serially.
 */
template <Ring R>
struct PointFn {
  int arity_in = 1;
  int arity_out = 1;
  std::function<std::vector<R>(const std::vector<R>&)> fn;
  std::function<bool(const std::vector<R>&)> in_domain;  // null means everywhere
  bool parallel_safe = true;
};

/// The order-n extension of a map, as a module-valued tangent element.
template <Ring R>
using SlopeResult = TangentElement<R, VecPayload<R>>;

namespace detail {

template <Ring R>
std::string point_to_string(const std::vector<R>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += p[i].to_string();
  }
  return s + ")";
}

template <Ring R>
void check_argument(const PointFn<R>& f, const TangentElement<R, VecPayload<R>>& v) {
  for (const auto& c : v.coeffs())
    if (static_cast<int>(c.dim()) != f.arity_in)
      throw std::invalid_argument("slope: argument coefficient dimension does not match the function arity");
}

/// Runs f on every cube component, honoring domain test and the
/// parallel-safety flag.  Exceptions propagate after the loop finishes.
template <Ring R>
std::vector<VecPayload<R>> evaluate_cube(const PointFn<R>& f, const CubeElement<R, VecPayload<R>>& points) {
  const std::int64_t size = static_cast<std::int64_t>(points.values().size());
  std::vector<VecPayload<R>> out(size);
  std::exception_ptr error;
  auto eval_one = [&](std::int64_t a) {
    const std::vector<R>& p = points.value(static_cast<std::uint32_t>(a)).v;
    if (f.in_domain && !f.in_domain(p))
      throw EvalDomainError(point_to_string(p), SubsetIdx(static_cast<std::uint32_t>(a), points.dim()).to_string());
    std::vector<R> y = f.fn(p);
    if (static_cast<int>(y.size()) != f.arity_out)
      throw std::invalid_argument("PointFn returned a value of the wrong dimension");
    out[a] = VecPayload<R>(std::move(y));
  };
#ifdef _OPENMP
  if (f.parallel_safe && size >= 8) {
#pragma omp parallel for schedule(static)
    for (std::int64_t a = 0; a < size; ++a) {
      try {
        eval_one(a);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    return out;
  }
#endif
  for (std::int64_t a = 0; a < size; ++a) eval_one(a);
  return out;
}

}  // namespace detail

/**
 * Order-n slope by anchor conjugation.  Requires a regular label; all 2^n
 * evaluation points must pass the domain test.
 */
template <Ring R>
SlopeResult<R> slope_n(const PointFn<R>& f, const TimeLabel<R>& label,
                       const TangentElement<R, VecPayload<R>>& v) {
  if (!(v.label() == label)) throw std::invalid_argument("slope_n: label mismatch");
  if (!label.is_regular()) throw NotRegularError("slope_n: label is not regular");
  detail::check_argument(f, v);
  const CubeElement<R, VecPayload<R>> points = anchor_apply(v);
  std::vector<VecPayload<R>> images = detail::evaluate_cube(f, points);
  return anchor_inverse_apply(CubeElement<R, VecPayload<R>>(label.order(), std::move(images)), label);
}

/**
 * The weight of evaluation point A in output component B:
 * (-1)^|A xor B| s_{B^c & A} t_{B^c & A^c} / (t - s)_n.
 */
template <Ring R>
R slope_weight(const TimeLabel<R>& label, std::uint32_t component_b, std::uint32_t point_a) {
  if (!label.is_regular()) throw NotRegularError("slope_weight: label is not regular");
  auto inv = label.diff_product().try_invert();
  if (!inv) throw NotRegularError("slope_weight: time-difference product is not invertible");
  return anchor_inverse_entry(label, *inv, component_b, point_a);
}

/**
 * Order-n slope by the explicit formula: component B is the weighted sum
 * over A of f evaluated at the A-th evaluation point.  Agrees exactly with
 * slope_n; the two are mutual oracles.
 */
template <Ring R>
SlopeResult<R> slope_n_formula(const PointFn<R>& f, const TimeLabel<R>& label,
                               const TangentElement<R, VecPayload<R>>& v) {
  if (!(v.label() == label)) throw std::invalid_argument("slope_n_formula: label mismatch");
  if (!label.is_regular()) throw NotRegularError("slope_n_formula: label is not regular");
  auto inv = label.diff_product().try_invert();
  if (!inv) throw NotRegularError("slope_n_formula: time-difference product is not invertible");
  const R inv_diff = *inv;
  detail::check_argument(f, v);
  const int n = label.order();
  const std::uint32_t size = static_cast<std::uint32_t>(subset_count(n));
  const std::uint32_t all = SubsetIdx::mask_all(n);

  // Evaluation points Y_A(v) = sum_C s_{C & A^c} t_{C & A} v_C, spelled out.
  std::vector<VecPayload<R>> points(size);
  for (std::uint32_t a = 0; a < size; ++a) {
    VecPayload<R> acc = payload_zero_like(v.coeff(0u));
    for (std::uint32_t c = 0; c < size; ++c) {
      const R w = detail::masked_product(v.label().s, c & ~a & all) *
                  detail::masked_product(v.label().t, c & a);
      acc = payload_add(acc, payload_scale(w, v.coeff(c)));
    }
    points[a] = std::move(acc);
  }
  CubeElement<R, VecPayload<R>> cube(n, std::move(points));
  std::vector<VecPayload<R>> images = detail::evaluate_cube(f, cube);

  std::vector<VecPayload<R>> coeffs(size);
  for (std::uint32_t b = 0; b < size; ++b) {
    const std::uint32_t bc = ~b & all;
    VecPayload<R> acc = payload_zero_like(images[0]);
    for (std::uint32_t a = 0; a < size; ++a) {
      R w = detail::masked_product(label.s, bc & a) * detail::masked_product(label.t, bc & ~a & all) * inv_diff;
      if (std::popcount(b ^ a) & 1) w = -w;
      acc = payload_add(acc, payload_scale(w, images[a]));
    }
    coeffs[b] = std::move(acc);
  }
  return SlopeResult<R>(label, std::move(coeffs));
}

/**
 * First-order slope of a map at (v0, v1; t, s).  Coefficients are
 *
 *   ( (t f(v0 + s v1) - s f(v0 + t v1)) / (t - s),
 *     (f(v0 + t v1) - f(v0 + s v1)) / (t - s) )
 *
 * the second being the classical difference quotient.
 */
template <Ring R>
SlopeResult<R> slope1(const PointFn<R>& f, const std::vector<R>& v0, const std::vector<R>& v1,
                      const R& t, const R& s) {
  const TimeLabel<R> label = TimeLabel<R>::first_order(t, s);
  SlopeResult<R> v(label, {VecPayload<R>(v0), VecPayload<R>(v1)});
  return slope_n(f, label, v);
}

/// Tangent-algebra arithmetic for expression evaluation at a fixed label.
template <Ring R>
struct TangentOps {
  TimeLabel<R> label;
  using V = TangentElement<R>;

  V from_rational(const RationalScalar& q) const {
    return from_base<R, R>(label, tangent::from_rational<R>(q));
  }
  V add(const V& a, const V& b) const { return tangent::add(a, b); }
  V sub(const V& a, const V& b) const { return tangent::sub(a, b); }
  V mul(const V& a, const V& b) const { return tangent::mul(a, b); }
  V neg(const V& a) const { return tangent::neg(a); }
  V invert(const V& a) const {
    auto inv = try_invert_element(a);
    if (!inv) throw NotInvertibleError("expression division: divisor is not a unit in the tangent algebra");
    return *inv;
  }
};

/**
 * Evaluates an expression over the tangent algebra at the label: the ring
 * extension of the underlying map, defined at every label.  At regular
 * labels this agrees with slope_n of the same expression; at t = s = 0 the
 * coefficients carry exact derivatives.
 */
template <Ring R>
TangentElement<R> extend_expr(const Expr& e, const TimeLabel<R>& label,
                              const std::map<std::string, TangentElement<R>>& args) {
  for (const auto& [name, value] : args)
    if (!(value.label() == label))
      throw std::invalid_argument("extend_expr: argument '" + name + "' has a different label");
  return eval(e, args, TangentOps<R>{label});
}

/// Wraps an expression as a black-box PointFn in the given variable order.
template <Ring R>
PointFn<R> expr_point_fn(ExprPtr e, std::vector<std::string> vars) {
  PointFn<R> f;
  f.arity_in = static_cast<int>(vars.size());
  f.arity_out = 1;
  f.fn = [e = std::move(e), vars = std::move(vars)](const std::vector<R>& x) {
    std::map<std::string, R> env;
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = x[i];
    return std::vector<R>{eval_scalar<R>(*e, env)};
  };
  return f;
}

/**
 * Exact partial derivative d f / d var at a point: the e_1 coefficient of
 * the expression extension at the most singular first-order label.
 */
template <Ring R>
R derivative(const Expr& e, const std::map<std::string, R>& at, const std::string& var) {
  const TimeLabel<R> label = TimeLabel<R>::zero(1);
  std::map<std::string, TangentElement<R>> args;
  for (const auto& [name, value] : at) {
    TangentElement<R> lift = from_base<R, R>(label, value);
    if (name == var) lift = add(lift, basis_element(label, SubsetIdx::of({1}, 1)));
    args.emplace(name, std::move(lift));
  }
  return extend_expr(e, label, args).coeff(SubsetIdx::of({1}, 1));
}

/**
 * Iterated mixed partial d^k f / d vars[0] ... d vars[k-1] at a point:
 * order k, t = s = 0, each variable seeded with the basis directions of
 * the slots naming it, coefficient of the full set e_{1..k}.
 */
template <Ring R>
R derivative_mixed(const Expr& e, const std::map<std::string, R>& at,
                   const std::vector<std::string>& vars) {
  const int n = static_cast<int>(vars.size());
  if (n == 0) throw std::invalid_argument("derivative_mixed: need at least one variable");
  const TimeLabel<R> label = TimeLabel<R>::zero(n);
  std::map<std::string, TangentElement<R>> args;
  for (const auto& [name, value] : at) {
    TangentElement<R> lift = from_base<R, R>(label, value);
    for (int i = 0; i < n; ++i)
      if (vars[i] == name)
        lift = add(lift, basis_element(label, SubsetIdx(std::uint32_t{1} << i, n)));
    args.emplace(name, std::move(lift));
  }
  return extend_expr(e, label, args).coeff(SubsetIdx::full(n));
}

}  // namespace tangent
