#pragma once

/**
 * @file talg.hpp
 * @brief Tangent algebra elements and their arithmetic.
 *
 * An element of the order-n tangent algebra at label (t,s) is a vector of
 * 2^n coefficients over the basis e_A = [X^A], A in P(n), subject to the
 * quotient relations e_i^2 = (t_i + s_i) e_i - t_i s_i.  Multiplication
 * uses the first-order rule
 *
 *   (v0, v1) * (w0, w1) = (v0 w0 - s t v1 w1,  v0 w1 + v1 w0 + (s+t) v1 w1)
 *
 * applied recursively over the last tensor factor; the independent
 * polynomial-reduction route lives in reference.hpp and is used to certify
 * this one.
 *
 * Coefficients are either scalars (ring elements) or fixed-length scalar
 * vectors: the module scalar extension used by the slope engine.  Vector
 * payloads admit add/scale/anchor but no product.
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tangent/hypercube.hpp"
#include "tangent/ring.hpp"

namespace tangent {

/// Fixed-length coefficient vector: an element of V in V (x) K^n_(t,s).
template <Ring R>
struct VecPayload {
  std::vector<R> v;

  VecPayload() = default;
  explicit VecPayload(std::vector<R> v_) : v(std::move(v_)) {}

  std::size_t dim() const { return v.size(); }
  bool operator==(const VecPayload&) const = default;
};

// Payload operations, overloaded for scalars and coefficient vectors.
template <Ring R>
R payload_add(const R& a, const R& b) { return a + b; }
template <Ring R>
R payload_sub(const R& a, const R& b) { return a - b; }
template <Ring R>
R payload_scale(const R& k, const R& p) { return k * p; }
template <Ring R>
R payload_zero_like(const R&) { return R::zero(); }
template <Ring R>
bool payload_is_zero(const R& p) { return p.is_zero(); }

template <Ring R>
VecPayload<R> payload_add(const VecPayload<R>& a, const VecPayload<R>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("payload dimension mismatch");
  VecPayload<R> out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}
template <Ring R>
VecPayload<R> payload_sub(const VecPayload<R>& a, const VecPayload<R>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("payload dimension mismatch");
  VecPayload<R> out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}
template <Ring R>
VecPayload<R> payload_scale(const R& k, const VecPayload<R>& p) {
  VecPayload<R> out = p;
  for (auto& x : out.v) x *= k;
  return out;
}
template <Ring R>
VecPayload<R> payload_zero_like(const VecPayload<R>& p) {
  return VecPayload<R>(std::vector<R>(p.dim(), R::zero()));
}
template <Ring R>
bool payload_is_zero(const VecPayload<R>& p) {
  for (const auto& x : p.v)
    if (!x.is_zero()) return false;
  return true;
}

/**
 * An element of K^n_(t,s) (payload P = R) or of V (x) K^n_(t,s)
 * (payload P = VecPayload<R>).  Immutable value type.
 */
template <Ring R, class P = R>
class TangentElement {
 public:
  TangentElement() : label_(TimeLabel<R>::empty()), coeffs_{P{}} {}

  TangentElement(TimeLabel<R> label, std::vector<P> coeffs)
      : label_(std::move(label)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != subset_count(label_.order()))
      throw std::invalid_argument("TangentElement: expected 2^n coefficients");
  }

  const TimeLabel<R>& label() const { return label_; }
  int order() const { return label_.order(); }
  std::size_t coeff_count() const { return coeffs_.size(); }

  const P& coeff(const SubsetIdx& a) const { return coeffs_.at(a.bits); }
  const P& coeff(std::uint32_t mask) const { return coeffs_.at(mask); }
  const std::vector<P>& coeffs() const { return coeffs_; }

  bool operator==(const TangentElement&) const = default;

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!payload_is_zero(c)) return false;
    return true;
  }

 private:
  TimeLabel<R> label_;
  std::vector<P> coeffs_;
};

namespace detail {
template <Ring R, class P>
void check_same_label(const TangentElement<R, P>& x, const TangentElement<R, P>& y) {
  if (!(x.label() == y.label())) throw std::invalid_argument("tangent element label mismatch");
}
}  // namespace detail

/// The imbedding x -> (x, 0, ..., 0): coefficient of e_empty is x.
template <Ring R, class P>
TangentElement<R, P> from_base(const TimeLabel<R>& label, const P& x) {
  std::vector<P> coeffs(subset_count(label.order()), payload_zero_like(x));
  coeffs[0] = x;
  return TangentElement<R, P>(label, std::move(coeffs));
}

/// The multiplicative unit at a label.
template <Ring R>
TangentElement<R> one_element(const TimeLabel<R>& label) {
  return from_base<R, R>(label, R::one());
}

/// Basis element e_A.
template <Ring R>
TangentElement<R> basis_element(const TimeLabel<R>& label, const SubsetIdx& a) {
  if (a.n != label.order()) throw std::invalid_argument("basis_element: dimension mismatch");
  std::vector<R> coeffs(subset_count(label.order()), R::zero());
  coeffs[a.bits] = R::one();
  return TangentElement<R>(label, std::move(coeffs));
}

template <Ring R, class P>
TangentElement<R, P> add(const TangentElement<R, P>& x, const TangentElement<R, P>& y) {
  detail::check_same_label(x, y);
  std::vector<P> coeffs;
  coeffs.reserve(x.coeff_count());
  for (std::size_t i = 0; i < x.coeff_count(); ++i)
    coeffs.push_back(payload_add(x.coeffs()[i], y.coeffs()[i]));
  return TangentElement<R, P>(x.label(), std::move(coeffs));
}

template <Ring R, class P>
TangentElement<R, P> sub(const TangentElement<R, P>& x, const TangentElement<R, P>& y) {
  detail::check_same_label(x, y);
  std::vector<P> coeffs;
  coeffs.reserve(x.coeff_count());
  for (std::size_t i = 0; i < x.coeff_count(); ++i)
    coeffs.push_back(payload_sub(x.coeffs()[i], y.coeffs()[i]));
  return TangentElement<R, P>(x.label(), std::move(coeffs));
}

template <Ring R, class P>
TangentElement<R, P> scale(const R& k, const TangentElement<R, P>& x) {
  std::vector<P> coeffs;
  coeffs.reserve(x.coeff_count());
  for (const auto& c : x.coeffs()) coeffs.push_back(payload_scale(k, c));
  return TangentElement<R, P>(x.label(), std::move(coeffs));
}

template <Ring R, class P>
TangentElement<R, P> neg(const TangentElement<R, P>& x) {
  return scale(-R::one(), x);
}

namespace detail {

// Product of coefficient blocks of length 2^m over the first m label
// entries, splitting off the last factor each step.
template <Ring R>
std::vector<R> mul_rec(const R* x, const R* y, int m, const TimeLabel<R>& label) {
  if (m == 0) return {x[0] * y[0]};
  const std::size_t half = subset_count(m - 1);
  const R& t = label.t[m - 1];
  const R& s = label.s[m - 1];
  const std::vector<R> ll = mul_rec(x, y, m - 1, label);
  const std::vector<R> hh = mul_rec(x + half, y + half, m - 1, label);
  const std::vector<R> lh = mul_rec(x, y + half, m - 1, label);
  const std::vector<R> hl = mul_rec(x + half, y, m - 1, label);
  std::vector<R> out(2 * half, R::zero());
  const R st = s * t;
  const R spt = s + t;
  for (std::size_t i = 0; i < half; ++i) {
    out[i] = ll[i] - st * hh[i];
    out[half + i] = lh[i] + hl[i] + spt * hh[i];
  }
  return out;
}

}  // namespace detail

/// Product in K^n_(t,s).  Vector payloads have no product.
template <Ring R>
TangentElement<R> mul(const TangentElement<R>& x, const TangentElement<R>& y) {
  detail::check_same_label(x, y);
  std::vector<R> coeffs = detail::mul_rec(x.coeffs().data(), y.coeffs().data(), x.order(), x.label());
  return TangentElement<R>(x.label(), std::move(coeffs));
}

/// x^k by binary exponentiation; x^0 is the unit at x's label.
template <Ring R>
TangentElement<R> pow(const TangentElement<R>& x, unsigned long exponent) {
  TangentElement<R> acc = one_element(x.label());
  TangentElement<R> base = x;
  while (exponent > 0) {
    if (exponent & 1u) acc = mul(acc, base);
    exponent >>= 1u;
    if (exponent > 0) base = mul(base, base);
  }
  return acc;
}

/**
 * Tensor product along the scaloid: the result lives at label
 * x.label oplus y.label, with coefficient at A u shift(B) equal to
 * x_A * y_B (the factor indices of y are shifted past those of x).
 */
template <Ring R>
TangentElement<R> tensor(const TangentElement<R>& x, const TangentElement<R>& y) {
  const TimeLabel<R> joined = x.label().oplus(y.label());
  const int n = x.order();
  std::vector<R> coeffs(subset_count(joined.order()), R::zero());
  for (std::uint32_t b = 0; b < y.coeff_count(); ++b)
    for (std::uint32_t a = 0; a < x.coeff_count(); ++a)
      coeffs[(b << n) | a] = x.coeff(a) * y.coeff(b);
  return TangentElement<R>(joined, std::move(coeffs));
}

/**
 * Permutes tensor factors: factor i moves to position perm[i-1] (one-based
 * images).  Coefficient indices and label entries are relabelled together.
 */
template <Ring R>
TangentElement<R> flip(const TangentElement<R>& x, const std::vector<int>& perm) {
  const int n = x.order();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("flip: permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int img : perm) {
    if (img < 1 || img > n || seen[img - 1]) throw std::invalid_argument("flip: not a permutation");
    seen[img - 1] = true;
  }
  std::vector<R> t(n), s(n);
  for (int i = 0; i < n; ++i) {
    t[perm[i] - 1] = x.label().t[i];
    s[perm[i] - 1] = x.label().s[i];
  }
  std::vector<R> coeffs(x.coeff_count(), R::zero());
  for (std::uint32_t a = 0; a < x.coeff_count(); ++a) {
    std::uint32_t image = 0;
    for (int i = 0; i < n; ++i)
      if ((a >> i) & 1u) image |= std::uint32_t{1} << (perm[i] - 1);
    coeffs[image] = x.coeff(a);
  }
  return TangentElement<R>(TimeLabel<R>(std::move(t), std::move(s)), std::move(coeffs));
}

namespace detail {
template <Ring R, class P>
void require_first_order(const TangentElement<R, P>& x, const char* op) {
  if (x.order() != 1) throw std::invalid_argument(std::string(op) + ": requires a first-order element");
}
}  // namespace detail

/// Source map at n = 1: alpha(v0 + v1 e) = v0 + s v1.  A ring morphism.
template <Ring R, class P>
P alpha(const TangentElement<R, P>& x) {
  detail::require_first_order(x, "alpha");
  return payload_add(x.coeff(0u), payload_scale(x.label().s[0], x.coeff(1u)));
}

/// Target map at n = 1: beta(v0 + v1 e) = v0 + t v1.
template <Ring R, class P>
P beta(const TangentElement<R, P>& x) {
  detail::require_first_order(x, "beta");
  return payload_add(x.coeff(0u), payload_scale(x.label().t[0], x.coeff(1u)));
}

/**
 * The order-2 automorphism exchanging source and target, applied in every
 * tensor factor.  At n = 1: kappa(v0 + v1 e) = v0 + (s+t) v1 - v1 e.
 */
template <Ring R>
TangentElement<R> kappa(const TangentElement<R>& x) {
  std::vector<R> coeffs = x.coeffs();
  const int n = x.order();
  for (int i = 0; i < n; ++i) {
    const R spt = x.label().s[i] + x.label().t[i];
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (std::uint32_t a = 0; a < coeffs.size(); ++a) {
      if (a & bit) continue;
      const std::uint32_t hi = a | bit;
      coeffs[a] += spt * coeffs[hi];
      coeffs[hi] = -coeffs[hi];
    }
  }
  return TangentElement<R>(x.label(), std::move(coeffs));
}

namespace detail {

template <Ring R>
std::optional<std::vector<R>> invert_rec(const std::vector<R>& x, int m, const TimeLabel<R>& label) {
  if (m == 0) {
    auto inv = x[0].try_invert();
    if (!inv) return std::nullopt;
    return std::vector<R>{*inv};
  }
  // Treat K^m as a rank-2 extension of K^(m-1): x = p + q e_m.  Then
  // alpha_m(x) beta_m(x) = (p + s q)(p + t q) must be a unit one level
  // down, and x^-1 = kappa_m(x) * (alpha_m(x) beta_m(x))^-1.
  const std::size_t half = subset_count(m - 1);
  const R& t = label.t[m - 1];
  const R& s = label.s[m - 1];
  std::vector<R> lo_alpha(half), lo_beta(half);
  for (std::size_t i = 0; i < half; ++i) {
    lo_alpha[i] = x[i] + s * x[half + i];
    lo_beta[i] = x[i] + t * x[half + i];
  }
  const std::vector<R> prod = mul_rec(lo_alpha.data(), lo_beta.data(), m - 1, label);
  auto prod_inv = invert_rec(prod, m - 1, label);
  if (!prod_inv) return std::nullopt;
  // kappa in the last factor only: (p + (s+t) q) - q e_m.
  std::vector<R> conj(2 * half, R::zero());
  for (std::size_t i = 0; i < half; ++i) {
    conj[i] = x[i] + (s + t) * x[half + i];
    conj[half + i] = -x[half + i];
  }
  std::vector<R> out(2 * half, R::zero());
  const std::vector<R> lo = mul_rec(conj.data(), prod_inv->data(), m - 1, label);
  const std::vector<R> hi = mul_rec(conj.data() + half, prod_inv->data(), m - 1, label);
  for (std::size_t i = 0; i < half; ++i) {
    out[i] = lo[i];
    out[half + i] = hi[i];
  }
  return out;
}

}  // namespace detail

/**
 * Multiplicative inverse, when it exists.  Uses the first-order criterion
 * (alpha(v) beta(v) must be a unit) recursively over the coefficient ring;
 * the candidate is certified by back-multiplication before being returned.
 */
template <Ring R>
std::optional<TangentElement<R>> try_invert_element(const TangentElement<R>& x) {
  auto coeffs = detail::invert_rec(x.coeffs(), x.order(), x.label());
  if (!coeffs) return std::nullopt;
  TangentElement<R> candidate(x.label(), std::move(*coeffs));
  if (!(mul(x, candidate) == one_element(x.label()))) return std::nullopt;
  return candidate;
}

/// Groupoid unit lambda * 1 at a first-order label.
template <Ring R>
TangentElement<R> groupoid_unit(const R& lambda, const TimeLabel<R>& label) {
  if (label.order() != 1) throw std::invalid_argument("groupoid_unit: requires a first-order label");
  return from_base<R, R>(label, lambda);
}

/**
 * Groupoid composition u * w = u - alpha(u) 1 + w, defined when
 * alpha(u) = beta(w).  Units are lambda * 1, inversion is kappa.
 */
template <Ring R>
TangentElement<R> groupoid_compose(const TangentElement<R>& u, const TangentElement<R>& w) {
  detail::check_same_label(u, w);
  detail::require_first_order(u, "groupoid_compose");
  if (!(alpha(u) == beta(w)))
    throw std::invalid_argument("groupoid_compose: not composable (alpha(u) != beta(w))");
  return add(sub(u, from_base<R, R>(u.label(), alpha(u))), w);
}

}  // namespace tangent
