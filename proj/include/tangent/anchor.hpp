#pragma once

/**
 * @file anchor.hpp
 * @brief The anchor morphism into the cube algebra, and its inverse.
 *
 * The anchor evaluates an element of K^n_(t,s) at the 2^n hypercube
 * evaluation points.  Matrix conventions (fixed once): rows of the anchor
 * matrix are indexed by the cube basis E_B, columns by the e_A basis, so
 *
 *   anchor entry (B, A)          =  t_{A&B} s_{A&B^c}
 *   inverse entry (B, A)         =  (-1)^|A xor B| s_{B^c&A} t_{B^c&A^c} / (t-s)_n
 *
 * with the inverse rows indexed by e_B and columns by E_A.  Both a lazy
 * entrywise application (no matrix materialization) and explicit
 * CubeMatrix forms are provided; tests assert they agree and that they
 * match the Kronecker-product route of hyperlin.hpp.
 */

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tangent/hyperlin.hpp"
#include "tangent/hypercube.hpp"
#include "tangent/ring.hpp"
#include "tangent/talg.hpp"

namespace tangent {

namespace detail {

/// Product over the set bits of mask: prod_{i in mask} vals[i].
template <Ring R>
R masked_product(const std::vector<R>& vals, std::uint32_t mask) {
  R acc = R::one();
  for (std::size_t i = 0; i < vals.size(); ++i)
    if ((mask >> i) & 1u) acc *= vals[i];
  return acc;
}

}  // namespace detail

/// A function on the hypercube P(n): the anchor's codomain.
template <Ring R, class P = R>
class CubeElement {
 public:
  CubeElement() : n_(0), values_{P{}} {}
  CubeElement(int n, std::vector<P> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != subset_count(n)) throw std::invalid_argument("CubeElement: expected 2^n values");
  }

  int dim() const { return n_; }
  const P& value(std::uint32_t mask) const { return values_.at(mask); }
  const P& value(const SubsetIdx& a) const { return values_.at(a.bits); }
  const std::vector<P>& values() const { return values_; }

  bool operator==(const CubeElement&) const = default;

 private:
  int n_;
  std::vector<P> values_;
};

/// The unit of the cube algebra: the all-ones function.
template <Ring R>
CubeElement<R> cube_one(int n) {
  return CubeElement<R>(n, std::vector<R>(subset_count(n), R::one()));
}

/// Pointwise product E_A * E_B = delta_{A,B} E_A.
template <Ring R>
CubeElement<R> cube_mul(const CubeElement<R>& x, const CubeElement<R>& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("cube_mul: dimension mismatch");
  std::vector<R> values(x.values());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= y.values()[i];
  return CubeElement<R>(x.dim(), std::move(values));
}

/// Anchor matrix entry at (row B in the cube basis, column A in the e basis).
template <Ring R>
R anchor_entry(const TimeLabel<R>& label, std::uint32_t row_b, std::uint32_t col_a) {
  const std::uint32_t bc = ~row_b & SubsetIdx::mask_all(label.order());
  return detail::masked_product(label.t, col_a & row_b) * detail::masked_product(label.s, col_a & bc);
}

/// Explicit 2^n x 2^n anchor matrix.
template <Ring R>
CubeMatrix<R> anchor_matrix(const TimeLabel<R>& label, Exec exec = Exec::parallel) {
  return kernels::build_from_entries<R>(
      label.order(), [&](std::uint32_t r, std::uint32_t c) { return anchor_entry(label, r, c); }, exec);
}

/**
 * Lazy anchor application: component A is the evaluation point
 * Y_A(v) = sum_C s_{C&A^c} t_{C&A} v_C.  Works for scalar and vector
 * payloads; components are computed independently (parallel over A).
 */
template <Ring R, class P>
CubeElement<R, P> anchor_apply(const TangentElement<R, P>& x, Exec exec = Exec::parallel) {
  const int n = x.order();
  const std::int64_t size = static_cast<std::int64_t>(subset_count(n));
  const std::uint32_t all = SubsetIdx::mask_all(n);
  std::vector<P> values(size, payload_zero_like(x.coeff(0u)));
#ifdef _OPENMP
  const bool par = exec == Exec::parallel && size >= 64;
#pragma omp parallel for schedule(static) if (par)
#else
  (void)exec;
#endif
  for (std::int64_t a = 0; a < size; ++a) {
    const std::uint32_t am = static_cast<std::uint32_t>(a);
    P acc = payload_zero_like(x.coeff(0u));
    for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(size); ++c) {
      const R w = detail::masked_product(x.label().s, c & ~am & all) *
                  detail::masked_product(x.label().t, c & am);
      acc = payload_add(acc, payload_scale(w, x.coeff(c)));
    }
    values[a] = std::move(acc);
  }
  return CubeElement<R, P>(n, std::move(values));
}

/// Inverse anchor matrix entry at (row B in the e basis, column A in the cube basis).
template <Ring R>
R anchor_inverse_entry(const TimeLabel<R>& label, const R& inv_diff, std::uint32_t row_b, std::uint32_t col_a) {
  const std::uint32_t bc = ~row_b & SubsetIdx::mask_all(label.order());
  R v = detail::masked_product(label.s, bc & col_a) * detail::masked_product(label.t, bc & ~col_a) * inv_diff;
  return (std::popcount(row_b ^ col_a) & 1) ? -v : v;
}

/**
 * Explicit inverse anchor matrix.  Throws NotRegularError unless every
 * t_i - s_i is a unit; the product with anchor_matrix is exactly the
 * identity.
 */
template <Ring R>
CubeMatrix<R> anchor_inverse_matrix(const TimeLabel<R>& label, Exec exec = Exec::parallel) {
  if (!label.is_regular()) throw NotRegularError("anchor_inverse_matrix: label is not regular");
  auto inv = label.diff_product().try_invert();
  if (!inv) throw NotRegularError("anchor_inverse_matrix: time-difference product is not invertible");
  const R inv_diff = *inv;
  return kernels::build_from_entries<R>(
      label.order(),
      [&](std::uint32_t r, std::uint32_t c) { return anchor_inverse_entry(label, inv_diff, r, c); }, exec);
}

/// Lazy inverse application; anchor_apply(result) reproduces the input exactly.
template <Ring R, class P>
TangentElement<R, P> anchor_inverse_apply(const CubeElement<R, P>& y, const TimeLabel<R>& label,
                                          Exec exec = Exec::parallel) {
  if (y.dim() != label.order()) throw std::invalid_argument("anchor_inverse_apply: dimension mismatch");
  if (!label.is_regular()) throw NotRegularError("anchor_inverse_apply: label is not regular");
  auto inv = label.diff_product().try_invert();
  if (!inv) throw NotRegularError("anchor_inverse_apply: time-difference product is not invertible");
  const R inv_diff = *inv;
  const std::int64_t size = static_cast<std::int64_t>(subset_count(label.order()));
  std::vector<P> coeffs(size, payload_zero_like(y.value(0u)));
#ifdef _OPENMP
  const bool par = exec == Exec::parallel && size >= 64;
#pragma omp parallel for schedule(static) if (par)
#else
  (void)exec;
#endif
  for (std::int64_t b = 0; b < size; ++b) {
    const std::uint32_t bm = static_cast<std::uint32_t>(b);
    P acc = payload_zero_like(y.value(0u));
    for (std::uint32_t a = 0; a < static_cast<std::uint32_t>(size); ++a) {
      const R w = anchor_inverse_entry(label, inv_diff, bm, a);
      acc = payload_add(acc, payload_scale(w, y.value(a)));
    }
    coeffs[b] = std::move(acc);
  }
  return TangentElement<R, P>(label, std::move(coeffs));
}

/**
 * The character Y_A = E_A^* o Y: a multiplicative linear functional on
 * scalar elements at the label.  At n = 1, Y_empty = alpha and Y_{1} = beta.
 */
template <Ring R>
class Character {
 public:
  Character(TimeLabel<R> label, SubsetIdx a) : label_(std::move(label)), a_(a) {
    if (a_.n != label_.order()) throw std::invalid_argument("Character: dimension mismatch");
  }

  R operator()(const TangentElement<R>& x) const {
    if (!(x.label() == label_)) throw std::invalid_argument("Character: label mismatch");
    const std::uint32_t all = SubsetIdx::mask_all(label_.order());
    R acc = R::zero();
    for (std::uint32_t c = 0; c < x.coeff_count(); ++c)
      acc += detail::masked_product(label_.s, c & ~a_.bits & all) *
             detail::masked_product(label_.t, c & a_.bits) * x.coeff(c);
    return acc;
  }

  const SubsetIdx& index() const { return a_; }

 private:
  TimeLabel<R> label_;
  SubsetIdx a_;
};

template <Ring R>
Character<R> character(const TimeLabel<R>& label, const SubsetIdx& a) {
  return Character<R>(label, a);
}

/// First-order anchor blocks ((1, s_i), (1, t_i)); their Kronecker product
/// is the anchor matrix (the tensor-product route, used as a cross-check).
template <Ring R>
std::vector<TwoByTwo<R>> anchor_blocks(const TimeLabel<R>& label) {
  std::vector<TwoByTwo<R>> blocks;
  blocks.reserve(label.order());
  for (int i = 0; i < label.order(); ++i)
    blocks.push_back(TwoByTwo<R>{R::one(), label.s[i], R::one(), label.t[i]});
  return blocks;
}

}  // namespace tangent
