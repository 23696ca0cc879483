#pragma once

/**
 * @file hyperlin.hpp
 * @brief Hypercubic linear algebra: n-fold Kronecker products of 2x2 blocks.
 *
 * A CubeMatrix is a 2^n x 2^n matrix indexed by P(n) x P(n) in mask order.
 * For f = f_1 (x) ... (x) f_n with blocks f_i = ((a_i,b_i),(c_i,d_i)) the
 * closed forms implemented here are, writing products over index subsets:
 *
 *   entry:    f_{A,B}      = a_{A^c&B^c} b_{A^c&B} c_{A&B^c} d_{A&B}
 *   inverse:  (f^-1)_{A,B} = (-1)^|A xor B| a_{A&B} b_{A^c&B} c_{A&B^c} d_{A^c&B^c} / prod det f_i
 *   det:      det f        = (prod det f_i)^(2^(n-1))
 *
 * (rows A, columns B).  Entry loops are data-parallel; the hot kernels use
 * OpenMP when built with it, and tests compare them against the serial
 * naive routes in reference.hpp.
 */

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tangent/hypercube.hpp"
#include "tangent/ring.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tangent {

enum class Exec { serial, parallel };

/// 2x2 block ((a,b),(c,d)).
template <Ring R>
struct TwoByTwo {
  R a, b, c, d;

  R det() const { return a * d - b * c; }

  /// Adjugate ((d,-b),(-c,a)); the symplectic adjoint J X^T J^-1 at n = 1.
  TwoByTwo adjugate() const { return TwoByTwo{d, -b, -c, a}; }

  static TwoByTwo identity() { return TwoByTwo{R::one(), R::zero(), R::zero(), R::one()}; }

  bool operator==(const TwoByTwo&) const = default;
};

/// Dense 2^n x 2^n matrix over P(n) x P(n), row-major in mask order.
template <Ring R>
class CubeMatrix {
 public:
  CubeMatrix() = default;
  explicit CubeMatrix(int n) : n_(n), size_(subset_count(n)), entries_(size_ * size_, R::zero()) {
    if (n < 0 || n > kMaxHypercubeDim) throw std::invalid_argument("CubeMatrix: dimension out of range");
  }

  int dim() const { return n_; }
  std::size_t size() const { return size_; }

  R& at(std::uint32_t row, std::uint32_t col) { return entries_[row * size_ + col]; }
  const R& at(std::uint32_t row, std::uint32_t col) const { return entries_[row * size_ + col]; }

  R& at(const SubsetIdx& row, const SubsetIdx& col) { return at(row.bits, col.bits); }
  const R& at(const SubsetIdx& row, const SubsetIdx& col) const { return at(row.bits, col.bits); }

  const std::vector<R>& entries() const { return entries_; }

  bool operator==(const CubeMatrix&) const = default;

  static CubeMatrix identity(int n) {
    CubeMatrix m(n);
    for (std::uint32_t i = 0; i < m.size_; ++i) m.at(i, i) = R::one();
    return m;
  }

  bool is_identity() const {
    for (std::uint32_t r = 0; r < size_; ++r)
      for (std::uint32_t c = 0; c < size_; ++c)
        if (!(at(r, c) == (r == c ? R::one() : R::zero()))) return false;
    return true;
  }

  CubeMatrix transpose() const {
    CubeMatrix m(n_);
    for (std::uint32_t r = 0; r < size_; ++r)
      for (std::uint32_t c = 0; c < size_; ++c) m.at(c, r) = at(r, c);
    return m;
  }

  CubeMatrix scaled(const R& k) const {
    CubeMatrix m = *this;
    for (auto& e : m.entries_) e *= k;
    return m;
  }

  std::vector<R> apply(const std::vector<R>& x) const {
    if (x.size() != size_) throw std::invalid_argument("CubeMatrix::apply: size mismatch");
    std::vector<R> y(size_, R::zero());
    for (std::uint32_t r = 0; r < size_; ++r) {
      R acc = R::zero();
      for (std::uint32_t c = 0; c < size_; ++c) acc += at(r, c) * x[c];
      y[r] = acc;
    }
    return y;
  }

 private:
  int n_ = 0;
  std::size_t size_ = 1;
  std::vector<R> entries_;
};

namespace kernels {

/**
 * Fills a CubeMatrix from an entry formula, parallel over rows.
 * The serial counterpart used as reference lives in reference.hpp.
 */
template <Ring R, class EntryFn>
CubeMatrix<R> build_from_entries(int n, EntryFn&& entry, Exec exec = Exec::parallel) {
  CubeMatrix<R> m(n);
  const std::int64_t size = static_cast<std::int64_t>(subset_count(n));
#ifdef _OPENMP
  const bool par = exec == Exec::parallel && size >= 64;
#pragma omp parallel for schedule(static) if (par)
#else
  (void)exec;
#endif
  for (std::int64_t r = 0; r < size; ++r)
    for (std::int64_t c = 0; c < size; ++c)
      m.at(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)) =
          entry(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c));
  return m;
}

/// Dense multiply, parallel over output rows; inner loops stream rows of
/// the right factor.
template <Ring R>
CubeMatrix<R> multiply(const CubeMatrix<R>& lhs, const CubeMatrix<R>& rhs, Exec exec = Exec::parallel) {
  if (lhs.dim() != rhs.dim()) throw std::invalid_argument("multiply: dimension mismatch");
  CubeMatrix<R> out(lhs.dim());
  const std::int64_t size = static_cast<std::int64_t>(lhs.size());
#ifdef _OPENMP
  const bool par = exec == Exec::parallel && size >= 64;
#pragma omp parallel for schedule(static) if (par)
#else
  (void)exec;
#endif
  for (std::int64_t r = 0; r < size; ++r) {
    for (std::int64_t k = 0; k < size; ++k) {
      const R& a = lhs.at(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(k));
      if (a.is_zero()) continue;
      for (std::int64_t c = 0; c < size; ++c)
        out.at(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c)) +=
            a * rhs.at(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(c));
    }
  }
  return out;
}

}  // namespace kernels

namespace detail {

template <Ring R>
void check_blocks(const std::vector<TwoByTwo<R>>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("kron: empty block list");
  if (static_cast<int>(blocks.size()) > kMaxHypercubeDim)
    throw std::invalid_argument("kron: too many blocks");
}

/// Per-subset product of one of the four block coefficients.
template <Ring R, class Pick>
R coeff_product(const std::vector<TwoByTwo<R>>& blocks, std::uint32_t mask, Pick&& pick) {
  R acc = R::one();
  for (std::size_t i = 0; i < blocks.size(); ++i)
    if ((mask >> i) & 1u) acc *= pick(blocks[i]);
  return acc;
}

}  // namespace detail

/// Closed-form entry of the n-fold Kronecker product at (row A, col B).
template <Ring R>
R kron_entry(const std::vector<TwoByTwo<R>>& blocks, std::uint32_t row_a, std::uint32_t col_b) {
  const std::uint32_t all = SubsetIdx::mask_all(static_cast<int>(blocks.size()));
  const std::uint32_t ac = ~row_a & all;
  const std::uint32_t bc = ~col_b & all;
  R v = detail::coeff_product(blocks, ac & bc, [](const TwoByTwo<R>& f) { return f.a; });
  v *= detail::coeff_product(blocks, ac & col_b, [](const TwoByTwo<R>& f) { return f.b; });
  v *= detail::coeff_product(blocks, row_a & bc, [](const TwoByTwo<R>& f) { return f.c; });
  v *= detail::coeff_product(blocks, row_a & col_b, [](const TwoByTwo<R>& f) { return f.d; });
  return v;
}

/// n-fold Kronecker product of 2x2 blocks via the closed-form entries.
template <Ring R>
CubeMatrix<R> kron_n(const std::vector<TwoByTwo<R>>& blocks, Exec exec = Exec::parallel) {
  detail::check_blocks(blocks);
  return kernels::build_from_entries<R>(
      static_cast<int>(blocks.size()),
      [&](std::uint32_t r, std::uint32_t c) { return kron_entry(blocks, r, c); }, exec);
}

/// det(kron_n(blocks)) = (prod det f_i)^(2^(n-1)) without materializing anything.
template <Ring R>
R kron_det(const std::vector<TwoByTwo<R>>& blocks) {
  detail::check_blocks(blocks);
  R p = R::one();
  for (const auto& f : blocks) p *= f.det();
  R acc = R::one();
  const std::size_t reps = subset_count(static_cast<int>(blocks.size()) - 1);
  for (std::size_t i = 0; i < reps; ++i) acc *= p;
  return acc;
}

/**
 * Closed-form inverse.  Fails (nullopt) when some block determinant is not
 * a unit.  The product with kron_n(blocks) is exactly the identity.
 */
template <Ring R>
std::optional<CubeMatrix<R>> kron_inverse(const std::vector<TwoByTwo<R>>& blocks, Exec exec = Exec::parallel) {
  detail::check_blocks(blocks);
  R det_prod = R::one();
  for (const auto& f : blocks) {
    if (!f.det().try_invert()) return std::nullopt;
    det_prod *= f.det();
  }
  const R inv_det = *det_prod.try_invert();
  const std::uint32_t all = SubsetIdx::mask_all(static_cast<int>(blocks.size()));
  auto entry = [&](std::uint32_t r, std::uint32_t c) {
    const std::uint32_t rc = ~r & all;
    const std::uint32_t cc = ~c & all;
    R v = detail::coeff_product(blocks, r & c, [](const TwoByTwo<R>& f) { return f.a; });
    v *= detail::coeff_product(blocks, rc & c, [](const TwoByTwo<R>& f) { return f.b; });
    v *= detail::coeff_product(blocks, r & cc, [](const TwoByTwo<R>& f) { return f.c; });
    v *= detail::coeff_product(blocks, rc & cc, [](const TwoByTwo<R>& f) { return f.d; });
    v *= inv_det;
    return (std::popcount(r ^ c) & 1) ? -v : v;
  };
  return kernels::build_from_entries<R>(static_cast<int>(blocks.size()), entry, exec);
}

/// Diagonal sign operator: I_n E_A = (-1)^|A| E_A.
template <Ring R>
CubeMatrix<R> sign_op_i(int n) {
  CubeMatrix<R> m(n);
  for (std::uint32_t a = 0; a < m.size(); ++a)
    m.at(a, a) = (std::popcount(a) & 1) ? -R::one() : R::one();
  return m;
}

/// Complement swap: K_n E_A = E_{A^c}.
template <Ring R>
CubeMatrix<R> sign_op_k(int n) {
  CubeMatrix<R> m(n);
  const std::uint32_t all = SubsetIdx::mask_all(n);
  for (std::uint32_t a = 0; a < m.size(); ++a) m.at(~a & all, a) = R::one();
  return m;
}

/// Symplectic form: J_n E_A = (-1)^|A^c| E_{A^c}; J_n^-1 = (-1)^n J_n.
template <Ring R>
CubeMatrix<R> sign_op_j(int n) {
  CubeMatrix<R> m(n);
  const std::uint32_t all = SubsetIdx::mask_all(n);
  for (std::uint32_t a = 0; a < m.size(); ++a) {
    const std::uint32_t ac = ~a & all;
    m.at(ac, a) = (std::popcount(ac) & 1) ? -R::one() : R::one();
  }
  return m;
}

template <Ring R>
CubeMatrix<R> sign_op_j_inverse(int n) {
  CubeMatrix<R> m = sign_op_j<R>(n);
  return (n & 1) ? m.scaled(-R::one()) : m;
}

/**
 * Symplectic adjugate of a Kronecker product: the blockwise 2x2 adjugates
 * tensored together, equal to J_n f^T J_n^-1.  Satisfies
 * f * adjugate(f) = (prod det f_i) * id even when blocks are singular.
 */
template <Ring R>
CubeMatrix<R> symplectic_adjugate(const std::vector<TwoByTwo<R>>& blocks, Exec exec = Exec::parallel) {
  detail::check_blocks(blocks);
  std::vector<TwoByTwo<R>> adj;
  adj.reserve(blocks.size());
  for (const auto& f : blocks) adj.push_back(f.adjugate());
  return kron_n(adj, exec);
}

/// Matrix-level symplectic adjugate J_n X^T J_n^-1 for any cube matrix.
template <Ring R>
CubeMatrix<R> symplectic_adjugate(const CubeMatrix<R>& x) {
  const int n = x.dim();
  return kernels::multiply(kernels::multiply(sign_op_j<R>(n), x.transpose()), sign_op_j_inverse<R>(n));
}

}  // namespace tangent
