#pragma once

/**
 * @file reference.hpp
 * @brief Serial reference implementations.
 *
 * Every closed form and parallel kernel in the library has an independent,
 * deliberately naive counterpart here: polynomial multiplication with
 * explicit quotient reduction, Kronecker products by recursion, Gaussian
 * elimination, determinants by elimination, and serial dense kernels.
 * Tests and the verification suites compare the two routes; benchmarks
 * time them against each other.  Nothing here is performance-tuned.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "tangent/anchor.hpp"
#include "tangent/hyperlin.hpp"
#include "tangent/hypercube.hpp"
#include "tangent/ring.hpp"
#include "tangent/talg.hpp"

namespace tangent::ref {

/**
 * Product in K^n_(t,s) the long way: multiply representatives in
 * K[X_1..X_n] and reduce every X_i^2 to (t_i + s_i) X_i - t_i s_i.  For
 * multilinear inputs the product of monomials X^A X^B carries the squared
 * block A & B; expanding each squared factor over subsets S of A & B gives
 * the normal form directly.
 */
template <Ring R>
TangentElement<R> mul_poly_reduce(const TangentElement<R>& x, const TangentElement<R>& y) {
  if (!(x.label() == y.label())) throw std::invalid_argument("mul_poly_reduce: label mismatch");
  const TimeLabel<R>& label = x.label();
  const std::uint32_t size = static_cast<std::uint32_t>(x.coeff_count());
  std::vector<R> out(size, R::zero());
  for (std::uint32_t a = 0; a < size; ++a) {
    if (x.coeff(a).is_zero()) continue;
    for (std::uint32_t b = 0; b < size; ++b) {
      if (y.coeff(b).is_zero()) continue;
      const R xy = x.coeff(a) * y.coeff(b);
      const std::uint32_t squared = a & b;
      const std::uint32_t rest = a ^ b;
      // Expand prod_{i in squared} ((t_i + s_i) X_i - t_i s_i).
      std::uint32_t sub = squared;
      while (true) {
        R w = xy;
        for (int i = 0; i < label.order(); ++i) {
          const std::uint32_t bit = std::uint32_t{1} << i;
          if (!(squared & bit)) continue;
          if (sub & bit)
            w *= label.t[i] + label.s[i];
          else
            w *= -(label.t[i] * label.s[i]);
        }
        out[rest | sub] += w;
        if (sub == 0) break;
        sub = (sub - 1) & squared;
      }
    }
  }
  return TangentElement<R>(label, std::move(out));
}

/// Generic dense matrix as rows, for the naive routes below.
template <Ring R>
using Rows = std::vector<std::vector<R>>;

template <Ring R>
Rows<R> to_rows(const CubeMatrix<R>& m) {
  Rows<R> rows(m.size(), std::vector<R>(m.size(), R::zero()));
  for (std::uint32_t r = 0; r < m.size(); ++r)
    for (std::uint32_t c = 0; c < m.size(); ++c) rows[r][c] = m.at(r, c);
  return rows;
}

template <Ring R>
CubeMatrix<R> from_rows(int n, const Rows<R>& rows) {
  CubeMatrix<R> m(n);
  for (std::uint32_t r = 0; r < m.size(); ++r)
    for (std::uint32_t c = 0; c < m.size(); ++c) m.at(r, c) = rows[r][c];
  return m;
}

/**
 * Kronecker product by recursion: fold blocks left to right, each new
 * block becoming the coarse index over everything built so far.  This
 * matches the subset mask order (element i at bit i-1).
 */
template <Ring R>
CubeMatrix<R> kron_recursive(const std::vector<TwoByTwo<R>>& blocks) {
  Rows<R> acc{{R::one()}};
  for (const auto& f : blocks) {
    const std::size_t m = acc.size();
    Rows<R> next(2 * m, std::vector<R>(2 * m, R::zero()));
    const R coarse[2][2] = {{f.a, f.b}, {f.c, f.d}};
    for (std::size_t r = 0; r < 2 * m; ++r)
      for (std::size_t c = 0; c < 2 * m; ++c)
        next[r][c] = coarse[r / m][c / m] * acc[r % m][c % m];
    acc = std::move(next);
  }
  return from_rows(static_cast<int>(blocks.size()), acc);
}

/**
 * Exact inverse by Gaussian elimination on the augmented system.  Pivots
 * must be units; returns nullopt when no unit pivot exists in a column.
 */
template <Ring R>
std::optional<CubeMatrix<R>> gauss_inverse(const CubeMatrix<R>& m) {
  const std::size_t size = m.size();
  Rows<R> a = to_rows(m);
  Rows<R> inv(size, std::vector<R>(size, R::zero()));
  for (std::size_t i = 0; i < size; ++i) inv[i][i] = R::one();

  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = size;
    std::optional<R> pivot_inv;
    for (std::size_t r = col; r < size; ++r) {
      if (auto piv = a[r][col].try_invert()) {
        pivot = r;
        pivot_inv = piv;
        break;
      }
    }
    if (pivot == size) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    for (std::size_t c = 0; c < size; ++c) {
      a[col][c] *= *pivot_inv;
      inv[col][c] *= *pivot_inv;
    }
    for (std::size_t r = 0; r < size; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const R factor = a[r][col];
      for (std::size_t c = 0; c < size; ++c) {
        a[r][c] -= factor * a[col][c];
        inv[r][c] -= factor * inv[col][c];
      }
    }
  }
  return from_rows(m.dim(), inv);
}

/**
 * Determinant by elimination with unit pivots and row swaps.  Exact over
 * a field; a column with no unit pivot and all zeros below means zero.
 */
template <Ring R>
R det_naive(const CubeMatrix<R>& m) {
  const std::size_t size = m.size();
  Rows<R> a = to_rows(m);
  R det = R::one();
  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = size;
    for (std::size_t r = col; r < size; ++r) {
      if (a[r][col].try_invert()) {
        pivot = r;
        break;
      }
    }
    if (pivot == size) {
      bool all_zero = true;
      for (std::size_t r = col; r < size; ++r) all_zero = all_zero && a[r][col].is_zero();
      if (all_zero) return R::zero();
      throw NotInvertibleError("det_naive: non-unit nonzero pivot column");
    }
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    const R inv = *a[col][col].try_invert();
    for (std::size_t r = col + 1; r < size; ++r) {
      if (a[r][col].is_zero()) continue;
      const R factor = a[r][col] * inv;
      for (std::size_t c = col; c < size; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  return det;
}

/// Plain serial dense multiply: the reference for kernels::multiply.
template <Ring R>
CubeMatrix<R> multiply_serial(const CubeMatrix<R>& lhs, const CubeMatrix<R>& rhs) {
  if (lhs.dim() != rhs.dim()) throw std::invalid_argument("multiply_serial: dimension mismatch");
  CubeMatrix<R> out(lhs.dim());
  for (std::uint32_t r = 0; r < lhs.size(); ++r)
    for (std::uint32_t k = 0; k < lhs.size(); ++k) {
      if (lhs.at(r, k).is_zero()) continue;
      for (std::uint32_t c = 0; c < lhs.size(); ++c)
        out.at(r, c) += lhs.at(r, k) * rhs.at(k, c);
    }
  return out;
}

/// Serial anchor application through the materialized matrix: the
/// reference for the lazy entrywise route.
template <Ring R>
CubeElement<R> anchor_apply_via_matrix(const CubeMatrix<R>& anchor, const TangentElement<R>& x) {
  return CubeElement<R>(anchor.dim(), anchor.apply(x.coeffs()));
}

}  // namespace tangent::ref
