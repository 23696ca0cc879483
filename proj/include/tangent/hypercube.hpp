#pragma once

/**
 * @file hypercube.hpp
 * @brief Index combinatorics of the power set P(n) and time labels.
 *
 * Subsets of {1..n} are bit masks: bit i-1 set means element i is in the
 * subset.  Numeric mask order then coincides with the subset order used
 * throughout for coefficient vectors and matrix rows/columns:
 * (emptyset, {1}, {2}, {1,2}, {3}, ...).  Anchor and Kronecker row/column
 * layout depends on this choice, so it is fixed here once.
 */

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tangent/ring.hpp"

namespace tangent {

inline constexpr int kMaxHypercubeDim = 20;

/// A subset of {1..n} as a bit mask within an ambient dimension n.
struct SubsetIdx {
  std::uint32_t bits = 0;
  int n = 0;

  SubsetIdx() = default;
  SubsetIdx(std::uint32_t bits_, int n_) : bits(bits_), n(n_) {
    if (n_ < 0 || n_ > kMaxHypercubeDim) throw std::invalid_argument("SubsetIdx: dimension out of range");
    if (n_ < 32 && bits_ >= (std::uint32_t{1} << n_)) throw std::invalid_argument("SubsetIdx: bits exceed dimension");
  }

  static SubsetIdx empty(int n) { return SubsetIdx(0, n); }
  static SubsetIdx full(int n) { return SubsetIdx(mask_all(n), n); }

  /// Builds {1..n}-elements from a list like {1,3}.
  static SubsetIdx of(std::initializer_list<int> elems, int n) {
    std::uint32_t b = 0;
    for (int e : elems) {
      if (e < 1 || e > n) throw std::invalid_argument("SubsetIdx: element out of range");
      b |= std::uint32_t{1} << (e - 1);
    }
    return SubsetIdx(b, n);
  }

  static std::uint32_t mask_all(int n) {
    return n == 0 ? 0u : ((std::uint32_t{1} << n) - 1u);
  }

  bool contains(int element) const { return (bits >> (element - 1)) & 1u; }
  int cardinality() const { return std::popcount(bits); }

  SubsetIdx complement() const { return SubsetIdx(~bits & mask_all(n), n); }

  bool operator==(const SubsetIdx&) const = default;

  /// Elements in increasing order, e.g. [1,3].
  std::vector<int> elements() const {
    std::vector<int> out;
    for (int i = 1; i <= n; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int e : elements()) {
      if (!first) s += ",";
      s += std::to_string(e);
      first = false;
    }
    return s + "}";
  }
};

namespace detail {
inline void check_same_dim(const SubsetIdx& a, const SubsetIdx& b) {
  if (a.n != b.n) throw std::invalid_argument("SubsetIdx: dimension mismatch");
}
}  // namespace detail

inline SubsetIdx set_union(const SubsetIdx& a, const SubsetIdx& b) {
  detail::check_same_dim(a, b);
  return SubsetIdx(a.bits | b.bits, a.n);
}

inline SubsetIdx set_intersect(const SubsetIdx& a, const SubsetIdx& b) {
  detail::check_same_dim(a, b);
  return SubsetIdx(a.bits & b.bits, a.n);
}

inline SubsetIdx set_symdiff(const SubsetIdx& a, const SubsetIdx& b) {
  detail::check_same_dim(a, b);
  return SubsetIdx(a.bits ^ b.bits, a.n);
}

/// Number of subsets of {1..n}.
inline std::size_t subset_count(int n) { return std::size_t{1} << n; }

/// Ascending-mask iteration over P(n): yields 0, 1, ..., 2^n - 1.
inline std::vector<SubsetIdx> all_subsets(int n) {
  std::vector<SubsetIdx> out;
  out.reserve(subset_count(n));
  for (std::uint32_t m = 0; m < subset_count(n); ++m) out.emplace_back(m, n);
  return out;
}

/**
 * Product of the selected entries, Prod_{k in A} vals[k-1].
 * The empty subset gives one (empty product convention).
 */
template <Ring R>
R product_over(const std::vector<R>& vals, const SubsetIdx& a) {
  if (static_cast<int>(vals.size()) != a.n) throw std::invalid_argument("product_over: size mismatch");
  R acc = R::one();
  for (int i = 1; i <= a.n; ++i)
    if (a.contains(i)) acc *= vals[i - 1];
  return acc;
}

enum class Regularity { regular, singular, mixed };

inline const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::regular: return "regular";
    case Regularity::singular: return "singular";
    case Regularity::mixed: return "mixed";
  }
  return "?";
}

/**
 * A point (t,s) of the scaloid: the pair of time-parameter vectors
 * labelling a tangent algebra.  Regular when every t_i - s_i is a unit,
 * singular when none is, mixed otherwise.  The empty label (n = 0) counts
 * as regular: its anchor is the identity of K.
 */
template <Ring R>
struct TimeLabel {
  std::vector<R> t;
  std::vector<R> s;

  TimeLabel() = default;
  TimeLabel(std::vector<R> t_, std::vector<R> s_) : t(std::move(t_)), s(std::move(s_)) {
    if (t.size() != s.size()) throw std::invalid_argument("TimeLabel: t/s length mismatch");
    if (static_cast<int>(t.size()) > kMaxHypercubeDim) throw std::invalid_argument("TimeLabel: order out of range");
  }

  static TimeLabel empty() { return TimeLabel({}, {}); }

  /// First-order label.
  static TimeLabel first_order(const R& t1, const R& s1) { return TimeLabel({t1}, {s1}); }

  /// The most singular label t = s = 0 at order n.
  static TimeLabel zero(int n) {
    return TimeLabel(std::vector<R>(n, R::zero()), std::vector<R>(n, R::zero()));
  }

  int order() const { return static_cast<int>(t.size()); }

  std::vector<R> diff() const {
    std::vector<R> d(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) d[i] = t[i] - s[i];
    return d;
  }

  Regularity classify() const {
    int units = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      if ((t[i] - s[i]).try_invert()) ++units;
    if (units == static_cast<int>(t.size())) return Regularity::regular;
    if (units == 0) return Regularity::singular;
    return Regularity::mixed;
  }

  bool is_regular() const { return classify() == Regularity::regular; }

  /// Product (t-s)_n of all time differences; the anchor determinant root.
  R diff_product() const {
    R acc = R::one();
    for (std::size_t i = 0; i < t.size(); ++i) acc *= t[i] - s[i];
    return acc;
  }

  /// Juxtaposition (t,s) oplus (t',s'): the scaloid monoid operation.
  TimeLabel oplus(const TimeLabel& o) const {
    std::vector<R> tt = t, ss = s;
    tt.insert(tt.end(), o.t.begin(), o.t.end());
    ss.insert(ss.end(), o.s.begin(), o.s.end());
    return TimeLabel(std::move(tt), std::move(ss));
  }

  bool operator==(const TimeLabel&) const = default;
};

/// Thrown where a regular label is required.
class NotRegularError : public std::runtime_error {
 public:
  explicit NotRegularError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tangent
