#include <doctest.h>

#include "tangent/anchor.hpp"
#include "tangent/reference.hpp"
#include "tangent/verify.hpp"

using tangent::CubeElement;
using tangent::CubeMatrix;
using tangent::SubsetIdx;
using tangent::TangentElement;
using tangent::TimeLabel;
using Q = tangent::RationalScalar;

namespace {

tangent::verify::Rng rng_for(const char* prop, int i) {
  return tangent::verify::Rng(tangent::verify::case_seed(31, "anchor", prop, i));
}

CubeMatrix<Q> matrix_from(int n, const std::vector<std::vector<long>>& rows) {
  CubeMatrix<Q> m(n);
  for (std::uint32_t r = 0; r < m.size(); ++r)
    for (std::uint32_t c = 0; c < m.size(); ++c) m.at(r, c) = Q(rows[r][c]);
  return m;
}

}  // namespace

TEST_SUITE("anchor") {
  TEST_CASE("second-order anchor rows") {
    auto rng = rng_for("rows", 0);
    const auto label = rng.any_label(2);
    const Q t1 = label.t[0], t2 = label.t[1], s1 = label.s[0], s2 = label.s[1];
    const auto m = anchor_matrix(label);
    const std::vector<std::vector<Q>> expected{
        {Q(1), s1, s2, s1 * s2},
        {Q(1), t1, s2, t1 * s2},
        {Q(1), s1, t2, s1 * t2},
        {Q(1), t1, t2, t1 * t2},
    };
    for (std::uint32_t r = 0; r < 4; ++r)
      for (std::uint32_t c = 0; c < 4; ++c) CHECK(m.at(r, c) == expected[r][c]);
  }

  TEST_CASE("unit target label and its inverse") {
    const TimeLabel<Q> label({Q(1), Q(1)}, {Q(0), Q(0)});
    CHECK(anchor_matrix(label) ==
          matrix_from(2, {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 1, 1, 1}}));
    CHECK(anchor_inverse_matrix(label) ==
          matrix_from(2, {{1, 0, 0, 0}, {-1, 1, 0, 0}, {-1, 0, 1, 0}, {1, -1, -1, 1}}));
    CHECK(tangent::kernels::multiply(anchor_inverse_matrix(label), anchor_matrix(label)).is_identity());
  }

  TEST_CASE("second-order inverse rows") {
    for (int i = 0; i < 40; ++i) {
      auto rng = rng_for("inv-rows", i);
      const auto label = rng.regular_label(2);
      const Q t1 = label.t[0], t2 = label.t[1], s1 = label.s[0], s2 = label.s[1];
      const Q pre = *((t1 - s1) * (t2 - s2)).try_invert();
      const auto m = anchor_inverse_matrix(label);
      const std::vector<std::vector<Q>> expected{
          {t1 * t2, -s1 * t2, -t1 * s2, s1 * s2},
          {-t2, t2, s2, -s2},
          {-t1, s1, t1, -s1},
          {Q(1), Q(-1), Q(-1), Q(1)},
      };
      for (std::uint32_t r = 0; r < 4; ++r)
        for (std::uint32_t c = 0; c < 4; ++c) CHECK(m.at(r, c) == pre * expected[r][c]);
    }
  }

  TEST_CASE("symmetric label entries") {
    for (int i = 0; i < 40; ++i) {
      auto rng = rng_for("symmetric", i);
      const int n = rng.range(1, 3);
      std::vector<Q> s(n), t(n);
      for (int k = 0; k < n; ++k) {
        s[k] = rng.rational();
        t[k] = -s[k];
      }
      const TimeLabel<Q> label(t, s);
      const auto m = anchor_matrix(label);
      for (std::uint32_t b = 0; b < m.size(); ++b)
        for (std::uint32_t a = 0; a < m.size(); ++a) {
          Q expected = tangent::detail::masked_product(label.s, a);
          if (std::popcount(a & b) & 1) expected = -expected;
          CHECK(m.at(b, a) == expected);
        }
    }
  }

  TEST_CASE("anchor equals the Kronecker product of first-order anchors") {
    for (int i = 0; i < 60; ++i) {
      auto rng = rng_for("kron-route", i);
      const auto label = rng.any_label(1 + i % 6);
      CHECK(anchor_matrix(label) == kron_n(anchor_blocks(label)));
    }
  }

  TEST_CASE("evaluation points at order two") {
    auto rng = rng_for("points", 1);
    const auto label = rng.any_label(2);
    const auto x = rng.element(label);
    const auto cube = anchor_apply(x);
    const Q t1 = label.t[0], t2 = label.t[1], s1 = label.s[0], s2 = label.s[1];
    const Q v0 = x.coeff(0u), v1 = x.coeff(1u), v2 = x.coeff(2u), v12 = x.coeff(3u);
    CHECK(cube.value(0u) == v0 + s1 * v1 + s2 * v2 + s1 * s2 * v12);
    CHECK(cube.value(1u) == v0 + t1 * v1 + s2 * v2 + t1 * s2 * v12);
    CHECK(cube.value(2u) == v0 + s1 * v1 + t2 * v2 + s1 * t2 * v12);
    CHECK(cube.value(3u) == v0 + t1 * v1 + t2 * v2 + t1 * t2 * v12);
  }

  TEST_CASE("anchor application is a unital ring morphism") {
    for (int i = 0; i < 100; ++i) {
      auto rng = rng_for("morphism", i);
      const auto label = rng.any_label(rng.range(0, 4));
      const auto x = rng.element(label), y = rng.element(label);
      CHECK(anchor_apply(mul(x, y)) == cube_mul(anchor_apply(x), anchor_apply(y)));
      const auto ax = anchor_apply(x), ay = anchor_apply(y), asum = anchor_apply(add(x, y));
      for (std::size_t k = 0; k < x.coeff_count(); ++k)
        CHECK(asum.value(k) == ax.value(k) + ay.value(k));
    }
    const auto label = rng_for("unital", 0).any_label(3);
    const auto constant = anchor_apply(tangent::from_base<Q, Q>(label, Q(7)));
    for (const auto& v : constant.values()) CHECK(v == Q(7));
  }

  TEST_CASE("lazy application agrees with the materialized matrix") {
    for (int i = 0; i < 60; ++i) {
      auto rng = rng_for("lazy", i);
      const auto label = rng.any_label(rng.range(0, 4));
      const auto x = rng.element(label);
      CHECK(anchor_apply(x) == tangent::ref::anchor_apply_via_matrix(anchor_matrix(label), x));
    }
  }

  TEST_CASE("inverse requires a regular label") {
    CHECK_THROWS_AS(anchor_inverse_matrix(TimeLabel<Q>({Q(2)}, {Q(2)})), tangent::NotRegularError);
    const TimeLabel<Q> mixed({Q(1), Q(0)}, {Q(0), Q(0)});
    CHECK_THROWS_AS(anchor_inverse_matrix(mixed), tangent::NotRegularError);
    CHECK(tangent::ref::det_naive(anchor_matrix(mixed)).is_zero());
  }

  TEST_CASE("float regularity is componentwise, not a product test") {
    using F = tangent::FloatScalar;
    const double saved = F::invert_epsilon();
    F::set_invert_epsilon(1e-12);
    // one difference below threshold, the other making the product large
    const TimeLabel<F> label({F(1e-13), F(1e13)}, {F(0.0), F(0.0)});
    CHECK(label.diff_product().try_invert());
    CHECK_THROWS_AS(anchor_inverse_matrix(label), tangent::NotRegularError);
    F::set_invert_epsilon(saved);
  }

  TEST_CASE("first-order inverse formula") {
    const TimeLabel<Q> label({Q(1)}, {Q(0)});
    auto rng = rng_for("inv1", 0);
    const Q y0 = rng.rational(), y1 = rng.rational();
    const CubeElement<Q> y(1, {y0, y1});
    const auto x = anchor_inverse_apply(y, label);
    CHECK(x.coeff(0u) == y0);
    CHECK(x.coeff(1u) == y1 - y0);
    CHECK(anchor_apply(x) == y);
  }

  TEST_CASE("round trips at regular labels") {
    for (int i = 0; i < 100; ++i) {
      auto rng = rng_for("roundtrip", i);
      const auto label = rng.regular_label(rng.range(1, 5));
      const auto x = rng.element(label);
      CHECK(anchor_inverse_apply(anchor_apply(x), label) == x);
      const auto m = tangent::kernels::multiply(anchor_inverse_matrix(label), anchor_matrix(label));
      CHECK(m.is_identity());
      // constant cube functions pull back to constants
      const Q c = rng.rational();
      const CubeElement<Q> constant(label.order(), std::vector<Q>(tangent::subset_count(label.order()), c));
      CHECK(anchor_inverse_apply(constant, label) == tangent::from_base<Q, Q>(label, c));
    }
  }

  TEST_CASE("determinant identity") {
    for (int i = 0; i < 60; ++i) {
      auto rng = rng_for("det", i);
      const int n = rng.range(1, 4);
      const auto label = rng.any_label(n);
      Q expected = Q::one();
      for (std::size_t k = 0; k < tangent::subset_count(n - 1); ++k) expected *= label.diff_product();
      CHECK(tangent::ref::det_naive(anchor_matrix(label)) == expected);
    }
  }

  TEST_CASE("characters") {
    const auto label = rng_for("chars", 0).any_label(1);
    auto rng = rng_for("chars", 1);
    const auto x = rng.element(label), y = rng.element(label);
    CHECK(character(label, SubsetIdx::empty(1))(x) == alpha(x));
    CHECK(character(label, SubsetIdx::full(1))(x) == beta(x));
    for (int i = 0; i < 60; ++i) {
      auto r2 = rng_for("chars2", i);
      const auto l = r2.any_label(r2.range(1, 4));
      const SubsetIdx a(static_cast<std::uint32_t>(r2.u64()) & SubsetIdx::mask_all(l.order()),
                        l.order());
      const auto chi = character(l, a);
      const auto u = r2.element(l), w = r2.element(l);
      CHECK(chi(mul(u, w)) == chi(u) * chi(w));
      CHECK(chi(tangent::from_base<Q, Q>(l, Q(9))) == Q(9));
    }
  }

  TEST_CASE("constant half symmetric label gives signed powers of one half") {
    const int n = 3;
    const Q half(1, 2);
    const TimeLabel<Q> label(std::vector<Q>(n, half), std::vector<Q>(n, -half));
    const auto m = anchor_matrix(label);
    const std::uint32_t all = SubsetIdx::mask_all(n);
    for (std::uint32_t b = 0; b < m.size(); ++b)
      for (std::uint32_t a = 0; a < m.size(); ++a) {
        Q expected = Q::one();
        for (int k = 0; k < std::popcount(a); ++k) expected *= half;
        if (std::popcount(a & ~b & all) & 1) expected = -expected;
        CHECK(m.at(b, a) == expected);
      }
  }

  TEST_CASE("module-valued elements anchor linearly") {
    using V = tangent::VecPayload<Q>;
    auto rng = rng_for("module", 0);
    const auto label = rng.regular_label(2);
    std::vector<V> coeffs;
    for (int k = 0; k < 4; ++k) coeffs.push_back(V({rng.rational(), rng.rational(), rng.rational()}));
    const TangentElement<Q, V> x(label, coeffs);
    const auto cube = anchor_apply(x);
    const auto back = anchor_inverse_apply(cube, label);
    CHECK(back == x);
    // anchor of a scaled element is the scaled anchor
    const auto scaled = anchor_apply(scale(Q(3), x));
    for (std::uint32_t a = 0; a < 4; ++a)
      CHECK(scaled.value(a) == payload_scale(Q(3), cube.value(a)));
  }
}
