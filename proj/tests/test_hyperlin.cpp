#include <doctest.h>

#include "tangent/hyperlin.hpp"
#include "tangent/reference.hpp"
#include "tangent/verify.hpp"

using tangent::CubeMatrix;
using tangent::Exec;
using tangent::SubsetIdx;
using tangent::TwoByTwo;
using Q = tangent::RationalScalar;

namespace {

tangent::verify::Rng rng_for(const char* prop, int i) {
  return tangent::verify::Rng(tangent::verify::case_seed(17, "hyperlin", prop, i));
}

}  // namespace

TEST_SUITE("hyperlin") {
  TEST_CASE("closed-form entry at n=2") {
    tangent::verify::Rng rng = rng_for("entry", 0);
    const auto blocks = rng.blocks(2, true);
    const auto m = tangent::kron_n(blocks);
    // row {1}, column {2} picks up c_1 b_2
    CHECK(m.at(SubsetIdx::of({1}, 2), SubsetIdx::of({2}, 2)) == blocks[0].c * blocks[1].b);
    CHECK(m.at(SubsetIdx::empty(2), SubsetIdx::empty(2)) == blocks[0].a * blocks[1].a);
    CHECK(m.at(SubsetIdx::full(2), SubsetIdx::full(2)) == blocks[0].d * blocks[1].d);
  }

  TEST_CASE("identity blocks give the identity") {
    const std::vector<TwoByTwo<Q>> blocks(3, TwoByTwo<Q>::identity());
    CHECK(tangent::kron_n(blocks).is_identity());
    CHECK(tangent::kron_det(blocks) == Q::one());
    CHECK(kron_inverse(blocks)->is_identity());
    CHECK_THROWS_AS(tangent::kron_n(std::vector<TwoByTwo<Q>>{}), std::invalid_argument);
  }

  TEST_CASE("closed form matches the recursive Kronecker product") {
    for (int i = 0; i < 120; ++i) {
      auto rng = rng_for("recursion", i);
      const int n = rng.range(1, 5);
      const auto blocks = rng.blocks(n, true);
      CHECK(tangent::kron_n(blocks) == tangent::ref::kron_recursive(blocks));
    }
  }

  TEST_CASE("serial and parallel construction agree") {
    auto rng = rng_for("exec", 0);
    const auto blocks = rng.blocks(4, true);
    CHECK(tangent::kron_n(blocks, Exec::serial) == tangent::kron_n(blocks, Exec::parallel));
    const auto a = tangent::kron_n(blocks);
    CHECK(tangent::kernels::multiply(a, a, Exec::serial) ==
          tangent::kernels::multiply(a, a, Exec::parallel));
    CHECK(tangent::kernels::multiply(a, a, Exec::serial) == tangent::ref::multiply_serial(a, a));
  }

  TEST_CASE("determinant closed form") {
    // dets 1 and 2 at n=2 give 4
    const std::vector<TwoByTwo<Q>> blocks{TwoByTwo<Q>::identity(),
                                          {Q(2), Q(0), Q(0), Q(1)}};
    CHECK(tangent::kron_det(blocks) == Q(4));
    CHECK(tangent::ref::det_naive(tangent::kron_n(blocks)) == Q(4));
    // one singular block kills the determinant
    const std::vector<TwoByTwo<Q>> singular{{Q(1), Q(2), Q(2), Q(4)}, TwoByTwo<Q>::identity()};
    CHECK(tangent::kron_det(singular).is_zero());
    // n=1 base case
    const std::vector<TwoByTwo<Q>> one{{Q(3), Q(4), Q(5), Q(7)}};
    CHECK(tangent::kron_det(one) == Q(1));
    CHECK(tangent::kron_det(one) == one[0].det());
    for (int i = 0; i < 120; ++i) {
      auto rng = rng_for("det", i);
      const auto blocks_i = rng.blocks(rng.range(1, 4), true);
      CHECK(tangent::kron_det(blocks_i) == tangent::ref::det_naive(tangent::kron_n(blocks_i)));
    }
  }

  TEST_CASE("closed-form inverse matches Gaussian elimination") {
    for (int i = 0; i < 120; ++i) {
      auto rng = rng_for("inverse", i);
      const int n = rng.range(1, 4);
      const auto blocks = rng.blocks(n, false);
      const auto inv = tangent::kron_inverse(blocks);
      REQUIRE(inv);
      CHECK(*inv == *tangent::ref::gauss_inverse(tangent::kron_n(blocks)));
      CHECK(tangent::kernels::multiply(*inv, tangent::kron_n(blocks)).is_identity());
    }
    const std::vector<TwoByTwo<Q>> singular{{Q(1), Q(1), Q(1), Q(1)}};
    CHECK(!tangent::kron_inverse(singular));
    CHECK(!tangent::ref::gauss_inverse(tangent::kron_n(singular)));
  }

  TEST_CASE("second-order inverse is the Kronecker product of block inverses") {
    for (int i = 0; i < 40; ++i) {
      auto rng = rng_for("inv2", i);
      const auto blocks = rng.blocks(2, false);
      const Q a1 = blocks[0].a, b1 = blocks[0].b, c1 = blocks[0].c, d1 = blocks[0].d;
      const Q a2 = blocks[1].a, b2 = blocks[1].b, c2 = blocks[1].c, d2 = blocks[1].d;
      const Q pre = *(blocks[0].det() * blocks[1].det()).try_invert();
      const std::vector<std::vector<Q>> expected{
          {d1 * d2, -b1 * d2, -d1 * b2, b1 * b2},
          {-c1 * d2, a1 * d2, c1 * b2, -a1 * b2},
          {-d1 * c2, b1 * c2, d1 * a2, -b1 * a2},
          {c1 * c2, -a1 * c2, -c1 * a2, a1 * a2},
      };
      const auto inv = tangent::kron_inverse(blocks);
      REQUIRE(inv);
      for (std::uint32_t r = 0; r < 4; ++r)
        for (std::uint32_t c = 0; c < 4; ++c) CHECK(inv->at(r, c) == pre * expected[r][c]);
    }
  }

  TEST_CASE("sign operators at n=1 and their relations") {
    const auto i1 = tangent::sign_op_i<Q>(1);
    const auto j1 = tangent::sign_op_j<Q>(1);
    const auto k1 = tangent::sign_op_k<Q>(1);
    CHECK(i1.at(0u, 0u) == Q(1));
    CHECK(i1.at(1u, 1u) == Q(-1));
    CHECK(i1.at(0u, 1u).is_zero());
    CHECK(j1.at(0u, 1u) == Q(1));
    CHECK(j1.at(1u, 0u) == Q(-1));
    CHECK(k1.at(0u, 1u) == Q(1));
    CHECK(k1.at(1u, 0u) == Q(1));
    for (int n = 1; n <= 4; ++n) {
      const auto kn = tangent::sign_op_k<Q>(n);
      CHECK(tangent::kernels::multiply(kn, kn).is_identity());
      const auto jn = tangent::sign_op_j<Q>(n);
      const auto jn_inv = tangent::sign_op_j_inverse<Q>(n);
      CHECK(tangent::kernels::multiply(jn, jn_inv).is_identity());
      CHECK(jn_inv == ((n % 2) ? jn.scaled(-Q::one()) : jn));
    }
  }

  TEST_CASE("adjugate identity holds even for singular blocks") {
    for (int i = 0; i < 120; ++i) {
      auto rng = rng_for("adjugate", i);
      const int n = rng.range(1, 4);
      auto blocks = rng.blocks(n, true);
      if (i % 2 == 0) {
        // force an exactly singular block
        const Q lambda = rng.rational();
        blocks[0].c = blocks[0].a * lambda;
        blocks[0].d = blocks[0].b * lambda;
      }
      const auto f = tangent::kron_n(blocks);
      Q det_prod = Q::one();
      for (const auto& b : blocks) det_prod *= b.det();
      const auto adj = tangent::symplectic_adjugate(blocks);
      CHECK(adj == tangent::symplectic_adjugate(f));
      CHECK(tangent::kernels::multiply(f, adj) == CubeMatrix<Q>::identity(n).scaled(det_prod));
    }
  }
}
