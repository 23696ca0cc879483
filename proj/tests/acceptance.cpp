// Acceptance suite: one line per criterion, all checks in exact rational
// arithmetic.  Exits nonzero if any criterion fails.

#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tangent/anchor.hpp"
#include "tangent/expr.hpp"
#include "tangent/hyperlin.hpp"
#include "tangent/reference.hpp"
#include "tangent/slope.hpp"
#include "tangent/talg.hpp"
#include "tangent/verify.hpp"

using namespace tangent;
using Q = RationalScalar;
using V = VecPayload<Q>;
using verify::case_seed;
using verify::Rng;

namespace {

int g_failures = 0;
std::string g_detail;

void criterion(int index, const std::string& name, bool ok) {
  std::printf("criterion %2d: %-38s %s\n", index, name.c_str(), ok ? "PASS" : "FAIL");
  if (!ok) {
    ++g_failures;
    if (!g_detail.empty()) std::fprintf(stderr, "  detail: %s\n", g_detail.c_str());
  }
  g_detail.clear();
}

bool fail(const std::string& detail) {
  g_detail = detail;
  return false;
}

/// Runs `count` cases of a seeded check; reports the first failure.
bool cases(const char* tag, int count, const std::function<bool(Rng&, int)>& check) {
  for (int i = 0; i < count; ++i) {
    Rng rng(case_seed(20260811, "acceptance", tag, i));
    if (!check(rng, i)) return fail(std::string(tag) + " case " + std::to_string(i));
  }
  return true;
}

SlopeResult<Q> bundle(const TimeLabel<Q>& label, const std::vector<TangentElement<Q>>& per_var) {
  std::vector<V> coeffs(subset_count(label.order()));
  for (std::size_t c = 0; c < coeffs.size(); ++c) {
    std::vector<Q> point(per_var.size());
    for (std::size_t j = 0; j < per_var.size(); ++j)
      point[j] = per_var[j].coeff(static_cast<std::uint32_t>(c));
    coeffs[c] = V(std::move(point));
  }
  return SlopeResult<Q>(label, std::move(coeffs));
}

// 1. Anchor round trip, n in 1..6: inverse matrix times matrix is the identity.
bool anchor_round_trip() {
  return cases("round-trip", 102, [](Rng& rng, int i) {
    const int n = 1 + i % 6;
    const auto label = rng.regular_label(n);
    return kernels::multiply(anchor_inverse_matrix(label), anchor_matrix(label)).is_identity();
  });
}

// 2. Anchor application is multiplicative into the pointwise cube algebra.
bool anchor_morphism() {
  return cases("morphism", 100, [](Rng& rng, int i) {
    const int n = 1 + i % 4;
    const auto label = rng.any_label(n);
    const auto x = rng.element(label), y = rng.element(label);
    return anchor_apply(mul(x, y)) == cube_mul(anchor_apply(x), anchor_apply(y));
  });
}

// 3. Recursive product equals polynomial multiplication with reduction.
bool multiplication_oracle() {
  return cases("mul-oracle", 100, [](Rng& rng, int i) {
    const int n = 1 + i % 4;
    const auto label = rng.any_label(n);
    const auto x = rng.element(label), y = rng.element(label);
    return mul(x, y) == ref::mul_poly_reduce(x, y);
  });
}

// 4. Kronecker closed forms against the naive routes.
bool kron_closed_forms() {
  const bool entries = cases("kron-entries", 100, [](Rng& rng, int i) {
    const auto blocks = rng.blocks(1 + i % 5, true);
    return kron_n(blocks) == ref::kron_recursive(blocks);
  });
  if (!entries) return false;
  const bool inverse = cases("kron-inverse", 100, [](Rng& rng, int i) {
    const auto blocks = rng.blocks(1 + i % 4, false);
    const auto closed = kron_inverse(blocks);
    const auto gauss = ref::gauss_inverse(kron_n(blocks));
    return closed && gauss && *closed == *gauss;
  });
  if (!inverse) return false;
  return cases("kron-det", 100, [](Rng& rng, int i) {
    const auto blocks = rng.blocks(1 + i % 4, true);
    return kron_det(blocks) == ref::det_naive(kron_n(blocks));
  });
}

// 5. Symplectic adjugate identity, singular blocks included.
bool adjugate_identity() {
  return cases("adjugate", 100, [](Rng& rng, int i) {
    const int n = 1 + i % 4;
    auto blocks = rng.blocks(n, true);
    if (i % 2 == 0) {
      const Q lambda = rng.rational();
      blocks[i % n].c = blocks[i % n].a * lambda;
      blocks[i % n].d = blocks[i % n].b * lambda;
    }
    const auto f = kron_n(blocks);
    Q det_prod = Q::one();
    for (const auto& b : blocks) det_prod *= b.det();
    const auto lhs = kernels::multiply(
        kernels::multiply(f, sign_op_j<Q>(n)),
        kernels::multiply(f.transpose(), sign_op_j_inverse<Q>(n)));
    return lhs == CubeMatrix<Q>::identity(n).scaled(det_prod);
  });
}

// 6. slope_n, slope_n_formula, and extend_expr agree on polynomials.
bool slope_path_agreement() {
  return cases("paths", 100, [](Rng& rng, int i) {
    const int n = 1 + i % 3;
    const int arity = 1 + i % 3;
    std::vector<std::string> vars;
    for (int j = 0; j < arity; ++j) vars.push_back("v" + std::to_string(j));
    const ExprPtr f = rng.poly(vars, 4, 4);
    const auto label = rng.regular_label(n);
    std::vector<TangentElement<Q>> parts;
    std::map<std::string, TangentElement<Q>> env;
    for (const auto& name : vars) {
      parts.push_back(rng.element(label));
      env.emplace(name, parts.back());
    }
    const auto v = bundle(label, parts);
    const auto pf = expr_point_fn<Q>(f, vars);
    const auto a = slope_n(pf, label, v);
    if (!(a == slope_n_formula(pf, label, v))) return false;
    const auto c = extend_expr(*f, label, env);
    for (std::uint32_t k = 0; k < c.coeff_count(); ++k)
      if (!(a.coeff(k).v[0] == c.coeff(k))) return false;
    return true;
  });
}

// 7. Chain rule for expression extensions at all three label classes.
bool chain_rule() {
  return cases("chain", 150, [](Rng& rng, int i) {
    const int kind = i / 50;  // 50 regular, 50 singular, 50 mixed
    const int n = kind == 2 ? 2 + i % 2 : 1 + i % 3;
    const auto label = kind == 0   ? rng.regular_label(n)
                       : kind == 1 ? rng.singular_label(n)
                                   : rng.mixed_label(n);
    const ExprPtr f = rng.poly({"x"}, 3, 3);
    const ExprPtr g = rng.poly({"y"}, 3, 3);
    const auto x = rng.element(label);
    const auto lhs = extend_expr(*substitute(g, "y", f), label, {{"x", x}});
    const auto rhs = extend_expr(*g, label, {{"y", extend_expr(*f, label, {{"x", x}})}});
    return lhs == rhs;
  });
}

// 8. Coefficients at the most singular labels are exact derivatives.
bool derivative_correctness() {
  return cases("derivative", 100, [](Rng& rng, int) {
    const ExprPtr f = rng.poly({"x", "y"}, 5, 4);
    const std::map<std::string, Q> at{{"x", rng.rational()}, {"y", rng.rational()}};
    if (!(derivative(*f, at, "x") == eval_scalar<Q>(*symbolic_derivative(f, "x"), at)))
      return false;
    return derivative_mixed(*f, at, {"x", "y"}) ==
           eval_scalar<Q>(*symbolic_derivative(symbolic_derivative(f, "x"), "y"), at);
  });
}

// 9. First-order structure: kernels, fundamental relation, kappa,
//    inversion, groupoid laws.
bool structure_theorem() {
  return cases("structure", 100, [](Rng& rng, int) {
    const auto label = rng.any_label(1);
    const auto e1 = basis_element(label, SubsetIdx::of({1}, 1));
    const auto p = scale(rng.rational(), sub(e1, from_base<Q, Q>(label, label.s[0])));
    const auto q = scale(rng.rational(), sub(e1, from_base<Q, Q>(label, label.t[0])));
    if (!mul(p, q).is_zero()) return false;

    const auto w = rng.element(label), v = rng.element(label);
    const auto fundamental = add(
        sub(scale(alpha(w), v), from_base<Q, Q>(label, alpha(w) * beta(v))), scale(beta(v), w));
    if (!(mul(w, v) == fundamental)) return false;

    if (!(kappa(kappa(v)) == v)) return false;
    if (!(alpha(kappa(v)) == beta(v))) return false;
    if (!(mul(v, kappa(v)) == from_base<Q, Q>(label, alpha(v) * beta(v)))) return false;

    const bool unit = static_cast<bool>((alpha(v) * beta(v)).try_invert());
    const auto inv = try_invert_element(v);
    if (unit != static_cast<bool>(inv)) return false;
    if (inv && !(mul(v, *inv) == one_element(label))) return false;

    const auto u = rng.element(label);
    auto with_target = [&](const Q& target) {
      const Q free = rng.rational();
      return TangentElement<Q>(label, {target - label.t[0] * free, free});
    };
    const auto w2 = with_target(alpha(u));
    const auto x2 = with_target(alpha(w2));
    if (!(groupoid_compose(u, groupoid_unit(alpha(u), label)) == u)) return false;
    if (!(groupoid_compose(groupoid_unit(beta(u), label), u) == u)) return false;
    if (!(groupoid_compose(groupoid_compose(u, w2), x2) ==
          groupoid_compose(u, groupoid_compose(w2, x2))))
      return false;
    if (!(groupoid_compose(kappa(u), u) == groupoid_unit(alpha(u), label))) return false;
    if (!(groupoid_compose(u, kappa(u)) == groupoid_unit(beta(u), label))) return false;
    return true;
  });
}

// 10. Formula weights: affine for the empty component, zero-sum otherwise.
bool weight_sanity() {
  return cases("weights", 100, [](Rng& rng, int i) {
    const auto label = rng.regular_label(1 + i % 4);
    for (std::uint32_t b = 0; b < subset_count(label.order()); ++b) {
      Q sum = Q::zero();
      for (std::uint32_t a = 0; a < subset_count(label.order()); ++a)
        sum += slope_weight(label, b, a);
      if (b == 0 && !(sum == Q::one())) return false;
      if (b != 0 && !sum.is_zero()) return false;
    }
    return true;
  });
}

// 11. Concrete spot values named by the operation examples.
bool spot_values() {
  PointFn<Q> square{1, 1, [](const std::vector<Q>& x) { return std::vector<Q>{x[0] * x[0]}; },
                    nullptr, true};
  const auto dd = slope1(square, {Q(3)}, {Q(1)}, Q(1), Q(0));
  if (!(dd.coeff(0u).v[0] == Q(9) && dd.coeff(1u).v[0] == Q(7)))
    return fail("divdiff of x^2 at (3,1,1,0)");

  const TimeLabel<Q> unit({Q(1), Q(1)}, {Q(0), Q(0)});
  const long expected[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 1, 1, 1}};
  const long expected_inv[4][4] = {{1, 0, 0, 0}, {-1, 1, 0, 0}, {-1, 0, 1, 0}, {1, -1, -1, 1}};
  const auto m = anchor_matrix(unit);
  const auto mi = anchor_inverse_matrix(unit);
  for (std::uint32_t r = 0; r < 4; ++r)
    for (std::uint32_t c = 0; c < 4; ++c) {
      if (!(m.at(r, c) == Q(expected[r][c]))) return fail("anchor matrix at t=(1,1), s=(0,0)");
      if (!(mi.at(r, c) == Q(expected_inv[r][c]))) return fail("anchor inverse at t=(1,1), s=(0,0)");
    }

  const std::map<std::string, Q> at{{"x", Q(2)}};
  if (!(derivative(*parse("x^3"), at, "x") == Q(12))) return fail("derive x^3 at 2");
  return true;
}

}  // namespace

int main() {
  criterion(1, "anchor round trip", anchor_round_trip());
  criterion(2, "anchor morphism", anchor_morphism());
  criterion(3, "multiplication oracle", multiplication_oracle());
  criterion(4, "kronecker closed forms", kron_closed_forms());
  criterion(5, "adjugate identity", adjugate_identity());
  criterion(6, "slope path agreement", slope_path_agreement());
  criterion(7, "chain rule", chain_rule());
  criterion(8, "derivative correctness", derivative_correctness());
  criterion(9, "structure theorem suite", structure_theorem());
  criterion(10, "coefficient-weight sanity", weight_sanity());
  criterion(11, "concrete spot values", spot_values());

  if (g_failures > 0) {
    std::fprintf(stderr, "%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
