#include "tangent/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "tangent/anchor.hpp"
#include "tangent/reference.hpp"
#include "tangent/slope.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tangent::verify {

int Rng::range(int lo, int hi) {
  return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
}

Q Rng::rational(int max_num, int max_den) {
  return Q(RationalScalar::Int(range(-max_num, max_num)), RationalScalar::Int(range(1, max_den)));
}

Q Rng::nonzero_rational(int max_num, int max_den) {
  while (true) {
    Q q = rational(max_num, max_den);
    if (!q.is_zero()) return q;
  }
}

TimeLabel<Q> Rng::regular_label(int n) {
  std::vector<Q> t(n), s(n);
  for (int i = 0; i < n; ++i) {
    s[i] = rational();
    t[i] = s[i] + nonzero_rational();
  }
  return TimeLabel<Q>(std::move(t), std::move(s));
}

TimeLabel<Q> Rng::singular_label(int n) {
  std::vector<Q> t(n);
  for (int i = 0; i < n; ++i) t[i] = rational();
  std::vector<Q> s = t;
  return TimeLabel<Q>(std::move(t), std::move(s));
}

TimeLabel<Q> Rng::mixed_label(int n) {
  if (n < 2) throw std::invalid_argument("mixed_label: needs n >= 2");
  while (true) {
    std::vector<Q> t(n), s(n);
    bool some_regular = false, some_singular = false;
    for (int i = 0; i < n; ++i) {
      s[i] = rational();
      if (flip()) {
        t[i] = s[i];
        some_singular = true;
      } else {
        t[i] = s[i] + nonzero_rational();
        some_regular = true;
      }
    }
    if (some_regular && some_singular) return TimeLabel<Q>(std::move(t), std::move(s));
  }
}

TimeLabel<Q> Rng::any_label(int n) {
  std::vector<Q> t(n), s(n);
  for (int i = 0; i < n; ++i) {
    s[i] = rational();
    t[i] = flip() ? s[i] : rational();
  }
  return TimeLabel<Q>(std::move(t), std::move(s));
}

TimeLabel<Q> Rng::label_of(Regularity r, int n) {
  switch (r) {
    case Regularity::regular: return regular_label(n);
    case Regularity::singular: return singular_label(n);
    case Regularity::mixed: return mixed_label(n);
  }
  throw std::logic_error("label_of");
}

TangentElement<Q> Rng::element(const TimeLabel<Q>& label) {
  std::vector<Q> coeffs(subset_count(label.order()));
  for (auto& c : coeffs) c = rational();
  return TangentElement<Q>(label, std::move(coeffs));
}

std::vector<TwoByTwo<Q>> Rng::blocks(int n, bool allow_singular) {
  std::vector<TwoByTwo<Q>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    while (true) {
      TwoByTwo<Q> f{rational(), rational(), rational(), rational()};
      if (allow_singular || !f.det().is_zero()) {
        out.push_back(f);
        break;
      }
    }
  }
  return out;
}

ExprPtr Rng::poly(const std::vector<std::string>& vars, int max_degree, int max_terms) {
  const int terms = range(1, max_terms);
  ExprPtr acc;
  for (int k = 0; k < terms; ++k) {
    ExprPtr term = make_const(rational(4, 2));
    int degree_left = max_degree;
    for (const auto& v : vars) {
      const int e = range(0, degree_left);
      degree_left -= e;
      if (e == 1)
        term = make_mul(term, make_var(v));
      else if (e > 1)
        term = make_mul(term, make_pow(make_var(v), static_cast<unsigned long>(e)));
    }
    acc = acc ? make_add(acc, term) : term;
  }
  return acc;
}

std::uint64_t case_seed(std::uint64_t seed, const std::string& suite, const std::string& property,
                        int index) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  };
  mix(suite);
  mix("/");
  mix(property);
  std::uint64_t z = h ^ seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

constexpr int kMaxMessages = 4;

using Check = std::function<std::optional<std::string>(Rng&)>;

/// Runs one property batch; cases are independent and execute in
/// parallel, with failures reported in case order.
void batch(SuiteResult& res, const Options& opt, const std::string& property, Check check,
           int cases_override = 0) {
  const int count = cases_override > 0 ? cases_override : opt.cases;
  std::vector<std::optional<std::string>> failures(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < count; ++i) {
    Rng rng(case_seed(opt.seed, res.name, property, i));
    try {
      failures[i] = check(rng);
    } catch (const std::exception& ex) {
      failures[i] = std::string("exception: ") + ex.what();
    }
  }
  for (int i = 0; i < count; ++i) {
    res.cases++;
    if (failures[i]) {
      res.failures++;
      if (static_cast<int>(res.messages.size()) < kMaxMessages)
        res.messages.push_back(property + " case " + std::to_string(i) + ": " + *failures[i]);
    }
  }
}

std::optional<std::string> expect(bool ok, const std::string& what) {
  if (ok) return std::nullopt;
  return what;
}

TangentElement<Q> ring_one(const TimeLabel<Q>& label) { return one_element(label); }

}  // namespace

SuiteResult run_algebra(const Options& opt) {
  SuiteResult res;
  res.name = "algebra";
  const int max_n = std::min(opt.max_order, 4);

  batch(res, opt, "ring-laws", [](Rng& rng) -> std::optional<std::string> {
    const Q a = rng.rational(50, 20), b = rng.rational(50, 20), c = rng.rational(50, 20);
    if (!((a + b) + c == a + (b + c))) return "associativity failed";
    if (!(a * (b + c) == a * b + a * c)) return "distributivity failed";
    if (!(a + Q::zero() == a)) return "zero identity failed";
    if (!(a * Q::one() == a)) return "one identity failed";
    if (!a.is_zero()) {
      auto inv = a.try_invert();
      if (!inv || !(*inv * a == Q::one())) return "inverse failed";
    }
    return std::nullopt;
  });

  batch(res, opt, "hypercube-laws", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::max(1, max_n + 2));
    const SubsetIdx a(static_cast<std::uint32_t>(rng.u64()) & SubsetIdx::mask_all(n), n);
    const SubsetIdx b(static_cast<std::uint32_t>(rng.u64()) & SubsetIdx::mask_all(n), n);
    const SubsetIdx sym = set_symdiff(a, b);
    const SubsetIdx via_union =
        SubsetIdx(set_union(a, b).bits & ~set_intersect(a, b).bits, n);
    if (!(sym == via_union)) return "symdiff != union minus intersection";
    if (!(set_symdiff(a.complement(), b.complement()) == sym)) return "complement symdiff law";
    if ((a.cardinality() + b.cardinality()) % 2 != sym.cardinality() % 2) return "parity law";
    if (set_symdiff(a, b.complement()).cardinality() != n - sym.cardinality())
      return "|A delta B^c| != n - |A delta B|";
    std::vector<Q> vals(n);
    for (auto& v : vals) v = rng.rational();
    if (set_intersect(a, b).cardinality() == 0) {
      if (!(product_over(vals, set_union(a, b)) == product_over(vals, a) * product_over(vals, b)))
        return "product over disjoint union";
    }
    return std::nullopt;
  });

  batch(res, opt, "mul-oracle", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(0, max_n);
    const TimeLabel<Q> label = rng.any_label(n);
    const auto x = rng.element(label), y = rng.element(label);
    return expect(mul(x, y) == ref::mul_poly_reduce(x, y), "recursive product != reduced polynomial product");
  });

  batch(res, opt, "mul-ring-laws", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(0, max_n);
    const TimeLabel<Q> label = rng.any_label(n);
    const auto x = rng.element(label), y = rng.element(label), z = rng.element(label);
    if (!(mul(x, y) == mul(y, x))) return "commutativity";
    if (!(mul(mul(x, y), z) == mul(x, mul(y, z)))) return "associativity";
    if (!(mul(x, add(y, z)) == add(mul(x, y), mul(x, z)))) return "distributivity";
    if (!(mul(x, ring_one(label)) == x)) return "unit";
    if (!add(x, neg(x)).is_zero()) return "additive inverse";
    return std::nullopt;
  });

  batch(res, opt, "imbedding", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(0, max_n);
    const TimeLabel<Q> label = rng.any_label(n);
    const Q a = rng.rational(), b = rng.rational();
    const auto fa = from_base<Q, Q>(label, a), fb = from_base<Q, Q>(label, b);
    return expect(mul(fa, fb) == from_base<Q, Q>(label, a * b), "from_base is not multiplicative");
  });

  batch(res, opt, "tensor-oplus", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n1 = rng.range(0, 2), n2 = rng.range(0, 2), n3 = rng.range(0, std::min(2, max_n));
    const auto l1 = rng.any_label(n1), l2 = rng.any_label(n2), l3 = rng.any_label(n3);
    const auto x = rng.element(l1), y = rng.element(l2), z = rng.element(l3);
    if (!(l1.oplus(l2).oplus(l3) == l1.oplus(l2.oplus(l3)))) return "oplus associativity";
    if (!(l1.oplus(TimeLabel<Q>::empty()) == l1)) return "oplus unit";
    if (!(tensor(tensor(x, y), z) == tensor(x, tensor(y, z)))) return "tensor associativity";
    const Q a = rng.rational(), b = rng.rational();
    if (!(tensor(from_base<Q, Q>(l1, a), from_base<Q, Q>(l2, b)) ==
          from_base<Q, Q>(l1.oplus(l2), a * b)))
      return "tensor of units";
    if (!(mul(tensor(x, ring_one(l2)), tensor(ring_one(l1), y)) == tensor(x, y)))
      return "tensor factorization";
    return std::nullopt;
  });

  batch(res, opt, "flip", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::max(1, max_n));
    const auto x = rng.element(rng.any_label(n));
    std::vector<int> ident(n), perm(n);
    for (int i = 0; i < n; ++i) ident[i] = i + 1;
    perm = ident;
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.range(0, i)]);
    if (!(flip(x, ident) == x)) return "identity permutation changed the element";
    std::vector<int> inverse(n);
    for (int i = 0; i < n; ++i) inverse[perm[i] - 1] = i + 1;
    if (!(flip(flip(x, perm), inverse) == x)) return "flip inverse";
    const auto y = rng.element(x.label());
    if (!(flip(mul(x, y), perm) == mul(flip(x, perm), flip(y, perm)))) return "flip is not multiplicative";
    return std::nullopt;
  });

  batch(res, opt, "kappa", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(0, max_n);
    const TimeLabel<Q> label = rng.any_label(n);
    const auto x = rng.element(label), y = rng.element(label);
    if (!(kappa(kappa(x)) == x)) return "kappa is not an involution";
    if (!(kappa(mul(x, y)) == mul(kappa(x), kappa(y)))) return "kappa is not multiplicative";
    const Q c = rng.rational();
    if (!(kappa(from_base<Q, Q>(label, c)) == from_base<Q, Q>(label, c))) return "kappa moves constants";
    return std::nullopt;
  });

  batch(res, opt, "inversion", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(0, std::min(3, max_n));
    const TimeLabel<Q> label = rng.any_label(n);
    const auto x = rng.element(label);
    auto inv = try_invert_element(x);
    if (inv && !(mul(x, *inv) == ring_one(label))) return "inverse does not back-multiply to one";
    const Q c = rng.nonzero_rational();
    auto cinv = try_invert_element(from_base<Q, Q>(label, c));
    if (!cinv || !(*cinv == from_base<Q, Q>(label, *c.try_invert()))) return "constant inverse";
    return std::nullopt;
  });

  return res;
}

SuiteResult run_structure(const Options& opt) {
  SuiteResult res;
  res.name = "structure";

  batch(res, opt, "kernel-product", [](Rng& rng) -> std::optional<std::string> {
    const TimeLabel<Q> label = rng.any_label(1);
    // ker(alpha) = K (e - s), ker(beta) = K (e - t).
    const TangentElement<Q> e1 = basis_element(label, SubsetIdx::of({1}, 1));
    const auto p = scale(rng.rational(), sub(e1, from_base<Q, Q>(label, label.s[0])));
    const auto q = scale(rng.rational(), sub(e1, from_base<Q, Q>(label, label.t[0])));
    if (!alpha(p).is_zero()) return "p not in ker(alpha)";
    if (!beta(q).is_zero()) return "q not in ker(beta)";
    return expect(mul(p, q).is_zero(), "ker(alpha) ker(beta) != 0");
  });

  batch(res, opt, "fundamental-relation", [](Rng& rng) -> std::optional<std::string> {
    const TimeLabel<Q> label = rng.any_label(1);
    const auto w = rng.element(label), v = rng.element(label);
    const auto rhs = add(sub(scale(alpha(w), v), from_base<Q, Q>(label, alpha(w) * beta(v))),
                         scale(beta(v), w));
    return expect(mul(w, v) == rhs, "w v != alpha(w) v - alpha(w) beta(v) 1 + beta(v) w");
  });

  batch(res, opt, "kappa-laws", [](Rng& rng) -> std::optional<std::string> {
    const TimeLabel<Q> label = rng.any_label(1);
    const auto v = rng.element(label);
    if (!(kappa(kappa(v)) == v)) return "kappa^2 != id";
    if (!(alpha(kappa(v)) == beta(v))) return "alpha o kappa != beta";
    if (!(mul(v, kappa(v)) == from_base<Q, Q>(label, alpha(v) * beta(v))))
      return "v kappa(v) != alpha(v) beta(v) 1";
    return std::nullopt;
  });

  batch(res, opt, "inversion-criterion", [](Rng& rng) -> std::optional<std::string> {
    const TimeLabel<Q> label = rng.any_label(1);
    const auto v = rng.element(label);
    const bool unit = static_cast<bool>((alpha(v) * beta(v)).try_invert());
    auto inv = try_invert_element(v);
    if (unit != static_cast<bool>(inv)) return "invertibility differs from the alpha beta criterion";
    if (inv) {
      if (!(mul(v, *inv) == one_element(label))) return "inverse does not back-multiply";
      const Q ab_inv = *(alpha(v) * beta(v)).try_invert();
      if (!(*inv == scale(ab_inv, kappa(v)))) return "inverse != kappa(v)/(alpha beta)";
    }
    return std::nullopt;
  });

  batch(res, opt, "groupoid", [](Rng& rng) -> std::optional<std::string> {
    const TimeLabel<Q> label = rng.any_label(1);
    const auto u = rng.element(label);
    // Composable w: beta(w) = alpha(u); third element x with beta(x) = alpha(w).
    auto with_target = [&](const Q& target) {
      const Q free = rng.rational();
      return TangentElement<Q>(label, {target - label.t[0] * free, free});
    };
    const auto w = with_target(alpha(u));
    const auto x = with_target(alpha(w));
    const auto uw = groupoid_compose(u, w);
    if (!(beta(uw) == beta(u)) || !(alpha(uw) == alpha(w))) return "anchor of composition";
    if (!(groupoid_compose(groupoid_compose(u, w), x) == groupoid_compose(u, groupoid_compose(w, x))))
      return "associativity";
    if (!(groupoid_compose(u, groupoid_unit(alpha(u), label)) == u)) return "right unit";
    if (!(groupoid_compose(groupoid_unit(beta(u), label), u) == u)) return "left unit";
    if (!(groupoid_compose(kappa(u), u) == groupoid_unit(alpha(u), label))) return "kappa(u) * u != alpha(u) 1";
    if (!(groupoid_compose(u, kappa(u)) == groupoid_unit(beta(u), label))) return "u * kappa(u) != beta(u) 1";
    return std::nullopt;
  });

  return res;
}

SuiteResult run_anchor(const Options& opt) {
  SuiteResult res;
  res.name = "anchor";
  const int max_n = std::min(opt.max_order, 6);

  batch(res, opt, "kron-route", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, max_n);
    const TimeLabel<Q> label = rng.any_label(n);
    return expect(anchor_matrix(label) == kron_n(anchor_blocks(label)),
                  "entrywise anchor != Kronecker product of first-order anchors");
  });

  batch(res, opt, "round-trip", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, max_n);
    const TimeLabel<Q> label = rng.regular_label(n);
    const auto m = kernels::multiply(anchor_inverse_matrix(label), anchor_matrix(label));
    if (!m.is_identity()) return "inverse * anchor != identity";
    const auto x = rng.element(label);
    if (!(anchor_inverse_apply(anchor_apply(x), label) == x)) return "apply round trip failed";
    return std::nullopt;
  });

  batch(res, opt, "singular-determinant", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(4, max_n));
    TimeLabel<Q> label = rng.regular_label(n);
    const int k = rng.range(0, n - 1);
    label.t[k] = label.s[k];  // kill one factor
    if (!ref::det_naive(anchor_matrix(label)).is_zero()) return "anchor of non-regular label has nonzero determinant";
    try {
      anchor_inverse_matrix(label);
      return "anchor_inverse_matrix accepted a non-regular label";
    } catch (const NotRegularError&) {
      return std::nullopt;
    }
  });

  batch(res, opt, "determinant-identity", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(4, max_n));
    const TimeLabel<Q> label = rng.any_label(n);
    Q expected = Q::one();
    const std::size_t reps = subset_count(n - 1);
    for (std::size_t i = 0; i < reps; ++i) expected *= label.diff_product();
    return expect(ref::det_naive(anchor_matrix(label)) == expected,
                  "det(anchor) != ((t-s)_n)^(2^(n-1))");
  });

  batch(res, opt, "lazy-vs-matrix", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(0, max_n);
    const TimeLabel<Q> label = rng.any_label(n);
    const auto x = rng.element(label);
    return expect(anchor_apply(x) == ref::anchor_apply_via_matrix(anchor_matrix(label), x),
                  "lazy anchor application != materialized matrix application");
  });

  batch(res, opt, "morphism", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(0, std::min(4, max_n));
    const TimeLabel<Q> label = rng.any_label(n);
    const auto x = rng.element(label), y = rng.element(label);
    if (!(anchor_apply(mul(x, y)) == cube_mul(anchor_apply(x), anchor_apply(y))))
      return "anchor is not multiplicative";
    const Q c = rng.rational();
    CubeElement<Q> constant(n, std::vector<Q>(subset_count(n), c));
    if (!(anchor_apply(from_base<Q, Q>(label, c)) == constant)) return "anchor is not unital";
    return std::nullopt;
  });

  batch(res, opt, "characters", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(4, max_n));
    const TimeLabel<Q> label = rng.any_label(n);
    const SubsetIdx a(static_cast<std::uint32_t>(rng.u64()) & SubsetIdx::mask_all(n), n);
    const Character<Q> chi = character(label, a);
    const auto x = rng.element(label), y = rng.element(label);
    if (!(chi(mul(x, y)) == chi(x) * chi(y))) return "character is not multiplicative";
    if (!(chi(one_element(label)) == Q::one())) return "character is not unital";
    if (!(chi(x) == anchor_apply(x).value(a))) return "character != anchor component";
    if (n == 1) {
      const auto z = rng.element(label);
      if (!(character(label, SubsetIdx::empty(1))(z) == alpha(z))) return "Y_empty != alpha";
      if (!(character(label, SubsetIdx::full(1))(z) == beta(z))) return "Y_{1} != beta";
    }
    return std::nullopt;
  });

  batch(res, opt, "symmetric-entries", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(4, max_n));
    std::vector<Q> s(n);
    for (auto& v : s) v = rng.rational();
    std::vector<Q> t(n);
    for (int i = 0; i < n; ++i) t[i] = -s[i];
    const TimeLabel<Q> label(t, s);
    const auto m = anchor_matrix(label);
    for (std::uint32_t b = 0; b < m.size(); ++b)
      for (std::uint32_t a = 0; a < m.size(); ++a) {
        Q expected = detail::masked_product(label.s, a);
        if (std::popcount(a & b) & 1) expected = -expected;
        if (!(m.at(b, a) == expected)) return "symmetric case entry != (-1)^|A&B| s_A";
      }
    // Constant t = -s = 1/2: entry (1/2)^|A| (-1)^|A & B^c|.
    const Q half(1, 2);
    const TimeLabel<Q> uhalf(std::vector<Q>(n, half), std::vector<Q>(n, -half));
    const auto mu = anchor_matrix(uhalf);
    const std::uint32_t all = SubsetIdx::mask_all(n);
    for (std::uint32_t b = 0; b < mu.size(); ++b)
      for (std::uint32_t a = 0; a < mu.size(); ++a) {
        Q expected = Q::one();
        for (int i = 0; i < std::popcount(a); ++i) expected *= half;
        if (std::popcount(a & ~b & all) & 1) expected = -expected;
        if (!(mu.at(b, a) == expected)) return "unit symmetric entry != (1/2)^|A| (-1)^|A&B^c|";
      }
    return std::nullopt;
  });

  return res;
}

SuiteResult run_kron(const Options& opt) {
  SuiteResult res;
  res.name = "kron";
  const int max_n = std::min(opt.max_order, 5);

  batch(res, opt, "closed-form", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, max_n);
    const auto blocks = rng.blocks(n, true);
    return expect(kron_n(blocks) == ref::kron_recursive(blocks),
                  "closed-form entries != recursive Kronecker product");
  });

  batch(res, opt, "inverse", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(4, max_n));
    const auto blocks = rng.blocks(n, false);
    const auto inv = kron_inverse(blocks);
    if (!inv) return "closed-form inverse rejected invertible blocks";
    const auto oracle = ref::gauss_inverse(kron_n(blocks));
    if (!oracle) return "Gaussian elimination rejected invertible blocks";
    if (!(*inv == *oracle)) return "closed-form inverse != Gaussian elimination";
    if (!kernels::multiply(*inv, kron_n(blocks)).is_identity()) return "inverse * matrix != identity";
    return std::nullopt;
  });

  batch(res, opt, "determinant", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(4, max_n));
    const auto blocks = rng.blocks(n, true);
    return expect(kron_det(blocks) == ref::det_naive(kron_n(blocks)),
                  "closed-form determinant != elimination determinant");
  });

  batch(res, opt, "singular-blocks", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(4, max_n));
    auto blocks = rng.blocks(n, false);
    const int k = rng.range(0, n - 1);
    const Q lambda = rng.rational();
    blocks[k].c = blocks[k].a * lambda;  // force rank <= 1
    blocks[k].d = blocks[k].b * lambda;
    if (!kron_det(blocks).is_zero()) return "determinant of singular block product is nonzero";
    if (kron_inverse(blocks)) return "closed-form inverse accepted singular blocks";
    return std::nullopt;
  });

  batch(res, opt, "adjugate", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(4, max_n));
    const auto blocks = rng.blocks(n, true);
    const auto f = kron_n(blocks);
    Q det_prod = Q::one();
    for (const auto& b : blocks) det_prod *= b.det();
    const auto adj = symplectic_adjugate(blocks);
    if (!(adj == symplectic_adjugate(f))) return "blockwise adjugate != J f^T J^-1";
    const auto prod = kernels::multiply(f, adj);
    if (!(prod == CubeMatrix<Q>::identity(n).scaled(det_prod)))
      return "f adj(f) != (prod det) identity";
    const auto via_j = kernels::multiply(
        kernels::multiply(f, sign_op_j<Q>(n)),
        kernels::multiply(f.transpose(), sign_op_j_inverse<Q>(n)));
    if (!(via_j == CubeMatrix<Q>::identity(n).scaled(det_prod)))
      return "f J f^T J^-1 != (prod det) identity";
    return std::nullopt;
  });

  batch(res, opt, "sign-ops", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, max_n);
    const auto i_n = sign_op_i<Q>(n), j_n = sign_op_j<Q>(n), k_n = sign_op_k<Q>(n);
    if (!kernels::multiply(k_n, k_n).is_identity()) return "K^2 != id";
    if (!kernels::multiply(j_n, sign_op_j_inverse<Q>(n)).is_identity()) return "J J^-1 != id";
    if (!(kernels::multiply(k_n, i_n) == sign_op_j_inverse<Q>(n))) return "K I != J^-1";
    return std::nullopt;
  });

  return res;
}

namespace {

/// Turns per-variable scalar coefficient vectors into one vector-payload
/// element (the slope engine argument) for the path-agreement checks.
SlopeResult<Q> bundle_element(const TimeLabel<Q>& label,
                              const std::vector<TangentElement<Q>>& per_var) {
  const std::size_t size = subset_count(label.order());
  std::vector<VecPayload<Q>> coeffs(size);
  for (std::size_t c = 0; c < size; ++c) {
    std::vector<Q> point(per_var.size());
    for (std::size_t j = 0; j < per_var.size(); ++j)
      point[j] = per_var[j].coeff(static_cast<std::uint32_t>(c));
    coeffs[c] = VecPayload<Q>(std::move(point));
  }
  return SlopeResult<Q>(label, std::move(coeffs));
}

}  // namespace

SuiteResult run_slope(const Options& opt) {
  SuiteResult res;
  res.name = "slope";
  const int max_n = std::min(opt.max_order, 3);

  batch(res, opt, "path-agreement", [max_n](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, max_n);
    const int arity = rng.range(1, 3);
    std::vector<std::string> vars;
    for (int j = 0; j < arity; ++j) vars.push_back("x" + std::to_string(j));
    const ExprPtr f = rng.poly(vars, 4, 4);
    const TimeLabel<Q> label = rng.regular_label(n);
    std::vector<TangentElement<Q>> args;
    std::map<std::string, TangentElement<Q>> env;
    for (const auto& v : vars) {
      args.push_back(rng.element(label));
      env.emplace(v, args.back());
    }
    const auto v = bundle_element(label, args);
    const PointFn<Q> pf = expr_point_fn<Q>(f, vars);
    const auto via_anchor = slope_n(pf, label, v);
    const auto via_formula = slope_n_formula(pf, label, v);
    const auto via_algebra = extend_expr(*f, label, env);
    if (!(via_anchor == via_formula)) return "slope_n != slope_n_formula";
    for (std::uint32_t c = 0; c < via_algebra.coeff_count(); ++c)
      if (!(via_anchor.coeff(c).v[0] == via_algebra.coeff(c))) return "slope_n != extend_expr";
    return std::nullopt;
  });

  batch(res, opt, "chain-rule", [max_n](Rng& rng) -> std::optional<std::string> {
    const int kind = rng.range(0, max_n >= 2 ? 2 : 1);  // mixed labels need n >= 2
    const int n = kind == 2 ? rng.range(2, max_n) : rng.range(1, max_n);
    const Regularity r = kind == 0 ? Regularity::regular
                                   : (kind == 1 ? Regularity::singular : Regularity::mixed);
    const TimeLabel<Q> label = rng.label_of(r, n);
    const ExprPtr f = rng.poly({"x"}, 3, 3);
    const ExprPtr g = rng.poly({"y"}, 3, 3);
    const ExprPtr composed = substitute(g, "y", f);
    const auto x = rng.element(label);
    const auto inner = extend_expr(*f, label, {{"x", x}});
    const auto lhs = extend_expr(*composed, label, {{"x", x}});
    const auto rhs = extend_expr(*g, label, {{"y", inner}});
    return expect(lhs == rhs, "extension of g o f != extension of g applied to extension of f");
  });

  batch(res, opt, "derivative-oracle", [](Rng& rng) -> std::optional<std::string> {
    const std::vector<std::string> vars{"x", "y"};
    const ExprPtr f = rng.poly(vars, 5, 5);
    std::map<std::string, Q> at{{"x", rng.rational()}, {"y", rng.rational()}};
    const ExprPtr dfdx = symbolic_derivative(f, "x");
    if (!(derivative(*f, at, "x") == eval_scalar<Q>(*dfdx, at))) return "first derivative mismatch";
    const ExprPtr dxy = symbolic_derivative(dfdx, "y");
    if (!(derivative_mixed(*f, at, {"x", "y"}) == eval_scalar<Q>(*dxy, at)))
      return "mixed second derivative mismatch";
    return std::nullopt;
  });

  batch(res, opt, "weight-sums", [opt](Rng& rng) -> std::optional<std::string> {
    const int n = rng.range(1, std::min(opt.max_order, 4));
    const TimeLabel<Q> label = rng.regular_label(n);
    for (std::uint32_t b = 0; b < subset_count(n); ++b) {
      Q sum = Q::zero();
      for (std::uint32_t a = 0; a < subset_count(n); ++a) sum += slope_weight(label, b, a);
      if (b == 0 && !(sum == Q::one())) return "empty-set weights do not sum to one";
      if (b != 0 && !sum.is_zero()) return "nonempty-set weights do not sum to zero";
    }
    return std::nullopt;
  });

  batch(res, opt, "slope1-spot", [](Rng& rng) -> std::optional<std::string> {
    // Linear maps pass through; zero direction freezes; symmetric
    // midpoint; time-swap symmetry.
    const Q t = rng.rational(), s0 = rng.rational();
    const Q s = (t - s0).is_zero() ? s0 + Q::one() : s0;
    const Q c = rng.rational();
    PointFn<Q> linear{1, 1, [c](const std::vector<Q>& x) { return std::vector<Q>{c * x[0]}; }, nullptr, true};
    const Q v0 = rng.rational(), v1 = rng.rational();
    const auto lin = slope1(linear, {v0}, {v1}, t, s);
    if (!(lin.coeff(0u).v[0] == c * v0 && lin.coeff(1u).v[0] == c * v1))
      return "linear map did not extend to (f(v0), f(v1))";
    PointFn<Q> square{1, 1, [](const std::vector<Q>& x) { return std::vector<Q>{x[0] * x[0]}; }, nullptr, true};
    const auto frozen = slope1(square, {v0}, {Q::zero()}, t, s);
    if (!(frozen.coeff(0u).v[0] == v0 * v0 && frozen.coeff(1u).v[0].is_zero()))
      return "zero direction did not freeze";
    const Q u = rng.nonzero_rational();
    const TimeLabel<Q> symlabel = TimeLabel<Q>::first_order(u, -u);
    SlopeResult<Q> symv(symlabel, {VecPayload<Q>({v0}), VecPayload<Q>({v1})});
    const auto pts = anchor_apply(symv);
    const Q half(1, 2);
    if (!(symv.coeff(0u).v[0] == half * (pts.value(0u).v[0] + pts.value(1u).v[0])))
      return "symmetric label footpoint is not the evaluation midpoint";
    const auto swapped = slope1(square, {v0}, {v1}, s, t);
    const auto direct = slope1(square, {v0}, {v1}, t, s);
    if (!(swapped.coeff(1u).v[0] == direct.coeff(1u).v[0]))
      return "difference quotient changed under time swap";
    const Q beta_eval = (v0 + t * v1) * (v0 + t * v1);
    if (!(swapped.coeff(0u).v[0] == beta_eval - t * swapped.coeff(1u).v[0]))
      return "swapped first component disagrees with the slope formula";
    return std::nullopt;
  });

  return res;
}

std::vector<SuiteResult> run(const std::string& which, const Options& opt) {
  const std::map<std::string, SuiteResult (*)(const Options&)> table{
      {"algebra", run_algebra}, {"structure", run_structure}, {"anchor", run_anchor},
      {"kron", run_kron},       {"slope", run_slope},
  };
  std::vector<SuiteResult> out;
  if (which == "all") {
    for (const auto& [name, fn] : table) out.push_back(fn(opt));
    return out;
  }
  auto it = table.find(which);
  if (it == table.end()) throw std::invalid_argument("unknown suite '" + which + "'");
  out.push_back(it->second(opt));
  return out;
}

}  // namespace tangent::verify
