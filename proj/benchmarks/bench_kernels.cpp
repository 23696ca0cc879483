// Times the OpenMP kernels against their serial reference implementations:
// cube-matrix construction from entry formulas, dense multiply, and the
// lazy anchor application.  Floats give the kernels room to scale; one
// exact-rational case shows the arithmetic-bound regime.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <vector>

#include "tangent/anchor.hpp"
#include "tangent/hyperlin.hpp"
#include "tangent/reference.hpp"
#include "tangent/ring.hpp"

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
#endif
}

using tangent::CubeMatrix;
using tangent::Exec;
using tangent::FloatScalar;
using tangent::RationalScalar;
using tangent::TimeLabel;
using tangent::TwoByTwo;

template <class Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const double t0 = now();
    fn();
    const double t1 = now();
    if (t1 - t0 < best) best = t1 - t0;
  }
  return best;
}

void report(const char* name, int n, double serial, double parallel) {
  std::printf("%-28s n=%2d  serial %10.4f ms  openmp %10.4f ms  speedup %5.2fx\n", name, n,
              serial * 1e3, parallel * 1e3, parallel > 0 ? serial / parallel : 0.0);
}

TimeLabel<FloatScalar> random_float_label(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<FloatScalar> t(n), s(n);
  for (int i = 0; i < n; ++i) {
    s[i] = FloatScalar(dist(gen));
    t[i] = FloatScalar(s[i].value() + 1.0 + dist(gen) * 0.25);
  }
  return TimeLabel<FloatScalar>(std::move(t), std::move(s));
}

std::vector<TwoByTwo<FloatScalar>> random_float_blocks(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<TwoByTwo<FloatScalar>> blocks;
  for (int i = 0; i < n; ++i)
    blocks.push_back({FloatScalar(dist(gen)), FloatScalar(dist(gen)), FloatScalar(dist(gen)),
                      FloatScalar(2.0 + dist(gen))});
  return blocks;
}

volatile double sink = 0;

void consume(const CubeMatrix<FloatScalar>& m) { sink = sink + m.at(0u, 0u).value(); }

}  // namespace

int main(int argc, char** argv) {
  int reps = 3;
  int kron_n_dim = 11;
  int mul_n_dim = 9;
  int apply_n_dim = 11;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc) reps = std::atoi(argv[++i]);
    if (std::strcmp(argv[i], "--quick") == 0) {
      kron_n_dim = 8;
      mul_n_dim = 7;
      apply_n_dim = 8;
      reps = 2;
    }
  }

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP disabled; both columns run the same serial code\n");
#endif

  std::mt19937_64 gen(42);

  {
    const auto blocks = random_float_blocks(gen, kron_n_dim);
    const double serial = time_best_of(reps, [&] { consume(tangent::kron_n(blocks, Exec::serial)); });
    const double par = time_best_of(reps, [&] { consume(tangent::kron_n(blocks, Exec::parallel)); });
    report("kron_n (float)", kron_n_dim, serial, par);
    const auto a = tangent::kron_n(blocks, Exec::parallel);
    const auto b = tangent::ref::kron_recursive(blocks);
    double max_diff = 0;
    for (std::uint32_t r = 0; r < a.size(); ++r)
      for (std::uint32_t c = 0; c < a.size(); ++c) {
        const double d = std::abs(a.at(r, c).value() - b.at(r, c).value());
        if (d > max_diff) max_diff = d;
      }
    std::printf("  closed form vs recursion: max |diff| = %.3g\n", max_diff);
  }

  {
    const auto blocks = random_float_blocks(gen, mul_n_dim);
    const auto m = tangent::kron_n(blocks);
    const auto adj = tangent::symplectic_adjugate(blocks);
    const double serial = time_best_of(reps, [&] { consume(tangent::ref::multiply_serial(m, adj)); });
    const double par = time_best_of(reps, [&] { consume(tangent::kernels::multiply(m, adj)); });
    report("matrix multiply (float)", mul_n_dim, serial, par);
  }

  {
    const auto label = random_float_label(gen, apply_n_dim);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<FloatScalar> coeffs(tangent::subset_count(apply_n_dim));
    for (auto& c : coeffs) c = FloatScalar(dist(gen));
    const tangent::TangentElement<FloatScalar> x(label, std::move(coeffs));
    const double serial =
        time_best_of(reps, [&] { sink = sink + tangent::anchor_apply(x, Exec::serial).value(0u).value(); });
    const double par =
        time_best_of(reps, [&] { sink = sink + tangent::anchor_apply(x, Exec::parallel).value(0u).value(); });
    report("anchor_apply (float)", apply_n_dim, serial, par);
  }

  {
    // Exact rationals: allocation-bound, so gains are smaller.
    std::vector<TwoByTwo<RationalScalar>> blocks;
    std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
    for (int i = 0; i < 7; ++i)
      blocks.push_back({RationalScalar(num(gen), den(gen)), RationalScalar(num(gen), den(gen)),
                        RationalScalar(num(gen), den(gen)), RationalScalar(num(gen), den(gen))});
    const double serial = time_best_of(reps, [&] {
      sink = sink + tangent::kron_n(blocks, Exec::serial).at(0u, 0u).to_double();
    });
    const double par = time_best_of(reps, [&] {
      sink = sink + tangent::kron_n(blocks, Exec::parallel).at(0u, 0u).to_double();
    });
    report("kron_n (rational)", 7, serial, par);
  }

  return 0;
}
