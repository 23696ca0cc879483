#pragma once

/**
 * @file verify.hpp
 * @brief Randomized property suites over exact rationals.
 *
 * These back the `verify` CLI subcommand.  Every batch is driven by a
 * per-case RNG derived from (seed, suite, property, case index), so runs
 * are reproducible and batches can execute in parallel with deterministic
 * output.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tangent/expr.hpp"
#include "tangent/hyperlin.hpp"
#include "tangent/hypercube.hpp"
#include "tangent/ring.hpp"
#include "tangent/talg.hpp"

namespace tangent::verify {

using Q = RationalScalar;

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::vector<std::string> messages;  // first few failure descriptions

  bool passed() const { return failures == 0; }
};

struct Options {
  std::uint64_t seed = 1;
  int max_order = 4;  // upper bound on n where a suite would go higher
  int cases = 100;    // cases per property batch
};

/// Deterministic source of random exact inputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t u64() { return gen_(); }
  int range(int lo, int hi);  // inclusive bounds
  bool flip() { return range(0, 1) == 1; }

  /// Small rational p/q with |p| <= max_num, 1 <= q <= max_den.
  Q rational(int max_num = 6, int max_den = 3);
  Q nonzero_rational(int max_num = 6, int max_den = 3);

  TimeLabel<Q> regular_label(int n);
  TimeLabel<Q> singular_label(int n);        // t = s componentwise
  TimeLabel<Q> mixed_label(int n);           // needs n >= 2
  TimeLabel<Q> any_label(int n);             // arbitrary class
  TimeLabel<Q> label_of(Regularity r, int n);

  TangentElement<Q> element(const TimeLabel<Q>& label);
  std::vector<TwoByTwo<Q>> blocks(int n, bool allow_singular);

  /// Random polynomial over the given variables, bounded degree and size.
  ExprPtr poly(const std::vector<std::string>& vars, int max_degree, int max_terms);

 private:
  std::mt19937_64 gen_;
};

/// Per-case seed: mixes the global seed, suite/property names, and index.
std::uint64_t case_seed(std::uint64_t seed, const std::string& suite, const std::string& property,
                        int index);

SuiteResult run_algebra(const Options& opt);
SuiteResult run_structure(const Options& opt);
SuiteResult run_anchor(const Options& opt);
SuiteResult run_kron(const Options& opt);
SuiteResult run_slope(const Options& opt);

/// which is one of: all, algebra, anchor, kron, slope, structure.
/// Throws std::invalid_argument for anything else.
std::vector<SuiteResult> run(const std::string& which, const Options& opt);

}  // namespace tangent::verify
