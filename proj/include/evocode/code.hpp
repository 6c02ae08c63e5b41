#pragma once

#include "evocode/boolfun.hpp"
#include "evocode/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace evocode {

// Target (n, k, d): evolve a k-dimensional code of length n whose minimum
// distance reaches d.
struct ProblemInstance {
  int n = 0;
  int k = 0;
  int d = 0;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

// Empty on success, otherwise a message naming the violated bound. Besides
// the Singleton bound d <= n - k + 1 this enforces the representable range,
// since fitness works on a 2^n-entry truth table.
inline std::optional<std::string> validate_instance(const ProblemInstance& inst) {
  if (inst.n < 1 || inst.n > kMaxVars)
    return "n = " + std::to_string(inst.n) + " violates 1 <= n <= " +
           std::to_string(kMaxVars);
  if (inst.k < 1) return "k = " + std::to_string(inst.k) + " violates k >= 1";
  if (inst.k > inst.n)
    return "k = " + std::to_string(inst.k) + " violates k <= n = " +
           std::to_string(inst.n);
  if (inst.d < 1) return "d = " + std::to_string(inst.d) + " violates d >= 1";
  if (inst.d > inst.n - inst.k + 1)
    return "d = " + std::to_string(inst.d) +
           " violates the Singleton bound d <= n - k + 1 = " +
           std::to_string(inst.n - inst.k + 1);
  return std::nullopt;
}

// The phenotype: all 2^k codewords, packed and sorted ascending, so
// words[0] is always the zero codeword.
struct LinearCode {
  int n = 0;
  int k = 0;
  std::vector<std::uint32_t> words;

  friend bool operator==(const LinearCode&, const LinearCode&) = default;
};

inline LinearCode span(const GeneratorMatrix& g) {
  LinearCode c{g.n(), g.k(), span_words(g.mat)};
  std::sort(c.words.begin(), c.words.end());
  return c;
}

// Minimum distance by direct scan. Linearity reduces it to the smallest
// nonzero codeword weight; debug builds cross-check against the all-pairs
// definition for small lengths.
inline int min_distance_bruteforce(const LinearCode& c) {
  if (c.words.size() < 2)
    throw std::invalid_argument(
        "min_distance_bruteforce: code has no nonzero codeword");
  int best = c.n + 1;
  for (std::uint32_t w : c.words)
    if (w != 0) best = std::min(best, std::popcount(w));
#ifndef NDEBUG
  if (c.n <= 8) {
    int pairs = c.n + 1;
    for (std::size_t i = 0; i < c.words.size(); ++i)
      for (std::size_t j = i + 1; j < c.words.size(); ++j)
        pairs = std::min(pairs, std::popcount(c.words[i] ^ c.words[j]));
    assert(pairs == best);
  }
#endif
  return best;
}

// counts[w] = number of codewords of Hamming weight w, w = 0..n.
inline std::vector<std::int64_t> weight_enumerator(const LinearCode& c) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(c.n) + 1, 0);
  for (std::uint32_t w : c.words)
    ++counts[static_cast<std::size_t>(std::popcount(w))];
  return counts;
}

// Truth table of the indicator 1_C under the shared index map (a codeword's
// packed value is its truth-table index).
inline TruthTable indicator_table(const LinearCode& c) {
  TruthTable t(c.n);
  for (std::uint32_t w : c.words) t.set(w, true);
  return t;
}

// fit* = sum_{i=0}^{d-1} C(n,i), the fitness of any code whose minimum
// distance reaches d: every ANF coefficient below degree d is then nonzero.
inline std::int64_t optimal_fitness(const ProblemInstance& inst) {
  if (inst.d < 1 || inst.d > inst.n + 1)
    throw std::invalid_argument("optimal_fitness: d out of range");
  std::int64_t sum = 0;
  std::int64_t binom = 1;
  for (int i = 0; i < inst.d; ++i) {
    sum += binom;
    binom = binom * (inst.n - i) / (i + 1);
  }
  return sum;
}

// Scores generator matrices against a fixed (n, d) target: span the code,
// raise the indicator truth table, transform to ANF, count the nonzero
// coefficients of degree below d. The table buffer and the degree mask are
// kept across calls; one evaluator serves one run at a time.
class FitnessEvaluator {
 public:
  FitnessEvaluator(int n, int d)
      : n_(n),
        d_(d),
        below_(DegreeMasks::shared(n).below(d)),
        scratch_(table_words(n), 0) {
    if (d < 1 || d > n + 1)
      throw std::invalid_argument("FitnessEvaluator: d must be in [1, n+1]");
  }

  explicit FitnessEvaluator(const ProblemInstance& inst)
      : FitnessEvaluator(inst.n, inst.d) {}

  int n() const { return n_; }
  int d() const { return d_; }

  std::int64_t evaluate(const GeneratorMatrix& g) {
    if (g.n() != n_)
      throw std::invalid_argument("fitness: matrix length differs from target");
    std::fill(scratch_.begin(), scratch_.end(), 0);
    scratch_[0] = 1;
    const auto& rows = g.rows();
    std::uint32_t cw = 0;
    const std::uint64_t total = std::uint64_t{1} << g.k();
    for (std::uint64_t i = 1; i < total; ++i) {
      cw ^= rows[static_cast<std::size_t>(std::countr_zero(i))];
      scratch_[cw >> 6] |= std::uint64_t{1} << (cw & 63u);
    }
    detail::mobius_inplace(scratch_, n_);
    std::int64_t fit = 0;
    for (std::size_t i = 0; i < scratch_.size(); ++i)
      fit += std::popcount(scratch_[i] & below_[i]);
    return fit;
  }

 private:
  int n_;
  int d_;
  std::vector<std::uint64_t> below_;
  std::vector<std::uint64_t> scratch_;
};

inline std::int64_t fitness(const GeneratorMatrix& g, const ProblemInstance& inst) {
  if (g.n() != inst.n || g.k() != inst.k)
    throw std::invalid_argument("fitness: generator shape does not match instance");
  FitnessEvaluator evaluator(inst.n, inst.d);
  return evaluator.evaluate(g);
}

}  // namespace evocode
