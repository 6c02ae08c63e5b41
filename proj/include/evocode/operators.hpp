#pragma once

#include "evocode/gf2.hpp"
#include "evocode/rng.hpp"

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace evocode {

namespace detail {

// Uniform vector outside the row space of the k-1 remaining rows, by
// rejection against a triangular basis. At least half of F_2^n lies outside
// the subspace, so the expected number of draws is below 2.
inline std::uint32_t sample_outside(const XorBasis& basis, int n, Rng& rng) {
  const std::uint64_t size = std::uint64_t{1} << n;
  for (;;) {
    const auto v = static_cast<std::uint32_t>(uniform_below(rng, size));
    if (basis.reduce(v) != 0) return v;
  }
}

}  // namespace detail

// Replaces row `row` (0-based) by a uniform vector from the complement of
// the span of the other rows. The new row is independent of them by
// construction, so rank k is preserved; it may still fall inside the span of
// the full original matrix, in which case the code itself is unchanged.
inline GeneratorMatrix mutate_row(const GeneratorMatrix& g, int row, Rng& rng) {
  const int k = g.k();
  if (row < 0 || row >= k)
    throw std::out_of_range("mutate_row: row index out of range");
  detail::XorBasis basis;
  for (int i = 0; i < k; ++i)
    if (i != row) basis.insert(g.rows()[static_cast<std::size_t>(i)]);
  BinMatrix out = g.mat;
  out.rows[static_cast<std::size_t>(row)] =
      detail::sample_outside(basis, g.n(), rng);
  return GeneratorMatrix(std::move(out));
}

struct MutationOutcome {
  GeneratorMatrix result;
  int triggered_rows = 0;
};

// Scans rows top to bottom; each triggers independently with probability
// p_mut and is resampled against the matrix as already mutated by the
// earlier rows of the same pass.
inline MutationOutcome mutate_traced(const GeneratorMatrix& g, double p_mut,
                                     Rng& rng) {
  if (!(p_mut > 0.0) || p_mut > 1.0)
    throw std::invalid_argument("mutate: p_mut must be in (0, 1]");
  MutationOutcome out{g, 0};
  const int k = g.k();
  for (int row = 0; row < k; ++row) {
    if (uniform01(rng) < p_mut) {
      out.result = mutate_row(out.result, row, rng);
      ++out.triggered_rows;
    }
  }
  return out;
}

inline GeneratorMatrix mutate(const GeneratorMatrix& g, double p_mut, Rng& rng) {
  return mutate_traced(g, p_mut, rng).result;
}

// Stacks the parents' 2k rows, shuffles them uniformly, then greedily keeps
// each row that is independent of those kept before it. Either parent alone
// has rank k, so the scan always collects k rows; the offspring lies inside
// the parents' sum space because every row comes from a parent.
inline GeneratorMatrix crossover(const GeneratorMatrix& g1,
                                 const GeneratorMatrix& g2, Rng& rng) {
  if (g1.n() != g2.n() || g1.k() != g2.k())
    throw std::invalid_argument("crossover: parent shapes differ");
  const int k = g1.k();
  std::vector<std::uint32_t> pool;
  pool.reserve(static_cast<std::size_t>(2 * k));
  pool.insert(pool.end(), g1.rows().begin(), g1.rows().end());
  pool.insert(pool.end(), g2.rows().begin(), g2.rows().end());
  shuffle_in_place(rng, pool);

  BinMatrix out;
  out.n = g1.n();
  out.rows.reserve(static_cast<std::size_t>(k));
  detail::XorBasis basis;
  for (std::uint32_t row : pool) {
    if (basis.insert(row)) {
      out.rows.push_back(row);
      if (static_cast<int>(out.rows.size()) == k) break;
    }
  }
  assert(static_cast<int>(out.rows.size()) == k);
  return GeneratorMatrix(std::move(out));
}

}  // namespace evocode
