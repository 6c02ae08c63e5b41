#include "evocode/operators.hpp"
#include "evocode/code.hpp"
#include "evocode/gf2.hpp"
#include "evocode/rng.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace evocode;

TEST_CASE("mutate_row replaces one row and keeps full rank", "[operators]") {
  Rng rng(103);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 15));
    const int k =
        1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    const GeneratorMatrix g = random_full_rank(k, n, rng);
    const int row = static_cast<int>(
        uniform_below(rng, static_cast<std::uint64_t>(k)));

    const GeneratorMatrix out = mutate_row(g, row, rng);
    CHECK(evocode::rank(out.mat) == k);
    for (int i = 0; i < k; ++i) {
      if (i == row) continue;
      CHECK(out.mat.rows[static_cast<std::size_t>(i)] ==
            g.mat.rows[static_cast<std::size_t>(i)]);
    }
  }

  const GeneratorMatrix g = random_full_rank(3, 6, rng);
  CHECK_THROWS_AS(mutate_row(g, -1, rng), std::out_of_range);
  CHECK_THROWS_AS(mutate_row(g, 3, rng), std::out_of_range);
}

TEST_CASE("single-row mutation moves within the code or not at all",
          "[operators]") {
  // Replacing one basis row with another vector of the same span keeps the
  // subspace identical; any other replacement produces a subspace at distance
  // exactly 2 (one basis direction swapped out).
  Rng rng(107);
  int unchanged = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const GeneratorMatrix g = random_full_rank(4, 8, rng);
    const int row = static_cast<int>(uniform_below(rng, 4));
    const GeneratorMatrix out = mutate_row(g, row, rng);

    const int dist = subspace_distance(g, out);
    const bool same_space = rref(g.mat) == rref(out.mat);
    if (same_space) ++unchanged;
    CHECK((dist == 0 || dist == 2));
    CHECK((dist == 0) == same_space);
    const BitVec replacement{out.mat.rows[static_cast<std::size_t>(row)], 8};
    CHECK(contains(rref(g.mat), replacement) == same_space);
  }
  CHECK(unchanged > 0);
  CHECK(unchanged < 10000);
}

TEST_CASE("mutate_traced counts triggered rows", "[operators]") {
  Rng rng(109);
  const GeneratorMatrix g = random_full_rank(5, 10, rng);

  int any_triggered = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const MutationOutcome out = mutate_traced(g, 0.3, rng);
    CHECK(evocode::rank(out.result.mat) == 5);
    CHECK(out.triggered_rows >= 0);
    CHECK(out.triggered_rows <= 5);
    any_triggered += out.triggered_rows;

    int changed = 0;
    for (int i = 0; i < 5; ++i)
      if (out.result.mat.rows[static_cast<std::size_t>(i)] !=
          g.mat.rows[static_cast<std::size_t>(i)])
        ++changed;
    CHECK(changed <= out.triggered_rows);
    if (out.triggered_rows == 0) CHECK(out.result.mat.rows == g.mat.rows);
  }
  CHECK(any_triggered > 0);

  CHECK_THROWS_AS(mutate(g, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(mutate(g, 1.5, rng), std::invalid_argument);
  CHECK(evocode::rank(mutate(g, 1.0, rng).mat) == 5);
}

TEST_CASE("mutation trigger frequency follows the rate", "[operators]") {
  Rng rng(113);
  const GeneratorMatrix g = random_full_rank(4, 12, rng);
  const double p = 0.25;
  std::int64_t triggered = 0;
  const int trials = 20000;
  for (int trial = 0; trial < trials; ++trial)
    triggered += mutate_traced(g, p, rng).triggered_rows;
  const double observed =
      static_cast<double>(triggered) / (4.0 * static_cast<double>(trials));
  CHECK(observed == Catch::Approx(p).margin(0.01));
}

TEST_CASE("crossover assembles a full-rank basis from both parents",
          "[operators]") {
  Rng rng(127);
  for (int trial = 0; trial < 10000; ++trial) {
    const GeneratorMatrix a = random_full_rank(5, 10, rng);
    const GeneratorMatrix b = random_full_rank(5, 10, rng);
    const GeneratorMatrix child = crossover(a, b, rng);

    CHECK(child.n() == 10);
    CHECK(child.k() == 5);
    CHECK(evocode::rank(child.mat) == 5);

    // Every child row is copied verbatim from one of the parents.
    for (std::uint32_t row : child.mat.rows) {
      const bool from_a =
          std::find(a.mat.rows.begin(), a.mat.rows.end(), row) !=
          a.mat.rows.end();
      const bool from_b =
          std::find(b.mat.rows.begin(), b.mat.rows.end(), row) !=
          b.mat.rows.end();
      CHECK((from_a || from_b));
    }

    // The child spans a subspace of the parents' sum space.
    BinMatrix sum = a.mat;
    sum.rows.insert(sum.rows.end(), b.mat.rows.begin(), b.mat.rows.end());
    const BinMatrix sum_basis = rref(sum);
    for (std::uint32_t row : child.mat.rows)
      CHECK(contains(sum_basis, BitVec{row, 10}));
  }
}

TEST_CASE("crossover of a matrix with itself reproduces its span",
          "[operators]") {
  Rng rng(131);
  for (int trial = 0; trial < 200; ++trial) {
    const GeneratorMatrix a = random_full_rank(4, 9, rng);
    const GeneratorMatrix child = crossover(a, a, rng);
    CHECK(rref(child.mat) == rref(a.mat));
  }
}

TEST_CASE("crossover of equal-span parents stays in that span", "[operators]") {
  Rng rng(137);
  for (int trial = 0; trial < 200; ++trial) {
    const GeneratorMatrix a = random_full_rank(3, 8, rng);
    BinMatrix scrambled = a.mat;
    scrambled.rows[0] ^= scrambled.rows[1];
    scrambled.rows[2] ^= scrambled.rows[0];
    std::swap(scrambled.rows[1], scrambled.rows[2]);
    const GeneratorMatrix b(scrambled);
    REQUIRE(rref(a.mat) == rref(b.mat));

    const GeneratorMatrix child = crossover(a, b, rng);
    CHECK(rref(child.mat) == rref(a.mat));
  }
}

TEST_CASE("crossover rejects mismatched shapes", "[operators]") {
  Rng rng(139);
  const GeneratorMatrix a = random_full_rank(3, 8, rng);
  const GeneratorMatrix wrong_n = random_full_rank(3, 9, rng);
  const GeneratorMatrix wrong_k = random_full_rank(4, 8, rng);
  CHECK_THROWS_AS(crossover(a, wrong_n, rng), std::invalid_argument);
  CHECK_THROWS_AS(crossover(a, wrong_k, rng), std::invalid_argument);
}
