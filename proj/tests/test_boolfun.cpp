#include "evocode/boolfun.hpp"
#include "evocode/code.hpp"
#include "evocode/gf2.hpp"
#include "evocode/rng.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <vector>

using namespace evocode;

namespace {

TruthTable random_table(int n, Rng& rng) {
  TruthTable t(n);
  for (auto& w : t.words) w = rng();
  if (n < 6) t.words[0] &= (std::uint64_t{1} << (1 << n)) - 1;
  return t;
}

TruthTable indicator_of(std::initializer_list<std::uint32_t> words, int n) {
  TruthTable t(n);
  for (std::uint32_t w : words) t.set(w, true);
  return t;
}

std::vector<int> unpack(const detail::PackedTable& t) {
  std::vector<int> out(std::size_t{1} << t.n);
  for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = t.get(i) ? 1 : 0;
  return out;
}

}  // namespace

TEST_CASE("table construction bounds", "[boolfun]") {
  CHECK_THROWS_AS(TruthTable(0), std::invalid_argument);
  CHECK_THROWS_AS(TruthTable(29), std::invalid_argument);
  CHECK(TruthTable(3).words.size() == 1);
  CHECK(TruthTable(6).words.size() == 1);
  CHECK(TruthTable(8).words.size() == 4);
}

TEST_CASE("mobius_transform on fixed cases", "[boolfun]") {
  SECTION("all-zero table") {
    const AnfTable a = mobius_transform(TruthTable(3));
    for (std::uint32_t i = 0; i < 8; ++i) CHECK_FALSE(a.coeff(i));
  }
  SECTION("constant-1 table") {
    TruthTable t(3);
    for (std::uint32_t i = 0; i < 8; ++i) t.set(i, true);
    const AnfTable a = mobius_transform(t);
    CHECK(a.coeff(0));
    for (std::uint32_t i = 1; i < 8; ++i) CHECK_FALSE(a.coeff(i));
  }
  SECTION("indicator of {000, 111}") {
    const AnfTable a = mobius_transform(indicator_of({0b000, 0b111}, 3));
    for (std::uint32_t i = 0; i < 8; ++i)
      CHECK(a.coeff(i) == (std::popcount(i) <= 2));
  }
  SECTION("single 1 at x = 0 sets every coefficient") {
    const AnfTable a = mobius_transform(indicator_of({0}, 4));
    for (std::uint32_t i = 0; i < 16; ++i) CHECK(a.coeff(i));
  }
}

TEST_CASE("mobius_transform matches the naive definition", "[boolfun]") {
  Rng rng(53);
  for (int n = 1; n <= 10; ++n)
    for (int trial = 0; trial < 20; ++trial) {
      const TruthTable t = random_table(n, rng);
      CHECK(unpack(mobius_transform(t)) == oracle::naive_mobius(unpack(t)));
    }
}

TEST_CASE("mobius_transform is an involution", "[boolfun]") {
  SECTION("all-zero fixed point") {
    const TruthTable t(5);
    CHECK(inverse_mobius(mobius_transform(t)) == t);
  }
  SECTION("constant-1 ANF is the constant-1 function") {
    AnfTable a(3);
    a.set(0, true);
    const TruthTable t = inverse_mobius(a);
    for (std::uint32_t i = 0; i < 8; ++i) CHECK(t.get(i));
  }
  SECTION("random tables") {
    Rng rng(59);
    for (int n = 3; n <= 12; ++n)
      for (int trial = 0; trial < 100; ++trial) {
        const TruthTable t = random_table(n, rng);
        CHECK(inverse_mobius(mobius_transform(t)) == t);
      }
  }
}

TEST_CASE("count_coeffs_below on fixed cases", "[boolfun]") {
  CHECK(count_coeffs_below(mobius_transform(TruthTable(4)), 3) == 0);

  const AnfTable a = mobius_transform(indicator_of({0b000, 0b111}, 3));
  CHECK(count_coeffs_below(a, 3) == 7);
  CHECK(count_coeffs_below(a, 4) == 7);
  CHECK(count_coeffs_below(a, 1) == 1);

  CHECK_THROWS_AS(count_coeffs_below(a, 0), std::invalid_argument);
  CHECK_THROWS_AS(count_coeffs_below(a, 5), std::invalid_argument);
}

TEST_CASE("count_coeffs_below complements the zero count", "[boolfun]") {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 10));
    const AnfTable a = mobius_transform(random_table(n, rng));
    std::int64_t zeros = 0;
    for (std::uint32_t i = 0; i < (std::uint32_t{1} << n); ++i)
      if (!a.coeff(i)) ++zeros;
    CHECK(count_coeffs_below(a, n + 1) + zeros == std::int64_t{1} << n);
  }
}

TEST_CASE("min_absent_degree on fixed cases", "[boolfun]") {
  SECTION("full space has distance 1") {
    TruthTable t(4);
    for (std::uint32_t i = 0; i < 16; ++i) t.set(i, true);
    CHECK(min_absent_degree(mobius_transform(t)) == 1);
  }
  SECTION("repetition code {000, 111}") {
    CHECK(min_absent_degree(mobius_transform(indicator_of({0b000, 0b111}, 3))) ==
          3);
  }
  SECTION("(7,4) Hamming code") {
    const LinearCode code = span(oracle::hamming_7_4());
    const AnfTable a = mobius_transform(indicator_table(code));
    CHECK(min_absent_degree(a) == 3);
    CHECK(min_distance_bruteforce(code) == 3);
  }
  SECTION("no absent coefficient returns n + 1") {
    CHECK(min_absent_degree(mobius_transform(indicator_of({0}, 3))) == 4);
  }
  SECTION("empty-set coefficient of 0 is rejected") {
    CHECK_THROWS_AS(min_absent_degree(mobius_transform(TruthTable(3))),
                    std::invalid_argument);
  }
}

TEST_CASE("min_absent_degree equals the brute-force distance", "[boolfun]") {
  Rng rng(67);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 9));
    const int k = 1 + static_cast<int>(uniform_below(
                          rng, static_cast<std::uint64_t>(std::min(n, 5))));
    const LinearCode code = span(random_full_rank(k, n, rng));
    const AnfTable a = mobius_transform(indicator_table(code));
    CHECK(min_absent_degree(a) == min_distance_bruteforce(code));
  }
}
