#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "evocode/rng.hpp"

namespace evocode {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxLength = 32;

// Mask of the n used bits of a packed row.
inline std::uint32_t row_mask(int n) {
  return static_cast<std::uint32_t>((std::uint64_t{1} << n) - 1);
}

// Vector in F_2^n. Coordinates are x_1..x_n with x_1 at the most significant
// used bit, so the packed word reads like the written string: "110" -> 0b110.
struct BitVec {
  std::uint32_t bits = 0;
  int n = 0;

  BitVec() = default;
  BitVec(std::uint32_t bits_, int n_) : bits(bits_), n(n_) {
    if (n < 1 || n > kMaxLength)
      throw std::invalid_argument("BitVec: length must be in [1, 32]");
    if ((bits & ~row_mask(n)) != 0)
      throw std::invalid_argument("BitVec: set bits beyond length");
  }

  // 1-based coordinate access, leftmost position first.
  bool coord(int j) const {
    assert(j >= 1 && j <= n);
    return (bits >> (n - j)) & 1u;
  }
  int weight() const { return std::popcount(bits); }

  friend bool operator==(const BitVec&, const BitVec&) = default;
};

inline std::string to_string(const BitVec& v) {
  std::string s(static_cast<std::size_t>(v.n), '0');
  for (int j = 1; j <= v.n; ++j)
    if (v.coord(j)) s[static_cast<std::size_t>(j - 1)] = '1';
  return s;
}

inline BitVec parse_bitvec(std::string_view s) {
  if (s.empty() || s.size() > static_cast<std::size_t>(kMaxLength))
    throw std::invalid_argument("BitVec: bad string length");
  std::uint32_t bits = 0;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitVec: characters must be 0 or 1");
    bits = (bits << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return BitVec(bits, static_cast<int>(s.size()));
}

// k x n matrix over F_2, rows packed like BitVec. k = 0 is representable so
// that rref of the zero matrix has a value; validated entry points require
// at least one row.
struct BinMatrix {
  int n = 0;
  std::vector<std::uint32_t> rows;

  int k() const { return static_cast<int>(rows.size()); }

  friend bool operator==(const BinMatrix&, const BinMatrix&) = default;
};

inline BinMatrix make_matrix(int n, std::vector<std::uint32_t> rows) {
  if (n < 1 || n > kMaxLength)
    throw std::invalid_argument("BinMatrix: n must be in [1, 32]");
  if (rows.empty() || rows.size() > static_cast<std::size_t>(n))
    throw std::invalid_argument("BinMatrix: row count must be in [1, n]");
  for (std::uint32_t r : rows)
    if ((r & ~row_mask(n)) != 0)
      throw std::invalid_argument("BinMatrix: row has set bits beyond length");
  return BinMatrix{n, std::move(rows)};
}

namespace detail {

// Triangular XOR basis indexed by leading bit. insert() keeps the reduced
// residue, so rows have pairwise distinct leading bits.
struct XorBasis {
  std::array<std::uint32_t, kMaxLength> at{};
  int size = 0;

  // Residue of v after elimination; 0 means v lies in the span.
  std::uint32_t reduce(std::uint32_t v) const {
    while (v != 0) {
      const int b = std::bit_width(v) - 1;
      if (at[static_cast<std::size_t>(b)] == 0) return v;
      v ^= at[static_cast<std::size_t>(b)];
    }
    return 0;
  }

  bool insert(std::uint32_t v) {
    v = reduce(v);
    if (v == 0) return false;
    at[static_cast<std::size_t>(std::bit_width(v) - 1)] = v;
    ++size;
    return true;
  }
};

inline int rank_words(const std::vector<std::uint32_t>& rows) {
  XorBasis basis;
  for (std::uint32_t r : rows) basis.insert(r);
  return basis.size;
}

}  // namespace detail

inline int rank(const BinMatrix& m) { return detail::rank_words(m.rows); }

// Reduced row echelon form: nonzero rows only, sorted by pivot coordinate
// (descending leading bit), each pivot bit cleared from every other row.
// Canonical for the row space, so rref(a) == rref(b) iff equal spans.
inline BinMatrix rref(const BinMatrix& m) {
  detail::XorBasis basis;
  for (std::uint32_t r : m.rows) basis.insert(r);
  std::vector<std::uint32_t> out;
  for (int b = kMaxLength - 1; b >= 0; --b)
    if (basis.at[static_cast<std::size_t>(b)] != 0)
      out.push_back(basis.at[static_cast<std::size_t>(b)]);
  // Back-eliminate pivots from earlier rows.
  for (std::size_t i = 1; i < out.size(); ++i) {
    const std::uint32_t pivot =
        std::uint32_t{1} << (std::bit_width(out[i]) - 1);
    for (std::size_t j = 0; j < i; ++j)
      if (out[j] & pivot) out[j] ^= out[i];
  }
  return BinMatrix{m.n, std::move(out)};
}

// Membership of v in the row space of a matrix in RREF.
inline bool contains(const BinMatrix& basis_rref, const BitVec& v) {
  if (v.n != basis_rref.n)
    throw std::invalid_argument("contains: vector length does not match matrix");
  std::uint32_t x = v.bits;
  for (std::uint32_t row : basis_rref.rows) {
    assert(row != 0);
    const std::uint32_t pivot = std::uint32_t{1} << (std::bit_width(row) - 1);
    if (x & pivot) x ^= row;
  }
  return x == 0;
}

// Full-rank k x n matrix; the search genotype. Every variation operator
// must hand back one of these.
struct GeneratorMatrix {
  BinMatrix mat;

  GeneratorMatrix() = default;
  explicit GeneratorMatrix(BinMatrix m) : mat(std::move(m)) {
    if (rank(mat) != mat.k())
      throw std::invalid_argument("GeneratorMatrix: rank is below the row count");
  }

  // For construction sites that guarantee full rank themselves.
  static GeneratorMatrix unchecked(BinMatrix m) {
    GeneratorMatrix g;
    g.mat = std::move(m);
    assert(rank(g.mat) == g.mat.k());
    return g;
  }

  int n() const { return mat.n; }
  int k() const { return mat.k(); }
  const std::vector<std::uint32_t>& rows() const { return mat.rows; }

  friend bool operator==(const GeneratorMatrix&, const GeneratorMatrix&) = default;
};

// All 2^k vectors of the row space, zero first, Gray-code order (one row XOR
// per step). Each vector appears exactly once when the matrix has full rank.
inline std::vector<std::uint32_t> span_words(const BinMatrix& m) {
  const int k = m.k();
  if (k > 26) throw std::invalid_argument("span_words: 2^k table would be too large");
  std::vector<std::uint32_t> out(std::size_t{1} << k);
  std::uint32_t acc = 0;
  out[0] = 0;
  for (std::uint64_t i = 1; i < out.size(); ++i) {
    acc ^= m.rows[static_cast<std::size_t>(std::countr_zero(i))];
    out[i] = acc;
  }
  return out;
}

// Distance between the row spaces of two same-shape full-rank matrices:
// 2(k - dim(A ∩ B)), computed as 2(rank[A; B] - k). Always even, 0 iff the
// matrices span the same subspace, at most 2k.
inline int subspace_distance(const GeneratorMatrix& a, const GeneratorMatrix& b) {
  if (a.n() != b.n() || a.k() != b.k())
    throw std::invalid_argument("subspace_distance: shapes differ");
  detail::XorBasis basis;
  for (std::uint32_t r : a.rows()) basis.insert(r);
  for (std::uint32_t r : b.rows()) basis.insert(r);
  return 2 * (basis.size - a.k());
}

// Uniform full-rank k x n matrix: rows drawn uniformly from F_2^n, redrawn
// while dependent on the accepted ones. Expected retries per row < 2 since
// the partial span covers at most half of F_2^n. Every subspace has the
// same number of ordered bases, so row spaces are uniform on the set of
// k-dimensional subspaces.
inline GeneratorMatrix random_full_rank(int k, int n, Rng& rng) {
  if (n < 1 || n > kMaxLength || k < 1 || k > n)
    throw std::invalid_argument("random_full_rank: need 1 <= k <= n <= 32");
  detail::XorBasis basis;
  std::vector<std::uint32_t> rows;
  rows.reserve(static_cast<std::size_t>(k));
  while (rows.size() < static_cast<std::size_t>(k)) {
    const auto v = static_cast<std::uint32_t>(uniform_below(rng, std::uint64_t{1} << n));
    if (basis.insert(v)) rows.push_back(v);
  }
  return GeneratorMatrix::unchecked(BinMatrix{n, std::move(rows)});
}

// Number of k-dimensional subspaces of F_2^n: the product formula with the
// numerator assembled first; the final division is exact.
inline BigInt gaussian_binomial(int n, int k) {
  if (k < 0 || n < k || n > 64)
    throw std::invalid_argument("gaussian_binomial: need 0 <= k <= n <= 64");
  BigInt num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= (BigInt(1) << (n - i)) - 1;
    den *= (BigInt(1) << (k - i)) - 1;
  }
  return num / den;
}

// "2.31e11"-style rendering with three significant digits, half-up.
inline std::string scientific_3sig(const BigInt& value) {
  if (value < 0) throw std::invalid_argument("scientific_3sig: negative value");
  const std::string digits = value.str();
  int exponent = static_cast<int>(digits.size()) - 1;
  long mant;
  if (digits.size() <= 3) {
    mant = std::stol(digits);
    for (std::size_t i = digits.size(); i < 3; ++i) mant *= 10;
  } else {
    mant = std::stol(digits.substr(0, 3));
    if (digits[3] >= '5') ++mant;
    if (mant >= 1000) {
      mant /= 10;
      ++exponent;
    }
  }
  std::string s = std::to_string(mant);
  return s.substr(0, 1) + "." + s.substr(1) + "e" + std::to_string(exponent);
}

}  // namespace evocode
