#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace evocode {

inline constexpr int kMaxVars = 28;

inline std::size_t table_words(int n) {
  return n >= 6 ? std::size_t{1} << (n - 6) : std::size_t{1};
}

namespace detail {

inline void check_vars(int n) {
  if (n < 1 || n > kMaxVars)
    throw std::invalid_argument("boolean table: variable count out of range");
}

// 2^n-bit table packed in 64-bit words, entry idx(x) = sum x_j 2^(n-j) at
// bit (idx & 63) of word (idx >> 6). For n < 6 only the low 2^n bits of the
// single word are used and the rest stay zero.
struct PackedTable {
  int n = 0;
  std::vector<std::uint64_t> words;

  PackedTable() = default;
  explicit PackedTable(int n_) : n(n_), words(table_words(n_), 0) { check_vars(n_); }

  std::uint64_t size() const { return std::uint64_t{1} << n; }
  bool get(std::uint32_t idx) const {
    return (words[idx >> 6] >> (idx & 63u)) & 1u;
  }
  void set(std::uint32_t idx, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (idx & 63u);
    if (value)
      words[idx >> 6] |= bit;
    else
      words[idx >> 6] &= ~bit;
  }

  friend bool operator==(const PackedTable&, const PackedTable&) = default;
};

// In-place subset-XOR butterfly. Over F_2 the transform truth table -> ANF
// and its inverse are the same operation, n 2^(n-1) XORs in total; strides
// below the word size run as masked shifts, wider strides as whole-word XORs.
inline void mobius_inplace(std::span<std::uint64_t> w, int n) {
  static constexpr std::uint64_t kLowHalf[6] = {
      0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
      0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
  };
  for (int b = 0; b < n && b < 6; ++b) {
    const std::uint64_t mask = kLowHalf[b];
    const int stride = 1 << b;
    for (auto& word : w) word ^= (word & mask) << stride;
  }
  for (int b = 6; b < n; ++b) {
    const std::size_t stride = std::size_t{1} << (b - 6);
    for (std::size_t base = 0; base < w.size(); base += 2 * stride)
      for (std::size_t j = 0; j < stride; ++j)
        w[base + stride + j] ^= w[base + j];
  }
}

}  // namespace detail

// Truth table of an n-variable Boolean function in the fixed lexicographic
// order idx(x) = sum_j x_j 2^(n-j) (x_1 most significant).
struct TruthTable : detail::PackedTable {
  TruthTable() = default;
  explicit TruthTable(int n_) : PackedTable(n_) {}
};

// ANF coefficients a_I, I encoded by its characteristic vector under the
// same index map; the degree of a_I is popcount(idx(I)).
struct AnfTable : detail::PackedTable {
  AnfTable() = default;
  explicit AnfTable(int n_) : PackedTable(n_) {}
  bool coeff(std::uint32_t subset) const { return get(subset); }
};

// a_I = XOR of f(x) over supp(x) ⊆ I, via the fast butterfly.
inline AnfTable mobius_transform(const TruthTable& t) {
  AnfTable a(t.n);
  a.words = t.words;
  detail::mobius_inplace(a.words, a.n);
  return a;
}

// Identical butterfly; the transform is an involution over F_2.
inline TruthTable inverse_mobius(const AnfTable& a) {
  TruthTable t(a.n);
  t.words = a.words;
  detail::mobius_inplace(t.words, t.n);
  return t;
}

// Number of nonzero coefficients of degree strictly below d, 1 <= d <= n+1.
inline std::int64_t count_coeffs_below(const AnfTable& a, int d) {
  if (d < 1 || d > a.n + 1)
    throw std::invalid_argument("count_coeffs_below: d must be in [1, n+1]");
  std::int64_t count = 0;
  for (std::size_t wi = 0; wi < a.words.size(); ++wi) {
    std::uint64_t word = a.words[wi];
    while (word != 0) {
      const auto low = static_cast<std::uint32_t>(std::countr_zero(word));
      const std::uint32_t idx = (static_cast<std::uint32_t>(wi) << 6) | low;
      if (std::popcount(idx) < d) ++count;
      word &= word - 1;
    }
  }
  return count;
}

// Bit masks of the index space grouped by popcount; lets degree scans run
// word-parallel and exit at the first incomplete degree.
class DegreeMasks {
 public:
  explicit DegreeMasks(int n) : n_(n), eq_(static_cast<std::size_t>(n) + 1) {
    detail::check_vars(n);
    for (auto& m : eq_) m.assign(table_words(n), 0);
    const std::uint64_t size = std::uint64_t{1} << n;
    for (std::uint64_t idx = 0; idx < size; ++idx)
      eq_[static_cast<std::size_t>(std::popcount(idx))][idx >> 6] |=
          std::uint64_t{1} << (idx & 63u);
  }

  int vars() const { return n_; }
  const std::vector<std::uint64_t>& of_degree(int deg) const {
    return eq_[static_cast<std::size_t>(deg)];
  }

  // OR of the masks for degrees 0..d-1.
  std::vector<std::uint64_t> below(int d) const {
    std::vector<std::uint64_t> m(table_words(n_), 0);
    for (int deg = 0; deg < d && deg <= n_; ++deg)
      for (std::size_t i = 0; i < m.size(); ++i) m[i] |= of_degree(deg)[i];
    return m;
  }

  static const DegreeMasks& shared(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<DegreeMasks>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<DegreeMasks>(n);
    return *slot;
  }

 private:
  int n_;
  std::vector<std::vector<std::uint64_t>> eq_;
};

// Smallest |I| with a_I = 0, scanning degrees upward; n+1 when every
// coefficient is set. Only meaningful for indicators of linear codes, whose
// empty-set coefficient is 1 because the zero vector is a codeword.
inline int min_absent_degree(const AnfTable& a) {
  if (!a.coeff(0))
    throw std::invalid_argument(
        "min_absent_degree: empty-set coefficient is 0, "
        "input is not the indicator of a linear code");
  const DegreeMasks& masks = DegreeMasks::shared(a.n);
  for (int deg = 0; deg <= a.n; ++deg) {
    const auto& m = masks.of_degree(deg);
    for (std::size_t i = 0; i < m.size(); ++i)
      if ((~a.words[i] & m[i]) != 0) return deg;
  }
  return a.n + 1;
}

}  // namespace evocode
