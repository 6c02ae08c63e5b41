#pragma once

#include "evocode/code.hpp"
#include "evocode/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace evocode {

inline constexpr std::int64_t kDefaultEffortCap = 10'000'000;

// Permutation of coordinate positions, 0-based: position j of the source
// word moves to position image[j]. Positions count from the left of the
// written bitstring, consistent with the matrix text format.
struct CoordinatePermutation {
  std::vector<int> image;

  friend bool operator==(const CoordinatePermutation&,
                         const CoordinatePermutation&) = default;
};

inline bool is_valid_permutation(const CoordinatePermutation& p, int n) {
  if (static_cast<int>(p.image.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : p.image) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

inline CoordinatePermutation identity_permutation(int n) {
  CoordinatePermutation p;
  p.image.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) p.image[static_cast<std::size_t>(j)] = j;
  return p;
}

// first, then second.
inline CoordinatePermutation compose(const CoordinatePermutation& first,
                                     const CoordinatePermutation& second) {
  if (first.image.size() != second.image.size())
    throw std::invalid_argument("compose: permutation sizes differ");
  CoordinatePermutation out;
  out.image.resize(first.image.size());
  for (std::size_t j = 0; j < first.image.size(); ++j)
    out.image[j] =
        second.image[static_cast<std::size_t>(first.image[static_cast<std::size_t>(j)])];
  return out;
}

namespace detail {

// Position j (0-based from the left) sits at bit n-1-j of the packed word.
inline std::uint32_t permute_word(std::uint32_t w, const std::vector<int>& image,
                                  int n) {
  std::uint32_t out = 0;
  for (int j = 0; j < n; ++j)
    out |= ((w >> (n - 1 - j)) & 1u)
           << (n - 1 - image[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace detail

inline LinearCode apply_permutation(const LinearCode& c,
                                    const CoordinatePermutation& p) {
  if (!is_valid_permutation(p, c.n))
    throw std::invalid_argument("apply_permutation: not a bijection on positions");
  LinearCode out{c.n, c.k, {}};
  out.words.reserve(c.words.size());
  for (std::uint32_t w : c.words)
    out.words.push_back(detail::permute_word(w, p.image, c.n));
  std::sort(out.words.begin(), out.words.end());
  return out;
}

enum class EquivOutcome { equivalent, not_equivalent, undecided };

enum class PrunedBy { none, weight_enumerator, signature, search_exhausted };

// Three-way result. A negative is certified either by the weight-enumerator
// filter or by exhausting the signature-constrained search tree (both
// reported under pruned_by); hitting the node cap leaves the question
// undecided and is reported as search_exhausted, never as a negative.
struct EquivalenceReport {
  EquivOutcome outcome = EquivOutcome::undecided;
  std::optional<CoordinatePermutation> witness;
  PrunedBy pruned_by = PrunedBy::none;
  std::int64_t nodes = 0;
};

namespace detail {

// Count vector over weight classes: entry w = number of weight-w codewords
// with a 1 at every position of the probe set.
inline std::vector<std::int64_t> joint_signature(const LinearCode& c,
                                                 std::uint32_t probe) {
  std::vector<std::int64_t> sig(static_cast<std::size_t>(c.n) + 1, 0);
  for (std::uint32_t w : c.words)
    if ((w & probe) == probe)
      ++sig[static_cast<std::size_t>(std::popcount(w))];
  return sig;
}

inline std::uint64_t hash_sig(const std::vector<std::int64_t>& sig) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::int64_t v : sig) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return h;
}

inline std::uint32_t position_bit(int j, int n) {
  return std::uint32_t{1} << (n - 1 - j);
}

// Any k independent codewords, taken from the triangular basis.
inline std::vector<std::uint32_t> basis_rows(const LinearCode& c) {
  XorBasis basis;
  for (std::uint32_t w : c.words)
    if (basis.insert(w) && basis.size == c.k) break;
  std::vector<std::uint32_t> rows;
  for (std::uint32_t r : basis.at)
    if (r != 0) rows.push_back(r);
  return rows;
}

struct EquivSearch {
  int n = 0;
  std::int64_t cap = 0;
  std::int64_t nodes = 0;
  bool capped = false;
  // candidates[j] = positions of b whose column signature equals a's column j.
  std::vector<std::vector<int>> candidates;
  // Hashed pairwise signatures, row-major n x n, diagonal = single column.
  std::vector<std::uint64_t> pair_a, pair_b;
  std::vector<int> order;    // a-positions, most constrained first
  std::vector<int> assign;   // a-position -> b-position, -1 while open
  std::vector<bool> used;    // b-positions taken
  std::vector<std::uint32_t> rows_a;
  XorBasis membership_b;

  bool full_assignment_maps() const {
    for (std::uint32_t r : rows_a)
      if (membership_b.reduce(permute_word(r, assign, n)) != 0) return false;
    return true;
  }

  bool dfs(std::size_t depth) {
    if (depth == order.size()) return full_assignment_maps();
    const int aj = order[depth];
    for (int bj : candidates[static_cast<std::size_t>(aj)]) {
      if (used[static_cast<std::size_t>(bj)]) continue;
      if (++nodes > cap) {
        capped = true;
        return false;
      }
      bool compatible = true;
      for (std::size_t d = 0; d < depth; ++d) {
        const int ai = order[d];
        const int bi = assign[static_cast<std::size_t>(ai)];
        if (pair_a[static_cast<std::size_t>(aj) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(ai)] !=
            pair_b[static_cast<std::size_t>(bj) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(bi)]) {
          compatible = false;
          break;
        }
      }
      if (!compatible) continue;
      assign[static_cast<std::size_t>(aj)] = bj;
      used[static_cast<std::size_t>(bj)] = true;
      if (dfs(depth + 1)) return true;
      used[static_cast<std::size_t>(bj)] = false;
      assign[static_cast<std::size_t>(aj)] = -1;
      if (capped) return false;
    }
    return false;
  }
};

}  // namespace detail

// Decides whether some coordinate permutation maps a onto b. Filters:
// weight enumerators must match, columns may only map to columns with the
// same per-weight-class 1-count signature, and partial assignments must
// preserve pairwise joint signatures. Surviving full assignments are
// verified by mapping a basis of a into b. Work is metered in backtracking
// nodes and stops at effort_cap.
inline EquivalenceReport is_equivalent(const LinearCode& a, const LinearCode& b,
                                       std::int64_t effort_cap = kDefaultEffortCap) {
  if (a.n != b.n || a.k != b.k)
    throw std::invalid_argument("is_equivalent: codes have different (n, k)");
  if (effort_cap < 1)
    throw std::invalid_argument("is_equivalent: effort cap must be positive");

  EquivalenceReport report;
  if (a.words == b.words) {
    report.outcome = EquivOutcome::equivalent;
    report.witness = identity_permutation(a.n);
    return report;
  }
  if (weight_enumerator(a) != weight_enumerator(b)) {
    report.outcome = EquivOutcome::not_equivalent;
    report.pruned_by = PrunedBy::weight_enumerator;
    return report;
  }

  const int n = a.n;
  std::vector<std::vector<std::int64_t>> colsig_a, colsig_b;
  colsig_a.reserve(static_cast<std::size_t>(n));
  colsig_b.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    colsig_a.push_back(detail::joint_signature(a, detail::position_bit(j, n)));
    colsig_b.push_back(detail::joint_signature(b, detail::position_bit(j, n)));
  }

  detail::EquivSearch search;
  search.n = n;
  search.cap = effort_cap;
  search.candidates.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int j2 = 0; j2 < n; ++j2)
      if (colsig_a[static_cast<std::size_t>(j)] ==
          colsig_b[static_cast<std::size_t>(j2)])
        search.candidates[static_cast<std::size_t>(j)].push_back(j2);
    if (search.candidates[static_cast<std::size_t>(j)].empty()) {
      report.outcome = EquivOutcome::not_equivalent;
      report.pruned_by = PrunedBy::signature;
      return report;
    }
  }

  search.pair_a.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  search.pair_b.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const std::uint32_t probe_ij =
          detail::position_bit(i, n) | detail::position_bit(j, n);
      search.pair_a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(j)] =
          detail::hash_sig(detail::joint_signature(a, probe_ij));
      search.pair_b[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(j)] =
          detail::hash_sig(detail::joint_signature(b, probe_ij));
    }

  search.order.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) search.order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(search.order.begin(), search.order.end(), [&](int x, int y) {
    return search.candidates[static_cast<std::size_t>(x)].size() <
           search.candidates[static_cast<std::size_t>(y)].size();
  });
  search.assign.assign(static_cast<std::size_t>(n), -1);
  search.used.assign(static_cast<std::size_t>(n), false);
  search.rows_a = detail::basis_rows(a);
  for (std::uint32_t w : b.words) {
    search.membership_b.insert(w);
    if (search.membership_b.size == b.k) break;
  }

  const bool found = search.dfs(0);
  report.nodes = search.nodes;
  if (found) {
    CoordinatePermutation witness{search.assign};
    if (apply_permutation(a, witness).words != b.words)
      throw std::logic_error("is_equivalent: witness failed re-verification");
    report.outcome = EquivOutcome::equivalent;
    report.witness = std::move(witness);
  } else if (search.capped) {
    report.outcome = EquivOutcome::undecided;
    report.pruned_by = PrunedBy::search_exhausted;
  } else {
    report.outcome = EquivOutcome::not_equivalent;
    report.pruned_by = PrunedBy::signature;
  }
  return report;
}

// Greedy partition into equivalence classes: each code is tested against one
// representative per existing class and joins the first positive; otherwise
// it founds a new class, flagged undecided when some comparison hit the
// effort cap (membership unresolved rather than distinct).
struct EquivalenceClass {
  std::vector<std::size_t> members;
  bool undecided = false;
};

inline std::vector<EquivalenceClass> partition_classes(
    const std::vector<LinearCode>& codes,
    std::int64_t effort_cap = kDefaultEffortCap) {
  std::vector<EquivalenceClass> classes;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i > 0 && (codes[i].n != codes[0].n || codes[i].k != codes[0].k))
      throw std::invalid_argument("partition_classes: codes must share (n, k)");
    bool placed = false;
    bool saw_undecided = false;
    for (EquivalenceClass& cls : classes) {
      const EquivalenceReport r =
          is_equivalent(codes[cls.members.front()], codes[i], effort_cap);
      if (r.outcome == EquivOutcome::equivalent) {
        cls.members.push_back(i);
        placed = true;
        break;
      }
      if (r.outcome == EquivOutcome::undecided) saw_undecided = true;
    }
    if (!placed) classes.push_back({{i}, saw_undecided});
  }
  return classes;
}

}  // namespace evocode
