#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace evocode {

struct MannWhitneyResult {
  double u = 0.0;          // U statistic of the first sample
  double p = 1.0;          // two-sided p-value
  bool exact = false;      // p from full enumeration of the labelings
  bool degenerate = false; // every value tied across both samples
};

namespace detail {

// Midranks of the combined sample, scaled by 2 so they stay integral.
inline std::vector<std::int64_t> double_midranks(std::vector<double> combined) {
  std::vector<std::size_t> order(combined.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return combined[x] < combined[y];
  });
  std::vector<std::int64_t> rank2(combined.size(), 0);
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           combined[order[j + 1]] == combined[order[i]])
      ++j;
    // Positions i..j (0-based) share the midrank (i+1 + j+1)/2.
    const std::int64_t shared = static_cast<std::int64_t>(i + j) + 2;
    for (std::size_t t = i; t <= j; ++t) rank2[order[t]] = shared;
    i = j + 1;
  }
  return rank2;
}

// Exact two-sided p: fraction of the C(N, n1) equally likely labelings whose
// U deviates from the mean by at least as much as the observed one. All
// arithmetic in doubled-rank units, so ties stay exact.
inline double exact_two_sided_p(const std::vector<std::int64_t>& rank2,
                                std::size_t n1, std::int64_t observed_u2) {
  const std::size_t total = rank2.size();
  const auto center =
      static_cast<std::int64_t>(n1) * static_cast<std::int64_t>(total - n1);
  const std::int64_t observed_dev = std::llabs(observed_u2 - center);
  const std::int64_t base =
      static_cast<std::int64_t>(n1) * (static_cast<std::int64_t>(n1) + 1);

  std::vector<std::size_t> pick(n1);
  for (std::size_t i = 0; i < n1; ++i) pick[i] = i;
  std::uint64_t hits = 0, count = 0;
  for (;;) {
    std::int64_t sum = 0;
    for (std::size_t idx : pick) sum += rank2[idx];
    const std::int64_t u2 = sum - base;
    if (std::llabs(u2 - center) >= observed_dev) ++hits;
    ++count;

    // Next combination in lexicographic order.
    std::size_t pos = n1;
    while (pos > 0 && pick[pos - 1] == total - n1 + pos - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t t = pos; t < n1; ++t) pick[t] = pick[t - 1] + 1;
  }
  return static_cast<double>(hits) / static_cast<double>(count);
}

}  // namespace detail

// Rank-sum U with midrank tie handling. Exact enumeration of the rank-sum
// distribution when min(|a|, |b|) < 8, otherwise the normal approximation
// with tie-corrected variance and continuity correction. A fully tied
// dataset has no distribution to speak of; it reports p = 1 and sets the
// degenerate flag.
inline MannWhitneyResult mann_whitney_u(const std::vector<double>& a,
                                        const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("mann_whitney_u: both samples must be non-empty");
  const std::size_t n1 = a.size(), n2 = b.size();
  std::vector<double> combined;
  combined.reserve(n1 + n2);
  combined.insert(combined.end(), a.begin(), a.end());
  combined.insert(combined.end(), b.begin(), b.end());

  const std::vector<std::int64_t> rank2 = detail::double_midranks(combined);
  std::int64_t sum2 = 0;
  for (std::size_t i = 0; i < n1; ++i) sum2 += rank2[i];
  const std::int64_t u2 =
      sum2 - static_cast<std::int64_t>(n1) * (static_cast<std::int64_t>(n1) + 1);

  MannWhitneyResult result;
  result.u = static_cast<double>(u2) / 2.0;

  const bool all_tied =
      std::all_of(combined.begin(), combined.end(),
                  [&](double v) { return v == combined.front(); });
  if (all_tied) {
    result.degenerate = true;
    result.p = 1.0;
    return result;
  }

  if (std::min(n1, n2) < 8) {
    result.exact = true;
    result.p = detail::exact_two_sided_p(rank2, n1, u2);
    return result;
  }

  const double nn1 = static_cast<double>(n1), nn2 = static_cast<double>(n2);
  const double total = nn1 + nn2;
  double tie_term = 0.0;
  {
    std::vector<std::int64_t> sorted = rank2;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  const double variance =
      nn1 * nn2 / 12.0 * (total + 1.0 - tie_term / (total * (total - 1.0)));
  const double mean = nn1 * nn2 / 2.0;
  const double dev = std::max(0.0, std::abs(result.u - mean) - 0.5);
  const double z = dev / std::sqrt(variance);
  result.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

// Quantile of a sample by linear interpolation of order statistics
// (the convention spreadsheets and R's default use).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

inline double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty sample");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace evocode
