#include "qtomo/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "qtomo/types.hpp"

namespace qtomo {

MeanWithError mean_with_error(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean_with_error: empty sample");
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile_sorted: empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> percentile_curve(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(99);
  for (int p = 1; p <= 99; ++p) out[static_cast<std::size_t>(p - 1)] = quantile_sorted(sorted, p / 100.0);
  return out;
}

}  // namespace qtomo
