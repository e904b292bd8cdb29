#pragma once

#include <span>
#include <vector>

namespace qtomo {

struct MeanWithError {
  double mean = 0.0;
  double standard_error = 0.0;  // sample stddev / sqrt(n)
};

MeanWithError mean_with_error(std::span<const double> values);

/// Type-7 (linear interpolation) quantile of `sorted`, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Quantiles at percentiles 1..99 (type 7).
std::vector<double> percentile_curve(std::span<const double> values);

}  // namespace qtomo
