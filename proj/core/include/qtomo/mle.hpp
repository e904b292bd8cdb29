#pragma once

#include <optional>
#include <vector>

#include "qtomo/protocol.hpp"
#include "qtomo/simulate.hpp"
#include "qtomo/state.hpp"

namespace qtomo {

enum class MleMethod {
  /// Fisher-scoring steps in the purification parameters, falling back to a
  /// diluted fixed-point (R rho R) step whenever scoring fails to raise the
  /// likelihood.
  scoring,
  /// Diluted fixed-point iteration only.
  fixed_point,
};

struct MleOptions {
  int rank = 1;
  int max_iterations = 10000;
  /// Converged once max_j |lambda_j(t) - lambda_j(t-1)| <= tolerance.
  double tolerance = 1e-10;
  /// Initial dilution for fixed-point steps, halved until the likelihood
  /// rises; starts from 1 when empty.
  std::optional<double> mixing;
  MleMethod method = MleMethod::scoring;
  /// Keep the log-likelihood of every accepted iterate in MleResult::trace.
  bool record_trace = false;
};

struct MleResult {
  Purification estimate;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  /// ||R rho R - rho||_1 at the estimate.
  double stationarity_residual = 0.0;
  std::vector<double> trace;
};

/// Multinomial log-likelihood sum_j k_j log p_j with p_j the probability of
/// row j normalized over its sampling group (all rows, or the row's block in
/// per-block mode).  0 log 0 = 0; probabilities are floored at 1e-300.
double log_likelihood(const Protocol& p, const CountsRecord& counts, const Purification& state);

/// Maximum-likelihood estimate over rank-r purifications.  The starting
/// point is the maximally mixed state, truncated to rank r after a short
/// full-rank warm-up when r < s.  Every accepted iterate increases the
/// likelihood.  A result that exhausts max_iterations is returned with
/// converged = false.
MleResult reconstruct(const Protocol& p, const CountsRecord& counts, const MleOptions& opts = {});

}  // namespace qtomo
