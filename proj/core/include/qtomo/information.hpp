#pragma once

#include <cstdint>
#include <vector>

#include "qtomo/protocol.hpp"
#include "qtomo/state.hpp"
#include "qtomo/types.hpp"

namespace qtomo {

/// Floor applied to lambda_j inside the information matrix.
inline constexpr double kProbabilityFloor = 1e-12;
/// Eigenvalues below this fraction of the largest informative candidate
/// are classified as gauge zeros.
inline constexpr double kGaugeThreshold = 1e-6;

/// nu_p = (2s - r) r - 1.
int informative_parameter_count(int s, int r);

/// m x 2sr matrix of exact gradients d lambda_j / d theta with
/// theta = (Re c, Im c).  Row j equals 2 (Re w_j, Im w_j) for
/// w_j = Lambda_j c / a.
RMatrix probability_gradients(const Protocol& p, const Purification& state);

/// Complete information matrix
///
///   H = 2 N sum_j w_j w_j^T / lambda_j ,  w_j = (1/2) d lambda_j / d theta,
///
/// i.e. one half of the multinomial Fisher information in theta.  With this
/// scaling the informative eigenvalues h_j give the loss spectrum
/// d_j = 1 / (2 h_j).  The radial direction theta is an exact eigenvector
/// with eigenvalue 2N, and the r^2 gauge directions c -> c (iK) are exact
/// zeros.
RMatrix complete_information_matrix(const Protocol& p, const Purification& state, double shots);

struct EigenCounts {
  int normalization = 1;
  int gauge = 0;
  int informative = 0;
};

struct LossSpectrum {
  int s = 0;
  int r = 0;
  int nu_p = 0;
  double shots = 0.0;
  std::vector<double> d;              // ascending
  std::vector<double> eigenvalues;    // informative h_j, matching d
  double normalization_eigenvalue = 0.0;
  EigenCounts counts;
};

/// Splits the spectrum of H into the normalization eigenvalue (eigenvector
/// with the largest overlap with theta / |theta|), r^2 gauge zeros and the
/// nu_p informative eigenvalues, mapped to d_j = 1/(2 h_j).  Throws
/// ClassificationError when the number of near-zero eigenvalues is not r^2.
LossSpectrum loss_spectrum(const RMatrix& h, const Purification& state, double shots);

/// Convenience: information matrix and spectrum in one call.
LossSpectrum loss_spectrum(const Protocol& p, const Purification& state, double shots);

struct MeanLoss {
  double infidelity = 0.0;  // <1 - F> = sum d_j
  double loss = 0.0;        // L = N <1 - F>
};

MeanLoss mean_loss(const LossSpectrum& spectrum);

/// Draws of 1 - F = sum_j d_j xi_j^2 with xi_j standard normal.
struct LossSample {
  std::vector<double> values;
};

LossSample sample_loss_distribution(const LossSpectrum& spectrum, std::size_t n, std::uint64_t seed);

/// eta = nu_p^2 / (4 L (s - 1)).
double efficiency(double loss, int s, int r);

}  // namespace qtomo
