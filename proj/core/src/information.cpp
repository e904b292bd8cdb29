#include "qtomo/information.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qtomo/random.hpp"

namespace qtomo {

int informative_parameter_count(int s, int r) { return (2 * s - r) * r - 1; }

RMatrix probability_gradients(const Protocol& p, const Purification& state) {
  if (p.dim() != state.dim()) throw DimensionError("probability_gradients: dimension mismatch");
  const int m = p.rows();
  const int s = state.dim();
  const int r = state.rank();
  const Eigen::Index n = static_cast<Eigen::Index>(s) * r;
  const CMatrix y = p.matrix() * state.matrix();  // m x r
  const double scale = 2.0 / p.closure_constant();
  RMatrix g(m, 2 * n);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < r; ++k) {
      for (int l = 0; l < s; ++l) {
        const Complex w = std::conj(p.matrix()(j, l)) * y(j, k);
        const Eigen::Index idx = static_cast<Eigen::Index>(k) * s + l;
        g(j, idx) = scale * w.real();
        g(j, n + idx) = scale * w.imag();
      }
    }
  }
  return g;
}

RMatrix complete_information_matrix(const Protocol& p, const Purification& state, double shots) {
  const RMatrix g = probability_gradients(p, state);
  const RVector lambda = measurement_probs(p, state);
  const RVector weight = lambda.cwiseMax(kProbabilityFloor).cwiseInverse();
  RMatrix h = (0.5 * shots) * (g.transpose() * weight.asDiagonal() * g);
  return 0.5 * (h + h.transpose());
}

LossSpectrum loss_spectrum(const RMatrix& h, const Purification& state, double shots) {
  const int s = state.dim();
  const int r = state.rank();
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(s) * r;
  if (h.rows() != n || h.cols() != n) throw DimensionError("loss_spectrum: H has the wrong size");

  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  const RVector& ev = es.eigenvalues();
  const RVector theta = state.real_parameters().normalized();
  const RVector overlap = (es.eigenvectors().transpose() * theta).cwiseAbs();
  Eigen::Index radial = 0;
  overlap.maxCoeff(&radial);

  std::vector<double> rest;
  rest.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != radial) rest.push_back(ev(i));
  std::sort(rest.begin(), rest.end());

  const double largest = rest.empty() ? 0.0 : std::max(rest.back(), 0.0);
  const double threshold = kGaugeThreshold * largest;
  const int gauge = static_cast<int>(
      std::count_if(rest.begin(), rest.end(), [&](double v) { return v < threshold; }));
  if (gauge != r * r || !(largest > 0.0)) {
    std::ostringstream os;
    os << "information matrix has " << gauge << " near-zero eigenvalues, expected " << r * r
       << " (protocol not informationally complete for rank " << r << "?)";
    throw ClassificationError(os.str(), r * r, gauge);
  }

  LossSpectrum spec;
  spec.s = s;
  spec.r = r;
  spec.nu_p = informative_parameter_count(s, r);
  spec.shots = shots;
  spec.normalization_eigenvalue = ev(radial);
  spec.counts = {1, gauge, static_cast<int>(rest.size()) - gauge};
  spec.eigenvalues.assign(rest.begin() + gauge, rest.end());
  // Ascending d: largest eigenvalues first.
  for (auto it = spec.eigenvalues.rbegin(); it != spec.eigenvalues.rend(); ++it)
    spec.d.push_back(1.0 / (2.0 * *it));
  std::reverse(spec.eigenvalues.begin(), spec.eigenvalues.end());
  return spec;
}

LossSpectrum loss_spectrum(const Protocol& p, const Purification& state, double shots) {
  return loss_spectrum(complete_information_matrix(p, state, shots), state, shots);
}

MeanLoss mean_loss(const LossSpectrum& spectrum) {
  const double sum = std::accumulate(spectrum.d.begin(), spectrum.d.end(), 0.0);
  return {sum, spectrum.shots * sum};
}

LossSample sample_loss_distribution(const LossSpectrum& spectrum, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample_loss_distribution: need at least one draw");
  Rng rng(domain_seed(seed, StreamDomain::loss));
  LossSample out;
  out.values.resize(n);
  for (auto& v : out.values) {
    double acc = 0.0;
    for (double d : spectrum.d) {
      const double xi = rng.normal();
      acc += d * xi * xi;
    }
    v = acc;
  }
  return out;
}

double efficiency(double loss, int s, int r) {
  if (!(loss > 0.0)) throw InvalidArgument("efficiency: loss must be positive");
  const double nu = informative_parameter_count(s, r);
  return nu * nu / (4.0 * loss * (s - 1));
}

}  // namespace qtomo
