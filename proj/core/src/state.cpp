#include "qtomo/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qtomo {

namespace {

// Factor a = f f^dagger from the eigendecomposition, dropping eigenvalues at
// the round-off floor.  Their square roots (~1e-8) would otherwise leak into
// fidelities of rank-deficient states.
CMatrix psd_factor(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  const RVector& ev = es.eigenvalues();
  const double floor =
      4.0 * static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (ev(k) > floor) keep.push_back(k);
  CMatrix f(a.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    f.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]) * std::sqrt(ev(keep[j]));
  return f;
}

}  // namespace

PureState::PureState(CVector amplitudes) : c_(std::move(amplitudes)) {
  if (c_.size() < 1) throw InvalidState("pure state needs at least one amplitude");
  const double n2 = c_.squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os << "pure state not normalized: sum |c|^2 = " << n2;
    throw InvalidState(os.str());
  }
}

PureState PureState::normalized(const CVector& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw InvalidState("cannot normalize a zero vector");
  return PureState(v / n);
}

PureState PureState::basis(int s, int index) {
  if (s < 1 || index < 0 || index >= s) throw InvalidArgument("basis index out of range");
  CVector v = CVector::Zero(s);
  v(index) = 1.0;
  return PureState(std::move(v));
}

Purification PureState::purification() const { return Purification(CMatrix(c_)); }

DensityMatrix PureState::density() const { return DensityMatrix(c_ * c_.adjoint()); }

Purification::Purification(CMatrix c) : c_(std::move(c)) {
  if (c_.rows() < 1 || c_.cols() < 1 || c_.cols() > c_.rows())
    throw InvalidState("purification must be s x r with 1 <= r <= s");
  const double tr = c_.squaredNorm();
  if (std::abs(tr - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os << "purification trace " << tr << " differs from 1";
    throw InvalidState(os.str());
  }
}

Purification Purification::normalized(const CMatrix& c) {
  const double n = c.norm();
  if (!(n > 0.0)) throw InvalidState("cannot normalize a zero purification");
  return Purification(c / n);
}

DensityMatrix Purification::density() const { return DensityMatrix(c_ * c_.adjoint()); }

RVector Purification::real_parameters() const {
  const Eigen::Index n = c_.size();
  RVector theta(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    theta(i) = c_.data()[i].real();
    theta(n + i) = c_.data()[i].imag();
  }
  return theta;
}

DensityMatrix::DensityMatrix(CMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() < 1 || rho_.rows() != rho_.cols())
    throw InvalidState("density matrix must be square");
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kNormTolerance) throw InvalidState("density matrix is not Hermitian");
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from 1";
    throw InvalidState(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTolerance) {
    std::ostringstream os;
    os << "density matrix not PSD: min eigenvalue " << es.eigenvalues().minCoeff();
    throw InvalidState(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int s) {
  if (s < 1) throw InvalidArgument("dimension must be positive");
  return DensityMatrix(CMatrix::Identity(s, s) / static_cast<double>(s));
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double fidelity_pure(const PureState& psi0, const PureState& psi) {
  if (psi0.dim() != psi.dim()) throw DimensionError("fidelity_pure: dimension mismatch");
  return std::norm(psi0.amplitudes().dot(psi.amplitudes()));
}

double fidelity_mixed(const DensityMatrix& rho0, const DensityMatrix& rho) {
  if (rho0.dim() != rho.dim()) throw DimensionError("fidelity_mixed: dimension mismatch");
  // With rho0 = A A^dagger and rho = B B^dagger the eigenvalues of
  // sqrt(rho0) rho sqrt(rho0) are the squared singular values of A^dagger B.
  const CMatrix overlap = psd_factor(rho0.matrix()).adjoint() * psd_factor(rho.matrix());
  Eigen::JacobiSVD<CMatrix> svd(overlap);
  const double tr = svd.singularValues().sum();
  return std::min(1.0, tr * tr);
}

double fidelity(const Purification& a, const Purification& b) {
  if (a.dim() != b.dim()) throw DimensionError("fidelity: dimension mismatch");
  if (a.rank() == 1 && b.rank() == 1) {
    return std::norm(a.matrix().col(0).dot(b.matrix().col(0)));
  }
  const CMatrix overlap = a.matrix().adjoint() * b.matrix();
  Eigen::JacobiSVD<CMatrix> svd(overlap);
  const double tr = svd.singularValues().sum();
  return std::min(1.0, tr * tr);
}

PureState random_haar_pure(int s, Rng& rng) {
  if (s < 2) throw InvalidArgument("random_haar_pure: dimension must be >= 2");
  CVector v(s);
  for (int i = 0; i < s; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = Complex(re, im);
  }
  return PureState::normalized(v);
}

PureState random_haar_pure(int s, std::uint64_t seed) {
  Rng rng(seed);
  return random_haar_pure(s, rng);
}

Purification random_hs_mixed(int s, int r, Rng& rng) {
  if (s < 1 || r < 1 || r > s) throw InvalidArgument("random_hs_mixed: need 1 <= r <= s");
  CMatrix g(s, r);
  for (int k = 0; k < r; ++k) {
    for (int i = 0; i < s; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, k) = Complex(re, im);
    }
  }
  return Purification::normalized(g);
}

Purification random_hs_mixed(int s, int r, std::uint64_t seed) {
  Rng rng(seed);
  return random_hs_mixed(s, r, rng);
}

Purification purify(const DensityMatrix& rho, int r) {
  const int s = rho.dim();
  if (r < 1 || r > s) throw InvalidArgument("purify: need 1 <= r <= s");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const RVector& ev = es.eigenvalues();  // ascending
  const int support = static_cast<int>((ev.array() > kPsdTolerance).count());
  if (support > r) {
    std::ostringstream os;
    os << "purify: rank " << support << " exceeds requested rank " << r;
    throw InvalidArgument(os.str());
  }
  CMatrix c = CMatrix::Zero(s, r);
  for (int k = 0; k < support; ++k) {
    const int idx = s - 1 - k;
    c.col(k) = std::sqrt(ev(idx)) * es.eigenvectors().col(idx);
  }
  // Dropped sub-tolerance eigenvalues shift the trace by < s * kPsdTolerance.
  return Purification::normalized(c);
}

Purification truncate(const DensityMatrix& rho, int r) {
  const int s = rho.dim();
  if (r < 1 || r > s) throw InvalidArgument("truncate: need 1 <= r <= s");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  CMatrix c(s, r);
  for (int k = 0; k < r; ++k) {
    const int idx = s - 1 - k;
    c.col(k) = std::sqrt(std::max(es.eigenvalues()(idx), 0.0)) * es.eigenvectors().col(idx);
  }
  return Purification::normalized(c);
}

}  // namespace qtomo
