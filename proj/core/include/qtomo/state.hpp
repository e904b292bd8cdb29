#pragma once

#include <cstdint>

#include "qtomo/random.hpp"
#include "qtomo/types.hpp"

namespace qtomo {

class DensityMatrix;
class Purification;

/// Normalized vector of s complex amplitudes.
class PureState {
 public:
  /// Throws InvalidState unless the squared norm is 1 within kNormTolerance.
  explicit PureState(CVector amplitudes);
  /// Normalizes `v` first; throws on a zero vector.
  static PureState normalized(const CVector& v);
  static PureState basis(int s, int index);

  int dim() const { return static_cast<int>(c_.size()); }
  const CVector& amplitudes() const { return c_; }

  Purification purification() const;
  DensityMatrix density() const;

 private:
  CVector c_;
};

/// Rank-r purification c (s x r) of the density matrix c c^dagger.
///
/// The representation is defined only up to the gauge c -> c V with V an
/// r x r unitary; nothing in the library depends on the gauge choice.
class Purification {
 public:
  /// Throws InvalidState unless tr(c c^dagger) is 1 within kNormTolerance.
  explicit Purification(CMatrix c);
  /// Rescales `c` to unit Frobenius norm first.
  static Purification normalized(const CMatrix& c);

  int dim() const { return static_cast<int>(c_.rows()); }
  int rank() const { return static_cast<int>(c_.cols()); }
  const CMatrix& matrix() const { return c_; }

  DensityMatrix density() const;

  /// Real parameter vector (Re c, Im c), each block column-major.
  RVector real_parameters() const;

 private:
  CMatrix c_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity, unit trace and eigenvalues >= -kPsdTolerance.
  explicit DensityMatrix(CMatrix rho);
  static DensityMatrix maximally_mixed(int s);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const CMatrix& matrix() const { return rho_; }

  double purity() const;

 private:
  CMatrix rho_;
};

/// |<psi0|psi>|^2.
double fidelity_pure(const PureState& psi0, const PureState& psi);

/// (tr sqrt(sqrt(rho0) rho sqrt(rho0)))^2 via Hermitian eigendecompositions.
double fidelity_mixed(const DensityMatrix& rho0, const DensityMatrix& rho);

/// Uhlmann fidelity evaluated directly on purifications as the squared trace
/// norm of c0^dagger c.  Equal to fidelity_mixed on the induced density
/// matrices; cheaper and better conditioned for low-rank states.
double fidelity(const Purification& a, const Purification& b);

/// Haar-uniform pure state: normalized vector of complex standard normals.
PureState random_haar_pure(int s, Rng& rng);
PureState random_haar_pure(int s, std::uint64_t seed);

/// c = G / ||G||_F with G an s x r complex Ginibre matrix.  For r = s the
/// induced law of c c^dagger is the Hilbert-Schmidt measure.
Purification random_hs_mixed(int s, int r, Rng& rng);
Purification random_hs_mixed(int s, int r, std::uint64_t seed);

/// Columns sqrt(lambda_k) v_k from the eigendecomposition of rho, largest
/// first, padded with zero columns up to r.  Eigenvalues below
/// kPsdTolerance count as zero; throws InvalidArgument when rank(rho) > r.
Purification purify(const DensityMatrix& rho, int r);

/// Best rank-r approximation of rho as a purification, renormalized to unit
/// trace.  Unlike purify() this never throws on rank overflow.
Purification truncate(const DensityMatrix& rho, int r);

}  // namespace qtomo
