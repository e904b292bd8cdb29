#pragma once

#include <string>
#include <vector>

#include "qtomo/state.hpp"
#include "qtomo/types.hpp"

namespace qtomo {

/// A tomography protocol: an m x s instrumental matrix whose rows are the
/// bra-vectors of the measured projections.  Row j defines the measurement
/// operator X_j^dagger X_j; the protocol is a resolution of the identity
/// when X^dagger X = a I.
///
/// Blocks optionally partition the row indices into separately measured
/// groups (one per basis for MUB protocols).  Indices are zero-based.
class Protocol {
 public:
  using Blocks = std::vector<std::vector<int>>;

  /// Computes a = tr(X^dagger X) / s.  Closure is not enforced here; use
  /// check_povm().  Throws InvalidArgument on malformed blocks.
  Protocol(std::string name, CMatrix x, Blocks blocks = {});

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(x_.cols()); }
  int rows() const { return static_cast<int>(x_.rows()); }
  const CMatrix& matrix() const { return x_; }
  double closure_constant() const { return a_; }
  const Blocks& blocks() const { return blocks_; }
  bool has_blocks() const { return !blocks_.empty(); }

  /// Copy with row `j` removed; blocks are dropped.
  Protocol without_row(int j) const;

 private:
  std::string name_;
  CMatrix x_;
  double a_;
  Blocks blocks_;
};

/// Returns a = tr(X^dagger X)/s after verifying max |X^dagger X - a I| <= tol.
/// Throws ClosureError carrying the residual otherwise.
double check_povm(const Protocol& p, double tol = kClosureTolerance);

/// Max-entry residual of X^dagger X - a I.
double closure_residual(const Protocol& p);

/// Extends X / sqrt(a) to an m x m unitary.  The first s columns are exactly
/// X / sqrt(a); the rest come from a Householder QR of that block, so the
/// completion is deterministic.
CMatrix unitary_complement(const Protocol& p);

/// lambda_j = X_j rho X_j^dagger / a.  Sums to 1 for closed protocols.
RVector measurement_probs(const Protocol& p, const Purification& state);

/// Two-level protocol: for every level pair i < j both the sigma_x and the
/// sigma_y eigenbases embedded at (i, j), then the s populations.
/// m = s(2s - 1), a = 2s - 1.
Protocol build_two_level(int s);

/// Same protocol as `x` expressed in a rotated frame: X -> X V^dagger.
Protocol rotated(const Protocol& p, const CMatrix& v);

}  // namespace qtomo
