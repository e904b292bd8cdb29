#pragma once

#include <vector>

#include "qtomo/protocol.hpp"
#include "qtomo/types.hpp"

namespace qtomo {

/// A complete family of s + 1 mutually unbiased bases.  Each basis is an
/// s x s unitary whose columns are the basis vectors; basis 0 is always the
/// computational basis.
struct MubFamily {
  int s = 0;
  std::vector<CMatrix> bases;
};

/// Tabulated bases for s = 2, 3, 4 (Pauli bases, the qutrit Fourier-type
/// set and the ququart set in their standard printed order); s = 5 and other
/// odd primes from the quadratic-phase construction; s = 8 and other powers
/// of two from Pauli classes over GF(2^n).  Throws UnsupportedDimension
/// otherwise (s = 6 has no known complete set).
MubFamily mub_family(int s);

/// Field-theoretic construction for odd primes p <= 61 and 2^n with n <= 6.
/// For s = 4 this yields a set equivalent to, but not entry-wise equal to,
/// the tabulated one.
MubFamily galois_mub_family(int s);

/// Rows of the stacked U_j^dagger: m = s(s+1), a = s+1, one block per basis.
Protocol mub_protocol(const MubFamily& family);

Protocol build_mub(int s);

/// Largest deviation of |<e_i|f_j>|^2 from 1/s over all cross-basis pairs.
double unbiasedness_residual(const MubFamily& family);

/// Largest deviation of U^dagger U from I across the bases.
double unitarity_residual(const MubFamily& family);

}  // namespace qtomo
