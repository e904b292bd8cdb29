#pragma once

#include <cstdint>
#include <vector>

#include "qtomo/protocol.hpp"
#include "qtomo/types.hpp"

namespace qtomo {

/// Settings for symmetric frame construction.
///
/// The frame is found by Riemannian gradient descent on the product of unit
/// spheres, minimizing sum_{i != j} |<psi_i|psi_j>|^(2p).  A packing stage
/// at `packing_exponent` (skipped when <= 0) spreads the vectors apart; the
/// frame-potential stage at `exponent` then relaxes them onto a tight frame.
/// A final alternating scaling step (X <- X (X^dagger X)^(-1/2) sqrt(m/s),
/// rows renormalized) removes the residual closure error.
struct FrameOptions {
  double exponent = 1.0;
  double packing_exponent = 8.0;
  int restarts = 20;
  int max_iterations = 20000;
  double tolerance = 1e-12;           // relative potential decrease
  double closure_tolerance = 1e-6;
  std::uint64_t seed = 20140501;
};

struct FrameRestart {
  double packing_potential = 0.0;
  double potential = 0.0;
  double closure_residual = 0.0;
  int iterations = 0;
};

struct FrameResult {
  CMatrix vectors;                     // m x s, unit rows (bra-vectors)
  FrameRestart best;
  std::vector<FrameRestart> restarts;
};

/// sum_{i != j} |<psi_i|psi_j>|^(2p) over the rows of `vectors`.
double frame_potential(const CMatrix& vectors, double p);

/// Runs every restart and returns the one that meets the closure tolerance
/// with the lowest packing potential (lowest frame potential if packing is
/// disabled).  Throws ClosureError with the best residual when no restart
/// reaches the closure tolerance.
FrameResult optimize_frame(int s, int m, const FrameOptions& opts = {});

/// Protocol from optimize_frame(): unit rows, a = m/s, no blocks.
/// Requires m >= s^2.
Protocol build_symmetric(int s, int m, const FrameOptions& opts = {});

/// Largest deviation of |<psi_i|psi_j>|^2 (i != j) from 1/(s+1).
double sic_residual(const CMatrix& vectors);

}  // namespace qtomo
