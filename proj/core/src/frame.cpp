#include "qtomo/frame.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qtomo/parallel.hpp"
#include "qtomo/random.hpp"

namespace qtomo {

namespace {

// Rows of `kets` are the frame vectors psi_i (not conjugated).
double potential_of_kets(const CMatrix& kets, double p) {
  const CMatrix g = kets.conjugate() * kets.transpose();
  double e = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i != j) e += std::pow(std::norm(g(i, j)), p);
    }
  }
  return e;
}

// Wirtinger gradient w.r.t. conj(psi_i), projected on the sphere tangent.
CMatrix tangent_gradient(const CMatrix& kets, double p) {
  const CMatrix g = kets.conjugate() * kets.transpose();
  const Eigen::Index m = g.rows();
  CMatrix w(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      w(i, j) = (i == j) ? Complex(0.0) : 2.0 * p * std::pow(std::norm(g(i, j)), p - 1.0) * g(j, i);
    }
  }
  CMatrix grad = w * kets;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double radial = kets.row(i).dot(grad.row(i)).real();
    grad.row(i) -= radial * kets.row(i);
  }
  return grad;
}

void normalize_rows(CMatrix& kets) {
  for (Eigen::Index i = 0; i < kets.rows(); ++i) kets.row(i).normalize();
}

struct DescentOutcome {
  double potential;
  int iterations;
};

DescentOutcome descend(CMatrix& kets, double p, const FrameOptions& opts) {
  double e = potential_of_kets(kets, p);
  double step = 1e-2;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const CMatrix grad = tangent_gradient(kets, p);
    if (grad.norm() == 0.0) break;
    CMatrix trial;
    double e_trial = e;
    bool accepted = false;
    while (step > 1e-300) {
      trial = kets - step * grad;
      normalize_rows(trial);
      e_trial = potential_of_kets(trial, p);
      if (e_trial < e) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const double rel = (e - e_trial) / e;
    kets = std::move(trial);
    e = e_trial;
    step *= 1.5;
    if (rel < opts.tolerance) break;
  }
  return {e, it};
}

double closure_of_kets(const CMatrix& kets) {
  const int m = static_cast<int>(kets.rows());
  const int s = static_cast<int>(kets.cols());
  const CMatrix f = kets.adjoint() * kets;
  return (f - (static_cast<double>(m) / s) * CMatrix::Identity(s, s)).cwiseAbs().maxCoeff();
}

void scale_to_tight(CMatrix& kets) {
  const int m = static_cast<int>(kets.rows());
  const int s = static_cast<int>(kets.cols());
  const double target = std::sqrt(static_cast<double>(m) / s);
  double last = closure_of_kets(kets);
  for (int it = 0; it < 500 && last > 1e-14; ++it) {
    const CMatrix f = kets.adjoint() * kets;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(f);
    if (es.eigenvalues().minCoeff() <= 0.0) return;
    const RVector inv_root = es.eigenvalues().cwiseSqrt().cwiseInverse();
    CMatrix trial = target * kets * es.eigenvectors() * inv_root.asDiagonal() *
                    es.eigenvectors().adjoint();
    normalize_rows(trial);
    const double r = closure_of_kets(trial);
    if (!(r < last)) return;
    kets = std::move(trial);
    last = r;
  }
}

}  // namespace

double frame_potential(const CMatrix& vectors, double p) {
  return potential_of_kets(vectors.conjugate(), p);
}

FrameResult optimize_frame(int s, int m, const FrameOptions& opts) {
  if (s < 2) throw InvalidArgument("optimize_frame: dimension must be >= 2");
  if (m < s * s) throw InvalidArgument("optimize_frame: need m >= s^2 rows");
  if (opts.restarts < 1) throw InvalidArgument("optimize_frame: restarts must be >= 1");
  if (!(opts.exponent > 0.0)) throw InvalidArgument("optimize_frame: exponent must be > 0");

  const auto n = static_cast<std::size_t>(opts.restarts);
  std::vector<CMatrix> candidates(n);
  std::vector<FrameRestart> stats(n);
  const std::uint64_t base = domain_seed(opts.seed, StreamDomain::frame);

  parallel_for(n, 0, [&](std::size_t r) {
    Rng rng = Rng::stream(base, r);
    CMatrix kets(m, s);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < s; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        kets(i, k) = Complex(re, im);
      }
    }
    normalize_rows(kets);
    int iterations = 0;
    if (opts.packing_exponent > 0.0) iterations += descend(kets, opts.packing_exponent, opts).iterations;
    iterations += descend(kets, opts.exponent, opts).iterations;
    scale_to_tight(kets);

    FrameRestart st;
    st.iterations = iterations;
    st.potential = potential_of_kets(kets, opts.exponent);
    st.packing_potential =
        opts.packing_exponent > 0.0 ? potential_of_kets(kets, opts.packing_exponent) : st.potential;
    st.closure_residual = closure_of_kets(kets);
    stats[r] = st;
    candidates[r] = kets.conjugate();
  });

  std::size_t best = n;
  double best_closure = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < n; ++r) {
    best_closure = std::min(best_closure, stats[r].closure_residual);
    if (stats[r].closure_residual > opts.closure_tolerance) continue;
    if (best == n || stats[r].packing_potential < stats[best].packing_potential) best = r;
  }
  if (best == n) {
    std::ostringstream os;
    os << "frame optimization did not reach closure " << opts.closure_tolerance
       << " in " << n << " restarts; best residual " << best_closure;
    throw ClosureError(os.str(), best_closure);
  }
  return {candidates[best], stats[best], std::move(stats)};
}

Protocol build_symmetric(int s, int m, const FrameOptions& opts) {
  FrameResult result = optimize_frame(s, m, opts);
  Protocol p("symmetric", std::move(result.vectors));
  check_povm(p, opts.closure_tolerance);
  return p;
}

double sic_residual(const CMatrix& vectors) {
  const int s = static_cast<int>(vectors.cols());
  const CMatrix g = vectors * vectors.adjoint();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(std::norm(g(i, j)) - 1.0 / (s + 1)));
    }
  }
  return worst;
}

}  // namespace qtomo
