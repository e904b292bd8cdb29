#include "qtomo/mle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qtomo/information.hpp"

namespace qtomo {

namespace {

constexpr double kLogFloor = 1e-300;
constexpr double kWarmupIterations = 25;

// Row groups over which probabilities are normalized.
std::vector<std::vector<int>> sampling_groups(const Protocol& p, const CountsRecord& c) {
  if (c.mode == SamplingMode::per_block && p.has_blocks()) return p.blocks();
  std::vector<int> all(static_cast<std::size_t>(p.rows()));
  for (int j = 0; j < p.rows(); ++j) all[static_cast<std::size_t>(j)] = j;
  return {all};
}

class Objective {
 public:
  Objective(const Protocol& p, const CountsRecord& c)
      : p_(p), groups_(sampling_groups(p, c)), k_(p.rows()) {
    if (static_cast<int>(c.counts.size()) != p.rows()) {
      std::ostringstream os;
      os << "counts have " << c.counts.size() << " entries, protocol has " << p.rows() << " rows";
      throw DimensionError(os.str());
    }
    for (int j = 0; j < p.rows(); ++j) {
      if (c.counts[static_cast<std::size_t>(j)] < 0) throw InvalidArgument("negative count");
      k_(j) = static_cast<double>(c.counts[static_cast<std::size_t>(j)]);
    }
    for (const auto& g : groups_) {
      double kg = 0.0;
      for (int j : g) kg += k_(j);
      group_counts_.push_back(kg);
    }
    total_ = k_.sum();
    if (!(total_ > 0.0)) throw InvalidArgument("counts are all zero");
  }

  RVector probs(const CMatrix& c) const {
    return (p_.matrix() * c).rowwise().squaredNorm() / p_.closure_constant();
  }

  // Scale invariant in c.
  double value(const CMatrix& c) const {
    const RVector lambda = probs(c);
    double ll = 0.0;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      double mass = 0.0;
      for (int j : groups_[g]) mass += lambda(j);
      for (int j : groups_[g]) {
        if (k_(j) > 0.0) ll += k_(j) * std::log(std::max(lambda(j) / mass, kLogFloor));
      }
    }
    return ll;
  }

  // d value / d conj(c), divided by the total count.
  CMatrix wirtinger_gradient(const CMatrix& c) const {
    const RVector lambda = probs(c);
    const CMatrix y = p_.matrix() * c;
    RVector weight = RVector::Zero(p_.rows());
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      double mass = 0.0;
      for (int j : groups_[g]) mass += lambda(j);
      for (int j : groups_[g]) {
        weight(j) = k_(j) / std::max(lambda(j), kProbabilityFloor) - group_counts_[g] / mass;
      }
    }
    weight /= total_ * p_.closure_constant();
    return p_.matrix().adjoint() * (weight.asDiagonal() * y);
  }

  double total() const { return total_; }
  const Protocol& protocol() const { return p_; }

 private:
  const Protocol& p_;
  std::vector<std::vector<int>> groups_;
  std::vector<double> group_counts_;
  RVector k_;
  double total_ = 0.0;
};

RVector flatten(const CMatrix& c) {
  const Eigen::Index n = c.size();
  RVector v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = c.data()[i].real();
    v(n + i) = c.data()[i].imag();
  }
  return v;
}

CMatrix unflatten(const RVector& v, Eigen::Index rows, Eigen::Index cols) {
  CMatrix c(rows, cols);
  const Eigen::Index n = c.size();
  for (Eigen::Index i = 0; i < n; ++i) c.data()[i] = Complex(v(i), v(n + i));
  return c;
}

// Fisher-scoring direction: pseudo-inverse of the expected information
// applied to the real gradient.  Gauge and radial directions carry no
// gradient, so dropping tiny eigenvalues is exact.
CMatrix scoring_direction(const Objective& obj, const CMatrix& c) {
  const Purification state(c);
  const RMatrix g = probability_gradients(obj.protocol(), state);
  const RVector lambda = obj.probs(c).cwiseMax(kProbabilityFloor);
  const RMatrix fisher = g.transpose() * lambda.cwiseInverse().asDiagonal() * g;
  const RVector grad = 2.0 * flatten(obj.wirtinger_gradient(c));
  Eigen::SelfAdjointEigenSolver<RMatrix> es(fisher);
  const double cutoff = 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff();
  RVector coeff = es.eigenvectors().transpose() * grad;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    const double ev = es.eigenvalues()(i);
    coeff(i) = ev > cutoff ? coeff(i) / ev : 0.0;
  }
  return unflatten(es.eigenvectors() * coeff, c.rows(), c.cols());
}

CMatrix normalized(const CMatrix& c) { return c / c.norm(); }

struct Iterate {
  CMatrix c;
  double ll;
  bool full_step = true;
};

// One accepted ascent step, or nullopt if neither route improves.
std::optional<Iterate> step(const Objective& obj, const Iterate& cur, const MleOptions& opts) {
  if (opts.method == MleMethod::scoring) {
    const CMatrix dir = scoring_direction(obj, cur.c);
    double t = 1.0;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      CMatrix trial = normalized(cur.c + t * dir);
      const double ll = obj.value(trial);
      if (ll > cur.ll) return Iterate{std::move(trial), ll, h == 0};
    }
  }
  // Diluted fixed point: c <- (I + eps (R - I)) c, where (R - I) c is the
  // normalized likelihood gradient.
  const CMatrix rc = obj.wirtinger_gradient(cur.c);
  double eps = opts.mixing.value_or(1.0);
  for (int h = 0; h < 60; ++h, eps *= 0.5) {
    CMatrix trial = normalized(cur.c + eps * rc);
    const double ll = obj.value(trial);
    if (ll > cur.ll) return Iterate{std::move(trial), ll, h == 0 && opts.method == MleMethod::fixed_point};
  }
  return std::nullopt;
}

struct RunOutcome {
  Iterate best;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

RunOutcome run(const Objective& obj, CMatrix start, const MleOptions& opts, int max_iterations) {
  RunOutcome out;
  out.best.c = normalized(start);
  out.best.ll = obj.value(out.best.c);
  if (opts.record_trace) out.trace.push_back(out.best.ll);
  RVector lambda = obj.probs(out.best.c);
  for (int it = 0; it < max_iterations; ++it) {
    auto next = step(obj, out.best, opts);
    out.iterations = it + 1;
    if (!next) {
      // No ascent direction improves at double precision: stationary.
      out.converged = true;
      break;
    }
    const RVector next_lambda = obj.probs(next->c);
    const double change = (next_lambda - lambda).cwiseAbs().maxCoeff();
    out.best = std::move(*next);
    lambda = next_lambda;
    if (opts.record_trace) out.trace.push_back(out.best.ll);
    // A heavily damped step says little about proximity to the optimum.
    if (change <= opts.tolerance && out.best.full_step) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double stationarity(const Protocol& p, const CountsRecord& counts, const CMatrix& c) {
  const RVector lambda = (p.matrix() * c).rowwise().squaredNorm() / p.closure_constant();
  double n = 0.0;
  for (auto k : counts.counts) n += static_cast<double>(k);
  RVector w(p.rows());
  for (int j = 0; j < p.rows(); ++j) {
    w(j) = static_cast<double>(counts.counts[static_cast<std::size_t>(j)]) /
           (n * std::max(lambda(j), kProbabilityFloor) * p.closure_constant());
  }
  const CMatrix r = p.matrix().adjoint() * w.asDiagonal() * p.matrix();
  const CMatrix rho = c * c.adjoint();
  CMatrix diff = r * rho * r - rho;
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

double log_likelihood(const Protocol& p, const CountsRecord& counts, const Purification& state) {
  if (p.dim() != state.dim()) throw DimensionError("log_likelihood: dimension mismatch");
  return Objective(p, counts).value(state.matrix());
}

MleResult reconstruct(const Protocol& p, const CountsRecord& counts, const MleOptions& opts) {
  const int s = p.dim();
  if (opts.rank < 1 || opts.rank > s) throw InvalidArgument("reconstruct: need 1 <= rank <= s");
  if (!(opts.tolerance > 0.0)) throw InvalidArgument("reconstruct: tolerance must be positive");
  if (opts.max_iterations < 1) throw InvalidArgument("reconstruct: max_iterations must be >= 1");
  if (opts.mixing && !(*opts.mixing > 0.0 && *opts.mixing <= 1.0))
    throw InvalidArgument("reconstruct: mixing must lie in (0, 1]");
  const Objective obj(p, counts);

  CMatrix start = CMatrix::Identity(s, s);
  if (opts.rank < s) {
    MleOptions warm = opts;
    warm.record_trace = false;
    const RunOutcome w = run(obj, start, warm, static_cast<int>(kWarmupIterations));
    start = truncate(Purification(w.best.c).density(), opts.rank).matrix();
  }
  RunOutcome out = run(obj, start, opts, opts.max_iterations);

  MleResult result{Purification::normalized(out.best.c), 0.0, 0, false, 0.0, {}};
  result.log_likelihood = out.best.ll;
  result.iterations = out.iterations;
  result.converged = out.converged;
  result.stationarity_residual = stationarity(p, counts, out.best.c);
  result.trace = std::move(out.trace);
  return result;
}

}  // namespace qtomo
