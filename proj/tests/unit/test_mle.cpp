#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "support.hpp"

using namespace qtomo;

namespace {

CountsRecord exact_counts(const Protocol& p, const Purification& c, double n) {
  const RVector lambda = measurement_probs(p, c);
  CountsRecord rec;
  rec.protocol = p.name();
  rec.counts.resize(static_cast<std::size_t>(p.rows()));
  for (int j = 0; j < p.rows(); ++j) rec.counts[j] = std::llround(n * lambda(j));
  rec.shots = std::accumulate(rec.counts.begin(), rec.counts.end(), std::int64_t{0});
  return rec;
}

// Same objective evaluated with 50 significant digits, starting from the
// double-precision amplitudes.
double log_likelihood_extended(const Protocol& p, const CountsRecord& rec, const Purification& c) {
  using big = boost::multiprecision::cpp_bin_float_50;
  std::vector<big> lambda(static_cast<std::size_t>(p.rows()));
  big total = 0;
  for (int j = 0; j < p.rows(); ++j) {
    big acc = 0;
    for (int q = 0; q < c.rank(); ++q) {
      big re = 0, im = 0;
      for (int k = 0; k < p.dim(); ++k) {
        const Complex x = p.matrix()(j, k), y = c.matrix()(k, q);
        re += big(x.real()) * big(y.real()) - big(x.imag()) * big(y.imag());
        im += big(x.real()) * big(y.imag()) + big(x.imag()) * big(y.real());
      }
      acc += re * re + im * im;
    }
    lambda[j] = acc;
    total += acc;
  }
  big ll = 0;
  for (int j = 0; j < p.rows(); ++j)
    if (rec.counts[j] > 0) ll += big(rec.counts[j]) * log(lambda[j] / total);
  return ll.convert_to<double>();
}

}  // namespace

TEST_SUITE("mle") {

TEST_CASE("noiseless counts reproduce the state") {
  Rng rng(1);
  struct Case {
    Protocol p;
    int r;
  };
  const Case cases[] = {{build_mub(2), 1}, {build_mub(3), 1}, {build_two_level(3), 1},
                        {build_mub(3), 3}, {build_mub(4), 2}, {build_two_level(4), 4}};
  for (const auto& cs : cases) {
    const auto truth = random_hs_mixed(cs.p.dim(), cs.r, rng);
    MleOptions opts;
    opts.rank = cs.r;
    const auto res = reconstruct(cs.p, exact_counts(cs.p, truth, 1e9), opts);
    CAPTURE(cs.p.name());
    CAPTURE(cs.r);
    CHECK(res.converged);
    CHECK(fidelity_mixed(truth.density(), res.estimate.density()) >= 1.0 - 1e-8);
  }
}

TEST_CASE("single-basis counts pin the ground state") {
  const Protocol z("z", CMatrix::Identity(2, 2));
  CountsRecord rec;
  rec.protocol = "z";
  rec.shots = 1000;
  rec.counts = {1000, 0};
  for (auto method : {MleMethod::scoring, MleMethod::fixed_point}) {
    MleOptions opts;
    opts.method = method;
    const auto res = reconstruct(z, rec, opts);
    CHECK(res.estimate.density().matrix()(0, 0).real() >= 1.0 - 1e-8);
  }
}

TEST_CASE("log-likelihood values") {
  const Protocol z("z", CMatrix::Identity(2, 2));
  CountsRecord rec;
  rec.protocol = "z";
  rec.shots = 50;
  rec.counts = {50, 0};
  CHECK(log_likelihood(z, rec, PureState::basis(2, 0).purification()) == 0.0);

  std::mt19937_64 gen(4);
  for (int k = 0; k < 50; ++k) {
    const auto p = k % 2 ? build_mub(3) : build_two_level(3);
    const auto truth = qtest::random_purification(3, 1 + k % 3, gen);
    const auto guess = qtest::random_purification(3, 1 + (k + 1) % 3, gen);
    const auto counts = simulate_counts(p, truth, 2000, k);
    double bound = 0.0;
    for (auto c : counts.counts)
      if (c > 0) bound += double(c) * std::log(double(c) / double(counts.shots));
    const double ll = log_likelihood(p, counts, guess);
    CHECK(ll <= bound + 1e-9 * std::abs(bound));
    const double hp = log_likelihood_extended(p, counts, guess);
    CHECK(std::abs(ll - hp) <= 1e-9 * std::abs(hp));
  }
}

TEST_CASE("likelihood never decreases") {
  Rng rng(5);
  int problems = 0;
  for (auto method : {MleMethod::scoring, MleMethod::fixed_point}) {
    for (int k = 0; k < 50; ++k) {
      const int s = 2 + k % 3;
      const int r = 1 + k % s;
      const auto p = k % 2 ? build_mub(s) : build_two_level(s);
      const auto truth = random_hs_mixed(s, r, rng);
      MleOptions opts;
      opts.rank = r;
      opts.method = method;
      opts.record_trace = true;
      opts.max_iterations = method == MleMethod::fixed_point ? 500 : 10000;
      const auto res = reconstruct(p, simulate_counts(p, truth, 1000 + 100 * k, k), opts);
      bool monotone = true;
      for (std::size_t i = 1; i < res.trace.size(); ++i) monotone = monotone && res.trace[i] >= res.trace[i - 1];
      CHECK(monotone);
      CHECK_FALSE(res.trace.empty());
      ++problems;
    }
  }
  CHECK(problems == 100);
}

TEST_CASE("gauge invariance of the estimate") {
  std::mt19937_64 gen(6);
  const auto p = build_mub(3);
  const auto truth = random_hs_mixed(3, 2, 3);
  const auto counts = simulate_counts(p, truth, 10000, 1);
  MleOptions opts;
  opts.rank = 2;
  const auto res = reconstruct(p, counts, opts);
  const CMatrix v = qtest::haar_unitary(2, gen);
  const Purification rotated(res.estimate.matrix() * v);
  CHECK((rotated.density().matrix() - res.estimate.density().matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(log_likelihood(p, counts, rotated) - res.log_likelihood) <=
        1e-12 * std::abs(res.log_likelihood));
}

TEST_CASE("input validation and non-convergence") {
  const auto p = build_mub(3);
  CountsRecord bad;
  bad.protocol = "mub";
  bad.shots = 10;
  bad.counts = {5, 5};
  CHECK_THROWS_AS(reconstruct(p, bad), DimensionError);

  const auto counts = simulate_counts(p, random_haar_pure(3, 1).purification(), 1000, 2);
  MleOptions rank_too_big;
  rank_too_big.rank = 4;
  CHECK_THROWS_AS(reconstruct(p, counts, rank_too_big), InvalidArgument);

  MleOptions one_step;
  one_step.max_iterations = 1;
  one_step.method = MleMethod::fixed_point;
  const auto res = reconstruct(p, counts, one_step);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 1);
  CHECK(std::abs(res.estimate.matrix().squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("estimation error follows the predicted distribution") {
  const auto p = build_mub(3);
  const auto truth = random_haar_pure(3, 2718).purification();
  const double n = 1e5;
  const int experiments = 1000;
  std::vector<double> losses;
  for (int k = 0; k < experiments; ++k) {
    const auto res = reconstruct(p, simulate_counts(p, truth, std::int64_t(n), 50000 + k));
    REQUIRE(res.converged);
    losses.push_back(n * (1.0 - fidelity(truth, res.estimate)));
  }
  const auto spec = loss_spectrum(p, truth, n);
  const auto law = sample_loss_distribution(spec, 100000, 8);
  std::vector<double> predicted;
  for (double x : law.values) predicted.push_back(n * x);
  CHECK(qtest::ks_two_sample(losses, predicted) < qtest::ks_two_sample_critical(losses.size(), predicted.size()));

  // Mean infidelity against the spectrum sum.
  const double theory = mean_loss(spec).loss;
  const double se = std::sqrt(qtest::variance(losses) / experiments);
  CHECK(std::abs(qtest::mean(losses) - theory) < 3.0 * se);
}

TEST_CASE("qutrit mub monte carlo average" * doctest::test_suite("slow")) {
  ExperimentConfig cfg;
  cfg.protocol.kind = "mub";
  cfg.protocol.s = 3;
  cfg.mode = RunMode::monte_carlo;
  cfg.ensemble = 10000;
  cfg.shots = 100000;
  cfg.seed = 7;
  const auto report = run(cfg);
  CHECK(std::abs(report.summary.mean_loss - 2.205) < 0.02);
}

}  // TEST_SUITE
