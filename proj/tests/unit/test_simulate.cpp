#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

#include "support.hpp"

using namespace qtomo;

TEST_SUITE("simulate") {

TEST_CASE("impossible outcomes are never drawn") {
  const auto p = build_mub(2);
  const auto e0 = PureState::basis(2, 0).purification();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto rec = simulate_counts(p, e0, 1000, seed);
    CHECK(rec.counts[1] == 0);
    CHECK(std::accumulate(rec.counts.begin(), rec.counts.end(), std::int64_t{0}) == 1000);
  }
}

TEST_CASE("law of large numbers") {
  const std::int64_t n = 1000000;
  const auto rec = simulate_counts(build_mub(2), PureState::basis(2, 0).purification(), n, 7);
  const double l = 1.0 / 3.0;
  CHECK(std::abs(double(rec.counts[0]) / n - l) < 5.0 * std::sqrt(l * (1 - l) / n));
}

TEST_CASE("chi-square goodness of fit over pooled repeats") {
  const auto p = build_mub(3);
  const auto psi = random_haar_pure(3, 3).purification();
  const RVector lambda = measurement_probs(p, psi);
  const int repeats = 10000;
  const std::int64_t n = 50;
  std::vector<double> pooled(p.rows(), 0.0);
  for (int k = 0; k < repeats; ++k) {
    const auto rec = simulate_counts(p, psi, n, 1000 + k);
    for (int j = 0; j < p.rows(); ++j) pooled[j] += double(rec.counts[j]);
  }
  const double total = double(repeats) * n;
  double chi2 = 0.0;
  for (int j = 0; j < p.rows(); ++j) {
    const double e = total * lambda(j);
    chi2 += (pooled[j] - e) * (pooled[j] - e) / e;
  }
  boost::math::chi_squared dist(p.rows() - 1);
  CHECK(chi2 < boost::math::quantile(dist, 0.99));
}

TEST_CASE("per-seed frequency means") {
  const auto p = build_mub(3);
  const auto psi = random_haar_pure(3, 4).purification();
  const RVector lambda = measurement_probs(p, psi);
  const int seeds = 10000;
  const std::int64_t n = 100;
  std::vector<std::vector<double>> f(p.rows());
  for (int k = 0; k < seeds; ++k) {
    const auto freq = empirical_frequencies(simulate_counts(p, psi, n, k));
    for (int j = 0; j < p.rows(); ++j) f[j].push_back(freq[j]);
  }
  for (int j = 0; j < p.rows(); ++j) {
    const double se = std::sqrt(qtest::variance(f[j]) / seeds);
    CHECK(std::abs(qtest::mean(f[j]) - lambda(j)) <= 5.0 * se + 1e-15);
  }
}

TEST_CASE("determinism") {
  const auto p = build_two_level(3);
  const auto psi = random_hs_mixed(3, 2, 1);
  CHECK(simulate_counts(p, psi, 12345, 9).counts == simulate_counts(p, psi, 12345, 9).counts);
  CHECK(simulate_counts(p, psi, 12345, 9).counts != simulate_counts(p, psi, 12345, 10).counts);
}

TEST_CASE("per-block sampling") {
  const auto p = build_mub(3);
  const auto psi = random_haar_pure(3, 5).purification();
  const auto rec = simulate_counts(p, psi, 1003, 1, SamplingMode::per_block);
  CHECK(rec.mode == SamplingMode::per_block);
  std::vector<std::int64_t> block_totals;
  for (const auto& b : p.blocks()) {
    std::int64_t t = 0;
    for (int j : b) t += rec.counts[j];
    block_totals.push_back(t);
  }
  CHECK(block_totals == std::vector<std::int64_t>{251, 251, 251, 250});
  // Protocols without blocks fall back to one multinomial.
  const auto q = simulate_counts(build_symmetric(2, 4), random_haar_pure(2, 1).purification(), 10,
                                 1, SamplingMode::per_block);
  CHECK(q.mode == SamplingMode::single_multinomial);
}

TEST_CASE("empirical frequencies") {
  CountsRecord rec;
  rec.protocol = "x";
  rec.shots = 7;
  rec.counts = {7, 0, 0};
  CHECK(empirical_frequencies(rec) == std::vector<double>{1.0, 0.0, 0.0});

  const auto r2 = simulate_counts(build_mub(4), random_haar_pure(4, 2).purification(), 999, 3);
  const auto f = empirical_frequencies(r2);
  CHECK(std::abs(std::accumulate(f.begin(), f.end(), 0.0) - 1.0) < 1e-15);

  const auto p = build_mub(3);
  const auto psi = random_haar_pure(3, 6).purification();
  const auto big = empirical_frequencies(simulate_counts(p, psi, 100000000, 1));
  const RVector lambda = measurement_probs(p, psi);
  double dev = 0.0;
  for (int j = 0; j < p.rows(); ++j) dev = std::max(dev, std::abs(big[j] - lambda(j)));
  CHECK(dev < 1e-3);
}

TEST_CASE("counts serialization") {
  const auto rec = simulate_counts(build_mub(2), random_haar_pure(2, 1).purification(), 500, 77);
  const auto line = to_csv_line(rec);
  CHECK(line.rfind("mub,500,77,", 0) == 0);
  const auto back = counts_from_csv_line(line);
  CHECK(back.counts == rec.counts);
  CHECK(back.shots == rec.shots);
  CHECK(back.seed == rec.seed);
  const auto j = counts_from_json(to_json(rec));
  CHECK(j.counts == rec.counts);
  CHECK(j.protocol == rec.protocol);
  CHECK(j.mode == rec.mode);
  CHECK_THROWS(counts_from_csv_line("mub-2,500,77,1,2"));
}

TEST_CASE("invalid shot count") {
  const auto psi = random_haar_pure(2, 1).purification();
  CHECK_THROWS_AS(simulate_counts(build_mub(2), psi, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(simulate_counts(build_mub(2), psi, -5, 1), InvalidArgument);
  CHECK_THROWS_AS(simulate_counts(build_mub(3), psi, 10, 1), DimensionError);
}

}  // TEST_SUITE
