#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>

#include "support.hpp"

using namespace qtomo;

namespace {

// Central-difference Jacobian of lambda(theta), independent of the
// analytic gradient code.
RMatrix numeric_jacobian(const Protocol& p, const Purification& state, double h) {
  const int s = state.dim(), r = state.rank();
  const int n = 2 * s * r;
  RMatrix jac(p.rows(), n);
  const CMatrix c0 = state.matrix();
  auto probs = [&](const CMatrix& c) {
    RVector l(p.rows());
    for (int j = 0; j < p.rows(); ++j)
      l(j) = (p.matrix().row(j) * c).squaredNorm() / p.closure_constant();
    return l;
  };
  for (int k = 0; k < n; ++k) {
    const int flat = k % (s * r);
    const bool imag = k >= s * r;
    const Complex step = imag ? Complex(0.0, h) : Complex(h, 0.0);
    CMatrix cp = c0, cm = c0;
    cp(flat % s, flat / s) += step;
    cm(flat % s, flat / s) -= step;
    jac.col(k) = (probs(cp) - probs(cm)) / (2.0 * h);
  }
  return jac;
}

Protocol random_closed_protocol(int s, int m, std::mt19937_64& gen) {
  const CMatrix u = qtest::haar_unitary(m, gen);
  return Protocol("random", u.leftCols(s) * std::sqrt(double(m) / s));
}

}  // namespace

TEST_SUITE("information") {

TEST_CASE("information matrix is symmetric and linear in N") {
  Rng rng(1);
  for (auto p : {build_mub(3), build_two_level(3), build_mub(4)}) {
    const auto c = random_hs_mixed(p.dim(), 2, rng);
    const RMatrix h = complete_information_matrix(p, c, 1e5);
    const RMatrix h2 = complete_information_matrix(p, c, 2e5);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * h.cwiseAbs().maxCoeff());
    CHECK(h2 == 2.0 * h);
    const Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * es.eigenvalues().maxCoeff());
  }
}

TEST_CASE("analytic gradients match finite differences") {
  std::mt19937_64 gen(11);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int s = 2 + k % 4;
    const int r = 1 + k % s;
    const Protocol p = (k % 3 == 0)   ? build_mub(s)
                       : (k % 3 == 1) ? build_two_level(s)
                                      : random_closed_protocol(s, s * s + 2, gen);
    const auto c = qtest::random_purification(s, r, gen);
    const RMatrix g = probability_gradients(p, c);
    const RMatrix fd = numeric_jacobian(p, c, 1e-6);
    worst = std::max(worst, (g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("qubit mub eigenvalue pattern") {
  const double n = 1e5;
  const auto psi = random_haar_pure(2, 3).purification();
  const RMatrix h = complete_information_matrix(build_mub(2), psi, n);
  const Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  const RVector ev = es.eigenvalues();
  CHECK(std::abs(ev(0)) < 1e-6 * ev(3));
  CHECK(ev(1) > 1e-3 * n);
  CHECK(ev(3) == doctest::Approx(2.0 * n));

  const auto spec = loss_spectrum(h, psi, n);
  CHECK(spec.counts.gauge == 1);
  CHECK(spec.counts.normalization == 1);
  CHECK(spec.counts.informative == 2);
  CHECK(spec.normalization_eigenvalue == doctest::Approx(2.0 * n));
}

TEST_CASE("qubit mub per-state loss lies in [1, 1.125]") {
  Rng rng(2);
  for (int k = 0; k < 2000; ++k) {
    const auto spec = loss_spectrum(build_mub(2), random_haar_pure(2, rng).purification(), 1e5);
    const double l = mean_loss(spec).loss;
    CHECK(l >= 1.0 - 1e-9);
    CHECK(l <= 1.125 + 1e-9);
  }
}

TEST_CASE("spectrum length for pure states") {
  for (int s : {2, 3, 4, 5, 7}) {
    const auto spec = loss_spectrum(build_two_level(s), random_haar_pure(s, s).purification(), 1e5);
    CHECK(spec.d.size() == static_cast<std::size_t>(2 * s - 2));
    for (double d : spec.d) CHECK(d > 0.0);
  }
}

TEST_CASE("eigenvalue bookkeeping") {
  const int cases[][2] = {{2, 1}, {2, 2}, {3, 1}, {3, 2}, {3, 3}, {4, 2}, {4, 4}, {5, 3}, {5, 5}};
  for (const auto& sr : cases) {
    const int s = sr[0], r = sr[1];
    CAPTURE(s);
    CAPTURE(r);
    const auto spec = loss_spectrum(build_mub(s), random_hs_mixed(s, r, 7), 1e5);
    CHECK(spec.counts.gauge == r * r);
    CHECK(spec.nu_p == informative_parameter_count(s, r));
    CHECK(spec.counts.informative == spec.nu_p);
    CHECK(spec.counts.normalization + spec.counts.gauge + spec.counts.informative == 2 * s * r);
    CHECK(spec.d.size() == static_cast<std::size_t>(spec.nu_p));
  }
}

TEST_CASE("incomplete protocols fail classification exactly when the jacobian is rank deficient") {
  const auto fam = mub_family(4);
  int failures = 0;
  for (int keep = 1; keep <= 5; ++keep) {
    MubFamily sub{4, {}};
    for (int b = 0; b < keep; ++b) sub.bases.push_back(fam.bases[b]);
    const auto proto = mub_protocol(sub);
    for (int r : {1, 2}) {
      const auto c = random_hs_mixed(4, r, 31 + r);
      // Oracle: zero modes of H are the null space of the probability map.
      const RMatrix jac = numeric_jacobian(proto, c, 1e-6);
      Eigen::JacobiSVD<RMatrix> svd(jac);
      const RVector sv = svd.singularValues();
      int rank = 0;
      for (int i = 0; i < sv.size(); ++i) rank += sv(i) > 1e-6 * sv(0);
      const int zeros = 2 * 4 * r - rank;
      const bool complete = zeros == r * r;
      CAPTURE(keep);
      CAPTURE(r);
      if (complete) {
        CHECK_NOTHROW(loss_spectrum(proto, c, 1e5));
      } else {
        ++failures;
        try {
          loss_spectrum(proto, c, 1e5);
          FAIL("expected classification failure");
        } catch (const ClassificationError& e) {
          CHECK(e.expected_gauge() == r * r);
          CHECK(e.found_gauge() == zeros);
        }
      }
    }
  }
  CHECK(failures > 0);
}

TEST_CASE("mean loss") {
  LossSpectrum single;
  single.s = 2;
  single.r = 1;
  single.nu_p = 1;
  single.shots = 1000.0;
  single.d = {1.0 / (2.0 * 40.0)};
  CHECK(mean_loss(single).infidelity == doctest::Approx(1.0 / 80.0));
  CHECK(mean_loss(single).loss == doctest::Approx(1000.0 / 80.0));

  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    const auto psi = random_haar_pure(3, rng).purification();
    const double a = mean_loss(loss_spectrum(build_two_level(3), psi, 1e5)).loss;
    const double b = mean_loss(loss_spectrum(build_two_level(3), psi, 2e5)).loss;
    CHECK(std::abs(a - b) <= 1e-12 * a);
  }
}

TEST_CASE("qubit mub haar average") {
  Rng rng(2014);
  double sum = 0.0;
  const int n = 10000;
  for (int k = 0; k < n; ++k)
    sum += mean_loss(loss_spectrum(build_mub(2), random_haar_pure(2, rng).purification(), 1e5)).loss;
  CHECK(std::abs(sum / n - 1.08371) < 0.003);
}

TEST_CASE("loss distribution moments") {
  const auto spec = loss_spectrum(build_mub(3), random_haar_pure(3, 4).purification(), 1e5);
  const std::size_t n = 1000000;
  const auto sample = sample_loss_distribution(spec, n, 5);
  REQUIRE(sample.values.size() == n);
  double sum_d = 0.0, sum_d2 = 0.0;
  for (double d : spec.d) {
    sum_d += d;
    sum_d2 += d * d;
  }
  const double m = qtest::mean(sample.values);
  const double v = qtest::variance(sample.values);
  double m4 = 0.0;
  for (double x : sample.values) {
    CHECK_FALSE(x < 0.0);
    m4 += std::pow(x - m, 4);
  }
  m4 /= double(n);
  CHECK(std::abs(m - sum_d) < 5.0 * std::sqrt(v / n));
  CHECK(std::abs(v - 2.0 * sum_d2) < 5.0 * std::sqrt((m4 - v * v) / n));
  CHECK(sample_loss_distribution(spec, 10, 1).values == sample_loss_distribution(spec, 10, 1).values);
}

TEST_CASE("single-term loss distribution is a scaled chi-square") {
  LossSpectrum spec;
  spec.s = 2;
  spec.r = 1;
  spec.nu_p = 1;
  spec.shots = 1.0;
  spec.d = {0.5};
  const auto sample = sample_loss_distribution(spec, 20000, 13);
  boost::math::chi_squared chi1(1.0);
  const double ks = qtest::ks_one_sample(sample.values, [&](double x) { return boost::math::cdf(chi1, x / 0.5); });
  CHECK(ks < qtest::ks_one_sample_critical(sample.values.size()));
}

TEST_CASE("efficiency") {
  for (int s : {2, 3, 5, 8}) {
    CHECK(efficiency(s - 1.0, s, 1) == doctest::Approx(1.0));
    CHECK(efficiency(2.5, s, 1) == doctest::Approx((s - 1.0) / 2.5));
  }
  CHECK(efficiency(2.20530, 3, 1) == doctest::Approx(0.9069).epsilon(1e-4));
  CHECK(efficiency(100.0, 8, 8) == doctest::Approx(63.0 * 63.0 / (4.0 * 100.0 * 7.0)));
}

TEST_CASE("unitary covariance") {
  std::mt19937_64 gen(3);
  for (auto p : {build_mub(3), build_two_level(4), build_mub(5)}) {
    const int s = p.dim();
    const CMatrix v = qtest::haar_unitary(s, gen);
    const auto q = rotated(p, v);
    for (int r : {1, 2}) {
      const auto c = qtest::random_purification(s, r, gen);
      const Purification vc(v * c.matrix());
      CHECK((measurement_probs(p, c) - measurement_probs(q, vc)).cwiseAbs().maxCoeff() < 1e-12);
      const auto a = loss_spectrum(p, c, 1e5);
      const auto b = loss_spectrum(q, vc, 1e5);
      REQUIRE(a.d.size() == b.d.size());
      for (std::size_t i = 0; i < a.d.size(); ++i) CHECK(std::abs(a.d[i] - b.d[i]) <= 1e-9 * a.d[i]);
      const double la = mean_loss(a).loss, lb = mean_loss(b).loss;
      CHECK(std::abs(la - lb) <= 1e-9 * la);
      CHECK(std::abs(efficiency(la, s, r) - efficiency(lb, s, r)) < 1e-9);
    }
  }
}

TEST_CASE("pure-state loss never beats s - 1") {
  std::mt19937_64 gen(23);
  Rng rng(24);
  for (int s : {2, 3, 4, 5}) {
    std::vector<Protocol> protos = {build_mub(s), build_two_level(s),
                                    random_closed_protocol(s, s * s + 3, gen)};
    for (const auto& p : protos) {
      for (int k = 0; k < 50; ++k) {
        const double l = mean_loss(loss_spectrum(p, random_haar_pure(s, rng).purification(), 1e5)).loss;
        CHECK(l >= s - 1.0 - 1e-9);
      }
    }
  }
}

TEST_CASE("spectrum json round trip") {
  const auto spec = loss_spectrum(build_mub(3), random_hs_mixed(3, 2, 1), 1e5);
  const auto back = spectrum_from_json(spectrum_to_json(spec));
  CHECK(back.s == spec.s);
  CHECK(back.r == spec.r);
  CHECK(back.nu_p == spec.nu_p);
  CHECK(back.shots == spec.shots);
  CHECK(back.d == spec.d);
  CHECK(back.counts.gauge == spec.counts.gauge);
  CHECK(back.counts.informative == spec.counts.informative);
}

}  // TEST_SUITE
