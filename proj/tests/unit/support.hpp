#pragma once

// Shared helpers for the unit tests.  Everything here is deliberately
// independent of the library's own samplers so it can serve as an oracle.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qtomo/qtomo.hpp"

namespace qtest {

using qtomo::CMatrix;
using qtomo::Complex;
using qtomo::CVector;

/// Haar unitary from std::mt19937_64 via QR with phase fix.
inline CMatrix haar_unitary(int n, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = Complex(nd(gen), nd(gen));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

inline qtomo::Purification random_purification(int s, int r, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  CMatrix c(s, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < s; ++i) c(i, j) = Complex(nd(gen), nd(gen));
  return qtomo::Purification::normalized(c);
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

/// 1% critical value of the two-sample KS statistic (asymptotic).
inline double ks_two_sample_critical(std::size_t n, std::size_t m) {
  return 1.628 * std::sqrt(double(n + m) / (double(n) * double(m)));
}

/// One-sample KS statistic against a continuous CDF.
template <class Cdf>
double ks_one_sample(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - double(i) / n, double(i + 1) / n - f});
  }
  return d;
}

inline double ks_one_sample_critical(std::size_t n) { return 1.628 / std::sqrt(double(n)); }

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace qtest
