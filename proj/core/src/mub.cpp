#include "qtomo/mub.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qtomo {

namespace {

const Complex kI(0.0, 1.0);

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

MubFamily tabulated_qubit() {
  const double h = 1.0 / std::sqrt(2.0);
  CMatrix u0 = CMatrix::Identity(2, 2);
  CMatrix u1(2, 2);
  u1 << h, h, h, -h;
  CMatrix u2(2, 2);
  u2 << h, h, kI * h, -kI * h;
  return {2, {u0, u1, u2}};
}

MubFamily tabulated_qutrit() {
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const Complex w2 = w * w;
  const double h = 1.0 / std::sqrt(3.0);
  CMatrix u0 = CMatrix::Identity(3, 3);
  CMatrix u1(3, 3);
  u1 << 1.0, 1.0, 1.0,
        1.0, w, w2,
        1.0, w2, w;
  CMatrix u2(3, 3);
  u2 << 1.0, 1.0, 1.0,
        w, w2, 1.0,
        w, 1.0, w2;
  CMatrix u3(3, 3);
  u3 << 1.0, 1.0, 1.0,
        w2, w, 1.0,
        w2, 1.0, w;
  return {3, {u0, h * u1, h * u2, h * u3}};
}

MubFamily tabulated_ququart() {
  const Complex i = kI;
  CMatrix u0 = CMatrix::Identity(4, 4);
  CMatrix u1(4, 4);
  u1 << 1.0, 1.0, 1.0, 1.0,
        1.0, 1.0, -1.0, -1.0,
        1.0, -1.0, -1.0, 1.0,
        1.0, -1.0, 1.0, -1.0;
  CMatrix u2(4, 4);
  u2 << 1.0, 1.0, 1.0, 1.0,
        -1.0, -1.0, 1.0, 1.0,
        -i, i, i, -i,
        -i, i, -i, i;
  CMatrix u3(4, 4);
  u3 << 1.0, 1.0, 1.0, 1.0,
        -i, -i, i, i,
        -i, i, i, -i,
        -1.0, 1.0, -1.0, 1.0;
  CMatrix u4(4, 4);
  u4 << 1.0, 1.0, 1.0, 1.0,
        -i, -i, i, i,
        -1.0, 1.0, -1.0, 1.0,
        -i, i, i, -i;
  return {4, {u0, 0.5 * u1, 0.5 * u2, 0.5 * u3, 0.5 * u4}};
}

// (U_k)_{l,j} = w^(k l^2 + j l) / sqrt(p), k = 0..p-1, after the identity.
MubFamily odd_prime_family(int p) {
  MubFamily f{p, {CMatrix::Identity(p, p)}};
  const double norm = 1.0 / std::sqrt(static_cast<double>(p));
  for (int k = 0; k < p; ++k) {
    CMatrix u(p, p);
    for (int l = 0; l < p; ++l) {
      for (int j = 0; j < p; ++j) {
        const long e = (static_cast<long>(k) * l * l + static_cast<long>(j) * l) % p;
        u(l, j) = norm * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / p);
      }
    }
    f.bases.push_back(std::move(u));
  }
  return f;
}

// GF(2^n) with elements as bit masks over the polynomial basis.
class BinaryField {
 public:
  explicit BinaryField(int n) : n_(n) {
    // Irreducible polynomials, low bits only (x^n implied).
    static constexpr unsigned kPoly[] = {0, 0x1, 0x3, 0x3, 0x3, 0x5, 0x3};
    if (n < 1 || n > 6) throw UnsupportedDimension("GF(2^n) supported for n <= 6");
    low_ = kPoly[n];
  }

  unsigned mul(unsigned a, unsigned b) const {
    unsigned r = 0;
    for (int k = 0; k < n_; ++k) {
      if (b & (1u << k)) r ^= a;
      const bool carry = a & (1u << (n_ - 1));
      a = (a << 1) & ((1u << n_) - 1);
      if (carry) a ^= low_;
    }
    return r;
  }

  // Absolute trace to GF(2): x + x^2 + x^4 + ... + x^(2^(n-1)).
  unsigned trace(unsigned x) const {
    unsigned t = 0;
    unsigned y = x;
    for (int k = 0; k < n_; ++k) {
      t ^= y;
      y = mul(y, y);
    }
    return t & 1u;
  }

 private:
  int n_;
  unsigned low_;
};

// Hermitian Pauli i^{a.b} X^a Z^b on n qubits (dimension 2^n).
CMatrix pauli(int n, unsigned a, unsigned b) {
  const int d = 1 << n;
  CMatrix p = CMatrix::Zero(d, d);
  const int ab = std::popcount(a & b) % 4;
  const Complex phase = std::pow(kI, ab);
  for (int x = 0; x < d; ++x) {
    const double sign = (std::popcount(b & static_cast<unsigned>(x)) % 2) ? -1.0 : 1.0;
    p(static_cast<int>(static_cast<unsigned>(x) ^ a), x) = phase * sign;
  }
  return p;
}

// Classes {X^a Z^{M_c a}} with (M_c)_{ij} = tr(c e_i e_j) commute because M_c
// is symmetric, and distinct classes meet only in the identity because
// M_c - M_c' = M_{c-c'} is invertible.  Each basis is the joint eigenbasis,
// read off a weighted sum of the class generators with distinct spectra.
MubFamily binary_family(int n) {
  const int d = 1 << n;
  const BinaryField field(n);
  MubFamily f{d, {CMatrix::Identity(d, d)}};
  for (unsigned c = 0; c < static_cast<unsigned>(d); ++c) {
    CMatrix h = CMatrix::Zero(d, d);
    for (int k = 0; k < n; ++k) {
      unsigned b = 0;
      for (int i = 0; i < n; ++i) {
        const unsigned prod = field.mul(c, field.mul(1u << i, 1u << k));
        if (field.trace(prod)) b |= 1u << i;
      }
      h += static_cast<double>(1 << k) * pauli(n, 1u << k, b);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    f.bases.push_back(es.eigenvectors());
  }
  return f;
}

}  // namespace

MubFamily galois_mub_family(int s) {
  if (s >= 3 && s <= 61 && is_prime(s)) return odd_prime_family(s);
  if (s >= 2 && std::has_single_bit(static_cast<unsigned>(s)) && s <= 64)
    return binary_family(std::countr_zero(static_cast<unsigned>(s)));
  std::ostringstream os;
  os << "no mutually unbiased basis construction for dimension " << s;
  throw UnsupportedDimension(os.str());
}

MubFamily mub_family(int s) {
  switch (s) {
    case 2: return tabulated_qubit();
    case 3: return tabulated_qutrit();
    case 4: return tabulated_ququart();
    default: return galois_mub_family(s);
  }
}

Protocol mub_protocol(const MubFamily& family) {
  const int s = family.s;
  const int nb = static_cast<int>(family.bases.size());
  CMatrix x(s * nb, s);
  Protocol::Blocks blocks;
  for (int b = 0; b < nb; ++b) {
    x.middleRows(b * s, s) = family.bases[static_cast<std::size_t>(b)].adjoint();
    std::vector<int> block(static_cast<std::size_t>(s));
    for (int k = 0; k < s; ++k) block[static_cast<std::size_t>(k)] = b * s + k;
    blocks.push_back(std::move(block));
  }
  return Protocol("mub", std::move(x), std::move(blocks));
}

Protocol build_mub(int s) {
  Protocol p = mub_protocol(mub_family(s));
  check_povm(p);
  return p;
}

double unbiasedness_residual(const MubFamily& family) {
  double worst = 0.0;
  const double target = 1.0 / family.s;
  for (std::size_t a = 0; a < family.bases.size(); ++a) {
    for (std::size_t b = a + 1; b < family.bases.size(); ++b) {
      const CMatrix overlap = family.bases[a].adjoint() * family.bases[b];
      worst = std::max(worst, (overlap.cwiseAbs2().array() - target).abs().maxCoeff());
    }
  }
  return worst;
}

double unitarity_residual(const MubFamily& family) {
  double worst = 0.0;
  for (const auto& u : family.bases) {
    const CMatrix g = u.adjoint() * u - CMatrix::Identity(family.s, family.s);
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace qtomo
