#include "qtomo/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/QR>

namespace qtomo {

Protocol::Protocol(std::string name, CMatrix x, Blocks blocks)
    : name_(std::move(name)), x_(std::move(x)), a_(0.0), blocks_(std::move(blocks)) {
  if (x_.rows() < 1 || x_.cols() < 1) throw InvalidArgument("protocol matrix is empty");
  a_ = x_.squaredNorm() / static_cast<double>(x_.cols());
  if (!blocks_.empty()) {
    std::vector<int> seen(static_cast<std::size_t>(x_.rows()), 0);
    for (const auto& block : blocks_) {
      if (block.empty()) throw InvalidArgument("protocol block is empty");
      for (int j : block) {
        if (j < 0 || j >= x_.rows()) throw InvalidArgument("protocol block index out of range");
        if (seen[static_cast<std::size_t>(j)]++) throw InvalidArgument("protocol blocks overlap");
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      throw InvalidArgument("protocol blocks do not cover every row");
  }
}

Protocol Protocol::without_row(int j) const {
  if (j < 0 || j >= rows()) throw InvalidArgument("row index out of range");
  CMatrix x(rows() - 1, dim());
  for (int i = 0, k = 0; i < rows(); ++i) {
    if (i != j) x.row(k++) = x_.row(i);
  }
  return Protocol(name_ + "-minus-row", std::move(x));
}

double closure_residual(const Protocol& p) {
  const CMatrix gram = p.matrix().adjoint() * p.matrix();
  const double a = p.closure_constant();
  return (gram - a * CMatrix::Identity(p.dim(), p.dim())).cwiseAbs().maxCoeff();
}

double check_povm(const Protocol& p, double tol) {
  const double residual = closure_residual(p);
  if (!(residual <= tol)) {
    std::ostringstream os;
    os << "protocol '" << p.name() << "' violates X^dagger X = a I: residual " << residual;
    throw ClosureError(os.str(), residual);
  }
  return p.closure_constant();
}

CMatrix unitary_complement(const Protocol& p) {
  check_povm(p);
  const int m = p.rows();
  const int s = p.dim();
  const CMatrix head = p.matrix() / std::sqrt(p.closure_constant());
  CMatrix u(m, m);
  u.leftCols(s) = head;
  if (m > s) {
    Eigen::HouseholderQR<CMatrix> qr(head);
    const CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
    u.rightCols(m - s) = q.rightCols(m - s);
  }
  return u;
}

RVector measurement_probs(const Protocol& p, const Purification& state) {
  if (p.dim() != state.dim()) throw DimensionError("measurement_probs: dimension mismatch");
  const CMatrix y = p.matrix() * state.matrix();
  return y.rowwise().squaredNorm() / p.closure_constant();
}

Protocol build_two_level(int s) {
  if (s < 2) throw InvalidArgument("build_two_level: dimension must be >= 2");
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i1(0.0, 1.0);
  // Columns: eigenvectors of sigma_x, then of sigma_y.
  Eigen::Matrix2cd u1;
  u1 << h, h, h, -h;
  Eigen::Matrix2cd u2;
  u2 << h, h, i1 * h, -i1 * h;

  const int m = s * (2 * s - 1);
  CMatrix x = CMatrix::Zero(m, s);
  Protocol::Blocks blocks;
  int row = 0;
  for (int a = 0; a < s; ++a) {
    for (int b = a + 1; b < s; ++b) {
      for (const Eigen::Matrix2cd* u : {&u1, &u2}) {
        std::vector<int> block;
        for (int col = 0; col < 2; ++col) {
          x(row, a) = std::conj((*u)(0, col));
          x(row, b) = std::conj((*u)(1, col));
          block.push_back(row++);
        }
        blocks.push_back(std::move(block));
      }
    }
  }
  std::vector<int> populations;
  for (int a = 0; a < s; ++a) {
    x(row, a) = 1.0;
    populations.push_back(row++);
  }
  blocks.push_back(std::move(populations));
  Protocol p("two-level", std::move(x), std::move(blocks));
  check_povm(p);
  return p;
}

Protocol rotated(const Protocol& p, const CMatrix& v) {
  if (v.rows() != p.dim() || v.cols() != p.dim()) throw DimensionError("rotated: bad unitary");
  return Protocol(p.name(), p.matrix() * v.adjoint(), p.blocks());
}

}  // namespace qtomo
