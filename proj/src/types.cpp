#include "qgeom/types.hpp"

#include <cmath>

namespace qgeom {

double hermiticity_residual(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermiticity_residual: matrix is not square");
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(Matrix m, double herm_tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("HermitianOperator: matrix is not square");
  }
  if (m.rows() == 0) {
    throw std::invalid_argument("HermitianOperator: empty matrix");
  }
  const double res = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (res > herm_tol) {
    throw std::invalid_argument("HermitianOperator: hermiticity residual " +
                                std::to_string(res) + " exceeds tolerance");
  }
  mat_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::zero(Eigen::Index n) {
  return HermitianOperator(Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::identity(Eigen::Index n) {
  return HermitianOperator(Matrix::Identity(n, n));
}

Spectrum spectrum_of(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectrum_of: eigensolver failed");
  }
  // Eigen sorts ascending; flip to decreasing order.
  const Eigen::Index n = a.dim();
  Spectrum s;
  s.values = solver.eigenvalues().reverse();
  s.vectors = Matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return s;
}

DensityState::DensityState(const HermitianOperator& op, double psd_tol,
                           double trace_tol)
    : op_(op) {
  const double tr = op_.matrix().trace().real();
  if (std::abs(tr - 1.0) > trace_tol) {
    throw std::invalid_argument("DensityState: trace " + std::to_string(tr) +
                                " is not 1 within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op_.matrix(),
                                               Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -psd_tol) {
    throw std::invalid_argument("DensityState: eigenvalue " +
                                std::to_string(min_eig) +
                                " below zero beyond tolerance");
  }
}

DensityState::DensityState(Matrix m, double herm_tol, double psd_tol,
                           double trace_tol)
    : DensityState(HermitianOperator(std::move(m), herm_tol), psd_tol,
                   trace_tol) {}

DensityState DensityState::maximally_mixed(Eigen::Index n) {
  return DensityState(Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityState DensityState::pure(const Vector& psi) {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) {
    throw std::invalid_argument("DensityState::pure: zero vector");
  }
  return DensityState(Matrix(psi * psi.adjoint() / n2));
}

double hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b);
  return 0.5 * (a.matrix() * b.matrix()).trace().real();
}

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("operator dimensions differ: " +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  }
}

}  // namespace qgeom
