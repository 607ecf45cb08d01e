#include "qgeom/random.hpp"

#include <cmath>

namespace qgeom {

double Rng::uniform() {
  // 53 uniform bits mapped into [0, 1).
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = uniform();
  while (u <= 0.0) {
    u = uniform();
  }
  const double v = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * M_PI * v;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im);
}

Matrix random_ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = rng.complex_gaussian();
    }
  }
  return m;
}

Vector random_pure_state(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = rng.complex_gaussian();
  }
  const double norm = v.norm();
  if (norm == 0.0) {
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

HermitianOperator random_hermitian(Rng& rng, Eigen::Index n) {
  const Matrix g = random_ginibre(rng, n, n);
  return HermitianOperator(Matrix(0.5 * (g + g.adjoint())));
}

HermitianOperator random_signature(Rng& rng, Eigen::Index n, int plus,
                                   int minus) {
  const int k = plus + minus;
  if (k > n) {
    throw std::invalid_argument("random_signature: rank exceeds dimension");
  }
  Matrix out = Matrix::Zero(n, n);
  if (k == 0) {
    return HermitianOperator(std::move(out));
  }
  const Matrix frame = random_isometry(rng, n, k);
  for (int i = 0; i < k; ++i) {
    // Eigenvalue magnitudes bounded away from zero keep the rank stable.
    const double mag = 0.5 + rng.uniform();
    const double sign = i < plus ? 1.0 : -1.0;
    out += sign * mag * frame.col(i) * frame.col(i).adjoint();
  }
  return HermitianOperator(std::move(out));
}

DensityState random_density(Rng& rng, Eigen::Index n, Eigen::Index rank) {
  if (rank < 1 || rank > n) {
    throw std::invalid_argument("random_density: rank outside [1, n]");
  }
  const Matrix g = random_ginibre(rng, n, rank);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityState(std::move(rho));
}

Matrix random_unitary(Rng& rng, Eigen::Index n) {
  const Matrix g = random_ginibre(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the phase convention so the distribution is Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) {
      q.col(i) *= d / std::abs(d);
    }
  }
  return q;
}

Matrix random_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  if (rows < cols) {
    throw std::invalid_argument("random_isometry: need rows >= cols");
  }
  const Matrix g = random_ginibre(rng, rows, cols);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = Matrix::Identity(rows, cols);
  q = qr.householderQ() * q;  // thin Q
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < cols; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) {
      q.col(i) *= d / std::abs(d);
    }
  }
  return q;
}

Vector random_unit_vector(Rng& rng, Eigen::Index m) {
  Vector z(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    z(i) = rng.complex_gaussian();
  }
  const double norm = z.norm();
  if (norm == 0.0) {
    z(0) = 1.0;
    return z;
  }
  return z / norm;
}

KrausMap random_kraus(Rng& rng, Eigen::Index n, int count) {
  if (count < 1) {
    throw std::invalid_argument("random_kraus: need >= 1 operator");
  }
  std::vector<Matrix> ops;
  for (int i = 0; i < count; ++i) {
    ops.push_back(random_ginibre(rng, n, n));
  }
  return KrausMap(std::move(ops));
}

}  // namespace qgeom
