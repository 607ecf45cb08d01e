#include "qgeom/hermitian.hpp"

#include <cmath>

namespace qgeom {

namespace {
const Complex kI(0.0, 1.0);
}

HermitianOperator lie_bracket(const HermitianOperator& a,
                              const HermitianOperator& b) {
  require_same_dim(a, b);
  Matrix c = (a.matrix() * b.matrix() - b.matrix() * a.matrix()) / kI;
  return HermitianOperator(std::move(c));
}

HermitianOperator jordan_bracket(const HermitianOperator& a,
                                 const HermitianOperator& b) {
  require_same_dim(a, b);
  Matrix c = a.matrix() * b.matrix() + b.matrix() * a.matrix();
  return HermitianOperator(std::move(c));
}

HermitianOperator momentum_map(const Vector& x) {
  if (x.size() == 0) {
    throw std::invalid_argument("momentum_map: empty vector");
  }
  return HermitianOperator(Matrix(x * x.adjoint()));
}

double quadratic_form(const HermitianOperator& a, const Vector& x) {
  if (x.size() != a.dim()) {
    throw std::invalid_argument("quadratic_form: dimension mismatch");
  }
  return 0.5 * (x.adjoint() * a.matrix() * x)(0).real();
}

double poisson_tensor(const HermitianOperator& xi, const HermitianOperator& a,
                      const HermitianOperator& b) {
  require_same_dim(xi, a);
  require_same_dim(xi, b);
  const Complex t =
      (xi.matrix() * (a.matrix() * b.matrix() - b.matrix() * a.matrix()))
          .trace();
  return 0.5 * t.imag();  // Tr(...) / (2i), real part of the result
}

double riemann_jordan_tensor(const HermitianOperator& xi,
                             const HermitianOperator& a,
                             const HermitianOperator& b) {
  require_same_dim(xi, a);
  require_same_dim(xi, b);
  const Complex t =
      (xi.matrix() * (a.matrix() * b.matrix() + b.matrix() * a.matrix()))
          .trace();
  return 0.5 * t.real();
}

HermitianOperator lie_action(const HermitianOperator& xi,
                             const HermitianOperator& a) {
  return lie_bracket(a, xi);
}

HermitianOperator jordan_action(const HermitianOperator& xi,
                                const HermitianOperator& a) {
  return jordan_bracket(a, xi);
}

// --------------------------------------------------------------------------
// Orthonormal Hermitian basis: symmetric and antisymmetric off-diagonal
// pairs with unit hs_inner norm, traceless diagonal combinations, and the
// scaled identity.
// --------------------------------------------------------------------------

HermitianBasis::HermitianBasis(Eigen::Index n) : n_(n) {
  if (n < 1) {
    throw std::invalid_argument("HermitianBasis: dimension must be positive");
  }
  elems_.reserve(static_cast<size_t>(n * n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      Matrix sym = Matrix::Zero(n, n);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      elems_.push_back(sym);
      Matrix asym = Matrix::Zero(n, n);
      asym(j, k) = Complex(0.0, -1.0);
      asym(k, j) = Complex(0.0, 1.0);
      elems_.push_back(asym);
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    // diag(1,...,1,-l,0,...)/sqrt(l(l+1)/2): unit norm, traceless.
    Matrix d = Matrix::Zero(n, n);
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) {
      d(j, j) = scale;
    }
    d(l, l) = -static_cast<double>(l) * scale;
    elems_.push_back(d);
  }
  elems_.push_back(std::sqrt(2.0 / static_cast<double>(n)) *
                   Matrix::Identity(n, n));
}

RealVector HermitianBasis::coordinates(const Matrix& h) const {
  if (h.rows() != n_ || h.cols() != n_) {
    throw std::invalid_argument("HermitianBasis: dimension mismatch");
  }
  RealVector c(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    c(i) = 0.5 * (elems_[static_cast<size_t>(i)] * h).trace().real();
  }
  return c;
}

Matrix HermitianBasis::reconstruct(const RealVector& c) const {
  if (c.size() != size()) {
    throw std::invalid_argument("HermitianBasis: coordinate count mismatch");
  }
  Matrix h = Matrix::Zero(n_, n_);
  for (Eigen::Index i = 0; i < size(); ++i) {
    h += c(i) * elems_[static_cast<size_t>(i)];
  }
  return h;
}

namespace {

// Shared spectral helper: applies `f` to the eigenvalues of a symmetric
// matrix, sending eigenvalues below the relative cutoff to zero.
template <typename F>
RealMatrix spectral_pseudo(const RealMatrix& sym, double cutoff_rel,
                           const F& f) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 *
                                                   (sym + sym.transpose()));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("spectral_pseudo: eigensolver failed");
  }
  const RealVector& ev = solver.eigenvalues();
  const double cutoff = cutoff_rel * ev.cwiseAbs().maxCoeff();
  RealVector g(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    g(i) = std::abs(ev(i)) > cutoff ? f(ev(i)) : 0.0;
  }
  return solver.eigenvectors() * g.asDiagonal() *
         solver.eigenvectors().transpose();
}

}  // namespace

RealMatrix pinv_sqrt(const RealMatrix& sym, double cutoff_rel) {
  return spectral_pseudo(sym, cutoff_rel,
                         [](double x) { return 1.0 / std::sqrt(x); });
}

RealMatrix sign_pseudo(const RealMatrix& sym, double cutoff_rel) {
  return spectral_pseudo(sym, cutoff_rel,
                         [](double x) { return x > 0.0 ? 1.0 : -1.0; });
}

namespace {

// Superoperator of the Lie action at xi in the given basis (antisymmetric
// as a real matrix, by invariance of hs_inner).
RealMatrix lie_superop(const HermitianOperator& xi,
                       const HermitianBasis& basis) {
  const Matrix& x = xi.matrix();
  return superop_matrix(
      [&x](const Matrix& a) { return Matrix((a * x - x * a) / kI); }, basis);
}

RealMatrix jordan_superop(const HermitianOperator& xi,
                          const HermitianBasis& basis) {
  const Matrix& x = xi.matrix();
  return superop_matrix([&x](const Matrix& a) { return Matrix(a * x + x * a); },
                        basis);
}

}  // namespace

HermitianOperator complex_structure(const HermitianOperator& xi,
                                    const HermitianOperator& a) {
  require_same_dim(xi, a);
  HermitianBasis basis(xi.dim());
  const RealMatrix s = lie_superop(xi, basis);
  const RealMatrix msq = -(s * s);  // symmetric PSD; kernel = kernel of s
  if (msq.cwiseAbs().maxCoeff() == 0.0) {
    return HermitianOperator::zero(xi.dim());
  }
  const RealVector out = s * (pinv_sqrt(msq) * basis.coordinates(a.matrix()));
  return HermitianOperator(basis.reconstruct(out));
}

HermitianOperator product_structure(const HermitianOperator& xi,
                                    const HermitianOperator& a) {
  require_same_dim(xi, a);
  HermitianBasis basis(xi.dim());
  const RealMatrix s = jordan_superop(xi, basis);
  if (s.cwiseAbs().maxCoeff() == 0.0) {
    return HermitianOperator::zero(xi.dim());
  }
  const RealVector out = sign_pseudo(s) * basis.coordinates(a.matrix());
  return HermitianOperator(basis.reconstruct(out));
}

double orbit_symplectic(const HermitianOperator& xi,
                        const HermitianOperator& a_prime,
                        const HermitianOperator& b_prime) {
  return poisson_tensor(xi, a_prime, b_prime);
}

double orbit_metric(const HermitianOperator& xi,
                    const HermitianOperator& a_prime,
                    const HermitianOperator& b_prime) {
  require_same_dim(xi, a_prime);
  require_same_dim(xi, b_prime);
  HermitianBasis basis(xi.dim());
  const RealMatrix s = lie_superop(xi, basis);
  const RealMatrix msq = -(s * s);
  if (msq.cwiseAbs().maxCoeff() == 0.0) {
    return 0.0;  // the orbit through a central xi is a point
  }
  const RealVector ta = s * basis.coordinates(a_prime.matrix());
  const RealVector tb = s * basis.coordinates(b_prime.matrix());
  return ta.dot(pinv_sqrt(msq) * tb);
}

}  // namespace qgeom
