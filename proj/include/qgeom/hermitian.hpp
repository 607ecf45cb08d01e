#pragma once

#include "qgeom/types.hpp"

namespace qgeom {

// ---------------------------------------------------------------------------
// Bracket algebra.
//
// The space of Hermitian operators carries two bilinear products: the Lie
// bracket [A,B] = (AB - BA)/i and the Jordan bracket [A,B]_+ = AB + BA.
// Both are Hermitian again, and both are invariant for hs_inner in the
// sense  <[A,x],B> = <A,[x,B]>  (same identity with the Jordan product).
// ---------------------------------------------------------------------------

HermitianOperator lie_bracket(const HermitianOperator& a,
                              const HermitianOperator& b);
HermitianOperator jordan_bracket(const HermitianOperator& a,
                                 const HermitianOperator& b);

// Rank-one projector |x><x| built from a (not necessarily normalized)
// state vector; satisfies Tr(momentum_map(x) A) = <x, A x>.
HermitianOperator momentum_map(const Vector& x);

// The quadratic observable f_A(x) = <x, A x> / 2.
double quadratic_form(const HermitianOperator& a, const Vector& x);

// ---------------------------------------------------------------------------
// Pointwise contravariant tensors at a Hermitian point xi.
//
// poisson_tensor       L(xi)(A,B) = Tr(xi (AB - BA)) / (2i)
// riemann_jordan_tensor R(xi)(A,B) = Tr(xi (AB + BA)) / 2
//
// They combine as R + iL = Tr(xi A B).
// ---------------------------------------------------------------------------

double poisson_tensor(const HermitianOperator& xi, const HermitianOperator& a,
                      const HermitianOperator& b);
double riemann_jordan_tensor(const HermitianOperator& xi,
                             const HermitianOperator& a,
                             const HermitianOperator& b);

// The (1,1) tensors obtained by raising one index: the Lie action
// A -> [A, xi] and the Jordan action A -> [A, xi]_+.  They commute with
// each other, and their composition sends A to [A, xi^2].
HermitianOperator lie_action(const HermitianOperator& xi,
                             const HermitianOperator& a);
HermitianOperator jordan_action(const HermitianOperator& xi,
                                const HermitianOperator& a);

// ---------------------------------------------------------------------------
// Superoperator representation.
//
// Real-linear maps on the n^2-dimensional real space of Hermitian n x n
// matrices are materialized as real n^2 x n^2 matrices in a fixed
// orthonormal basis (orthonormal for hs_inner): the generalized Gell-Mann
// matrices plus the scaled identity sqrt(2/n) I.  This makes properties
// like self-adjointness and spectral calculus directly checkable.
// ---------------------------------------------------------------------------

class HermitianBasis {
 public:
  explicit HermitianBasis(Eigen::Index n);

  Eigen::Index dim() const { return n_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(elems_.size()); }
  const Matrix& element(Eigen::Index i) const { return elems_[static_cast<size_t>(i)]; }

  // Coordinates of a Hermitian matrix in this basis, and back.
  RealVector coordinates(const Matrix& h) const;
  Matrix reconstruct(const RealVector& c) const;

 private:
  Eigen::Index n_;
  std::vector<Matrix> elems_;
};

// Materialize a linear map on Hermitian matrices as a real matrix acting on
// basis coordinates: M(a,b) = <F_a, f(F_b)>.
template <typename F>
RealMatrix superop_matrix(const F& f, const HermitianBasis& basis) {
  const Eigen::Index d = basis.size();
  RealMatrix m(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    m.col(b) = basis.coordinates(f(basis.element(b)));
  }
  return m;
}

// Spectral pseudo-functions of a symmetric real matrix: eigenvalues with
// magnitude below cutoff_rel * max|eigenvalue| are treated as kernel.
RealMatrix pinv_sqrt(const RealMatrix& sym, double cutoff_rel = tol::pinv_rel);
RealMatrix sign_pseudo(const RealMatrix& sym, double cutoff_rel = tol::pinv_rel);

// ---------------------------------------------------------------------------
// Orbit geometry at xi.
//
// complex_structure:  the partial complex structure of the unitary orbit,
//   obtained from the Lie action T by spectral calculus: zero on ker T,
//   and T (-T^2)^{-1/2} on the image.  Cubes to its own negative.
// product_structure:  the analogous sign of the Jordan action; cubes to
//   itself.  Both are computed through the superoperator representation.
// ---------------------------------------------------------------------------

HermitianOperator complex_structure(const HermitianOperator& xi,
                                    const HermitianOperator& a);
HermitianOperator product_structure(const HermitianOperator& xi,
                                    const HermitianOperator& a);

// Kostant-Kirillov-Souriau symplectic pairing of the orbit tangent vectors
// [A',xi] and [B',xi]:  eta([A',xi],[B',xi]) = <xi, [A',B']>.
double orbit_symplectic(const HermitianOperator& xi,
                        const HermitianOperator& a_prime,
                        const HermitianOperator& b_prime);

// Compatible Riemannian pairing of the same tangent vectors.  On tangent
// coordinates it is <(-T^2)^{-1/2} X, Y> for the Lie action T, which is
// symmetric, positive definite on the tangent space, reduces to hs_inner
// when xi is a projector, and satisfies eta(X,Y) = gamma(X, J(Y)) for the
// complex structure J.
double orbit_metric(const HermitianOperator& xi,
                    const HermitianOperator& a_prime,
                    const HermitianOperator& b_prime);

}  // namespace qgeom
