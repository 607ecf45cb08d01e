#pragma once

#include "qgeom/types.hpp"

#include <optional>

namespace qgeom {

// A finite family of square operators of common dimension defining the
// completely positive map rho -> sum_i A_i rho A_i^dagger.  Operators that
// are numerically zero (max-abs entry <= drop_tol) are dropped; an empty or
// all-zero family is rejected.
class KrausMap {
 public:
  explicit KrausMap(std::vector<Matrix> ops, double drop_tol = 1e-14);

  const std::vector<Matrix>& ops() const { return ops_; }
  Eigen::Index dim() const { return ops_.front().rows(); }
  size_t size() const { return ops_.size(); }

 private:
  std::vector<Matrix> ops_;
};

// Half Hilbert-Schmidt pairing on general (not necessarily Hermitian)
// operators: Tr(A^dagger B) / 2.
Complex gl_inner(const Matrix& a, const Matrix& b);

// Column-major vectorization and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

// The positive operator sum_i |vec(A_i)><vec(A_i)| on H (x) H.  Its rank is
// the minimal number of operators realizing the map.
struct ChoiOperator {
  Matrix matrix;       // n^2 x n^2, Hermitian PSD
  Eigen::Index dim;    // n
};

ChoiOperator choi_operator(const KrausMap& k);

// Unnormalized action rho -> sum_i A_i rho A_i^dagger.  Preserves
// hermiticity and positivity; trace is generally not preserved.
HermitianOperator apply(const KrausMap& k, const HermitianOperator& rho);

// Composition: all pairwise products A_i B_j, so that
// apply(compose(a,b), rho) = apply(a, apply(b, rho)).
KrausMap compose(const KrausMap& a, const KrausMap& b);

// Minimal-length representative of the same map: eigenvectors of the Choi
// operator above the relative cutoff, scaled by sqrt(eigenvalue) and
// reshaped.  The resulting operators are pairwise orthogonal for gl_inner.
// Each operator's phase is fixed so its largest-magnitude entry is real
// positive, making the output deterministic.
KrausMap canonical_form(const KrausMap& k, double cutoff_rel = tol::pinv_rel);

// When the canonical form consists of exactly one invertible operator the
// map is conjugation by a group element; returns that operator, otherwise
// nullopt.
std::optional<Matrix> as_group_element(const KrausMap& k,
                                       double cutoff_rel = tol::inv_rel);

// A map is nondegenerate when sum_i A_i^dagger A_i is invertible, i.e. no
// state is annihilated.  Tested through the smallest eigenvalue.
bool is_nondegenerate(const KrausMap& k);

// Trace-normalized action on density states.  Requires a nondegenerate map;
// the output trace of a valid density input is then strictly positive.
DensityState normalized_apply(const KrausMap& k, const DensityState& rho);

// Normalized action of a single invertible operator: A rho A^dag / trace.
// Preserves the rank of rho.  Throws when A is singular.
DensityState gl_apply(const Matrix& a, const DensityState& rho);

// Weight lambda~ such that
//   normalized_apply(k, lambda rho + (1-lambda) rho')
//     = lambda~ K~(rho) + (1-lambda~) K~(rho'),
// i.e. lambda~ = lambda t / (lambda t + (1-lambda) t') with t, t' the traces
// of the unnormalized images of rho, rho'.
double convex_image_weight(const KrausMap& k, const DensityState& rho,
                           const DensityState& rho_prime, double lambda);

}  // namespace qgeom
