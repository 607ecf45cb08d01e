#pragma once

#include "qgeom/types.hpp"

#include <functional>
#include <variant>

namespace qgeom {

// Factorization of a Hilbert space into tensor factors of dimension >= 2.
// The first factor owns the slowest-varying index of the composite space.
class TensorFactorization {
 public:
  explicit TensorFactorization(std::vector<Eigen::Index> dims);

  const std::vector<Eigen::Index>& dims() const { return dims_; }
  Eigen::Index factors() const { return static_cast<Eigen::Index>(dims_.size()); }
  Eigen::Index total() const { return total_; }

 private:
  std::vector<Eigen::Index> dims_;
  Eigen::Index total_;
};

// Kronecker product with the first argument on the slow index.
Matrix kron(const Matrix& a, const Matrix& b);

// Product embedding of two states: (rho1, rho2) -> rho1 (x) rho2.
// Multiplicative on rank.
DensityState segre(const DensityState& rho1, const DensityState& rho2);
HermitianOperator segre(const HermitianOperator& a, const HermitianOperator& b);

// Conjugation of an operator on a tensor-product space by a permutation of
// the factors: factor s of the input becomes factor perm[s] of the output.
Matrix permute_factors(const Matrix& op, const std::vector<Eigen::Index>& dims,
                       const std::vector<Eigen::Index>& perm);

// Partial trace over the factors listed in `traced` (zero-based, distinct).
// An empty list returns rho unchanged; tracing every factor leaves a 1x1
// matrix holding the trace.
HermitianOperator partial_trace(const HermitianOperator& rho,
                                const TensorFactorization& fact,
                                const std::vector<Eigen::Index>& traced);

// ---------------------------------------------------------------------------
// Schmidt decomposition of a bipartite pure state:
//   psi = sum_k lambda_k u_k (x) w_k,  lambda_1 >= lambda_2 >= ... > 0
// with orthonormal frames u_k, w_k.  Coefficients at or below
// coeff_tol * lambda_1 are discarded.
// ---------------------------------------------------------------------------

struct SchmidtDecomposition {
  RealVector coefficients;
  Matrix left_frame;   // n1 x m, orthonormal columns
  Matrix right_frame;  // n2 x m, orthonormal columns
};

SchmidtDecomposition schmidt_decompose(const Vector& psi,
                                       const TensorFactorization& fact,
                                       double coeff_tol = 1e-12);

// Number of Schmidt coefficients above rank_tol * lambda_1; invariant under
// invertible local transformations.
int schmidt_number(const Vector& psi, const TensorFactorization& fact,
                   double rank_tol = tol::rank_rel);

// Normalized action of an invertible local pair: (A1 (x) A2) rho (...)^dag,
// trace-renormalized.
DensityState product_action(const Matrix& a1, const Matrix& a2,
                            const DensityState& rho,
                            const TensorFactorization& fact);

// ---------------------------------------------------------------------------
// Convex roof estimation.
//
// For a function f on pure states, the roof value at rho is the infimum of
// sum_i t_i f(Psi_i) over decompositions rho = sum_i t_i |Psi_i><Psi_i|.
// Decompositions are generated from the subnormalized eigenvectors phi_j of
// rho through matrices V with orthonormal columns (psi_i = sum_j V_ij phi_j),
// which enumerates exactly the valid decompositions.  The search is an upper
// estimate of the infimum.
// ---------------------------------------------------------------------------

struct RoofEigenOnly {};  // the spectral decomposition itself

struct RoofRandom {       // best of `count` random decompositions
  int count = 64;
  uint64_t seed = 0;
  int size_cap = 0;       // decomposition length; 0 = min(r^2, default cap)
};

struct RoofLocalRefine {  // deterministic Givens-rotation descent
  int iters = 60;
  int size_cap = 0;
};

using RoofStrategy = std::variant<RoofEigenOnly, RoofRandom, RoofLocalRefine>;

struct RoofDecomposition {
  std::vector<double> weights;
  std::vector<Vector> states;  // normalized
};

struct RoofEstimate {
  double value;
  RoofDecomposition decomposition;
  long evaluations;  // number of f evaluations spent in the search
};

using PureFunction = std::function<double(const Vector&)>;

RoofEstimate convex_roof_estimate(const PureFunction& f,
                                  const DensityState& rho,
                                  const RoofStrategy& strategy,
                                  double rank_tol = tol::rank_rel);

}  // namespace qgeom
