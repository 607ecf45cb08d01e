#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace qgeom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Default tolerances used across the library.  Structural validation
// (hermiticity, positivity, trace) is tighter than derived numerical
// comparisons, which accumulate error through eigensolvers.
namespace tol {
inline constexpr double herm = 1e-9;    // max-abs hermiticity residual
inline constexpr double psd = 1e-9;     // eigenvalue slack below zero
inline constexpr double trace = 1e-9;   // unit-trace residual
inline constexpr double num = 1e-8;     // generic numeric comparisons
inline constexpr double rank_rel = 1e-8;  // relative rank / kernel cutoff
inline constexpr double pinv_rel = 1e-10; // relative pseudo-inverse cutoff
inline constexpr double inv_rel = 1e-10;  // relative invertibility cutoff
inline constexpr double norm = 1e-9;    // unit-norm residual for state vectors
}  // namespace tol

// A Hermitian matrix, validated on construction and then symmetrized so
// downstream algebra never sees an asymmetry above roundoff.  Throws
// std::invalid_argument when the input is not square or its hermiticity
// residual exceeds the tolerance.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix m, double herm_tol = tol::herm);

  const Matrix& matrix() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

  static HermitianOperator zero(Eigen::Index n);
  static HermitianOperator identity(Eigen::Index n);

 private:
  Matrix mat_;
};

// Eigendecomposition of a Hermitian operator with eigenvalues sorted in
// decreasing order; columns of `vectors` follow the same order.
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

Spectrum spectrum_of(const HermitianOperator& a);

// A density matrix: Hermitian, positive semidefinite within `psd_tol`,
// unit trace within `trace_tol`.  Negative eigenvalue dust inside the
// tolerance is accepted as-is (not clipped).
class DensityState {
 public:
  explicit DensityState(const HermitianOperator& op,
                        double psd_tol = tol::psd,
                        double trace_tol = tol::trace);
  explicit DensityState(Matrix m,
                        double herm_tol = tol::herm,
                        double psd_tol = tol::psd,
                        double trace_tol = tol::trace);

  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  Eigen::Index dim() const { return op_.dim(); }

  static DensityState maximally_mixed(Eigen::Index n);
  static DensityState pure(const Vector& psi);  // projector onto psi/|psi|

 private:
  HermitianOperator op_;
};

// Half Hilbert-Schmidt pairing on Hermitian operators; real by symmetry.
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

// Frobenius norm of the difference A - A^dagger, used by validators.
double hermiticity_residual(const Matrix& m);

// Throws std::invalid_argument unless a and b share dimensions.
void require_same_dim(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace qgeom
