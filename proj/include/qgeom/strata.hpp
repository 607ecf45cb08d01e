#pragma once

#include "qgeom/types.hpp"

namespace qgeom {

// Inertia of a Hermitian operator: counts of eigenvalues above/below the
// relative cutoff rank_tol * max|eigenvalue|.
struct Signature {
  int plus = 0;
  int minus = 0;
  int rank() const { return plus + minus; }
};

int rank_of(const HermitianOperator& a, double rank_tol = tol::rank_rel);
Signature signature_of(const HermitianOperator& a,
                       double rank_tol = tol::rank_rel);

// Real dimension 2nk - k^2 of the GL(n) orbit of a rank-k Hermitian
// operator on an n-dimensional space; depends only on k, not on the
// signature split.
Eigen::Index orbit_dimension(Eigen::Index n, Eigen::Index k);

// Tangency of a direction B to the fixed-rank stratum at xi: B is tangent
// iff the compression of B to the kernel of xi vanishes.  Returns the
// max-abs entry of that compressed block alongside the verdict.
struct TangentCheck {
  bool tangent;
  double kernel_block_norm;
};

TangentCheck tangent_membership(const HermitianOperator& xi,
                                const HermitianOperator& b,
                                double tol = tol::num,
                                double rank_tol = tol::rank_rel);

// ---------------------------------------------------------------------------
// Rank-k charts.
//
// A rank-k Hermitian matrix whose principal submatrix on the index set J
// (|J| = k) is invertible is determined by its J-rows: every other entry
// follows from  a_ij = sum_{r,s in J} a_ir a^{rs} conj(a_js)  with (a^{rs})
// the inverse of the J-block.  The chart stores the diagonal of the J-block
// and the upper-triangular entries a_rs (r < s) of every pair touching J,
// in row-major order.
// ---------------------------------------------------------------------------

class ChartIndex {
 public:
  // Zero-based, strictly increasing indices into {0..n-1}.
  ChartIndex(Eigen::Index n, std::vector<Eigen::Index> indices);

  Eigen::Index n() const { return n_; }
  Eigen::Index k() const { return static_cast<Eigen::Index>(indices_.size()); }
  const std::vector<Eigen::Index>& indices() const { return indices_; }
  bool contains(Eigen::Index i) const;

  // Ordered list of index pairs (r,s), r < s, with r or s in J.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> offdiag_pairs() const;

 private:
  Eigen::Index n_;
  std::vector<Eigen::Index> indices_;
};

struct ChartCoordinates {
  std::vector<double> diag;       // a_ii for i in J, in J order
  std::vector<Complex> offdiag;   // a_rs over offdiag_pairs()
};

// Extracts chart coordinates.  Requires rank(xi) = |J| and an invertible
// J-block; throws std::invalid_argument otherwise.
ChartCoordinates chart_forward(const HermitianOperator& xi,
                               const ChartIndex& j,
                               double rank_tol = tol::rank_rel);

// Rebuilds the full rank-k matrix from chart coordinates.  Throws when the
// encoded J-block is singular.
HermitianOperator chart_reconstruct(const ChartCoordinates& coords,
                                    const ChartIndex& j,
                                    double inv_tol = tol::inv_rel);

// A chart index that works at xi: the k rows chosen by full pivoting.
ChartIndex suggest_chart_index(const HermitianOperator& xi,
                               double rank_tol = tol::rank_rel);

// ---------------------------------------------------------------------------
// Faces of the density body.
//
// The face through rho is the density body of the support of rho: an
// orthonormal basis S of the range plus the compression S^dag rho S, which
// is again a (full-rank) density state on the support.
// ---------------------------------------------------------------------------

struct FaceDescription {
  Matrix support_basis;       // n x k, orthonormal columns spanning range(rho)
  DensityState reduced_state; // k x k compression of rho
};

FaceDescription face_of(const DensityState& rho, double rank_tol = tol::rank_rel);

// Whether sigma lies in the face of rho: P sigma P = sigma for the support
// projector P of rho, within tol.
bool in_face_of(const FaceDescription& face, const DensityState& sigma,
                double tol = tol::num);

// A density state is extreme iff it is a pure state (rank one).
bool is_extreme(const DensityState& rho, double rank_tol = tol::rank_rel);

// The point (I - P)/(n-1) where the boundary sphere through the face of the
// pure state P touches: it lies at Frobenius distance 1/sqrt(n(n-1)) from
// the maximally mixed state, on the ray opposite to P.
DensityState tangency_point(const DensityState& pure_state,
                            double rank_tol = tol::rank_rel);

// ---------------------------------------------------------------------------
// Rank behaviour along a curve of states, via central finite differences.
// ---------------------------------------------------------------------------

struct CurveSamplePoint {
  double t;
  int rank;
  bool tangent;              // velocity tangent to the rank stratum here
  double kernel_block_norm;  // residual of the tangency test
};

struct CurveTangencyReport {
  std::vector<CurveSamplePoint> points;  // interior samples only
  bool all_tangent;
};

// Samples must be at least three (t_i, rho_i) pairs on a uniform grid.
CurveTangencyReport curve_stratum_tangency(
    const std::vector<std::pair<double, HermitianOperator>>& samples,
    double tol = tol::num, double rank_tol = tol::rank_rel);

}  // namespace qgeom
