#pragma once

#include "qgeom/composite.hpp"
#include "qgeom/types.hpp"

#include <map>
#include <variant>

namespace qgeom {

// ---------------------------------------------------------------------------
// Concurrence forms.
//
// A concurrence form is a positive operator A on the doubled space
// H (x) H, H = (x)_j H_j, assembled from symmetric/antisymmetric projectors
// P_+ / P_- acting factor-wise on H_j (x) H_j: for a sign pattern s,
//
//   A_s = 2^{#minus(s)} (x)_j P_{s_j},
//
// reordered from the factor-interleaved layout to the doubled layout by an
// explicit index permutation.  The normalization makes each antisymmetric
// factor contribute a factor 2, so the two-factor (-,-) form equals
// 4 P_- (x) P_-, and a (-,-,+,...,+) form restricted to states with pure
// extra factors matches the plain two-factor concurrence.
//
// The pure concurrence is c(Psi) = sqrt(<Psi (x) Psi| A |Psi (x) Psi>).
// Patterns with an odd number of '-' give c = 0 identically (the image of
// the form is antisymmetric under the global copy swap while Psi (x) Psi is
// symmetric); such forms are constructible but flagged degenerate.
// ---------------------------------------------------------------------------

enum class Sign { plus, minus };
using SignPattern = std::vector<Sign>;

// Nonnegative mixture of admissible sign patterns (even, nonzero number of
// '-' entries), with weights summing to 1.
struct ProjectorMixture {
  std::vector<std::pair<SignPattern, double>> terms;
};

struct ConcurrenceForm {
  TensorFactorization fact;
  std::vector<Vector> chi;  // A = sum_a |chi_a><chi_a|, each of length total^2
  bool degenerate;          // odd '-' count somewhere in the generating set
};

ConcurrenceForm sign_pattern_form(const TensorFactorization& fact,
                                  const SignPattern& signs);

// The distinguished two-factor antisymmetric form 4 P_- (x) P_-; its rank
// is n1 (n1 - 1) n2 (n2 - 1) / 4.
ConcurrenceForm bipartite_form(const TensorFactorization& fact);

ConcurrenceForm mixture_form(const TensorFactorization& fact,
                             const ProjectorMixture& mix);

// Expansion coefficients of a mixture form over copy-swap operators: for
// every subset S of factors (bitmask, bit j = factor j),
//   A = sum_S alpha_S Swap_S,   c(Psi)^2 = sum_S alpha_S Tr((Tr_S rho)^2).
// With the per-pattern normalization above, alpha_S =
// sum_s p_s 2^{#minus(s) - K} prod_{j in S} s_j.
std::map<uint32_t, double> swap_expansion(const TensorFactorization& fact,
                                          const ProjectorMixture& mix);

double pure_concurrence(const Vector& psi, const ConcurrenceForm& form);

// Same value through reduced-state purities: sqrt of
// sum_S alpha_S Tr((partial trace over S of |psi><psi|)^2).
double trace_form_concurrence(const Vector& psi,
                              const TensorFactorization& fact,
                              const std::map<uint32_t, double>& alpha);

// ---------------------------------------------------------------------------
// Mixed-state bounds.
//
// With phi_j the subnormalized eigenvectors of rho (rank r at rank_tol),
// the form tensors are the r x r matrices  T^a_{jk} = <chi_a | phi_j (x)
// phi_k>; they are symmetric for even-pattern forms.  For any unit vector z
// of length m = #chi, the singular values l_1 >= l_2 >= ... of
// T = sum_a z_a T^a  give the lower bound  max{l_1 - sum_{i>1} l_i, 0}  on
// the concurrence roof of rho.  For a decomposition matrix V (orthonormal
// columns) the exact mixture value  sum_i sqrt(sum_a |[V T^a V^T]_{ii}|^2)
// is an upper bound.
// ---------------------------------------------------------------------------

struct FormTensorStack {
  std::vector<Matrix> tensors;  // m matrices, each r x r
  bool symmetric;
};

FormTensorStack form_tensors(const DensityState& rho,
                             const ConcurrenceForm& form,
                             double rank_tol = tol::rank_rel);

struct BoundResult {
  double value;
  bool degenerate_form;  // value forced to zero by parity
};

BoundResult concurrence_lower_bound(const DensityState& rho,
                                    const ConcurrenceForm& form,
                                    const Vector& z,
                                    double rank_tol = tol::rank_rel);

struct ZSingle { int index = 0; };
struct ZRandom { int count = 64; uint64_t seed = 0; };
struct ZRefine {
  uint64_t seed = 0;
  int iters = 50;
  int init_samples = 8;  // refinement starts from the best of these
};
using ZStrategy = std::variant<ZSingle, ZRandom, ZRefine>;

struct OptimizedBound {
  double value;
  Vector z;            // maximizing unit vector found
  long evaluations;
  bool degenerate_form;
};

OptimizedBound optimize_concurrence_lower_bound(const DensityState& rho,
                                                const ConcurrenceForm& form,
                                                const ZStrategy& strategy,
                                                double rank_tol = tol::rank_rel);

BoundResult concurrence_upper_bound(const DensityState& rho,
                                    const ConcurrenceForm& form,
                                    const Matrix& v,
                                    double rank_tol = tol::rank_rel);

}  // namespace qgeom
