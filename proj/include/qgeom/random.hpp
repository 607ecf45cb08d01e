#pragma once

#include "qgeom/kraus.hpp"
#include "qgeom/types.hpp"

#include <cstdint>
#include <random>

namespace qgeom {

// Seeded random source with a platform-independent Gaussian: mt19937_64
// has standardized output, and Box-Muller on top keeps every draw
// reproducible across compilers (std::normal_distribution is not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  double uniform();              // [0, 1)
  double gaussian();             // standard normal
  Complex complex_gaussian();    // independent N(0,1) real and imaginary parts

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Matrix with independent complex Gaussian entries.
Matrix random_ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Normalized random state vector.
Vector random_pure_state(Rng& rng, Eigen::Index n);

// GUE-style random Hermitian operator, entries O(1).
HermitianOperator random_hermitian(Rng& rng, Eigen::Index n);

// Random rank-k Hermitian operator with the given signature.
HermitianOperator random_signature(Rng& rng, Eigen::Index n, int plus, int minus);

// Random density state of the given rank (G G^dag / trace for an n x rank
// Ginibre G).
DensityState random_density(Rng& rng, Eigen::Index n, Eigen::Index rank);

// Haar-like random unitary: QR of a Ginibre matrix with the phase fixed.
Matrix random_unitary(Rng& rng, Eigen::Index n);

// rows x cols matrix with orthonormal columns (rows >= cols).
Matrix random_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Random unit vector in C^m.
Vector random_unit_vector(Rng& rng, Eigen::Index m);

KrausMap random_kraus(Rng& rng, Eigen::Index n, int count);

}  // namespace qgeom
