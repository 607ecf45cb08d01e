#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qgeom/composite.hpp"
#include "qgeom/kraus.hpp"
#include "qgeom/random.hpp"
#include "qgeom/strata.hpp"

using namespace qgeom;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      out(i * b.size() + j) = a(i) * b(j);
    }
  }
  return out;
}

Vector bell_state() {
  Vector v = Vector::Zero(4);
  v(0) = Complex(1.0 / std::sqrt(2.0), 0);
  v(3) = Complex(1.0 / std::sqrt(2.0), 0);
  return v;
}

}  // namespace

TEST_CASE("factorization validates its dimensions") {
  const TensorFactorization fact({2, 3, 2});
  CHECK(fact.factors() == 3);
  CHECK(fact.total() == 12);
  CHECK_THROWS_AS(TensorFactorization({4}), std::invalid_argument);
  CHECK_THROWS_AS(TensorFactorization({2, 1}), std::invalid_argument);
}

TEST_CASE("kronecker product keeps the first factor on the slow index") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const Matrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  // Block (i,j) equals a(i,j) * b.
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(max_abs_diff(k.block(2 * i, 2 * j, 2, 2), a(i, j) * b) < 1e-15);
    }
  }
}

TEST_CASE("product embedding multiplies ranks") {
  Rng rng(51);
  const DensityState r1 = random_density(rng, 3, 2);
  const DensityState r2 = random_density(rng, 2, 1);
  const DensityState prod = segre(r1, r2);
  CHECK(prod.dim() == 6);
  CHECK(std::abs(prod.matrix().trace().real() - 1.0) < 1e-12);
  CHECK(rank_of(prod.op()) == 2);
  CHECK(max_abs_diff(prod.matrix(), kron(r1.matrix(), r2.matrix())) < 1e-15);
}

TEST_CASE("factor permutation is conjugation by the index relabeling") {
  Rng rng(52);
  const Matrix a = random_ginibre(rng, 2, 2);
  const Matrix b = random_ginibre(rng, 3, 3);
  const Matrix c = random_ginibre(rng, 2, 2);

  // Two factors: the swap exchanges the kron order.
  const Matrix swapped = permute_factors(kron(a, b), {2, 3}, {1, 0});
  CHECK(max_abs_diff(swapped, kron(b, a)) < 1e-13);

  // Three factors: sending slots (0,1,2) to (1,2,0) puts the last factor
  // first.
  const Matrix cycled =
      permute_factors(kron(kron(a, b), c), {2, 3, 2}, {1, 2, 0});
  CHECK(max_abs_diff(cycled, kron(kron(c, a), b)) < 1e-13);

  // Identity permutation is a no-op.
  const Matrix same = permute_factors(kron(a, b), {2, 3}, {0, 1});
  CHECK(max_abs_diff(same, kron(a, b)) < 1e-15);

  CHECK_THROWS_AS(permute_factors(kron(a, b), {2, 3}, {0, 0}),
                  std::invalid_argument);
}

TEST_CASE("partial trace on product states and the maximally entangled state") {
  Rng rng(53);
  const TensorFactorization fact({3, 2});
  const DensityState r1 = random_density(rng, 3, 3);
  const DensityState r2 = random_density(rng, 2, 2);
  const DensityState prod = segre(r1, r2);

  const HermitianOperator keep_first =
      partial_trace(prod.op(), fact, {1});
  CHECK(max_abs_diff(keep_first.matrix(), r1.matrix()) < 1e-12);
  const HermitianOperator keep_second =
      partial_trace(prod.op(), fact, {0});
  CHECK(max_abs_diff(keep_second.matrix(), r2.matrix()) < 1e-12);

  // Tracing nothing or everything.
  CHECK(max_abs_diff(partial_trace(prod.op(), fact, {}).matrix(),
                     prod.matrix()) < 1e-15);
  const HermitianOperator full = partial_trace(prod.op(), fact, {0, 1});
  REQUIRE(full.dim() == 1);
  CHECK(std::abs(full.matrix()(0, 0) - Complex(1, 0)) < 1e-12);

  // Both marginals of the maximally entangled two-qubit state are mixed.
  const TensorFactorization qubits({2, 2});
  const DensityState bell = DensityState::pure(bell_state());
  for (const Eigen::Index traced : {0, 1}) {
    const HermitianOperator reduced =
        partial_trace(bell.op(), qubits, {traced});
    CHECK(max_abs_diff(reduced.matrix(), 0.5 * Matrix::Identity(2, 2)) <
          1e-12);
  }
}

TEST_CASE("iterated partial traces agree with the joint trace") {
  Rng rng(54);
  const TensorFactorization fact({2, 2, 2});
  const DensityState rho = random_density(rng, 8, 8);

  const HermitianOperator joint = partial_trace(rho.op(), fact, {0, 2});

  const HermitianOperator last =
      partial_trace(rho.op(), fact, {2});  // factors (0, 1) remain
  const TensorFactorization rest({2, 2});
  const HermitianOperator iterated = partial_trace(last, rest, {0});
  CHECK(max_abs_diff(joint.matrix(), iterated.matrix()) < 1e-12);

  CHECK_THROWS_AS(partial_trace(rho.op(), fact, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(rho.op(), fact, {3}), std::invalid_argument);
}

TEST_CASE("schmidt data of reference states") {
  const TensorFactorization fact({2, 2});

  SUBCASE("maximally entangled") {
    const SchmidtDecomposition dec = schmidt_decompose(bell_state(), fact);
    REQUIRE(dec.coefficients.size() == 2);
    CHECK(std::abs(dec.coefficients(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(dec.coefficients(1) - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(schmidt_number(bell_state(), fact) == 2);
  }

  SUBCASE("product") {
    Rng rng(55);
    const Vector psi =
        kron_vec(random_pure_state(rng, 2), random_pure_state(rng, 2));
    const SchmidtDecomposition dec = schmidt_decompose(psi, fact);
    REQUIRE(dec.coefficients.size() == 1);
    CHECK(std::abs(dec.coefficients(0) - 1.0) < 1e-12);
    CHECK(schmidt_number(psi, fact) == 1);
  }
}

TEST_CASE("schmidt frames rebuild the vector with descending coefficients") {
  Rng rng(56);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n1 = 2 + trial % 3;
    const Eigen::Index n2 = 2 + (trial / 3) % 3;
    const TensorFactorization fact({n1, n2});
    const Vector psi = random_pure_state(rng, n1 * n2);
    const SchmidtDecomposition dec = schmidt_decompose(psi, fact);

    double sq = 0.0;
    for (Eigen::Index i = 0; i < dec.coefficients.size(); ++i) {
      if (i > 0) CHECK(dec.coefficients(i) <= dec.coefficients(i - 1) + 1e-14);
      CHECK(dec.coefficients(i) > 0.0);
      sq += dec.coefficients(i) * dec.coefficients(i);
    }
    CHECK(std::abs(sq - 1.0) < 1e-10);

    CHECK(max_abs_diff(dec.left_frame.adjoint() * dec.left_frame,
                       Matrix::Identity(dec.coefficients.size(),
                                        dec.coefficients.size())) < 1e-10);
    CHECK(max_abs_diff(dec.right_frame.adjoint() * dec.right_frame,
                       Matrix::Identity(dec.coefficients.size(),
                                        dec.coefficients.size())) < 1e-10);

    Vector rebuilt = Vector::Zero(n1 * n2);
    for (Eigen::Index k = 0; k < dec.coefficients.size(); ++k) {
      rebuilt += dec.coefficients(k) *
                 kron_vec(dec.left_frame.col(k), dec.right_frame.col(k));
    }
    CHECK((rebuilt - psi).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("schmidt coefficients are unitary-invariant, the number GL-invariant") {
  Rng rng(57);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n1 = 2 + trial % 2;
    const Eigen::Index n2 = 2 + trial % 3;
    const TensorFactorization fact({n1, n2});
    const Vector psi = random_pure_state(rng, n1 * n2);

    const Matrix u = random_unitary(rng, n1);
    const Matrix v = random_unitary(rng, n2);
    const Vector rotated = kron(u, v) * psi;
    const SchmidtDecomposition before = schmidt_decompose(psi, fact);
    const SchmidtDecomposition after = schmidt_decompose(rotated, fact);
    REQUIRE(before.coefficients.size() == after.coefficients.size());
    for (Eigen::Index i = 0; i < before.coefficients.size(); ++i) {
      CHECK(std::abs(before.coefficients(i) - after.coefficients(i)) < 1e-9);
    }

    const Matrix a = random_ginibre(rng, n1, n1);
    const Matrix b = random_ginibre(rng, n2, n2);
    Vector moved = kron(a, b) * psi;
    moved /= moved.norm();
    CHECK(schmidt_number(moved, fact) == schmidt_number(psi, fact));
  }
}

TEST_CASE("normalized local action matches the single-operator group action") {
  Rng rng(58);
  const TensorFactorization fact({2, 3});
  const DensityState rho = random_density(rng, 6, 4);
  const Matrix a1 = random_ginibre(rng, 2, 2);
  const Matrix a2 = random_ginibre(rng, 3, 3);
  const DensityState lhs = product_action(a1, a2, rho, fact);
  const DensityState rhs = gl_apply(kron(a1, a2), rho);
  CHECK(max_abs_diff(lhs.matrix(), rhs.matrix()) < 1e-12);
}

TEST_CASE("roof search on a pure state returns the function value") {
  Rng rng(59);
  const Vector psi = random_pure_state(rng, 4);
  const DensityState rho = DensityState::pure(psi);
  const PureFunction f = [](const Vector& v) {
    return std::abs(v(0)) + 0.5;  // arbitrary continuous functional
  };
  for (const RoofStrategy& strategy :
       {RoofStrategy{RoofEigenOnly{}}, RoofStrategy{RoofRandom{16, 7}},
        RoofStrategy{RoofLocalRefine{20}}}) {
    const RoofEstimate est = convex_roof_estimate(f, rho, strategy);
    CHECK(std::abs(est.value - f(psi)) < 1e-9);
    REQUIRE(est.decomposition.states.size() == 1);
    CHECK(est.evaluations >= 1);
  }
}

TEST_CASE("roof decompositions are valid and linear functions have flat roofs") {
  Rng rng(60);
  const DensityState rho = random_density(rng, 4, 3);
  const HermitianOperator obs = random_hermitian(rng, 4);
  const double expectation = (obs.matrix() * rho.matrix()).trace().real();
  const PureFunction linear = [&](const Vector& v) {
    return (v.adjoint() * obs.matrix() * v)(0).real();
  };

  for (const RoofStrategy& strategy :
       {RoofStrategy{RoofEigenOnly{}}, RoofStrategy{RoofRandom{16, 3}},
        RoofStrategy{RoofLocalRefine{15}}}) {
    const RoofEstimate est = convex_roof_estimate(linear, rho, strategy);

    // Any valid decomposition averages a linear function to the expectation.
    CHECK(std::abs(est.value - expectation) < 1e-9);

    double total = 0.0;
    Matrix resum = Matrix::Zero(4, 4);
    for (std::size_t i = 0; i < est.decomposition.weights.size(); ++i) {
      const double w = est.decomposition.weights[i];
      const Vector& v = est.decomposition.states[i];
      CHECK(w > 0.0);
      CHECK(std::abs(v.norm() - 1.0) < 1e-10);
      total += w;
      resum += w * (v * v.adjoint());
    }
    CHECK(std::abs(total - 1.0) < 1e-10);
    CHECK(max_abs_diff(resum, rho.matrix()) < 1e-9);
  }
}

TEST_CASE("refined roofs never exceed the spectral decomposition value") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityState rho = random_density(rng, 4, 2 + trial % 3);
    const PureFunction f = [](const Vector& v) {
      // A strictly concave-in-rho surrogate with nontrivial roof.
      return std::abs((v.head(2).squaredNorm()) - 0.5);
    };
    const double eigen_value =
        convex_roof_estimate(f, rho, RoofEigenOnly{}).value;
    const double refined =
        convex_roof_estimate(f, rho, RoofLocalRefine{40}).value;
    CHECK(refined <= eigen_value + 1e-12);

    // Fixed seeds reproduce the random search exactly.
    const double r1 = convex_roof_estimate(f, rho, RoofRandom{24, 9}).value;
    const double r2 = convex_roof_estimate(f, rho, RoofRandom{24, 9}).value;
    CHECK(r1 == r2);
  }
}
