#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qgeom/entanglement.hpp"
#include "qgeom/random.hpp"
#include "qgeom/strata.hpp"

using namespace qgeom;

namespace {

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

Vector ghz_state() {
  Vector v = Vector::Zero(8);
  v(0) = Complex(1.0 / std::sqrt(2.0), 0);
  v(7) = Complex(1.0 / std::sqrt(2.0), 0);
  return v;
}

Vector w_state() {
  Vector v = Vector::Zero(8);
  const double a = 1.0 / std::sqrt(3.0);
  v(1) = a;  // |001>
  v(2) = a;  // |010>
  v(4) = a;  // |100>
  return v;
}

// Strides with the first factor on the slowest index.
std::vector<Eigen::Index> strides_of(const std::vector<Eigen::Index>& dims) {
  std::vector<Eigen::Index> strides(dims.size(), 1);
  for (int j = static_cast<int>(dims.size()) - 2; j >= 0; --j) {
    strides[static_cast<std::size_t>(j)] =
        strides[static_cast<std::size_t>(j) + 1] *
        dims[static_cast<std::size_t>(j) + 1];
  }
  return strides;
}

// Purity of the reduced state on the factors NOT in `traced_mask`, computed
// with explicit index loops, independent of the library's tensor plumbing.
double brute_reduced_purity(const Vector& psi,
                            const std::vector<Eigen::Index>& dims,
                            uint32_t traced_mask) {
  const auto strides = strides_of(dims);
  std::vector<std::size_t> kept, traced;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (traced_mask & (1u << j)) {
      traced.push_back(j);
    } else {
      kept.push_back(j);
    }
  }
  Eigen::Index kept_total = 1, traced_total = 1;
  for (const auto j : kept) kept_total *= dims[j];
  for (const auto j : traced) traced_total *= dims[j];

  const auto flat = [&](Eigen::Index kept_idx, Eigen::Index traced_idx) {
    Eigen::Index out = 0;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      out += (kept_idx % dims[*it]) * strides[*it];
      kept_idx /= dims[*it];
    }
    for (auto it = traced.rbegin(); it != traced.rend(); ++it) {
      out += (traced_idx % dims[*it]) * strides[*it];
      traced_idx /= dims[*it];
    }
    return out;
  };

  double purity = 0.0;
  for (Eigen::Index a = 0; a < kept_total; ++a) {
    for (Eigen::Index b = 0; b < kept_total; ++b) {
      Complex entry(0, 0);
      for (Eigen::Index c = 0; c < traced_total; ++c) {
        entry += psi(flat(a, c)) * std::conj(psi(flat(b, c)));
      }
      purity += std::norm(entry);
    }
  }
  return purity;
}

// Squared concurrence through the swap expansion and brute-force purities.
double brute_squared_concurrence(const Vector& psi,
                                 const std::vector<Eigen::Index>& dims,
                                 const SignPattern& signs) {
  int minus = 0;
  for (const auto s : signs) {
    if (s == Sign::minus) ++minus;
  }
  const double scale =
      std::pow(2.0, minus - static_cast<int>(signs.size()));
  double total = 0.0;
  for (uint32_t mask = 0; mask < (1u << dims.size()); ++mask) {
    double sign_product = 1.0;
    for (std::size_t j = 0; j < signs.size(); ++j) {
      if ((mask & (1u << j)) && signs[j] == Sign::minus) {
        sign_product = -sign_product;
      }
    }
    total += scale * sign_product * brute_reduced_purity(psi, dims, mask);
  }
  return total;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

// Closed-form two-qubit concurrence through the spin-flipped spectrum.
double wootters_concurrence(const Matrix& rho) {
  Matrix yy(4, 4);
  const Matrix sy = pauli_y();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      yy.block(2 * i, 2 * j, 2, 2) = sy(i, j) * sy;
    }
  }
  const Matrix product = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Matrix> solver(product);
  std::vector<double> lambdas;
  for (Eigen::Index i = 0; i < 4; ++i) {
    lambdas.push_back(std::sqrt(std::max(0.0, solver.eigenvalues()(i).real())));
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());
  return std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
}

DensityState werner_state(double p) {
  const Vector bell = bell_state();
  const Matrix m = p * (bell * bell.adjoint()) +
                   (1.0 - p) * 0.25 * Matrix::Identity(4, 4);
  return DensityState(m);
}

SignPattern signs_from(const std::string& text) {
  SignPattern out;
  for (const char c : text) {
    if (c == '+') out.push_back(Sign::plus);
    if (c == '-') out.push_back(Sign::minus);
  }
  return out;
}

}  // namespace

TEST_CASE("form ranks count the product of projector ranks") {
  const ConcurrenceForm qubits = bipartite_form(TensorFactorization({2, 2}));
  CHECK(qubits.chi.size() == 1);  // n1(n1-1)n2(n2-1)/4
  CHECK_FALSE(qubits.degenerate);

  const ConcurrenceForm mixed = bipartite_form(TensorFactorization({2, 3}));
  CHECK(mixed.chi.size() == 3);

  const ConcurrenceForm three =
      sign_pattern_form(TensorFactorization({2, 2, 2}), signs_from("+--"));
  CHECK(three.chi.size() == 3);  // symmetric qubit pair has rank 3

  CHECK_THROWS_AS(bipartite_form(TensorFactorization({2, 2, 2})),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      sign_pattern_form(TensorFactorization({2, 2}), signs_from("+-+")),
      std::invalid_argument);
}

TEST_CASE("reference values on maximally entangled states") {
  const TensorFactorization qubits({2, 2});
  CHECK(std::abs(pure_concurrence(bell_state(), bipartite_form(qubits)) -
                 1.0) < 1e-12);

  // A product state has vanishing concurrence.
  Rng rng(71);
  const Vector product =
      kron_vec(random_pure_state(rng, 2), random_pure_state(rng, 2));
  CHECK(pure_concurrence(product, bipartite_form(qubits)) < 1e-7);

  const TensorFactorization three({2, 2, 2});
  const double ghz =
      pure_concurrence(ghz_state(), sign_pattern_form(three, signs_from("+--")));
  CHECK(std::abs(ghz - 1.0 / std::sqrt(2.0)) < 1e-10);

  const double w =
      pure_concurrence(w_state(), sign_pattern_form(three, signs_from("--+")));
  CHECK(std::abs(w - 2.0 / 3.0) < 1e-10);
}

TEST_CASE("bilinear values agree with brute-force purity sums") {
  Rng rng(72);
  const std::vector<std::vector<Eigen::Index>> shapes = {
      {2, 2}, {2, 3}, {3, 2}, {2, 2, 2}, {2, 2, 3}};
  const std::vector<std::string> patterns = {"--", "--", "--", "--+", "-+-"};
  for (std::size_t c = 0; c < shapes.size(); ++c) {
    const TensorFactorization fact(shapes[c]);
    const SignPattern signs = signs_from(patterns[c]);
    const ConcurrenceForm form = sign_pattern_form(fact, signs);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector psi = random_pure_state(rng, fact.total());
      const double direct = pure_concurrence(psi, form);
      const double brute =
          std::sqrt(std::max(0.0, brute_squared_concurrence(
                                        psi, shapes[c], signs)));
      CHECK(std::abs(direct - brute) < 1e-9);
    }
  }
}

TEST_CASE("odd sign patterns vanish identically") {
  Rng rng(73);
  const TensorFactorization three({2, 2, 2});
  for (const std::string& pattern : {"-++", "+-+", "++-", "---"}) {
    const ConcurrenceForm form =
        sign_pattern_form(three, signs_from(pattern));
    CHECK(form.degenerate);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector psi = random_pure_state(rng, 8);
      CHECK(pure_concurrence(psi, form) < 1e-10);
    }
  }

  const TensorFactorization two({2, 3});
  for (const std::string& pattern : {"-+", "+-"}) {
    const ConcurrenceForm form = sign_pattern_form(two, signs_from(pattern));
    CHECK(form.degenerate);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector psi = random_pure_state(rng, 6);
      CHECK(pure_concurrence(psi, form) < 1e-10);
    }
  }
}

TEST_CASE("swap expansion coefficients for the two-factor antisymmetric form") {
  const TensorFactorization fact({2, 2});
  ProjectorMixture mix;
  mix.terms.emplace_back(signs_from("--"), 1.0);
  const auto alpha = swap_expansion(fact, mix);
  REQUIRE(alpha.size() == 4);
  CHECK(alpha.at(0b00) == doctest::Approx(1.0));
  CHECK(alpha.at(0b01) == doctest::Approx(-1.0));
  CHECK(alpha.at(0b10) == doctest::Approx(-1.0));
  CHECK(alpha.at(0b11) == doctest::Approx(1.0));
}

TEST_CASE("partial-trace form of the concurrence matches the bilinear form") {
  Rng rng(74);
  const std::vector<std::vector<Eigen::Index>> shapes = {
      {2, 2}, {2, 2, 2}, {2, 2, 2, 2}};
  for (const auto& dims : shapes) {
    const TensorFactorization fact(dims);

    // A mixture of all even sign patterns with random weights.
    std::vector<SignPattern> even;
    const std::size_t k = dims.size();
    for (uint32_t mask = 0; mask < (1u << k); ++mask) {
      int bits = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (mask & (1u << j)) ++bits;
      }
      if (bits > 0 && bits % 2 == 0) {
        SignPattern signs(k, Sign::plus);
        for (std::size_t j = 0; j < k; ++j) {
          if (mask & (1u << j)) signs[j] = Sign::minus;
        }
        even.push_back(signs);
      }
    }
    ProjectorMixture mix;
    double total = 0.0;
    std::vector<double> weights;
    for (std::size_t i = 0; i < even.size(); ++i) {
      const double w = 0.2 + rng.uniform();
      weights.push_back(w);
      total += w;
    }
    for (std::size_t i = 0; i < even.size(); ++i) {
      mix.terms.emplace_back(even[i], weights[i] / total);
    }

    const ConcurrenceForm form = mixture_form(fact, mix);
    const auto alpha = swap_expansion(fact, mix);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector psi = random_pure_state(rng, fact.total());
      const double bilinear = pure_concurrence(psi, form);
      const double traced = trace_form_concurrence(psi, fact, alpha);
      CHECK(std::abs(bilinear - traced) < 1e-9);
    }
  }
}

TEST_CASE("mixtures validate their weights and patterns") {
  const TensorFactorization fact({2, 2});
  ProjectorMixture bad_weight;
  bad_weight.terms.emplace_back(signs_from("--"), 0.7);
  CHECK_THROWS_AS(mixture_form(fact, bad_weight), std::invalid_argument);

  ProjectorMixture negative;
  negative.terms.emplace_back(signs_from("--"), 1.3);
  negative.terms.emplace_back(signs_from("++"), -0.3);
  CHECK_THROWS_AS(mixture_form(fact, negative), std::invalid_argument);

  ProjectorMixture odd;
  odd.terms.emplace_back(signs_from("-+"), 1.0);
  CHECK_THROWS_AS(mixture_form(fact, odd), std::invalid_argument);

  ProjectorMixture wrong_len;
  wrong_len.terms.emplace_back(signs_from("--+"), 1.0);
  CHECK_THROWS_AS(mixture_form(fact, wrong_len), std::invalid_argument);

  // A single admissible pattern as a mixture equals the plain sign form.
  ProjectorMixture single;
  single.terms.emplace_back(signs_from("--"), 1.0);
  const ConcurrenceForm via_mix = mixture_form(fact, single);
  const ConcurrenceForm direct = sign_pattern_form(fact, signs_from("--"));
  Rng rng(75);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector psi = random_pure_state(rng, 4);
    CHECK(std::abs(pure_concurrence(psi, via_mix) -
                   pure_concurrence(psi, direct)) < 1e-10);
  }
}

TEST_CASE("form tensors are symmetric and exact on pure states") {
  Rng rng(76);
  const TensorFactorization fact({2, 3});
  const ConcurrenceForm form = bipartite_form(fact);

  const DensityState rho = random_density(rng, 6, 3);
  const FormTensorStack stack = form_tensors(rho, form);
  CHECK(stack.symmetric);
  REQUIRE(stack.tensors.size() == form.chi.size());
  for (const auto& t : stack.tensors) {
    CHECK((t - t.transpose()).cwiseAbs().maxCoeff() < 1e-9);
  }

  // On a pure state the optimized bound recovers the pure value.
  const Vector psi = random_pure_state(rng, 6);
  const DensityState pure_rho = DensityState::pure(psi);
  const OptimizedBound bound = optimize_concurrence_lower_bound(
      pure_rho, form, ZRefine{5, 60});
  CHECK(std::abs(bound.value - pure_concurrence(psi, form)) < 1e-7);
}

TEST_CASE("two-qubit optimized bound reproduces the closed-form concurrence") {
  Rng rng(77);
  const TensorFactorization fact({2, 2});
  const ConcurrenceForm form = bipartite_form(fact);
  REQUIRE(form.chi.size() == 1);

  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index rank = 1 + trial % 4;
    const DensityState rho = random_density(rng, 4, rank);
    const double closed = wootters_concurrence(rho.matrix());

    const OptimizedBound single =
        optimize_concurrence_lower_bound(rho, form, ZSingle{0});
    CHECK(std::abs(single.value - closed) < 1e-6);

    const OptimizedBound refined =
        optimize_concurrence_lower_bound(rho, form, ZRefine{3, 30});
    CHECK(std::abs(refined.value - closed) < 1e-6);
  }
}

TEST_CASE("werner family traces the piecewise-linear concurrence profile") {
  const TensorFactorization fact({2, 2});
  const ConcurrenceForm form = bipartite_form(fact);
  for (int i = 0; i <= 10; ++i) {
    const double p = 0.1 * i;
    const DensityState rho = werner_state(p);
    const OptimizedBound bound =
        optimize_concurrence_lower_bound(rho, form, ZSingle{0});
    const double expected = std::max(0.0, (3.0 * p - 1.0) / 2.0);
    CHECK(std::abs(bound.value - expected) < 1e-6);
  }
}

TEST_CASE("lower bounds never exceed upper bounds") {
  Rng rng(78);
  const TensorFactorization fact({2, 3});
  const ConcurrenceForm form = bipartite_form(fact);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index rank = 1 + trial % 4;
    const DensityState rho = random_density(rng, 6, rank);
    const int r = rank_of(rho.op());

    const Vector z = random_unit_vector(rng, static_cast<Eigen::Index>(
                                                 form.chi.size()));
    const BoundResult lower = concurrence_lower_bound(rho, form, z);

    const Eigen::Index members = r + trial % (r + 1);
    const Matrix v = random_isometry(rng, members, r);
    const BoundResult upper = concurrence_upper_bound(rho, form, v);

    CHECK(lower.value <= upper.value + 1e-9);
  }
}

TEST_CASE("upper bound equals the weighted member values") {
  Rng rng(79);
  const TensorFactorization fact({2, 2});
  const ConcurrenceForm form = bipartite_form(fact);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index rank = 1 + trial % 3;
    const DensityState rho = random_density(rng, 4, rank);
    const int r = rank_of(rho.op());
    const Eigen::Index members = r + 2;
    const Matrix v = random_isometry(rng, members, r);

    // Assemble the decomposition members by hand from the spectral data.
    const Spectrum spec = spectrum_of(rho.op());
    std::vector<Vector> phi;
    for (int j = 0; j < r; ++j) {
      phi.push_back(std::sqrt(std::max(0.0, spec.values(j))) *
                    spec.vectors.col(j));
    }
    double direct = 0.0;
    for (Eigen::Index i = 0; i < members; ++i) {
      Vector member = Vector::Zero(4);
      for (int j = 0; j < r; ++j) {
        member += v(i, j) * phi[static_cast<std::size_t>(j)];
      }
      const double weight = member.squaredNorm();
      if (weight > 1e-14) {
        direct += weight * pure_concurrence(member / std::sqrt(weight), form);
      }
    }

    const BoundResult upper = concurrence_upper_bound(rho, form, v);
    CHECK(std::abs(upper.value - direct) < 1e-9);

    // The same identity ties the member values to the form tensors.
    const FormTensorStack stack = form_tensors(rho, form);
    for (Eigen::Index i = 0; i < members; ++i) {
      double sum = 0.0;
      for (const auto& t : stack.tensors) {
        const Complex entry =
            (v.row(i) * t * v.row(i).transpose())(0, 0);
        sum += std::norm(entry);
      }
      Vector member = Vector::Zero(4);
      for (int j = 0; j < r; ++j) {
        member += v(i, j) * phi[static_cast<std::size_t>(j)];
      }
      const double weight = member.squaredNorm();
      const double scaled =
          weight > 1e-14
              ? weight * pure_concurrence(member / std::sqrt(weight), form)
              : 0.0;
      CHECK(std::abs(std::sqrt(sum) - scaled) < 1e-9);
    }
  }
}

TEST_CASE("refinement never loses to the random search it starts from") {
  Rng rng(80);
  const TensorFactorization fact({2, 3});
  const ConcurrenceForm form = bipartite_form(fact);
  for (int trial = 0; trial < 15; ++trial) {
    const DensityState rho = random_density(rng, 6, 2 + trial % 3);
    const uint64_t seed = 100 + static_cast<uint64_t>(trial);
    const OptimizedBound sampled = optimize_concurrence_lower_bound(
        rho, form, ZRandom{8, seed});
    const OptimizedBound refined = optimize_concurrence_lower_bound(
        rho, form, ZRefine{seed, 40, 8});
    CHECK(refined.value >= sampled.value - 1e-12);

    // Determinism of both strategies for a fixed seed.
    const OptimizedBound sampled2 = optimize_concurrence_lower_bound(
        rho, form, ZRandom{8, seed});
    CHECK(sampled.value == sampled2.value);
  }
}

TEST_CASE("degenerate forms force zero bounds with the flag set") {
  Rng rng(81);
  const TensorFactorization fact({2, 2});
  const ConcurrenceForm odd = sign_pattern_form(fact, signs_from("-+"));
  REQUIRE(odd.degenerate);
  const DensityState rho = random_density(rng, 4, 3);

  const Vector z = random_unit_vector(
      rng, static_cast<Eigen::Index>(odd.chi.size()));
  const BoundResult lower = concurrence_lower_bound(rho, odd, z);
  CHECK(lower.value == 0.0);
  CHECK(lower.degenerate_form);

  const OptimizedBound best =
      optimize_concurrence_lower_bound(rho, odd, ZSingle{0});
  CHECK(best.value == 0.0);
  CHECK(best.degenerate_form);

  const int r = rank_of(rho.op());
  const BoundResult upper =
      concurrence_upper_bound(rho, odd, Matrix::Identity(r, r));
  CHECK(upper.value == 0.0);
  CHECK(upper.degenerate_form);
}

TEST_CASE("product with a pure spectator reduces to the two-factor value") {
  Rng rng(82);
  const TensorFactorization three({2, 2, 2});
  const TensorFactorization two({2, 2});
  const ConcurrenceForm pp_m = sign_pattern_form(three, signs_from("+--"));
  const ConcurrenceForm p_mp = sign_pattern_form(three, signs_from("-+-"));
  const ConcurrenceForm mm_p = sign_pattern_form(three, signs_from("--+"));
  const ConcurrenceForm bip = bipartite_form(two);

  for (int trial = 0; trial < 25; ++trial) {
    const Vector phi = random_pure_state(rng, 4);
    const Vector zeta = random_pure_state(rng, 2);
    const Vector psi = kron_vec(phi, zeta);

    CHECK(pure_concurrence(psi, pp_m) < 1e-10);
    CHECK(pure_concurrence(psi, p_mp) < 1e-10);
    CHECK(std::abs(pure_concurrence(psi, mm_p) -
                   pure_concurrence(phi, bip)) < 1e-9);
  }
}

TEST_CASE("bound evaluation validates the direction vector") {
  Rng rng(83);
  const TensorFactorization fact({2, 3});
  const ConcurrenceForm form = bipartite_form(fact);
  const DensityState rho = random_density(rng, 6, 2);

  Vector wrong_len = Vector::Ones(2);
  wrong_len /= wrong_len.norm();
  CHECK_THROWS_AS(concurrence_lower_bound(rho, form, wrong_len),
                  std::invalid_argument);

  Vector short_z = Vector::Zero(3);
  short_z(0) = 0.5;
  CHECK_THROWS_AS(concurrence_lower_bound(rho, form, short_z),
                  std::invalid_argument);

  const Matrix bad_v = 2.0 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(concurrence_upper_bound(rho, form, bad_v),
                  std::invalid_argument);
}
