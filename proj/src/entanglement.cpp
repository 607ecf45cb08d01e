#include "qgeom/entanglement.hpp"

#include "qgeom/hermitian.hpp"
#include "qgeom/random.hpp"

#include <cmath>

namespace qgeom {

namespace {

// Swap operator on V (x) V for dim(V) = n: |a b> -> |b a>.
Matrix swap_matrix(Eigen::Index n) {
  Matrix s = Matrix::Zero(n * n, n * n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      s(b * n + a, a * n + b) = 1.0;
    }
  }
  return s;
}

Matrix copy_projector(Eigen::Index n, Sign sign) {
  const Matrix id = Matrix::Identity(n * n, n * n);
  const Matrix sw = swap_matrix(n);
  return sign == Sign::plus ? Matrix(0.5 * (id + sw)) : Matrix(0.5 * (id - sw));
}

int minus_count(const SignPattern& signs) {
  int c = 0;
  for (Sign s : signs) {
    if (s == Sign::minus) {
      ++c;
    }
  }
  return c;
}

// Dense form matrix for one pattern: 2^{#minus} (x)_j P_{s_j}, moved from
// the factor-interleaved layout [1,1',2,2',...] to the doubled layout
// [1,...,K,1',...,K'].
Matrix pattern_matrix(const TensorFactorization& fact,
                      const SignPattern& signs) {
  if (static_cast<Eigen::Index>(signs.size()) != fact.factors()) {
    throw std::invalid_argument("sign pattern length differs from factor count");
  }
  const Eigen::Index k = fact.factors();
  Matrix g = copy_projector(fact.dims()[0], signs[0]);
  std::vector<Eigen::Index> interleaved{fact.dims()[0], fact.dims()[0]};
  for (Eigen::Index j = 1; j < k; ++j) {
    g = kron(g, copy_projector(fact.dims()[static_cast<size_t>(j)],
                               signs[static_cast<size_t>(j)]));
    interleaved.push_back(fact.dims()[static_cast<size_t>(j)]);
    interleaved.push_back(fact.dims()[static_cast<size_t>(j)]);
  }
  std::vector<Eigen::Index> perm(static_cast<size_t>(2 * k));
  for (Eigen::Index j = 0; j < k; ++j) {
    perm[static_cast<size_t>(2 * j)] = j;      // copy 0 of factor j
    perm[static_cast<size_t>(2 * j + 1)] = k + j;  // copy 1 of factor j
  }
  const double scale = std::pow(2.0, minus_count(signs));
  return scale * permute_factors(g, interleaved, perm);
}

// Spectral square-root decomposition A = sum_a |chi_a><chi_a|.
std::vector<Vector> extract_chi(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("concurrence form: eigensolver failed");
  }
  const RealVector& ev = solver.eigenvalues();
  const double cutoff = 1e-9 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Vector> chi;
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    if (ev(i) > cutoff) {
      chi.push_back(std::sqrt(ev(i)) * solver.eigenvectors().col(i));
    }
  }
  return chi;
}

void validate_mixture(const TensorFactorization& fact,
                      const ProjectorMixture& mix) {
  if (mix.terms.empty()) {
    throw std::invalid_argument("mixture_form: empty mixture");
  }
  double total = 0.0;
  for (const auto& [signs, weight] : mix.terms) {
    if (static_cast<Eigen::Index>(signs.size()) != fact.factors()) {
      throw std::invalid_argument(
          "mixture_form: pattern length differs from factor count");
    }
    if (weight < 0.0) {
      throw std::invalid_argument("mixture_form: negative weight");
    }
    const int minus = minus_count(signs);
    if (weight > 0.0 && (minus == 0 || minus % 2 != 0)) {
      throw std::invalid_argument(
          "mixture_form: weight on an excluded pattern (need an even, "
          "nonzero number of '-' entries)");
    }
    total += weight;
  }
  if (std::abs(total - 1.0) > tol::num) {
    throw std::invalid_argument("mixture_form: weights must sum to 1");
  }
}

}  // namespace

ConcurrenceForm sign_pattern_form(const TensorFactorization& fact,
                                  const SignPattern& signs) {
  const Matrix a = pattern_matrix(fact, signs);
  return ConcurrenceForm{fact, extract_chi(a), minus_count(signs) % 2 != 0};
}

ConcurrenceForm bipartite_form(const TensorFactorization& fact) {
  if (fact.factors() != 2) {
    throw std::invalid_argument("bipartite_form: need exactly 2 factors");
  }
  return sign_pattern_form(fact, SignPattern{Sign::minus, Sign::minus});
}

ConcurrenceForm mixture_form(const TensorFactorization& fact,
                             const ProjectorMixture& mix) {
  validate_mixture(fact, mix);
  const Eigen::Index nn = fact.total() * fact.total();
  Matrix a = Matrix::Zero(nn, nn);
  for (const auto& [signs, weight] : mix.terms) {
    if (weight > 0.0) {
      a += weight * pattern_matrix(fact, signs);
    }
  }
  return ConcurrenceForm{fact, extract_chi(a), false};
}

std::map<uint32_t, double> swap_expansion(const TensorFactorization& fact,
                                          const ProjectorMixture& mix) {
  validate_mixture(fact, mix);
  const Eigen::Index k = fact.factors();
  if (k > 31) {
    throw std::invalid_argument("swap_expansion: too many factors");
  }
  std::map<uint32_t, double> alpha;
  for (uint32_t mask = 0; mask < (1u << k); ++mask) {
    double sum = 0.0;
    for (const auto& [signs, weight] : mix.terms) {
      if (weight <= 0.0) {
        continue;
      }
      // Each pattern expands as 2^{#minus - K} sum_S prod_{j in S} s_j Swap_S.
      double term = weight * std::pow(2.0, minus_count(signs) - k);
      for (Eigen::Index j = 0; j < k; ++j) {
        if ((mask >> j) & 1u) {
          term *= signs[static_cast<size_t>(j)] == Sign::minus ? -1.0 : 1.0;
        }
      }
      sum += term;
    }
    alpha[mask] = sum;
  }
  return alpha;
}

namespace {

Vector doubled_vector(const Vector& psi) {
  const Eigen::Index n = psi.size();
  Vector w(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w.segment(i * n, n) = psi(i) * psi;
  }
  return w;
}

void require_normalized(const Vector& psi) {
  if (std::abs(psi.norm() - 1.0) > tol::norm) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

}  // namespace

double pure_concurrence(const Vector& psi, const ConcurrenceForm& form) {
  if (psi.size() != form.fact.total()) {
    throw std::invalid_argument("pure_concurrence: dimension mismatch");
  }
  require_normalized(psi);
  const Vector w = doubled_vector(psi);
  double val = 0.0;
  for (const Vector& chi : form.chi) {
    val += std::norm(chi.dot(w));  // chi.dot(w) = <chi, w>
  }
  return std::sqrt(std::max(val, 0.0));
}

double trace_form_concurrence(const Vector& psi,
                              const TensorFactorization& fact,
                              const std::map<uint32_t, double>& alpha) {
  if (psi.size() != fact.total()) {
    throw std::invalid_argument("trace_form_concurrence: dimension mismatch");
  }
  require_normalized(psi);
  const HermitianOperator rho = momentum_map(psi);
  double total = 0.0;
  for (const auto& [mask, coeff] : alpha) {
    if (coeff == 0.0) {
      continue;
    }
    std::vector<Eigen::Index> traced;
    for (Eigen::Index j = 0; j < fact.factors(); ++j) {
      if ((mask >> j) & 1u) {
        traced.push_back(j);
      }
    }
    const HermitianOperator reduced = partial_trace(rho, fact, traced);
    total += coeff * (reduced.matrix() * reduced.matrix()).trace().real();
  }
  return std::sqrt(std::max(total, 0.0));
}

FormTensorStack form_tensors(const DensityState& rho,
                             const ConcurrenceForm& form, double rank_tol) {
  if (rho.dim() != form.fact.total()) {
    throw std::invalid_argument("form_tensors: dimension mismatch");
  }
  const Spectrum s = spectrum_of(rho.op());
  const double cutoff = rank_tol * s.values.cwiseAbs().maxCoeff();
  std::vector<Vector> phi;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) > cutoff) {
      phi.push_back(std::sqrt(s.values(i)) * s.vectors.col(i));
    }
  }
  const Eigen::Index r = static_cast<Eigen::Index>(phi.size());
  const Eigen::Index n = rho.dim();
  FormTensorStack stack;
  stack.symmetric = !form.degenerate;
  for (const Vector& chi : form.chi) {
    Matrix t(r, r);
    for (Eigen::Index j = 0; j < r; ++j) {
      for (Eigen::Index k = 0; k < r; ++k) {
        // <chi, phi_j (x) phi_k> without materializing the product vector.
        Complex sum = 0.0;
        for (Eigen::Index a = 0; a < n; ++a) {
          sum += chi.segment(a * n, n).dot(phi[static_cast<size_t>(k)]) *
                 phi[static_cast<size_t>(j)](a);
        }
        t(j, k) = sum;
      }
    }
    stack.tensors.push_back(std::move(t));
  }
  return stack;
}

namespace {

double bound_from_tensors(const FormTensorStack& stack, const Vector& z) {
  const Eigen::Index m = static_cast<Eigen::Index>(stack.tensors.size());
  if (z.size() != m) {
    throw std::invalid_argument("lower bound: z length differs from form rank");
  }
  if (std::abs(z.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("lower bound: z must be a unit vector");
  }
  const Eigen::Index r = stack.tensors.front().rows();
  Matrix t = Matrix::Zero(r, r);
  for (Eigen::Index a = 0; a < m; ++a) {
    t += z(a) * stack.tensors[static_cast<size_t>(a)];
  }
  Eigen::JacobiSVD<Matrix> svd(t);
  const RealVector& sv = svd.singularValues();
  const double value = 2.0 * sv(0) - sv.sum();
  return std::max(value, 0.0);
}

}  // namespace

BoundResult concurrence_lower_bound(const DensityState& rho,
                                    const ConcurrenceForm& form,
                                    const Vector& z, double rank_tol) {
  const FormTensorStack stack = form_tensors(rho, form, rank_tol);
  const double value = bound_from_tensors(stack, z);
  return BoundResult{form.degenerate ? 0.0 : value, form.degenerate};
}

OptimizedBound optimize_concurrence_lower_bound(const DensityState& rho,
                                                const ConcurrenceForm& form,
                                                const ZStrategy& strategy,
                                                double rank_tol) {
  const FormTensorStack stack = form_tensors(rho, form, rank_tol);
  const Eigen::Index m = static_cast<Eigen::Index>(stack.tensors.size());
  OptimizedBound out;
  out.evaluations = 0;
  out.degenerate_form = form.degenerate;

  if (const auto* single = std::get_if<ZSingle>(&strategy)) {
    if (single->index < 0 || single->index >= m) {
      throw std::invalid_argument("optimize lower bound: index out of range");
    }
    out.z = Vector::Zero(m);
    out.z(single->index) = 1.0;
    out.value = bound_from_tensors(stack, out.z);
    out.evaluations = 1;
  } else {
    int samples = 0;
    uint64_t seed = 0;
    int iters = 0;
    if (const auto* rnd = std::get_if<ZRandom>(&strategy)) {
      samples = rnd->count;
      seed = rnd->seed;
    } else {
      const auto& refine = std::get<ZRefine>(strategy);
      samples = refine.init_samples;
      seed = refine.seed;
      iters = refine.iters;
    }
    if (samples < 1) {
      throw std::invalid_argument("optimize lower bound: need >= 1 sample");
    }
    Rng rng(seed);
    out.value = -1.0;
    for (int i = 0; i < samples; ++i) {
      Vector z = random_unit_vector(rng, m);
      const double value = bound_from_tensors(stack, z);
      ++out.evaluations;
      if (value > out.value) {
        out.value = value;
        out.z = std::move(z);
      }
    }
    // Projected coordinate ascent on the unit sphere with a shrinking step.
    double step = 0.5;
    for (int sweep = 0; sweep < iters && step > 1e-8; ++sweep) {
      bool improved = false;
      for (Eigen::Index a = 0; a < m; ++a) {
        for (const Complex delta :
             {Complex(step, 0.0), Complex(-step, 0.0), Complex(0.0, step),
              Complex(0.0, -step)}) {
          Vector cand = out.z;
          cand(a) += delta;
          cand /= cand.norm();
          const double value = bound_from_tensors(stack, cand);
          ++out.evaluations;
          if (value > out.value + 1e-14) {
            out.value = value;
            out.z = std::move(cand);
            improved = true;
          }
        }
      }
      if (!improved) {
        step *= 0.5;
      }
    }
  }
  if (form.degenerate) {
    out.value = 0.0;
  }
  return out;
}

BoundResult concurrence_upper_bound(const DensityState& rho,
                                    const ConcurrenceForm& form,
                                    const Matrix& v, double rank_tol) {
  const FormTensorStack stack = form_tensors(rho, form, rank_tol);
  const Eigen::Index r = stack.tensors.front().rows();
  if (v.cols() != r) {
    throw std::invalid_argument(
        "upper bound: V column count differs from the state rank");
  }
  if (v.rows() < r) {
    throw std::invalid_argument("upper bound: V has fewer rows than columns");
  }
  const double ortho =
      (v.adjoint() * v - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
  if (ortho > 1e-9) {
    throw std::invalid_argument("upper bound: V columns are not orthonormal");
  }
  if (form.degenerate) {
    return BoundResult{0.0, true};
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    double sq = 0.0;
    for (const Matrix& t : stack.tensors) {
      sq += std::norm((v.row(i) * t * v.row(i).transpose())(0));
    }
    total += std::sqrt(sq);
  }
  return BoundResult{total, false};
}

}  // namespace qgeom
