#include "qgeom/composite.hpp"

#include "qgeom/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgeom {

TensorFactorization::TensorFactorization(std::vector<Eigen::Index> dims)
    : dims_(std::move(dims)) {
  if (dims_.size() < 2) {
    throw std::invalid_argument("TensorFactorization: need >= 2 factors");
  }
  total_ = 1;
  for (Eigen::Index d : dims_) {
    if (d < 2) {
      throw std::invalid_argument(
          "TensorFactorization: factor dimensions must be >= 2");
    }
    total_ *= d;
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator segre(const HermitianOperator& a,
                        const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()));
}

DensityState segre(const DensityState& rho1, const DensityState& rho2) {
  return DensityState(kron(rho1.matrix(), rho2.matrix()));
}

namespace {

// Multi-index <-> flat index for a factor layout, first factor slowest.
class Indexer {
 public:
  explicit Indexer(const std::vector<Eigen::Index>& dims) : dims_(dims) {
    strides_.resize(dims.size());
    Eigen::Index s = 1;
    for (size_t i = dims.size(); i-- > 0;) {
      strides_[i] = s;
      s *= dims[i];
    }
    total_ = s;
  }

  Eigen::Index total() const { return total_; }

  Eigen::Index flatten(const std::vector<Eigen::Index>& multi) const {
    Eigen::Index f = 0;
    for (size_t i = 0; i < dims_.size(); ++i) {
      f += multi[i] * strides_[i];
    }
    return f;
  }

  void unflatten(Eigen::Index flat, std::vector<Eigen::Index>& multi) const {
    for (size_t i = 0; i < dims_.size(); ++i) {
      multi[i] = flat / strides_[i];
      flat %= strides_[i];
    }
  }

 private:
  std::vector<Eigen::Index> dims_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index total_ = 1;
};

}  // namespace

Matrix permute_factors(const Matrix& op, const std::vector<Eigen::Index>& dims,
                       const std::vector<Eigen::Index>& perm) {
  if (dims.size() != perm.size()) {
    throw std::invalid_argument("permute_factors: perm size mismatch");
  }
  std::vector<bool> seen(perm.size(), false);
  for (Eigen::Index p : perm) {
    if (p < 0 || static_cast<size_t>(p) >= perm.size() ||
        seen[static_cast<size_t>(p)]) {
      throw std::invalid_argument("permute_factors: not a permutation");
    }
    seen[static_cast<size_t>(p)] = true;
  }
  const Indexer src(dims);
  if (op.rows() != src.total() || op.cols() != src.total()) {
    throw std::invalid_argument("permute_factors: operator size mismatch");
  }
  std::vector<Eigen::Index> tgt_dims(dims.size());
  for (size_t s = 0; s < dims.size(); ++s) {
    tgt_dims[static_cast<size_t>(perm[s])] = dims[s];
  }
  const Indexer tgt(tgt_dims);

  // Precompute the index relabeling src_flat -> tgt_flat.
  std::vector<Eigen::Index> remap(static_cast<size_t>(src.total()));
  std::vector<Eigen::Index> multi(dims.size());
  std::vector<Eigen::Index> moved(dims.size());
  for (Eigen::Index f = 0; f < src.total(); ++f) {
    src.unflatten(f, multi);
    for (size_t s = 0; s < dims.size(); ++s) {
      moved[static_cast<size_t>(perm[s])] = multi[s];
    }
    remap[static_cast<size_t>(f)] = tgt.flatten(moved);
  }

  Matrix out(op.rows(), op.cols());
  for (Eigen::Index r = 0; r < op.rows(); ++r) {
    for (Eigen::Index c = 0; c < op.cols(); ++c) {
      out(remap[static_cast<size_t>(r)], remap[static_cast<size_t>(c)]) =
          op(r, c);
    }
  }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& rho,
                                const TensorFactorization& fact,
                                const std::vector<Eigen::Index>& traced) {
  if (rho.dim() != fact.total()) {
    throw std::invalid_argument("partial_trace: dimension mismatch");
  }
  std::vector<bool> is_traced(static_cast<size_t>(fact.factors()), false);
  for (Eigen::Index t : traced) {
    if (t < 0 || t >= fact.factors()) {
      throw std::invalid_argument("partial_trace: factor index out of range");
    }
    if (is_traced[static_cast<size_t>(t)]) {
      throw std::invalid_argument("partial_trace: repeated factor index");
    }
    is_traced[static_cast<size_t>(t)] = true;
  }
  if (traced.empty()) {
    return rho;
  }

  std::vector<Eigen::Index> kept_dims, traced_dims;
  for (Eigen::Index i = 0; i < fact.factors(); ++i) {
    (is_traced[static_cast<size_t>(i)] ? traced_dims : kept_dims)
        .push_back(fact.dims()[static_cast<size_t>(i)]);
  }
  if (kept_dims.empty()) {
    Matrix scalar(1, 1);
    scalar(0, 0) = rho.matrix().trace();
    return HermitianOperator(std::move(scalar));
  }

  const Indexer full(fact.dims());
  const Indexer kept(kept_dims);
  const Indexer gone(traced_dims);

  Matrix out = Matrix::Zero(kept.total(), kept.total());
  std::vector<Eigen::Index> row(static_cast<size_t>(fact.factors()));
  std::vector<Eigen::Index> col(static_cast<size_t>(fact.factors()));
  std::vector<Eigen::Index> krow(kept_dims.size()), kcol(kept_dims.size());
  std::vector<Eigen::Index> tmulti(traced_dims.size());
  for (Eigen::Index kr = 0; kr < kept.total(); ++kr) {
    kept.unflatten(kr, krow);
    for (Eigen::Index kc = 0; kc < kept.total(); ++kc) {
      kept.unflatten(kc, kcol);
      Complex sum = 0.0;
      for (Eigen::Index m = 0; m < gone.total(); ++m) {
        gone.unflatten(m, tmulti);
        size_t ik = 0, it = 0;
        for (Eigen::Index f = 0; f < fact.factors(); ++f) {
          if (is_traced[static_cast<size_t>(f)]) {
            row[static_cast<size_t>(f)] = tmulti[it];
            col[static_cast<size_t>(f)] = tmulti[it];
            ++it;
          } else {
            row[static_cast<size_t>(f)] = krow[ik];
            col[static_cast<size_t>(f)] = kcol[ik];
            ++ik;
          }
        }
        sum += rho.matrix()(full.flatten(row), full.flatten(col));
      }
      out(kr, kc) = sum;
    }
  }
  return HermitianOperator(std::move(out));
}

SchmidtDecomposition schmidt_decompose(const Vector& psi,
                                       const TensorFactorization& fact,
                                       double coeff_tol) {
  if (fact.factors() != 2) {
    throw std::invalid_argument("schmidt_decompose: need exactly 2 factors");
  }
  const Eigen::Index n1 = fact.dims()[0];
  const Eigen::Index n2 = fact.dims()[1];
  if (psi.size() != n1 * n2) {
    throw std::invalid_argument("schmidt_decompose: vector size mismatch");
  }
  // Coefficient matrix C_{ij} = psi_{(i,j)}, first factor slow: psi laid out
  // row-major over (i, j), so C is the row-major reshape.
  Matrix c(n1, n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n2; ++j) {
      c(i, j) = psi(i * n2 + j);
    }
  }
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? coeff_tol * sv(0) : 0.0;
  Eigen::Index m = 0;
  while (m < sv.size() && sv(m) > cutoff) {
    ++m;
  }
  SchmidtDecomposition out;
  out.coefficients = sv.head(m);
  out.left_frame = svd.matrixU().leftCols(m);
  // psi = sum_k s_k u_k (x) conj(v_k) from C = U S V^dagger.
  out.right_frame = svd.matrixV().leftCols(m).conjugate();
  return out;
}

int schmidt_number(const Vector& psi, const TensorFactorization& fact,
                   double rank_tol) {
  const SchmidtDecomposition d = schmidt_decompose(psi, fact, rank_tol);
  return static_cast<int>(d.coefficients.size());
}

DensityState product_action(const Matrix& a1, const Matrix& a2,
                            const DensityState& rho,
                            const TensorFactorization& fact) {
  if (fact.factors() != 2) {
    throw std::invalid_argument("product_action: need exactly 2 factors");
  }
  if (a1.rows() != fact.dims()[0] || a2.rows() != fact.dims()[1]) {
    throw std::invalid_argument("product_action: factor dimension mismatch");
  }
  Matrix big = kron(a1, a2);
  Eigen::JacobiSVD<Matrix> svd(big);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= tol::inv_rel * sv(0)) {
    throw std::invalid_argument("product_action: local operator is singular");
  }
  Matrix out = big * rho.matrix() * big.adjoint();
  return DensityState(Matrix(out / out.trace().real()));
}

// --------------------------------------------------------------------------
// Convex roof search
// --------------------------------------------------------------------------

namespace {

struct RoofBasis {
  std::vector<Vector> phi;  // subnormalized eigenvectors of rho
};

RoofBasis roof_basis(const DensityState& rho, double rank_tol) {
  const Spectrum s = spectrum_of(rho.op());
  const double cutoff = rank_tol * s.values.cwiseAbs().maxCoeff();
  RoofBasis basis;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) > cutoff) {
      basis.phi.push_back(std::sqrt(s.values(i)) * s.vectors.col(i));
    }
  }
  return basis;
}

// Value of the decomposition generated by a column-orthonormal V
// (rows of V index the decomposition members).
double roof_value(const PureFunction& f, const RoofBasis& basis,
                  const Matrix& v, long& evaluations,
                  RoofDecomposition* out) {
  const Eigen::Index r = static_cast<Eigen::Index>(basis.phi.size());
  const Eigen::Index n_members = v.rows();
  const Eigen::Index dim = basis.phi.front().size();
  double total = 0.0;
  if (out) {
    out->weights.clear();
    out->states.clear();
  }
  for (Eigen::Index i = 0; i < n_members; ++i) {
    Vector psi = Vector::Zero(dim);
    for (Eigen::Index j = 0; j < r; ++j) {
      psi += v(i, j) * basis.phi[static_cast<size_t>(j)];
    }
    const double weight = psi.squaredNorm();
    if (weight < 1e-14) {
      continue;  // empty member contributes nothing
    }
    psi /= std::sqrt(weight);
    total += weight * f(psi);
    ++evaluations;
    if (out) {
      out->weights.push_back(weight);
      out->states.push_back(std::move(psi));
    }
  }
  return total;
}

Eigen::Index roof_members(const RoofBasis& basis, int size_cap) {
  const Eigen::Index r = static_cast<Eigen::Index>(basis.phi.size());
  if (size_cap > 0) {
    if (size_cap < r) {
      throw std::invalid_argument(
          "convex_roof_estimate: decomposition size below the rank");
    }
    return size_cap;
  }
  return r * r;  // default cap
}

}  // namespace

RoofEstimate convex_roof_estimate(const PureFunction& f,
                                  const DensityState& rho,
                                  const RoofStrategy& strategy,
                                  double rank_tol) {
  const RoofBasis basis = roof_basis(rho, rank_tol);
  const Eigen::Index r = static_cast<Eigen::Index>(basis.phi.size());
  RoofEstimate best;
  best.evaluations = 0;

  // Spectral decomposition first: the baseline every strategy can realize.
  {
    const Matrix eye = Matrix::Identity(r, r);
    best.value = roof_value(f, basis, eye, best.evaluations, &best.decomposition);
  }
  if (std::holds_alternative<RoofEigenOnly>(strategy) || r == 1) {
    return best;
  }

  if (const auto* rand = std::get_if<RoofRandom>(&strategy)) {
    const Eigen::Index members = roof_members(basis, rand->size_cap);
    Rng rng(rand->seed);
    RoofDecomposition decomp;
    for (int trial = 0; trial < rand->count; ++trial) {
      const Matrix v = random_isometry(rng, members, r);
      const double value = roof_value(f, basis, v, best.evaluations, &decomp);
      if (value < best.value) {
        best.value = value;
        best.decomposition = decomp;
      }
    }
    return best;
  }

  const auto& refine = std::get<RoofLocalRefine>(strategy);
  const Eigen::Index members = roof_members(basis, refine.size_cap);
  // Start from the spectral decomposition padded with empty members, then
  // descend with Givens rotations between member rows: unitary mixing on
  // the left preserves column orthonormality.
  Matrix v = Matrix::Zero(members, r);
  v.topLeftCorner(r, r) = Matrix::Identity(r, r);
  double current = best.value;
  double step = 0.5;  // rotation angle, shrunk on stalled sweeps
  const Complex phases[2] = {Complex(1.0, 0.0), Complex(0.0, 1.0)};
  for (int sweep = 0; sweep < refine.iters && step > 1e-8; ++sweep) {
    bool improved = false;
    for (Eigen::Index i = 0; i < members; ++i) {
      for (Eigen::Index j = i + 1; j < members; ++j) {
        for (const Complex& phase : phases) {
          for (const double angle : {step, -step}) {
            Matrix cand = v;
            const double c = std::cos(angle);
            const double s = std::sin(angle);
            cand.row(i) = c * v.row(i) + phase * s * v.row(j);
            cand.row(j) = -std::conj(phase) * s * v.row(i) + c * v.row(j);
            const double value =
                roof_value(f, basis, cand, best.evaluations, nullptr);
            if (value < current - 1e-14) {
              current = value;
              v = std::move(cand);
              improved = true;
            }
          }
        }
      }
    }
    if (!improved) {
      step *= 0.5;
    }
  }
  if (current < best.value) {
    best.value =
        roof_value(f, basis, v, best.evaluations, &best.decomposition);
  }
  return best;
}

}  // namespace qgeom
