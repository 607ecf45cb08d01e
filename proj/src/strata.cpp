#include "qgeom/strata.hpp"

#include <algorithm>
#include <cmath>

namespace qgeom {

namespace {

// Eigenvalues with |ev| above rank_tol * max|ev| count toward the rank.
double rank_cutoff(const RealVector& ev, double rank_tol) {
  return rank_tol * ev.cwiseAbs().maxCoeff();
}

}  // namespace

int rank_of(const HermitianOperator& a, double rank_tol) {
  const Spectrum s = spectrum_of(a);
  const double cutoff = rank_cutoff(s.values, rank_tol);
  int r = 0;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (std::abs(s.values(i)) > cutoff) {
      ++r;
    }
  }
  return r;
}

Signature signature_of(const HermitianOperator& a, double rank_tol) {
  const Spectrum s = spectrum_of(a);
  const double cutoff = rank_cutoff(s.values, rank_tol);
  Signature sig;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) > cutoff) {
      ++sig.plus;
    } else if (s.values(i) < -cutoff) {
      ++sig.minus;
    }
  }
  return sig;
}

Eigen::Index orbit_dimension(Eigen::Index n, Eigen::Index k) {
  if (k < 0 || k > n) {
    throw std::invalid_argument("orbit_dimension: rank outside [0, n]");
  }
  return 2 * n * k - k * k;
}

TangentCheck tangent_membership(const HermitianOperator& xi,
                                const HermitianOperator& b, double tol,
                                double rank_tol) {
  require_same_dim(xi, b);
  const Spectrum s = spectrum_of(xi);
  const double cutoff = rank_cutoff(s.values, rank_tol);
  std::vector<Eigen::Index> kernel_cols;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (std::abs(s.values(i)) <= cutoff) {
      kernel_cols.push_back(i);
    }
  }
  if (kernel_cols.empty()) {
    return TangentCheck{true, 0.0};  // full rank: the stratum is open
  }
  Matrix kb(xi.dim(), static_cast<Eigen::Index>(kernel_cols.size()));
  for (size_t c = 0; c < kernel_cols.size(); ++c) {
    kb.col(static_cast<Eigen::Index>(c)) = s.vectors.col(kernel_cols[c]);
  }
  const double res = (kb.adjoint() * b.matrix() * kb).cwiseAbs().maxCoeff();
  return TangentCheck{res <= tol, res};
}

// --------------------------------------------------------------------------
// Charts
// --------------------------------------------------------------------------

ChartIndex::ChartIndex(Eigen::Index n, std::vector<Eigen::Index> indices)
    : n_(n), indices_(std::move(indices)) {
  if (n_ < 1) {
    throw std::invalid_argument("ChartIndex: dimension must be positive");
  }
  if (indices_.empty() || static_cast<Eigen::Index>(indices_.size()) > n_) {
    throw std::invalid_argument("ChartIndex: need between 1 and n indices");
  }
  for (size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || indices_[i] >= n_) {
      throw std::invalid_argument("ChartIndex: index out of range");
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw std::invalid_argument("ChartIndex: indices must strictly increase");
    }
  }
}

bool ChartIndex::contains(Eigen::Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> ChartIndex::offdiag_pairs()
    const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index r = 0; r < n_; ++r) {
    for (Eigen::Index s = r + 1; s < n_; ++s) {
      if (contains(r) || contains(s)) {
        pairs.emplace_back(r, s);
      }
    }
  }
  return pairs;
}

namespace {

// J-block of a matrix known through chart data, as a dense k x k matrix.
Matrix chart_block(const ChartCoordinates& coords, const ChartIndex& j) {
  const Eigen::Index k = j.k();
  Matrix block(k, k);
  const auto pairs = j.offdiag_pairs();
  // Positions of J members for O(1) lookup.
  std::vector<Eigen::Index> pos(static_cast<size_t>(j.n()), -1);
  for (Eigen::Index t = 0; t < k; ++t) {
    pos[static_cast<size_t>(j.indices()[static_cast<size_t>(t)])] = t;
  }
  for (Eigen::Index t = 0; t < k; ++t) {
    block(t, t) = coords.diag[static_cast<size_t>(t)];
  }
  for (size_t p = 0; p < pairs.size(); ++p) {
    const auto [r, s] = pairs[p];
    if (j.contains(r) && j.contains(s)) {
      const Eigen::Index pr = pos[static_cast<size_t>(r)];
      const Eigen::Index ps = pos[static_cast<size_t>(s)];
      block(pr, ps) = coords.offdiag[p];
      block(ps, pr) = std::conj(coords.offdiag[p]);
    }
  }
  return block;
}

double smallest_singular_value_ratio(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  return sv(0) == 0.0 ? 0.0 : sv(sv.size() - 1) / sv(0);
}

}  // namespace

ChartCoordinates chart_forward(const HermitianOperator& xi,
                               const ChartIndex& j, double rank_tol) {
  if (xi.dim() != j.n()) {
    throw std::invalid_argument("chart_forward: dimension mismatch");
  }
  if (rank_of(xi, rank_tol) != static_cast<int>(j.k())) {
    throw std::invalid_argument(
        "chart_forward: rank of the operator differs from the chart size");
  }
  ChartCoordinates coords;
  for (Eigen::Index idx : j.indices()) {
    coords.diag.push_back(xi.matrix()(idx, idx).real());
  }
  for (const auto& [r, s] : j.offdiag_pairs()) {
    coords.offdiag.push_back(xi.matrix()(r, s));
  }
  if (smallest_singular_value_ratio(chart_block(coords, j)) <= tol::inv_rel) {
    throw std::invalid_argument("chart_forward: singular J x J block");
  }
  return coords;
}

HermitianOperator chart_reconstruct(const ChartCoordinates& coords,
                                    const ChartIndex& j, double inv_tol) {
  const Eigen::Index n = j.n();
  const Eigen::Index k = j.k();
  const auto pairs = j.offdiag_pairs();
  if (coords.diag.size() != static_cast<size_t>(k) ||
      coords.offdiag.size() != pairs.size()) {
    throw std::invalid_argument("chart_reconstruct: coordinate count mismatch");
  }
  const Matrix block = chart_block(coords, j);
  if (smallest_singular_value_ratio(block) <= inv_tol) {
    throw std::invalid_argument("chart_reconstruct: singular J x J block");
  }

  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index t = 0; t < k; ++t) {
    const Eigen::Index idx = j.indices()[static_cast<size_t>(t)];
    out(idx, idx) = coords.diag[static_cast<size_t>(t)];
  }
  for (size_t p = 0; p < pairs.size(); ++p) {
    const auto [r, s] = pairs[p];
    out(r, s) = coords.offdiag[p];
    out(s, r) = std::conj(coords.offdiag[p]);
  }

  // Every entry with a row or column in J is now known; the complement
  // follows from the vanishing Schur complement of the J-block:
  //   a_ij = sum_{r,s in J} a_ir (block^{-1})_{rs} conj(a_js).
  std::vector<Eigen::Index> rest;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!j.contains(i)) {
      rest.push_back(i);
    }
  }
  if (!rest.empty()) {
    Matrix cross(static_cast<Eigen::Index>(rest.size()), k);
    for (size_t a = 0; a < rest.size(); ++a) {
      for (Eigen::Index t = 0; t < k; ++t) {
        cross(static_cast<Eigen::Index>(a), t) =
            out(rest[a], j.indices()[static_cast<size_t>(t)]);
      }
    }
    const Matrix schur = cross * block.inverse() * cross.adjoint();
    for (size_t a = 0; a < rest.size(); ++a) {
      for (size_t b = 0; b < rest.size(); ++b) {
        out(rest[a], rest[b]) = schur(static_cast<Eigen::Index>(a),
                                      static_cast<Eigen::Index>(b));
      }
    }
  }
  return HermitianOperator(std::move(out));
}

ChartIndex suggest_chart_index(const HermitianOperator& xi, double rank_tol) {
  const int k = rank_of(xi, rank_tol);
  if (k == 0) {
    throw std::invalid_argument("suggest_chart_index: zero operator");
  }
  // The J-block is invertible exactly when the rows J of the matrix are
  // linearly independent; pick them by pivoted Gram-Schmidt on the rows.
  const Eigen::Index n = xi.dim();
  Matrix rows = xi.matrix();  // row i as a vector: rows.row(i)
  std::vector<bool> used(static_cast<size_t>(n), false);
  std::vector<Vector> basis;
  std::vector<Eigen::Index> idx;
  for (int t = 0; t < k; ++t) {
    Eigen::Index best = -1;
    double best_norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[static_cast<size_t>(i)]) {
        continue;
      }
      const double norm = rows.row(i).norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = i;
      }
    }
    if (best < 0 || best_norm <= 0.0) {
      throw std::runtime_error("suggest_chart_index: row selection failed");
    }
    used[static_cast<size_t>(best)] = true;
    idx.push_back(best);
    Vector q = rows.row(best).adjoint() / best_norm;  // column form
    basis.push_back(q);
    // Remove the new direction from every remaining row.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!used[static_cast<size_t>(i)]) {
        const Complex proj = (rows.row(i) * q)(0);
        rows.row(i) -= proj * q.adjoint();
      }
    }
  }
  std::sort(idx.begin(), idx.end());
  return ChartIndex(xi.dim(), std::move(idx));
}

// --------------------------------------------------------------------------
// Faces
// --------------------------------------------------------------------------

FaceDescription face_of(const DensityState& rho, double rank_tol) {
  const Spectrum s = spectrum_of(rho.op());
  const double cutoff = rank_cutoff(s.values, rank_tol);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    if (s.values(i) > cutoff) {
      cols.push_back(i);
    }
  }
  Matrix basis(rho.dim(), static_cast<Eigen::Index>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = s.vectors.col(cols[c]);
  }
  Matrix reduced = basis.adjoint() * rho.matrix() * basis;
  reduced /= reduced.trace().real();  // remove tolerance-level trace dust
  return FaceDescription{std::move(basis), DensityState(std::move(reduced))};
}

bool in_face_of(const FaceDescription& face, const DensityState& sigma,
                double tol) {
  if (face.support_basis.rows() != sigma.dim()) {
    throw std::invalid_argument("in_face_of: dimension mismatch");
  }
  const Matrix p = face.support_basis * face.support_basis.adjoint();
  const double res =
      (p * sigma.matrix() * p - sigma.matrix()).cwiseAbs().maxCoeff();
  return res <= tol;
}

bool is_extreme(const DensityState& rho, double rank_tol) {
  return rank_of(rho.op(), rank_tol) == 1;
}

DensityState tangency_point(const DensityState& pure_state, double rank_tol) {
  const Eigen::Index n = pure_state.dim();
  if (n < 2) {
    throw std::invalid_argument("tangency_point: need dimension >= 2");
  }
  if (rank_of(pure_state.op(), rank_tol) != 1) {
    throw std::invalid_argument("tangency_point: state is not pure");
  }
  const Matrix p = pure_state.matrix();
  return DensityState(
      Matrix((Matrix::Identity(n, n) - p) / static_cast<double>(n - 1)));
}

CurveTangencyReport curve_stratum_tangency(
    const std::vector<std::pair<double, HermitianOperator>>& samples,
    double tol, double rank_tol) {
  if (samples.size() < 3) {
    throw std::invalid_argument("curve_stratum_tangency: need >= 3 samples");
  }
  const double h = samples[1].first - samples[0].first;
  if (h <= 0.0) {
    throw std::invalid_argument(
        "curve_stratum_tangency: samples must increase in t");
  }
  for (size_t i = 1; i + 1 < samples.size(); ++i) {
    const double step = samples[i + 1].first - samples[i].first;
    if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw std::invalid_argument(
          "curve_stratum_tangency: sample grid is not uniform");
    }
  }

  CurveTangencyReport report;
  report.all_tangent = true;
  for (size_t i = 1; i + 1 < samples.size(); ++i) {
    const HermitianOperator& here = samples[i].second;
    HermitianOperator velocity(
        Matrix((samples[i + 1].second.matrix() - samples[i - 1].second.matrix()) /
               (2.0 * h)));
    const TangentCheck check = tangent_membership(here, velocity, tol, rank_tol);
    report.points.push_back(CurveSamplePoint{samples[i].first,
                                             rank_of(here, rank_tol),
                                             check.tangent,
                                             check.kernel_block_norm});
    report.all_tangent = report.all_tangent && check.tangent;
  }
  return report;
}

}  // namespace qgeom
