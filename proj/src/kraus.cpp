#include "qgeom/kraus.hpp"

#include <cmath>

namespace qgeom {

KrausMap::KrausMap(std::vector<Matrix> ops, double drop_tol) {
  if (ops.empty()) {
    throw std::invalid_argument("KrausMap: no operators");
  }
  const Eigen::Index n = ops.front().rows();
  if (n == 0) {
    throw std::invalid_argument("KrausMap: empty operator");
  }
  for (const Matrix& a : ops) {
    if (a.rows() != n || a.cols() != n) {
      throw std::invalid_argument(
          "KrausMap: operators must be square with a common dimension");
    }
    if (a.cwiseAbs().maxCoeff() > drop_tol) {
      ops_.push_back(a);
    }
  }
  if (ops_.empty()) {
    throw std::invalid_argument("KrausMap: all operators are zero");
  }
}

Complex gl_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("gl_inner: dimension mismatch");
  }
  return 0.5 * (a.adjoint() * b).trace();
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

ChoiOperator choi_operator(const KrausMap& k) {
  const Eigen::Index n = k.dim();
  Matrix choi = Matrix::Zero(n * n, n * n);
  for (const Matrix& a : k.ops()) {
    const Vector va = vec(a);
    choi += va * va.adjoint();
  }
  return ChoiOperator{std::move(choi), n};
}

HermitianOperator apply(const KrausMap& k, const HermitianOperator& rho) {
  if (rho.dim() != k.dim()) {
    throw std::invalid_argument("apply: dimension mismatch");
  }
  Matrix out = Matrix::Zero(k.dim(), k.dim());
  for (const Matrix& a : k.ops()) {
    out += a * rho.matrix() * a.adjoint();
  }
  return HermitianOperator(std::move(out));
}

KrausMap compose(const KrausMap& a, const KrausMap& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("compose: dimension mismatch");
  }
  std::vector<Matrix> prods;
  prods.reserve(a.size() * b.size());
  for (const Matrix& ai : a.ops()) {
    for (const Matrix& bj : b.ops()) {
      prods.push_back(ai * bj);
    }
  }
  return KrausMap(std::move(prods));
}

namespace {

// Rotate a global phase so the largest-magnitude entry (first such in
// column-major order) is real positive; keeps output deterministic.
Matrix fix_phase(const Matrix& a) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double v = std::abs(*(a.data() + i));
    if (v > best_abs + 1e-14) {
      best_abs = v;
      best = i;
    }
  }
  const Complex pivot = *(a.data() + best);
  if (std::abs(pivot) == 0.0) {
    return a;
  }
  return a * (std::conj(pivot) / std::abs(pivot));
}

}  // namespace

KrausMap canonical_form(const KrausMap& k, double cutoff_rel) {
  const ChoiOperator choi = choi_operator(k);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(choi.matrix);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("canonical_form: eigensolver failed");
  }
  const RealVector& ev = solver.eigenvalues();
  const double cutoff = cutoff_rel * ev.cwiseAbs().maxCoeff();
  std::vector<Matrix> ops;
  // Descending eigenvalue order: largest component first.
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    if (ev(i) > cutoff) {
      const Vector col = std::sqrt(ev(i)) * solver.eigenvectors().col(i);
      ops.push_back(fix_phase(unvec(col, choi.dim, choi.dim)));
    }
  }
  return KrausMap(std::move(ops));
}

std::optional<Matrix> as_group_element(const KrausMap& k, double cutoff_rel) {
  const KrausMap canon = canonical_form(k);
  if (canon.size() != 1) {
    return std::nullopt;
  }
  const Matrix& a = canon.ops().front();
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= cutoff_rel * sv(0)) {
    return std::nullopt;
  }
  return a;
}

bool is_nondegenerate(const KrausMap& k) {
  const Eigen::Index n = k.dim();
  Matrix t = Matrix::Zero(n, n);
  for (const Matrix& a : k.ops()) {
    t += a.adjoint() * a;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(t, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() > static_cast<double>(n) * tol::psd;
}

DensityState normalized_apply(const KrausMap& k, const DensityState& rho) {
  if (!is_nondegenerate(k)) {
    throw std::invalid_argument(
        "normalized_apply: map annihilates part of the state space");
  }
  HermitianOperator image = apply(k, rho.op());
  const double tr = image.matrix().trace().real();
  if (tr <= 0.0) {
    // Unreachable for a nondegenerate map on a valid density state.
    throw std::logic_error("normalized_apply: nonpositive image trace");
  }
  return DensityState(Matrix(image.matrix() / tr));
}

DensityState gl_apply(const Matrix& a, const DensityState& rho) {
  if (a.rows() != a.cols() || a.rows() != rho.dim()) {
    throw std::invalid_argument("gl_apply: dimension mismatch");
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(sv.size() - 1) <= tol::inv_rel * sv(0)) {
    throw std::invalid_argument("gl_apply: operator is singular");
  }
  Matrix out = a * rho.matrix() * a.adjoint();
  const double tr = out.trace().real();
  return DensityState(Matrix(out / tr));
}

double convex_image_weight(const KrausMap& k, const DensityState& rho,
                           const DensityState& rho_prime, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("convex_image_weight: lambda outside [0,1]");
  }
  const double t = apply(k, rho.op()).matrix().trace().real();
  const double t_prime = apply(k, rho_prime.op()).matrix().trace().real();
  const double denom = lambda * t + (1.0 - lambda) * t_prime;
  if (denom <= 0.0) {
    throw std::invalid_argument("convex_image_weight: map annihilates both states");
  }
  return lambda * t / denom;
}

}  // namespace qgeom
