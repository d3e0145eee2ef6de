#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sph2/errors.hpp"
#include "sph2/types.hpp"

namespace sph2 {

/// Continuous-time LTI system  dx/dt = A x + B eta,  z = C x.
template <typename Scalar>
struct StateSpaceT {
  MatrixX<Scalar> A;
  MatrixX<Scalar> B;
  MatrixX<Scalar> C;
  std::vector<std::string> state_labels;
  std::vector<std::string> input_labels;
  std::vector<std::string> output_labels;

  Index n_states() const { return A.rows(); }
  Index n_inputs() const { return B.cols(); }
  Index n_outputs() const { return C.rows(); }
};

using StateSpace = StateSpaceT<double>;

template <typename Scalar>
void require_consistent_dims(const StateSpaceT<Scalar>& sys) {
  if (sys.A.rows() != sys.A.cols()) throw ValidationError("state space: A must be square");
  if (sys.B.rows() != sys.A.rows()) throw ValidationError("state space: B row count mismatch");
  if (sys.C.cols() != sys.A.rows()) throw ValidationError("state space: C column count mismatch");
  if (!sys.A.allFinite() || !sys.B.allFinite() || !sys.C.allFinite())
    throw ValidationError("state space: non-finite entries");
}

struct HurwitzResult {
  bool hurwitz = false;
  double spectral_abscissa = 0.0;  // max real part of eig(A)
  explicit operator bool() const { return hurwitz; }
};

/// Default stability margin: eigenvalues with real part above -kHurwitzMargin
/// are treated as unstable. Tight enough to accept genuinely damped modes,
/// loose enough to flag the zero modes of cycle spaces.
inline constexpr double kHurwitzMargin = 1e-9;

template <typename Scalar>
HurwitzResult is_hurwitz(const StateSpaceT<Scalar>& sys, double margin = kHurwitzMargin) {
  require_consistent_dims(sys);
  if (sys.n_states() == 0) throw ValidationError("is_hurwitz: empty system");
  Eigen::EigenSolver<MatrixX<Scalar>> es(sys.A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalError("is_hurwitz: eigensolver failed");
  const double abscissa = static_cast<double>(es.eigenvalues().real().maxCoeff());
  return {abscissa < -margin, abscissa};
}

namespace detail {

// Solves A^T X + X A + Q = 0 through the n^2 x n^2 vectorized system
// (I (x) A^T + A^T (x) I) vec(X) = -vec(Q). Exact up to one dense LU.
template <typename Scalar>
MatrixX<Scalar> lyapunov_kron(const MatrixX<Scalar>& A, const MatrixX<Scalar>& Q) {
  const Index n = A.rows();
  MatrixX<Scalar> M = MatrixX<Scalar>::Zero(n * n, n * n);
  for (Index j = 0; j < n; ++j) M.block(j * n, j * n, n, n) += A.transpose();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k) M(i * n + k, j * n + k) += A(j, i);
  VectorX<Scalar> rhs(n * n);
  for (Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -Q.col(j);
  Eigen::PartialPivLU<MatrixX<Scalar>> lu(M);
  if (lu.rcond() < Scalar(1e-14))
    throw NumericalError("lyapunov: vectorized system numerically singular");
  const VectorX<Scalar> y = lu.solve(rhs);
  MatrixX<Scalar> X(n, n);
  for (Index j = 0; j < n; ++j) X.col(j) = y.segment(j * n, n);
  return X;
}

// Bartels-Stewart: reduce A to real Schur form U T U^T, then solve the
// quasi-triangular equation T^T Y + Y T = -Q~ block by block.
template <typename Scalar>
MatrixX<Scalar> lyapunov_schur(const MatrixX<Scalar>& A, const MatrixX<Scalar>& Q) {
  const Index n = A.rows();
  Eigen::RealSchur<MatrixX<Scalar>> schur(A);
  if (schur.info() != Eigen::Success) throw NumericalError("lyapunov: Schur decomposition failed");
  const MatrixX<Scalar>& T = schur.matrixT();
  const MatrixX<Scalar>& U = schur.matrixU();
  const MatrixX<Scalar> Qt = U.transpose() * Q * U;

  std::vector<Index> starts;
  for (Index i = 0; i < n;) {
    starts.push_back(i);
    i += (i + 1 < n && T(i + 1, i) != Scalar(0)) ? 2 : 1;
  }
  const auto block_size = [&](std::size_t k) {
    const Index next = (k + 1 < starts.size()) ? starts[k + 1] : n;
    return next - starts[k];
  };

  MatrixX<Scalar> Y = MatrixX<Scalar>::Zero(n, n);
  for (std::size_t jb = 0; jb < starts.size(); ++jb) {
    const Index j0 = starts[jb], nj = block_size(jb);
    for (std::size_t ib = 0; ib < starts.size(); ++ib) {
      const Index i0 = starts[ib], ni = block_size(ib);
      MatrixX<Scalar> rhs = -Qt.block(i0, j0, ni, nj);
      if (i0 > 0) rhs -= T.block(0, i0, i0, ni).transpose() * Y.block(0, j0, i0, nj);
      if (j0 > 0) rhs -= Y.block(i0, 0, ni, j0) * T.block(0, j0, j0, nj);

      const MatrixX<Scalar> Tii = T.block(i0, i0, ni, ni);
      const MatrixX<Scalar> Tjj = T.block(j0, j0, nj, nj);
      if (ni == 1 && nj == 1) {
        const Scalar denom = Tii(0, 0) + Tjj(0, 0);
        if (denom == Scalar(0))
          throw NumericalError("lyapunov: eigenvalue sum is zero (A not Hurwitz?)");
        Y(i0, j0) = rhs(0, 0) / denom;
      } else {
        // Small Sylvester block, at most 4 unknowns.
        MatrixX<Scalar> K = MatrixX<Scalar>::Zero(ni * nj, ni * nj);
        for (Index q = 0; q < nj; ++q) K.block(q * ni, q * ni, ni, ni) += Tii.transpose();
        for (Index q = 0; q < nj; ++q)
          for (Index r = 0; r < nj; ++r)
            K.block(q * ni, r * ni, ni, ni) +=
                Tjj(r, q) * MatrixX<Scalar>::Identity(ni, ni);
        VectorX<Scalar> v(ni * nj);
        for (Index q = 0; q < nj; ++q) v.segment(q * ni, ni) = rhs.col(q);
        Eigen::FullPivLU<MatrixX<Scalar>> lu(K);
        if (!lu.isInvertible())
          throw NumericalError("lyapunov: singular Sylvester block (A not Hurwitz?)");
        const VectorX<Scalar> y = lu.solve(v);
        for (Index q = 0; q < nj; ++q) Y.block(i0, j0 + q, ni, 1) = y.segment(q * ni, ni);
      }
    }
  }
  return U * Y * U.transpose();
}

}  // namespace detail

/// State dimension below which the vectorized Lyapunov path is used; the
/// Schur path takes over for larger systems.
inline constexpr Index kLyapunovKronMaxDim = 60;

/// Solves the continuous Lyapunov equation A^T X + X A + Q = 0.
template <typename Scalar>
MatrixX<Scalar> solve_lyapunov(const MatrixX<Scalar>& A, const MatrixX<Scalar>& Q) {
  if (A.rows() != A.cols() || Q.rows() != Q.cols() || Q.rows() != A.rows())
    throw ValidationError("solve_lyapunov: dimension mismatch");
  return A.rows() <= kLyapunovKronMaxDim ? detail::lyapunov_kron(A, Q)
                                         : detail::lyapunov_schur(A, Q);
}

template <typename Scalar>
struct GramianResultT {
  MatrixX<Scalar> X;
  Scalar residual{0};  // Frobenius norm of A^T X + X A + C^T C
  bool positive_definite = false;
};

using GramianResult = GramianResultT<double>;

/// Observability Gramian: the unique X >= 0 with A^T X + X A + C^T C = 0.
/// Requires a Hurwitz A; the positive_definite flag reflects observability
/// of (C, A).
template <typename Scalar>
GramianResultT<Scalar> solve_observability_gramian(const StateSpaceT<Scalar>& sys) {
  const HurwitzResult hr = is_hurwitz(sys);
  if (!hr.hurwitz)
    throw NotHurwitzError("observability Gramian requires a Hurwitz A (spectral abscissa " +
                          std::to_string(hr.spectral_abscissa) + ")");
  const MatrixX<Scalar> Q = sys.C.transpose() * sys.C;
  MatrixX<Scalar> X = solve_lyapunov(sys.A, Q);
  X = ((X + X.transpose()) / Scalar(2)).eval();

  GramianResultT<Scalar> res;
  res.residual = (sys.A.transpose() * X + X * sys.A + Q).norm();
  const Scalar bound = Scalar(1e-8) * (Scalar(1) + Q.norm());
  if (!(res.residual < bound))
    throw NumericalError("observability Gramian residual " +
                         std::to_string(static_cast<double>(res.residual)) +
                         " exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(X, Eigen::EigenvaluesOnly);
  const Scalar min_eig = es.eigenvalues().minCoeff();
  const Scalar max_eig = es.eigenvalues().maxCoeff();
  res.positive_definite = min_eig > Scalar(1e-12) * std::max<Scalar>(Scalar(1), max_eig);
  res.X = std::move(X);
  return res;
}

/// Squared H2 norm Tr(B^T X B) with X the observability Gramian.
template <typename Scalar>
Scalar h2_norm_squared(const StateSpaceT<Scalar>& sys) {
  const GramianResultT<Scalar> g = solve_observability_gramian(sys);
  return (sys.B.transpose() * g.X * sys.B).trace();
}

/// PBH test: (C, A) is observable when [A - lambda I; C] has full column
/// rank at every eigenvalue of A.
template <typename Scalar>
bool is_observable(const StateSpaceT<Scalar>& sys) {
  require_consistent_dims(sys);
  using Complex = std::complex<Scalar>;
  using MatrixXc = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = sys.n_states();
  Eigen::EigenSolver<MatrixX<Scalar>> es(sys.A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalError("is_observable: eigensolver failed");

  MatrixXc stacked(n + sys.n_outputs(), n);
  stacked.bottomRows(sys.n_outputs()) = sys.C.template cast<Complex>();
  for (Index k = 0; k < n; ++k) {
    MatrixXc top = sys.A.template cast<Complex>();
    top.diagonal().array() -= es.eigenvalues()(k);
    stacked.topRows(n) = top;
    Eigen::JacobiSVD<MatrixXc> svd(stacked);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= Scalar(1e-9) * std::max<Scalar>(Scalar(1), sv(0))) return false;
  }
  return true;
}

/// True when X is a generalized observability Gramian, i.e. the Lyapunov
/// residual A^T X + X A + C^T C is negative semidefinite.
template <typename Scalar>
bool check_generalized_gramian(const StateSpaceT<Scalar>& sys, const MatrixX<Scalar>& X,
                               Scalar tol = Scalar(1e-9)) {
  require_consistent_dims(sys);
  if (X.rows() != sys.n_states() || X.cols() != sys.n_states())
    throw ValidationError("check_generalized_gramian: X dimension mismatch");
  if ((X - X.transpose()).norm() > Scalar(1e-9) * (Scalar(1) + X.norm()))
    throw ValidationError("check_generalized_gramian: X must be symmetric");
  MatrixX<Scalar> R = sys.A.transpose() * X + X * sys.A + sys.C.transpose() * sys.C;
  R = ((R + R.transpose()) / Scalar(2)).eval();
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(R, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() <= tol;
}

}  // namespace sph2
