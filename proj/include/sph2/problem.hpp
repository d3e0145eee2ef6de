#pragma once

#include <string>
#include <vector>

#include "sph2/errors.hpp"
#include "sph2/types.hpp"

namespace sph2 {

/// Equality-constrained quadratic program
///
///   minimize   (1/2) x^T Q x + c^T x
///   subject to S x = W_b b
///
/// with diagonal positive definite Q (stored as its diagonal) and full
/// row-rank S and W_b.
template <typename Scalar>
struct QuadraticProgramT {
  VectorX<Scalar> q;    // diagonal of Q, length n_x
  VectorX<Scalar> c;    // length n_x
  MatrixX<Scalar> S;    // n_r x n_x
  MatrixX<Scalar> W_b;  // n_r x n_b
  VectorX<Scalar> b;    // length n_b

  Index n_x() const { return q.size(); }
  Index n_r() const { return S.rows(); }
  Index n_b() const { return W_b.cols(); }

  MatrixX<Scalar> Q() const { return MatrixX<Scalar>(q.asDiagonal()); }
};

using QuadraticProgram = QuadraticProgramT<double>;

/// Diagonal time constants for the algorithm dynamics. tau_x scales the
/// primal block and tau_nu the multiplier block. tau_delta and tau_mu are
/// only consumed by the distributed variants and may be left empty
/// otherwise. Any of them may be given as a single entry, which is
/// broadcast to the required block size.
template <typename Scalar>
struct TimeConstantsT {
  VectorX<Scalar> tau_x;
  VectorX<Scalar> tau_nu;
  VectorX<Scalar> tau_delta;
  VectorX<Scalar> tau_mu;

  static TimeConstantsT uniform(Scalar value, Index n_x, Index n_r) {
    TimeConstantsT tc;
    tc.tau_x = VectorX<Scalar>::Constant(n_x, value);
    tc.tau_nu = VectorX<Scalar>::Constant(n_r, value);
    return tc;
  }
};

using TimeConstants = TimeConstantsT<double>;

/// Strengths of the white-noise channels entering through c and b.
template <typename Scalar>
struct DisturbanceConfigT {
  Scalar t_c{0};
  Scalar t_b{0};
};

using DisturbanceConfig = DisturbanceConfigT<double>;

template <typename Scalar>
struct EquilibriumT {
  VectorX<Scalar> x_star;
  VectorX<Scalar> nu_star;
};

using Equilibrium = EquilibriumT<double>;

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

namespace detail {

// Reciprocal-condition style full row rank test on the singular values.
template <typename Scalar>
bool has_full_row_rank(const MatrixX<Scalar>& M, Scalar rcond_threshold = Scalar(1e-12)) {
  if (M.rows() > M.cols()) return false;
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return false;
  return sv(sv.size() - 1) > rcond_threshold * sv(0);
}

template <typename Scalar>
bool is_positive(const VectorX<Scalar>& v) {
  return v.size() > 0 && (v.array() > Scalar(0)).all();
}

// Broadcasts a size-1 vector to length n; passes through a length-n vector.
template <typename Scalar>
VectorX<Scalar> broadcast(const VectorX<Scalar>& v, Index n, const std::string& name) {
  if (v.size() == 1) return VectorX<Scalar>::Constant(n, v(0));
  if (v.size() == n) return v;
  throw ValidationError(name + ": expected a scalar or " + std::to_string(n) +
                        " entries, got " + std::to_string(v.size()));
}

template <typename Scalar>
void require_positive_diagonal(const VectorX<Scalar>& v, const std::string& name) {
  if (v.size() == 0 || !(v.array() > Scalar(0)).all())
    throw ValidationError(name + ": diagonal entries must be strictly positive");
}

}  // namespace detail

/// Checks every model assumption, reporting each failure by name. Never
/// throws; a problem is usable by the solvers and builders only when the
/// returned report is ok.
template <typename Scalar>
ValidationReport validate_problem(const QuadraticProgramT<Scalar>& p) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& what) {
    rep.ok = false;
    rep.violations.push_back(what);
  };

  if (p.q.size() == 0) fail("Q is empty");
  if (p.c.size() != p.n_x()) fail("c has wrong length");
  if (p.S.cols() != p.n_x()) fail("S column count does not match n_x");
  if (p.W_b.rows() != p.S.rows()) fail("W_b row count does not match n_r");
  if (p.b.size() != p.n_b()) fail("b has wrong length");
  if (!rep.ok) return rep;

  if (!(p.q.array() > Scalar(0)).all()) fail("Q not positive definite");
  if (p.n_r() >= p.n_x()) fail("n_r not less than n_x");
  if (p.n_r() < 1) fail("constraint count must be positive");
  if (p.n_r() >= 1) {
    if (!detail::has_full_row_rank(p.S)) fail("S not full row rank");
    if (!detail::has_full_row_rank(p.W_b)) fail("W_b not full row rank");
  }
  if (!p.q.allFinite() || !p.c.allFinite() || !p.S.allFinite() || !p.W_b.allFinite() ||
      !p.b.allFinite())
    fail("problem data contains non-finite entries");
  return rep;
}

template <typename Scalar>
void require_valid(const QuadraticProgramT<Scalar>& p) {
  const ValidationReport rep = validate_problem(p);
  if (!rep.ok) {
    std::string msg = "invalid problem:";
    for (const auto& v : rep.violations) msg += " [" + v + "]";
    throw ValidationError(msg);
  }
}

/// Unique optimizer of the KKT system
///
///   Q x* + S^T nu* + c = 0,   S x* = W_b b,
///
/// computed by eliminating x through the diagonal Q.
template <typename Scalar>
EquilibriumT<Scalar> solve_kkt(const QuadraticProgramT<Scalar>& p) {
  const VectorX<Scalar> qinv = p.q.cwiseInverse();
  const MatrixX<Scalar> H = p.S * qinv.asDiagonal() * p.S.transpose();
  Eigen::PartialPivLU<MatrixX<Scalar>> lu(H);
  if (lu.rcond() < Scalar(1e-12))
    throw NumericalError("solve_kkt: S Q^{-1} S^T numerically singular (rcond " +
                         std::to_string(static_cast<double>(lu.rcond())) +
                         "); constraint rows are likely dependent");
  EquilibriumT<Scalar> eq;
  eq.nu_star = -lu.solve((p.W_b * p.b + p.S * (qinv.asDiagonal() * p.c)).eval());
  eq.x_star = -(qinv.asDiagonal() * (p.S.transpose() * eq.nu_star + p.c)).eval();
  return eq;
}

/// Stationary point of the regularized dynamics: the multiplier solve gains
/// an eps*I shift, so it exists for every eps > 0 and tends to the KKT
/// optimizer as eps -> 0.
template <typename Scalar>
EquilibriumT<Scalar> regularized_equilibrium(const QuadraticProgramT<Scalar>& p, Scalar eps) {
  if (!(eps > Scalar(0))) throw ValidationError("regularized_equilibrium: eps must be > 0");
  const VectorX<Scalar> qinv = p.q.cwiseInverse();
  MatrixX<Scalar> H = p.S * qinv.asDiagonal() * p.S.transpose();
  H.diagonal().array() += eps;
  Eigen::LLT<MatrixX<Scalar>> llt(H);
  if (llt.info() != Eigen::Success)
    throw NumericalError("regularized_equilibrium: shifted multiplier system not SPD");
  EquilibriumT<Scalar> eq;
  eq.nu_star = -llt.solve((p.W_b * p.b + p.S * (qinv.asDiagonal() * p.c)).eval());
  eq.x_star = -(qinv.asDiagonal() * (p.S.transpose() * eq.nu_star + p.c)).eval();
  return eq;
}

template <typename Scalar>
struct DualDataT {
  MatrixX<Scalar> H;  // S Q^{-1} S^T, symmetric positive definite
  VectorX<Scalar> g;  // S Q^{-1} c + W_b b
};

using DualData = DualDataT<double>;

/// Quadratic and linear coefficients of the dual function
///   Phi(nu) = -(1/2) nu^T H nu - nu^T g - (1/2) c^T Q^{-1} c.
template <typename Scalar>
DualDataT<Scalar> dual_data(const QuadraticProgramT<Scalar>& p) {
  const VectorX<Scalar> qinv = p.q.cwiseInverse();
  DualDataT<Scalar> dd;
  dd.H = p.S * qinv.asDiagonal() * p.S.transpose();
  dd.g = p.S * (qinv.asDiagonal() * p.c) + p.W_b * p.b;
  return dd;
}

}  // namespace sph2
