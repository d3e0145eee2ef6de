#pragma once

#include <cmath>
#include <string>

#include "sph2/errors.hpp"
#include "sph2/problem.hpp"
#include "sph2/types.hpp"

namespace sph2 {

/// Parameters of the uniform special case Q = q I, T_x = tau_x I,
/// T_nu = tau_nu I under which the augmented closed form is exact.
template <typename Scalar>
struct UniformParamsT {
  Scalar q{1};
  Scalar tau_x{1};
  Scalar tau_nu{1};
  Index n_x{0};
  Index n_r{0};
};

using UniformParams = UniformParamsT<double>;

/// Squared H2 norm of the plain saddle-point dynamics:
///   (t_c^2 / 2) Tr(T_x^{-1}) + (t_b^2 / 2) Tr(W_b^T T_nu^{-1} W_b).
/// Independent of Q and S.
template <typename Scalar>
Scalar h2sq_saddle(const VectorX<Scalar>& tau_x, const VectorX<Scalar>& tau_nu,
                   const MatrixX<Scalar>& W_b, Scalar t_c, Scalar t_b) {
  detail::require_positive_diagonal(tau_x, "tau_x");
  detail::require_positive_diagonal(tau_nu, "tau_nu");
  if (W_b.rows() != tau_nu.size())
    throw ValidationError("h2sq_saddle: W_b row count does not match tau_nu");
  const Scalar primal = t_c * t_c / Scalar(2) * tau_x.cwiseInverse().sum();
  const Scalar dual =
      t_b * t_b / Scalar(2) *
      (W_b.transpose() * tau_nu.cwiseInverse().asDiagonal() * W_b).trace();
  return primal + dual;
}

/// Smallest common scalar time constant achieving ||G|| <= gamma in the
/// uniform case: set both tau_x and tau_nu at or above this value.
template <typename Scalar>
Scalar tau_design(Scalar gamma, Index n_x, Index n_r, Scalar t_c, Scalar t_b) {
  if (!(gamma > Scalar(0))) throw ValidationError("tau_design: gamma must be > 0");
  return (t_c * t_c * Scalar(n_x) / Scalar(2) + t_b * t_b * Scalar(n_r) / Scalar(2)) /
         (gamma * gamma);
}

template <typename Scalar>
struct RegGapCoefficientsT {
  Scalar alpha{0};
  Scalar gamma{0};
};

using RegGapCoefficients = RegGapCoefficientsT<double>;

/// Coefficients of the regularization performance gap for the single
/// constraint, uniform-parameter case:
///   H2^2(plain) - H2^2(regularized) = alpha_eps t_c^2 + gamma_eps t_b^2,
/// with s^2 the squared 2-norm of the constraint row.
template <typename Scalar>
RegGapCoefficientsT<Scalar> reg_gap_coefficients(Scalar q, Scalar tau_x, Scalar tau_nu,
                                                 Scalar s_norm_sq, Scalar eps) {
  if (!(q > Scalar(0)) || !(tau_x > Scalar(0)) || !(tau_nu > Scalar(0)) ||
      !(s_norm_sq > Scalar(0)))
    throw ValidationError("reg_gap_coefficients: q, tau_x, tau_nu, s_norm_sq must be > 0");
  if (eps < Scalar(0)) throw ValidationError("reg_gap_coefficients: eps must be >= 0");
  const Scalar denom = Scalar(2) * (eps * q + s_norm_sq) * (eps * tau_x + q * tau_nu);
  RegGapCoefficientsT<Scalar> out;
  out.alpha = eps * s_norm_sq / denom;
  out.gamma = eps * (tau_x * q * eps + q * q * tau_nu + tau_x * s_norm_sq) / (tau_nu * denom);
  return out;
}

/// Singular values of S, descending.
template <typename Scalar>
VectorX<Scalar> singular_values(const MatrixX<Scalar>& S) {
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(S);
  return svd.singularValues();
}

/// Guards against a sigma vector drifting out of sync with the S it claims
/// to describe.
template <typename Scalar>
bool check_singular_values(const MatrixX<Scalar>& S, const VectorX<Scalar>& sigma,
                           Scalar tol = Scalar(1e-9)) {
  const VectorX<Scalar> ref = singular_values(S);
  if (ref.size() != sigma.size()) return false;
  return (ref - sigma).norm() <= tol * (Scalar(1) + ref.norm());
}

/// Squared H2 norm of the augmented saddle-point dynamics in the uniform
/// case with one disturbance per constraint:
///   (t_c^2 / 2 tau_x)(n_x - n_r)
///   + (t_b^2 / 2 tau_nu + t_c^2 / 2 tau_x) sum_i q / (q + rho sigma_i^2)
///   + (t_b^2 / 2 tau_x) sum_i q rho^2 sigma_i^2 / (q + rho sigma_i^2).
template <typename Scalar>
Scalar h2sq_augmented_uniform(const UniformParamsT<Scalar>& u, const VectorX<Scalar>& sigma,
                              Scalar rho, Scalar t_c, Scalar t_b) {
  if (!(u.q > Scalar(0)) || !(u.tau_x > Scalar(0)) || !(u.tau_nu > Scalar(0)))
    throw ValidationError("h2sq_augmented_uniform: q, tau_x, tau_nu must be > 0");
  if (u.n_r < 1 || u.n_r >= u.n_x)
    throw ValidationError("h2sq_augmented_uniform: need 1 <= n_r < n_x");
  if (sigma.size() != u.n_r)
    throw ValidationError("h2sq_augmented_uniform: expected n_r singular values");
  if (!(sigma.array() > Scalar(0)).all())
    throw ValidationError("h2sq_augmented_uniform: singular values must be positive");
  if (rho < Scalar(0)) throw ValidationError("h2sq_augmented_uniform: rho must be >= 0");

  const Scalar cx = t_c * t_c / (Scalar(2) * u.tau_x);
  const Scalar cb = t_b * t_b / (Scalar(2) * u.tau_nu);
  const Scalar cbx = t_b * t_b / (Scalar(2) * u.tau_x);
  Scalar shrink_sum = 0, amplify_sum = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    const Scalar s2 = sigma(i) * sigma(i);
    shrink_sum += u.q / (u.q + rho * s2);
    amplify_sum += u.q * rho * rho * s2 / (u.q + rho * s2);
  }
  return cx * Scalar(u.n_x - u.n_r) + (cb + cx) * shrink_sum + cbx * amplify_sum;
}

template <typename Scalar>
Scalar h2sq_augmented_uniform(const UniformParamsT<Scalar>& u, const MatrixX<Scalar>& S,
                              Scalar rho, Scalar t_c, Scalar t_b) {
  if (S.rows() != u.n_r || S.cols() != u.n_x)
    throw ValidationError("h2sq_augmented_uniform: S shape does not match n_r x n_x");
  return h2sq_augmented_uniform(u, singular_values(S), rho, t_c, t_b);
}

/// Squared H2 norm of dual ascent: (t_b^2 / 2) Tr(W_b^T T_nu^{-1} W_b),
/// equal to the t_b term of the plain saddle-point value.
template <typename Scalar>
Scalar h2sq_dual_ascent(const VectorX<Scalar>& tau_nu, const MatrixX<Scalar>& W_b, Scalar t_b) {
  detail::require_positive_diagonal(tau_nu, "tau_nu");
  if (W_b.rows() != tau_nu.size())
    throw ValidationError("h2sq_dual_ascent: W_b row count does not match tau_nu");
  return t_b * t_b / Scalar(2) *
         (W_b.transpose() * tau_nu.cwiseInverse().asDiagonal() * W_b).trace();
}

/// Upper bound on the distributed dual dynamics:
///   (t_b^2 / 2 tau_nu) Tr(W_blk^T W_blk),
/// attained exactly at rho = 0. The trace argument equals the squared
/// Frobenius norm of W_b.
template <typename Scalar>
Scalar h2sq_add_bound(Scalar wb_blockdiag_trace, Scalar tau_nu, Scalar t_b) {
  if (!(tau_nu > Scalar(0))) throw ValidationError("h2sq_add_bound: tau_nu must be > 0");
  if (wb_blockdiag_trace < Scalar(0))
    throw ValidationError("h2sq_add_bound: trace must be >= 0");
  return t_b * t_b / (Scalar(2) * tau_nu) * wb_blockdiag_trace;
}

/// Exact squared H2 norm of the distributed dual resource-allocation
/// dynamics with uniform cost q and Laplacian spectrum
/// 0 = lambda_1 < lambda_2 <= ... <= lambda_n:
///   1 / (2 tau_nu) * (1 + sum_{i>=2} 1 / (1 + q rho lambda_i)).
/// The dual cost curvature is 1/q, so each nonzero Laplacian mode is
/// shrunk by 1 / (1 + q rho lambda_i); the consensus mode contributes 1.
template <typename Scalar>
Scalar h2sq_ra_dist_dual_uniform(Scalar q, Scalar tau_nu, const VectorX<Scalar>& spectrum,
                                 Scalar rho) {
  if (!(q > Scalar(0)) || !(tau_nu > Scalar(0)))
    throw ValidationError("h2sq_ra_dist_dual_uniform: q, tau_nu must be > 0");
  if (rho < Scalar(0)) throw ValidationError("h2sq_ra_dist_dual_uniform: rho must be >= 0");
  if (spectrum.size() < 2)
    throw ValidationError("h2sq_ra_dist_dual_uniform: need at least two eigenvalues");
  if (std::abs(static_cast<double>(spectrum(0))) > 1e-10)
    throw ValidationError("h2sq_ra_dist_dual_uniform: spectrum must start at lambda_1 = 0");
  for (Index i = 1; i < spectrum.size(); ++i) {
    if (spectrum(i) < spectrum(i - 1))
      throw ValidationError("h2sq_ra_dist_dual_uniform: spectrum must be ascending");
  }
  Scalar sum = Scalar(1);
  for (Index i = 1; i < spectrum.size(); ++i)
    sum += Scalar(1) / (Scalar(1) + q * rho * spectrum(i));
  return sum / (Scalar(2) * tau_nu);
}

/// Sufficient augmentation gain for ||G|| <= gamma on a connected graph
/// with algebraic connectivity lambda2, clamped at zero. Feasible targets
/// satisfy 2 tau_nu gamma^2 > 1; anything lower needs a larger tau_nu
/// instead of more augmentation.
template <typename Scalar>
Scalar rho_design(Scalar q, Scalar lambda2, Index n, Scalar tau_nu, Scalar gamma) {
  if (!(q > Scalar(0)) || !(tau_nu > Scalar(0)))
    throw ValidationError("rho_design: q, tau_nu must be > 0");
  if (!(lambda2 > Scalar(0)))
    throw ValidationError("rho_design: lambda2 must be > 0 (graph must be connected)");
  if (!(gamma > Scalar(0))) throw ValidationError("rho_design: gamma must be > 0");
  const Scalar two_tau_g2 = Scalar(2) * tau_nu * gamma * gamma;
  if (two_tau_g2 <= Scalar(1))
    throw ValidationError(
        "rho_design: target gamma below 1/sqrt(2 tau_nu) is infeasible for any rho; "
        "increase tau_nu");
  const Scalar bound = (Scalar(n) - two_tau_g2) / (two_tau_g2 - Scalar(1)) / (q * lambda2);
  return std::max(Scalar(0), bound);
}

}  // namespace sph2
