#pragma once

#include <optional>
#include <string>

#include "sph2/graph.hpp"
#include "sph2/lti.hpp"
#include "sph2/problem.hpp"

namespace sph2 {

enum class VariantKind { SaddlePoint, Regularized, Augmented, DualAscent, AddSp };

inline const char* variant_name(VariantKind k) {
  switch (k) {
    case VariantKind::SaddlePoint: return "saddle-point";
    case VariantKind::Regularized: return "regularized";
    case VariantKind::Augmented: return "augmented";
    case VariantKind::DualAscent: return "dual-ascent";
    case VariantKind::AddSp: return "add-sp";
  }
  return "?";
}

/// Which algorithm to assemble, plus its gain and (for the distributed
/// dual variant) the communication graph.
struct VariantSpec {
  VariantKind kind = VariantKind::SaddlePoint;
  double eps = 0.0;  // Regularized
  double rho = 0.0;  // Augmented / AddSp
  std::optional<OrientedGraph> graph;  // AddSp
};

namespace detail {

template <typename Scalar>
MatrixX<Scalar> kron_identity(const MatrixX<Scalar>& M, Index k) {
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(M.rows() * k, M.cols() * k);
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j)
      if (M(i, j) != Scalar(0))
        out.block(i * k, j * k, k, k) =
            M(i, j) * MatrixX<Scalar>::Identity(k, k);
  return out;
}

template <typename Scalar>
void check_disturbance(const DisturbanceConfigT<Scalar>& d) {
  if (d.t_c < Scalar(0) || d.t_b < Scalar(0))
    throw ValidationError("disturbance strengths t_c, t_b must be >= 0");
}

template <typename Scalar>
VectorX<Scalar> primal_tau(const QuadraticProgramT<Scalar>& p, const TimeConstantsT<Scalar>& tc) {
  const VectorX<Scalar> tau = broadcast(tc.tau_x, p.n_x(), "tau_x");
  require_positive_diagonal(tau, "tau_x");
  return tau;
}

template <typename Scalar>
VectorX<Scalar> dual_tau(const QuadraticProgramT<Scalar>& p, const TimeConstantsT<Scalar>& tc) {
  const VectorX<Scalar> tau = broadcast(tc.tau_nu, p.n_r(), "tau_nu");
  require_positive_diagonal(tau, "tau_nu");
  return tau;
}

inline std::vector<std::string> indexed_labels(const std::string& stem, Index n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

inline std::vector<std::string> concat(std::vector<std::string> a, std::vector<std::string> b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace detail

/// Saddle-point dynamics in deviation coordinates with disturbances on c
/// and b; the output weights the primal error by Q^{1/2}.
template <typename Scalar>
StateSpaceT<Scalar> build_saddle_point(const QuadraticProgramT<Scalar>& p,
                                       const TimeConstantsT<Scalar>& tc,
                                       const DisturbanceConfigT<Scalar>& d) {
  require_valid(p);
  detail::check_disturbance(d);
  const Index nx = p.n_x(), nr = p.n_r(), nb = p.n_b();
  const VectorX<Scalar> tx = detail::primal_tau(p, tc);
  const VectorX<Scalar> tn = detail::dual_tau(p, tc);
  const VectorX<Scalar> txi = tx.cwiseInverse();
  const VectorX<Scalar> tni = tn.cwiseInverse();

  StateSpaceT<Scalar> sys;
  sys.A = MatrixX<Scalar>::Zero(nx + nr, nx + nr);
  sys.A.topLeftCorner(nx, nx) = -(txi.asDiagonal() * p.Q()).eval();
  sys.A.topRightCorner(nx, nr) = -(txi.asDiagonal() * p.S.transpose()).eval();
  sys.A.bottomLeftCorner(nr, nx) = (tni.asDiagonal() * p.S).eval();

  sys.B = MatrixX<Scalar>::Zero(nx + nr, nx + nb);
  sys.B.topLeftCorner(nx, nx) = (-d.t_c * txi).asDiagonal();
  sys.B.bottomRightCorner(nr, nb) = (-d.t_b * (tni.asDiagonal() * p.W_b)).eval();

  sys.C = MatrixX<Scalar>::Zero(nx, nx + nr);
  sys.C.leftCols(nx) = p.q.cwiseSqrt().asDiagonal();

  sys.state_labels = detail::concat(detail::indexed_labels("x", nx), detail::indexed_labels("nu", nr));
  sys.input_labels =
      detail::concat(detail::indexed_labels("eta_c", nx), detail::indexed_labels("eta_b", nb));
  sys.output_labels = detail::indexed_labels("z", nx);
  return sys;
}

/// Regularized saddle-point dynamics: a -eps I block enters the multiplier
/// row; the input and output maps are unchanged.
template <typename Scalar>
StateSpaceT<Scalar> build_regularized(const QuadraticProgramT<Scalar>& p,
                                      const TimeConstantsT<Scalar>& tc,
                                      const DisturbanceConfigT<Scalar>& d, Scalar eps) {
  if (!(eps > Scalar(0))) throw ValidationError("build_regularized: eps must be > 0");
  StateSpaceT<Scalar> sys = build_saddle_point(p, tc, d);
  const Index nr = p.n_r();
  const VectorX<Scalar> tni = detail::dual_tau(p, tc).cwiseInverse();
  sys.A.bottomRightCorner(nr, nr) = (-eps * tni).asDiagonal();
  return sys;
}

/// Augmented saddle-point dynamics: the primal block stiffens by
/// rho S^T S and the b-disturbance leaks into the primal equation with
/// gain rho. rho = 0 reproduces the plain system entrywise.
template <typename Scalar>
StateSpaceT<Scalar> build_augmented(const QuadraticProgramT<Scalar>& p,
                                    const TimeConstantsT<Scalar>& tc,
                                    const DisturbanceConfigT<Scalar>& d, Scalar rho) {
  if (rho < Scalar(0)) throw ValidationError("build_augmented: rho must be >= 0");
  StateSpaceT<Scalar> sys = build_saddle_point(p, tc, d);
  const Index nx = p.n_x(), nb = p.n_b();
  const VectorX<Scalar> txi = detail::primal_tau(p, tc).cwiseInverse();
  sys.A.topLeftCorner(nx, nx) -=
      (rho * (txi.asDiagonal() * (p.S.transpose() * p.S))).eval();
  sys.B.topRightCorner(nx, nb) =
      (rho * d.t_b * (txi.asDiagonal() * (p.S.transpose() * p.W_b))).eval();
  return sys;
}

/// Dual ascent on Phi(nu): the primal variable is eliminated, leaving an
/// n_r-dimensional flow driven only by the b-disturbance.
template <typename Scalar>
StateSpaceT<Scalar> build_dual_ascent(const QuadraticProgramT<Scalar>& p,
                                      const TimeConstantsT<Scalar>& tc,
                                      const DisturbanceConfigT<Scalar>& d) {
  require_valid(p);
  detail::check_disturbance(d);
  const Index nx = p.n_x(), nr = p.n_r(), nb = p.n_b();
  const VectorX<Scalar> tni = detail::dual_tau(p, tc).cwiseInverse();
  const VectorX<Scalar> qinv = p.q.cwiseInverse();

  StateSpaceT<Scalar> sys;
  sys.A = (-(tni.asDiagonal() * (p.S * qinv.asDiagonal() * p.S.transpose()))).eval();
  sys.B = (-d.t_b * (tni.asDiagonal() * p.W_b)).eval();
  sys.C = (-(qinv.cwiseSqrt().asDiagonal() * p.S.transpose())).eval();
  sys.state_labels = detail::indexed_labels("nu", nr);
  sys.input_labels = detail::indexed_labels("eta_b", nb);
  sys.output_labels = detail::indexed_labels("z", nx);
  return sys;
}

/// Augmented dual distributed saddle-point (ADD-SP) dynamics over a
/// communication graph on the n_x agents; requires one b-disturbance per
/// agent (n_b = n_x). Each agent carries a local multiplier copy nu^i and
/// each edge a consensus multiplier.
///
/// On a cyclic graph the raw edge coordinates contain the cycle space of
/// E as decoupled zero modes, invisible from both the input and the
/// output. Those coordinates are rotated onto an orthonormal basis of the
/// row space of E, which leaves the input-output map unchanged and makes
/// the state matrix Hurwitz; this path requires a uniform tau_mu.
template <typename Scalar>
StateSpaceT<Scalar> build_add_sp(const QuadraticProgramT<Scalar>& p,
                                 const TimeConstantsT<Scalar>& tc,
                                 const DisturbanceConfigT<Scalar>& d, Scalar rho,
                                 const OrientedGraph& g) {
  require_valid(p);
  detail::check_disturbance(d);
  if (rho < Scalar(0)) throw ValidationError("build_add_sp: rho must be >= 0");
  const Index nx = p.n_x(), nr = p.n_r();
  if (p.n_b() != nx)
    throw ValidationError("build_add_sp: requires n_b = n_x (one disturbance per agent), got n_b=" +
                          std::to_string(p.n_b()) + " n_x=" + std::to_string(nx));
  validate_graph(g);
  if (g.n_nodes != nx)
    throw ValidationError("build_add_sp: graph must have n_x nodes");
  if (!is_connected(g)) throw ValidationError("build_add_sp: graph must be connected");

  const VectorX<Scalar> tau_nu = detail::broadcast(tc.tau_nu, nx, "tau_nu (per node)");
  detail::require_positive_diagonal(tau_nu, "tau_nu");
  VectorX<Scalar> tau_mu = tc.tau_mu.size() == 0
                               ? VectorX<Scalar>::Ones(g.n_edges())
                               : detail::broadcast(tc.tau_mu, g.n_edges(), "tau_mu (per edge)");
  detail::require_positive_diagonal(tau_mu, "tau_mu");

  // Column-block-diagonal stacks of S and W_b.
  MatrixX<Scalar> Sc = MatrixX<Scalar>::Zero(nx * nr, nx);
  MatrixX<Scalar> Wc = MatrixX<Scalar>::Zero(nx * nr, nx);
  for (Index i = 0; i < nx; ++i) {
    Sc.block(i * nr, i, nr, 1) = p.S.col(i);
    Wc.block(i * nr, i, nr, 1) = p.W_b.col(i);
  }

  const MatrixX<Scalar> E = incidence_matrix<Scalar>(g);
  const MatrixX<Scalar> L = E * E.transpose();

  MatrixX<Scalar> E_eff = E;
  bool reduced = false;
  if (!is_acyclic(g)) {
    const bool uniform_mu = (tau_mu.array() == tau_mu(0)).all();
    if (!uniform_mu)
      throw ValidationError(
          "build_add_sp: cyclic graph requires a uniform tau_mu (cycle-space reduction)");
    const Index rank = g.n_nodes - n_components(g);
    E_eff = E * row_space_basis<Scalar>(E, rank);
    tau_mu = VectorX<Scalar>::Constant(rank, tau_mu(0));
    reduced = true;
  }
  const Index me = E_eff.cols();

  VectorX<Scalar> dn(nx * nr);
  for (Index i = 0; i < nx; ++i) dn.segment(i * nr, nr).setConstant(tau_nu(i));
  VectorX<Scalar> dm(me * nr);
  for (Index e = 0; e < me; ++e) dm.segment(e * nr, nr).setConstant(tau_mu(e));

  const MatrixX<Scalar> EkI = detail::kron_identity(E_eff, nr);
  const MatrixX<Scalar> LkI = detail::kron_identity(L, nr);
  const VectorX<Scalar> qinv = p.q.cwiseInverse();

  StateSpaceT<Scalar> sys;
  const Index nv = nx * nr, nm = me * nr;
  sys.A = MatrixX<Scalar>::Zero(nv + nm, nv + nm);
  sys.A.topLeftCorner(nv, nv) =
      (-(dn.cwiseInverse().asDiagonal() *
         (Sc * qinv.asDiagonal() * Sc.transpose() + rho * LkI))).eval();
  sys.A.topRightCorner(nv, nm) = (-(dn.cwiseInverse().asDiagonal() * EkI)).eval();
  sys.A.bottomLeftCorner(nm, nv) =
      (dm.cwiseInverse().asDiagonal() * EkI.transpose()).eval();

  sys.B = MatrixX<Scalar>::Zero(nv + nm, nx);
  sys.B.topRows(nv) = (-d.t_b * (dn.cwiseInverse().asDiagonal() * Wc)).eval();

  sys.C = MatrixX<Scalar>::Zero(nx, nv + nm);
  sys.C.leftCols(nv) = (-(qinv.cwiseSqrt().asDiagonal() * Sc.transpose())).eval();

  sys.state_labels = detail::concat(detail::indexed_labels("nu", nv),
                                    detail::indexed_labels(reduced ? "mu_red" : "mu", nm));
  sys.input_labels = detail::indexed_labels("eta_b", nx);
  sys.output_labels = detail::indexed_labels("z", nx);
  return sys;
}

/// Dispatch on a VariantSpec.
template <typename Scalar>
StateSpaceT<Scalar> build_variant(const QuadraticProgramT<Scalar>& p,
                                  const TimeConstantsT<Scalar>& tc,
                                  const DisturbanceConfigT<Scalar>& d, const VariantSpec& spec) {
  switch (spec.kind) {
    case VariantKind::SaddlePoint: return build_saddle_point(p, tc, d);
    case VariantKind::Regularized: return build_regularized(p, tc, d, Scalar(spec.eps));
    case VariantKind::Augmented: return build_augmented(p, tc, d, Scalar(spec.rho));
    case VariantKind::DualAscent: return build_dual_ascent(p, tc, d);
    case VariantKind::AddSp:
      if (!spec.graph) throw ValidationError("add-sp variant requires a graph");
      return build_add_sp(p, tc, d, Scalar(spec.rho), *spec.graph);
  }
  throw ValidationError("unknown variant");
}

}  // namespace sph2
