#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sph2/formulas.hpp"
#include "sph2/variants.hpp"

using namespace sph2;

namespace {

testing::RandomInstance ra_like_instance(std::mt19937_64& rng, Index n, bool uniform_q) {
  testing::RandomInstance inst;
  std::uniform_real_distribution<double> pos(0.5, 3.0);
  const double q0 = pos(rng);
  inst.p.q.resize(n);
  for (Index i = 0; i < n; ++i) inst.p.q(i) = uniform_q ? q0 : pos(rng);
  inst.p.c = Vector::Zero(n);
  inst.p.S = Matrix::Ones(1, n);
  inst.p.W_b = Matrix::Ones(1, n);
  inst.p.b = Vector::Zero(n);
  inst.tc.tau_x = Vector::Ones(n);
  inst.tc.tau_nu = Vector::Ones(1);
  inst.tc.tau_mu = Vector::Ones(1);
  inst.d = DisturbanceConfig{0.0, 1.0};
  return inst;
}

}  // namespace

TEST_CASE("build_saddle_point") {
  std::mt19937_64 rng(81);
  SUBCASE("dimensions, output weighting, and stability") {
    const auto inst = testing::random_instance(rng);
    const StateSpace sys = build_saddle_point(inst.p, inst.tc, inst.d);
    CHECK(sys.n_states() == inst.p.n_x() + inst.p.n_r());
    CHECK(sys.n_inputs() == inst.p.n_x() + inst.p.n_b());
    CHECK(sys.n_outputs() == inst.p.n_x());
    CHECK(sys.C.leftCols(inst.p.n_x())
              .isApprox(Matrix(inst.p.q.cwiseSqrt().asDiagonal())));
    CHECK(is_hurwitz(sys).hurwitz);
  }
  SUBCASE("H2^2 equals the closed form on random instances") {
    for (int k = 0; k < 20; ++k) {
      const auto inst = testing::random_instance(rng);
      const double formula =
          h2sq_saddle(inst.tc.tau_x, inst.tc.tau_nu, inst.p.W_b, inst.d.t_c, inst.d.t_b);
      CHECK(std::abs(h2_norm_squared(build_saddle_point(inst.p, inst.tc, inst.d)) - formula) <
            1e-8 * (1.0 + formula));
    }
  }
  SUBCASE("zero disturbances give B = 0 and zero norm") {
    auto inst = testing::random_instance(rng);
    inst.d = DisturbanceConfig{0.0, 0.0};
    const StateSpace sys = build_saddle_point(inst.p, inst.tc, inst.d);
    CHECK(sys.B.norm() == 0.0);
    CHECK(h2_norm_squared(sys) == 0.0);
  }
  SUBCASE("T_x = diag(1,2) instance evaluates to 1.25") {
    QuadraticProgram p;
    p.q = Vector::Ones(2);
    p.c = Vector::Zero(2);
    p.S = Matrix::Ones(1, 2);
    p.W_b = Matrix::Ones(1, 1);
    p.b = Vector::Zero(1);
    TimeConstants tc;
    tc.tau_x = Vector{{1.0, 2.0}};
    tc.tau_nu = Vector::Ones(1);
    const StateSpace sys = build_saddle_point(p, tc, DisturbanceConfig{1.0, 1.0});
    CHECK(h2_norm_squared(sys) == doctest::Approx(1.25).epsilon(1e-10));
  }
  SUBCASE("drift vanishes at the equilibrium in original coordinates") {
    const auto inst = testing::random_instance(rng);
    const auto eq = solve_kkt(inst.p);
    const Vector primal =
        -(inst.p.Q() * eq.x_star + inst.p.S.transpose() * eq.nu_star + inst.p.c);
    const Vector dual = inst.p.S * eq.x_star - inst.p.W_b * inst.p.b;
    CHECK(primal.norm() < 1e-10 * (1.0 + eq.x_star.norm()));
    CHECK(dual.norm() < 1e-10 * (1.0 + eq.x_star.norm()));
  }
}

TEST_CASE("build_regularized") {
  std::mt19937_64 rng(83);
  SUBCASE("strictly better than the plain system across an eps grid") {
    for (int k = 0; k < 8; ++k) {
      const auto inst = testing::random_instance(rng);
      const double plain = h2_norm_squared(build_saddle_point(inst.p, inst.tc, inst.d));
      for (double eps = 1e-3; eps <= 1e2 + 1e-9; eps *= 10.0) {
        const double reg = h2_norm_squared(build_regularized(inst.p, inst.tc, inst.d, eps));
        CHECK(reg < plain);
      }
    }
  }
  SUBCASE("tiny eps reproduces the plain norm to 1e-6") {
    const auto inst = testing::random_instance(rng);
    const double plain = h2_norm_squared(build_saddle_point(inst.p, inst.tc, inst.d));
    const double reg = h2_norm_squared(build_regularized(inst.p, inst.tc, inst.d, 1e-12));
    CHECK(std::abs(plain - reg) < 1e-6 * (1.0 + plain));
  }
  SUBCASE("A converges entrywise to the plain A as eps -> 0") {
    const auto inst = testing::random_instance(rng);
    const StateSpace plain = build_saddle_point(inst.p, inst.tc, inst.d);
    const StateSpace reg = build_regularized(inst.p, inst.tc, inst.d, 1e-13);
    CHECK((plain.A - reg.A).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(plain.B.isApprox(reg.B));
    CHECK(plain.C.isApprox(reg.C));
  }
  SUBCASE("single-constraint uniform gap matches the coefficient form") {
    QuadraticProgram p;
    p.q = Vector::Constant(4, 2.0);
    p.c = Vector::Zero(4);
    p.S = Matrix::Ones(1, 4);
    p.W_b = Matrix::Ones(1, 1);
    p.b = Vector::Zero(1);
    const auto tc = TimeConstants::uniform(1.5, 4, 1);
    const DisturbanceConfig d{0.7, 1.2};
    const double plain = h2_norm_squared(build_saddle_point(p, tc, d));
    for (const double eps : {0.05, 1.0, 20.0}) {
      const double reg = h2_norm_squared(build_regularized(p, tc, d, eps));
      const auto c = reg_gap_coefficients(2.0, 1.5, 1.5, p.S.squaredNorm(), eps);
      CHECK(plain - reg ==
            doctest::Approx(c.alpha * d.t_c * d.t_c + c.gamma * d.t_b * d.t_b).epsilon(1e-8));
    }
  }
  SUBCASE("rejects eps <= 0") {
    const auto inst = testing::random_instance(rng);
    CHECK_THROWS_AS(build_regularized(inst.p, inst.tc, inst.d, 0.0), ValidationError);
  }
}

TEST_CASE("build_augmented") {
  std::mt19937_64 rng(87);
  SUBCASE("rho = 0 reproduces the plain system entrywise") {
    const auto inst = testing::random_instance(rng);
    const StateSpace plain = build_saddle_point(inst.p, inst.tc, inst.d);
    const StateSpace aug = build_augmented(inst.p, inst.tc, inst.d, 0.0);
    CHECK((plain.A - aug.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK((plain.B - aug.B).cwiseAbs().maxCoeff() == 0.0);
    CHECK((plain.C - aug.C).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("uniform two-by-one instance at rho = 4 gives 33/18") {
    QuadraticProgram p;
    p.q = Vector::Ones(2);
    p.c = Vector::Zero(2);
    p.S = Matrix::Ones(1, 2);
    p.W_b = Matrix::Identity(1, 1);
    p.b = Vector::Zero(1);
    const auto tc = TimeConstants::uniform(1.0, 2, 1);
    const StateSpace sys = build_augmented(p, tc, DisturbanceConfig{0.0, 1.0}, 4.0);
    CHECK(h2_norm_squared(sys) == doctest::Approx(33.0 / 18.0).epsilon(1e-10));
  }
  SUBCASE("t_b = 0: large rho approaches the reduced primal-only norm") {
    testing::RandomProblemSpec spec;
    spec.uniform = true;
    spec.wb_identity = true;
    auto inst = testing::random_instance(rng, spec);
    // Keep the smallest singular value away from zero so the asymptotic
    // regime is reached at a numerically comfortable rho.
    Eigen::JacobiSVD<Matrix> svd(inst.p.S);
    while (svd.singularValues().minCoeff() < 0.5) {
      inst = testing::random_instance(rng, spec);
      svd.compute(inst.p.S);
    }
    inst.d = DisturbanceConfig{1.0, 0.0};
    const double limit =
        1.0 * (inst.p.n_x() - inst.p.n_r()) / (2.0 * inst.tc.tau_x(0));
    const double far = h2_norm_squared(build_augmented(inst.p, inst.tc, inst.d, 1e5));
    CHECK(far == doctest::Approx(limit).epsilon(5e-3));
  }
  SUBCASE("every built system is Hurwitz across a rho grid") {
    for (int k = 0; k < 6; ++k) {
      const auto inst = testing::random_instance(rng);
      for (const double rho : {0.0, 0.5, 10.0, 1000.0})
        CHECK(is_hurwitz(build_augmented(inst.p, inst.tc, inst.d, rho)).hurwitz);
    }
  }
  SUBCASE("the KKT point also stills the augmented drift") {
    const auto inst = testing::random_instance(rng);
    const auto eq = solve_kkt(inst.p);
    const double rho = 3.7;
    const Vector primal = -(inst.p.Q() * eq.x_star +
                            rho * inst.p.S.transpose() * (inst.p.S * eq.x_star) +
                            inst.p.S.transpose() * eq.nu_star + inst.p.c) +
                          rho * inst.p.S.transpose() * (inst.p.W_b * inst.p.b);
    CHECK(primal.norm() < 1e-9 * (1.0 + eq.x_star.norm() + rho));
  }
}

TEST_CASE("build_dual_ascent") {
  std::mt19937_64 rng(89);
  SUBCASE("dimensions and formula agreement") {
    for (int k = 0; k < 10; ++k) {
      const auto inst = testing::random_instance(rng);
      const StateSpace sys = build_dual_ascent(inst.p, inst.tc, inst.d);
      CHECK(sys.n_states() == inst.p.n_r());
      CHECK(sys.n_outputs() == inst.p.n_x());
      CHECK(is_hurwitz(sys).hurwitz);
      const double formula = h2sq_dual_ascent(inst.tc.tau_nu, inst.p.W_b, inst.d.t_b);
      CHECK(std::abs(h2_norm_squared(sys) - formula) < 1e-8 * (1.0 + formula));
    }
  }
  SUBCASE("W_b = ones(1,4) gives 2.0") {
    auto inst = ra_like_instance(rng, 4, false);
    const StateSpace sys = build_dual_ascent(inst.p, inst.tc, inst.d);
    CHECK(h2_norm_squared(sys) == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("t_b term equals the plain saddle-point t_b term") {
    const auto inst = testing::random_instance(rng);
    auto only_b = inst;
    only_b.d.t_c = 0.0;
    const double dual = h2_norm_squared(build_dual_ascent(inst.p, inst.tc, inst.d));
    const double saddle_b =
        h2_norm_squared(build_saddle_point(only_b.p, only_b.tc, only_b.d));
    CHECK(dual == doctest::Approx(saddle_b).epsilon(1e-8));
  }
}

TEST_CASE("build_add_sp") {
  std::mt19937_64 rng(97);

  SUBCASE("rho = 0 attains the upper bound exactly") {
    for (int k = 0; k < 6; ++k) {
      const Index n = 3 + (k % 4);
      testing::RandomInstance inst;
      std::uniform_real_distribution<double> pos(0.5, 3.0);
      std::normal_distribution<double> normal(0.0, 1.0);
      const Index nr = 1 + (k % 2);
      inst.p.q.resize(n);
      for (Index i = 0; i < n; ++i) inst.p.q(i) = pos(rng);
      inst.p.c = Vector::Zero(n);
      inst.p.S.resize(nr, n);
      inst.p.W_b.resize(nr, n);
      for (Index i = 0; i < nr; ++i)
        for (Index j = 0; j < n; ++j) {
          inst.p.S(i, j) = normal(rng);
          inst.p.W_b(i, j) = normal(rng);
        }
      if (!sph2::detail::has_full_row_rank(inst.p.S, 1e-6) ||
          !sph2::detail::has_full_row_rank(inst.p.W_b, 1e-6))
        continue;
      inst.p.b = Vector::Zero(n);
      inst.tc.tau_x = Vector::Ones(n);
      inst.tc.tau_nu = Vector::Constant(1, pos(rng));
      inst.tc.tau_mu = Vector::Constant(1, pos(rng));
      inst.d = DisturbanceConfig{0.0, 1.3};
      // Multi-row S needs a tree with simple Laplacian spectrum: on graphs
      // with repeated eigenvalues (stars), n_r >= 2 admits undamped
      // consensus-orthogonal oscillations and A is only marginally stable.
      const auto g = nr == 1 ? testing::random_tree(rng, n) : OrientedGraph::line(n);
      const StateSpace sys = build_add_sp(inst.p, inst.tc, inst.d, 0.0, g);
      CHECK(sys.n_states() == n * nr + g.n_edges() * nr);
      CHECK(is_hurwitz(sys).hurwitz);
      CHECK(is_observable(sys));
      const double bound =
          h2sq_add_bound(inst.p.W_b.squaredNorm(), inst.tc.tau_nu(0), inst.d.t_b);
      CHECK(h2_norm_squared(sys) == doctest::Approx(bound).epsilon(1e-9));

      // Any rho > 0 must sit strictly below the bound.
      for (const double rho : {0.1, 1.0, 10.0}) {
        const double val = h2_norm_squared(build_add_sp(inst.p, inst.tc, inst.d, rho, g));
        CHECK(val < bound - 1e-10);
      }
    }
  }

  SUBCASE("uniform RA shape on the path graph matches the spectral closed form") {
    auto inst = ra_like_instance(rng, 4, true);
    const auto g = OrientedGraph::line(4);
    const Vector spectrum = laplacian_spectrum(g);
    for (const double rho : {0.0, 0.3, 1.0, 7.0}) {
      const double numeric = h2_norm_squared(build_add_sp(inst.p, inst.tc, inst.d, rho, g));
      const double formula = h2sq_ra_dist_dual_uniform(inst.p.q(0), 1.0, spectrum, rho);
      CHECK(std::abs(numeric - formula) < 1e-8 * (1.0 + formula));
    }
  }

  SUBCASE("orientation invariance of the H2 value") {
    auto inst = ra_like_instance(rng, 5, false);
    const auto g = testing::random_tree(rng, 5);
    const double base = h2_norm_squared(build_add_sp(inst.p, inst.tc, inst.d, 0.8, g));
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      OrientedGraph flipped = g;
      std::swap(flipped.edges[e].first, flipped.edges[e].second);
      const double val = h2_norm_squared(build_add_sp(inst.p, inst.tc, inst.d, 0.8, flipped));
      CHECK(std::abs(val - base) < 1e-9 * (1.0 + base));
    }
  }

  SUBCASE("cyclic graphs: reduced system is Hurwitz with a finite norm") {
    auto inst = ra_like_instance(rng, 4, false);
    for (const auto& g : {OrientedGraph::ring(4), OrientedGraph::complete(4)}) {
      const StateSpace sys = build_add_sp(inst.p, inst.tc, inst.d, 1.0, g);
      const Index rank = g.n_nodes - 1;
      CHECK(sys.n_states() == 4 + rank);  // n_r = 1
      CHECK(is_hurwitz(sys).hurwitz);
      const double val = h2_norm_squared(sys);
      CHECK(std::isfinite(val));
      const double bound = h2sq_add_bound(inst.p.W_b.squaredNorm(), 1.0, inst.d.t_b);
      CHECK(val < bound);
    }
  }

  SUBCASE("unreduced cyclic state matrix is not Hurwitz (the reduction is needed)") {
    auto inst = ra_like_instance(rng, 4, false);
    const auto ring = OrientedGraph::ring(4);
    const Matrix E = incidence_matrix(ring);
    StateSpace raw;
    const Index n = 4, m = 4;
    raw.A = Matrix::Zero(n + m, n + m);
    raw.A.topLeftCorner(n, n) =
        -Matrix(inst.p.q.cwiseInverse().asDiagonal()) - 1.0 * (E * E.transpose());
    raw.A.topRightCorner(n, m) = -E;
    raw.A.bottomLeftCorner(m, n) = E.transpose();
    raw.B = Matrix::Zero(n + m, n);
    raw.C = Matrix::Zero(n, n + m);
    CHECK_FALSE(is_hurwitz(raw).hurwitz);
  }

  SUBCASE("input validation") {
    auto inst = ra_like_instance(rng, 4, false);
    const auto g = OrientedGraph::line(4);
    SUBCASE("n_b != n_x is rejected") {
      auto bad = inst;
      bad.p.W_b = Matrix::Ones(1, 2);
      bad.p.b = Vector::Zero(2);
      CHECK_THROWS_AS(build_add_sp(bad.p, bad.tc, bad.d, 0.0, g), ValidationError);
    }
    SUBCASE("disconnected graph is rejected") {
      OrientedGraph disconnected{4, {{0, 1}, {2, 3}}};
      CHECK_THROWS_AS(build_add_sp(inst.p, inst.tc, inst.d, 0.0, disconnected),
                      ValidationError);
    }
    SUBCASE("heterogeneous per-node tau_nu is accepted and stable") {
      auto het = inst;
      het.tc.tau_nu = Vector{{1.0, 2.0, 0.5, 1.5}};
      const StateSpace sys = build_add_sp(het.p, het.tc, het.d, 0.5, g);
      CHECK(is_hurwitz(sys).hurwitz);
    }
    SUBCASE("cyclic graph with heterogeneous tau_mu is rejected") {
      auto het = inst;
      het.tc.tau_mu = Vector{{1.0, 2.0, 0.5, 1.5}};
      CHECK_THROWS_AS(build_add_sp(het.p, het.tc, het.d, 0.5, OrientedGraph::ring(4)),
                      ValidationError);
    }
  }
}

TEST_CASE("build_variant dispatch") {
  std::mt19937_64 rng(99);
  const auto inst = testing::random_instance(rng);
  VariantSpec spec;
  spec.kind = VariantKind::Regularized;
  spec.eps = 0.5;
  const StateSpace reg = build_variant(inst.p, inst.tc, inst.d, spec);
  CHECK(reg.A.isApprox(build_regularized(inst.p, inst.tc, inst.d, 0.5).A));
  spec.kind = VariantKind::AddSp;
  CHECK_THROWS_AS(build_variant(inst.p, inst.tc, inst.d, spec), ValidationError);
}
