#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sph2/resource_allocation.hpp"

using namespace sph2;

namespace {

ResourceAllocationProblem make_ra(Vector q, OrientedGraph g) {
  ResourceAllocationProblem ra;
  ra.q = std::move(q);
  ra.c = Vector::Zero(ra.q.size());
  ra.d = Vector::Zero(ra.q.size());
  ra.graph = std::move(g);
  return ra;
}

ResourceAllocationProblem heterogeneous_ra() {
  return make_ra(Vector{{4.0, 25.0}}, OrientedGraph::line(2));
}

}  // namespace

TEST_CASE("all four formulations agree at rho = 0") {
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> pos(0.5, 5.0);
  for (int k = 0; k < 8; ++k) {
    const Index n = 2 + (k % 4);
    Vector q(n);
    for (Index i = 0; i < n; ++i) q(i) = pos(rng);
    ResourceAllocationProblem ra = make_ra(q, testing::random_tree(rng, n));
    ra.tau_nu = pos(rng);
    const double expected = static_cast<double>(n) / (2.0 * ra.tau_nu);
    const double cent = h2_norm_squared(build_ra_cent(ra, 0.0));
    const double dist = h2_norm_squared(build_ra_dist(ra, 0.0));
    const double cent_dual = h2_norm_squared(build_ra_cent_dual(ra));
    const double dist_dual = h2_norm_squared(build_ra_dist_dual(ra, 0.0));
    for (const double v : {cent, dist, cent_dual, dist_dual})
      CHECK(v == doctest::Approx(expected).epsilon(1e-9));
    CHECK(std::abs(cent - dist) < 1e-9 * (1.0 + cent));
    CHECK(std::abs(cent - cent_dual) < 1e-9 * (1.0 + cent));
    CHECK(std::abs(cent - dist_dual) < 1e-9 * (1.0 + cent));
  }
}

TEST_CASE("RA_cent") {
  const auto ra = heterogeneous_ra();
  const double at0 = h2_norm_squared(build_ra_cent(ra, 0.0));
  CHECK(at0 == doctest::Approx(1.0).epsilon(1e-10));
  SUBCASE("augmentation worsens performance at rho = 100") {
    CHECK(h2_norm_squared(build_ra_cent(ra, 100.0)) > at0);
  }
  SUBCASE("unbounded growth") {
    CHECK(h2_norm_squared(build_ra_cent(ra, 1e3)) > 10.0 * at0);
  }
  SUBCASE("inputs are the n demand channels") {
    const StateSpace sys = build_ra_cent(ra, 2.0);
    CHECK(sys.n_inputs() == 2);
    CHECK(sys.n_states() == 3);
  }
  SUBCASE("uniform q: matches the hand-derived closed value at rho > 0") {
    // With S = W_b = ones^T the augmented machinery collapses to
    //   n q / (2 tau_nu (q + rho n)) + rho^2 q n^2 / (2 tau_x (q + rho n)).
    for (const double q : {1.0, 3.0}) {
      for (const Index n : {Index{2}, Index{4}}) {
        auto uni = make_ra(Vector::Constant(n, q), OrientedGraph::line(n));
        uni.tau_x = 1.3;
        uni.tau_nu = 0.8;
        for (const double rho : {0.5, 2.0, 100.0}) {
          const double nn = static_cast<double>(n);
          const double expected = nn * q / (2.0 * uni.tau_nu * (q + rho * nn)) +
                                  rho * rho * q * nn * nn /
                                      (2.0 * uni.tau_x * (q + rho * nn));
          const double numeric = h2_norm_squared(build_ra_cent(uni, rho));
          CHECK(numeric == doctest::Approx(expected).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("RA_dist") {
  const auto ra = heterogeneous_ra();
  SUBCASE("rho = 0 equals n/(2 tau_nu) and matches RA_cent to 1e-9") {
    const double dist = h2_norm_squared(build_ra_dist(ra, 0.0));
    const double cent = h2_norm_squared(build_ra_cent(ra, 0.0));
    CHECK(dist == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(dist - cent) < 1e-9);
  }
  SUBCASE("state layout is (x, delta, nu)") {
    const StateSpace sys = build_ra_dist(ra, 1.0);
    CHECK(sys.n_states() == 2 + 1 + 2);
    CHECK(is_hurwitz(sys).hurwitz);
  }
  SUBCASE("grows without bound") {
    const double at0 = h2_norm_squared(build_ra_dist(ra, 0.0));
    CHECK(h2_norm_squared(build_ra_dist(ra, 1e3)) > 10.0 * at0);
  }
  SUBCASE("cyclic graphs are rejected") {
    const auto ring_ra = make_ra(Vector::Ones(4), OrientedGraph::ring(4));
    CHECK_THROWS_AS(build_ra_dist(ring_ra, 0.0), ValidationError);
  }
}

TEST_CASE("RA_cent_dual") {
  auto ra = make_ra(Vector::Ones(4), OrientedGraph::line(4));
  SUBCASE("n = 4 with unit parameters gives 2.0") {
    CHECK(h2_norm_squared(build_ra_cent_dual(ra)) == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("t_b = 0 gives zero") {
    CHECK(h2_norm_squared(build_ra_cent_dual(ra, DisturbanceConfig{0.0, 0.0})) == 0.0);
  }
  SUBCASE("matches the dual-ascent closed form") {
    ra.q = Vector{{4.0, 1.0, 9.0, 2.0}};
    ra.tau_nu = 1.7;
    const double numeric = h2_norm_squared(build_ra_cent_dual(ra));
    const double formula = h2sq_dual_ascent(Vector::Constant(1, ra.tau_nu).eval(),
                                            Matrix::Ones(1, 4).eval(), 1.0);
    CHECK(numeric == doctest::Approx(formula).epsilon(1e-10));
  }
  SUBCASE("t_c disturbances are rejected") {
    CHECK_THROWS_AS(build_ra_cent_dual(ra, DisturbanceConfig{0.5, 1.0}), ValidationError);
  }
}

TEST_CASE("RA_dist_dual") {
  SUBCASE("rho = 0 gives n/(2 tau_nu); rho = 1e4 lands within 2% of 1/(2 tau_nu)") {
    const auto ra = make_ra(Vector{{4.0, 25.0, 16.0, 49.0}}, OrientedGraph::line(4));
    CHECK(h2_norm_squared(build_ra_dist_dual(ra, 0.0)) == doctest::Approx(2.0).epsilon(1e-9));
    const double far = h2_norm_squared(build_ra_dist_dual(ra, 1e4));
    CHECK(std::abs(far - 0.5) < 0.02 * 0.5);
  }
  SUBCASE("uniform q on trees matches the spectral closed form over a rho grid") {
    std::mt19937_64 rng(211);
    for (const double q : {1.0, 0.4, 3.0}) {
      const Index n = 5;
      auto ra = make_ra(Vector::Constant(n, q), testing::random_tree(rng, n));
      ra.tau_nu = 1.3;
      const Vector spectrum = laplacian_spectrum(ra.graph);
      for (const double rho : {0.0, 0.2, 1.0, 10.0}) {
        const double numeric = h2_norm_squared(build_ra_dist_dual(ra, rho));
        const double formula = h2sq_ra_dist_dual_uniform(q, ra.tau_nu, spectrum, rho);
        CHECK(std::abs(numeric - formula) < 1e-8 * (1.0 + formula));
      }
    }
  }
  SUBCASE("connectivity ordering at fixed rho (line >= ring >= complete)") {
    for (const double rho : {0.5, 2.0}) {
      const double line = h2_norm_squared(
          build_ra_dist_dual(make_ra(Vector::Ones(4), OrientedGraph::line(4)), rho));
      const double ring = h2_norm_squared(
          build_ra_dist_dual(make_ra(Vector::Ones(4), OrientedGraph::ring(4)), rho));
      const double complete = h2_norm_squared(
          build_ra_dist_dual(make_ra(Vector::Ones(4), OrientedGraph::complete(4)), rho));
      CHECK(complete <= ring + 1e-12);
      CHECK(ring <= line + 1e-12);
    }
  }
  SUBCASE("cyclic graphs go through the reduction and stay Hurwitz") {
    const auto ra = make_ra(Vector{{4.0, 25.0, 16.0, 49.0}}, OrientedGraph::ring(4));
    const StateSpace sys = build_ra_dist_dual(ra, 100.0);
    CHECK(is_hurwitz(sys).hurwitz);
    CHECK(std::isfinite(h2_norm_squared(sys)));
  }
}

TEST_CASE("x-marginal equivalence: outputs all weight (x - x*) by Q^(1/2)") {
  // At rho = 0 the four squared norms coincide for heterogeneous q, which
  // pins the shared output convention.
  const auto ra = make_ra(Vector{{0.3, 7.0, 2.0}}, OrientedGraph::line(3));
  const double a = h2_norm_squared(build_ra_cent(ra, 0.0));
  const double b = h2_norm_squared(build_ra_dist(ra, 0.0));
  const double c = h2_norm_squared(build_ra_cent_dual(ra));
  const double d = h2_norm_squared(build_ra_dist_dual(ra, 0.0));
  CHECK(a == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(std::abs(a - b) < 1e-9);
  CHECK(std::abs(a - c) < 1e-9);
  CHECK(std::abs(a - d) < 1e-9);
}

TEST_CASE("table1_report") {
  const auto ra = make_ra(Vector::Ones(4), OrientedGraph::line(4));
  const std::vector<double> grid = {0.0, 0.5, 2.0, 50.0};
  const Table1Report rep = table1_report(ra, grid);

  SUBCASE("row layout: formulation-major, grid order") {
    REQUIRE(rep.rows.size() == 16);
    CHECK(rep.rows[0].formulation == "RA_cent");
    CHECK(rep.rows[0].rho == 0.0);
    CHECK(rep.rows[5].formulation == "RA_dist");
    CHECK(rep.rows[5].rho == 0.5);
  }
  SUBCASE("rho = 0 column all equal n/(2 tau_nu) with formulas attached") {
    for (std::size_t f = 0; f < 4; ++f) {
      const auto& row = rep.rows[f * grid.size()];
      CHECK(row.h2sq_numeric == doctest::Approx(2.0).epsilon(1e-9));
      REQUIRE(row.h2sq_formula.has_value());
      CHECK(*row.h2sq_formula == doctest::Approx(2.0).epsilon(1e-12));
    }
  }
  SUBCASE("RA_dist_dual column is nonincreasing; cent/dist eventually increase") {
    CHECK(rep.trend.at("RA_dist_dual") == "nonincreasing");
    const auto& cent0 = rep.rows[0];
    const auto& cent_last = rep.rows[grid.size() - 1];
    CHECK(cent_last.h2sq_numeric > cent0.h2sq_numeric);
  }
  SUBCASE("RA_cent_dual carries its formula at every rho and never moves") {
    for (std::size_t r = 0; r < grid.size(); ++r) {
      const auto& row = rep.rows[2 * grid.size() + r];
      CHECK(row.formulation == "RA_cent_dual");
      REQUIRE(row.h2sq_formula.has_value());
      CHECK(row.h2sq_numeric == doctest::Approx(2.0).epsilon(1e-9));
    }
    CHECK(rep.trend.at("RA_cent_dual") == "constant");
  }
  SUBCASE("RA_dist_dual formula column matches numeric on the uniform tree") {
    for (std::size_t r = 0; r < grid.size(); ++r) {
      const auto& row = rep.rows[3 * grid.size() + r];
      REQUIRE(row.h2sq_formula.has_value());
      CHECK(std::abs(row.h2sq_numeric - *row.h2sq_formula) <
            1e-8 * (1.0 + row.h2sq_numeric));
    }
  }
  SUBCASE("heterogeneous q drops the rho > 0 closed form for RA_dist_dual") {
    const auto het = make_ra(Vector{{1.0, 2.0, 3.0, 4.0}}, OrientedGraph::line(4));
    const Table1Report r2 = table1_report(het, {0.0, 1.0});
    CHECK_FALSE(r2.rows[3 * 2 + 1].h2sq_formula.has_value());
    bool noted = false;
    for (const auto& n : r2.notes) noted |= n.find("not uniform") != std::string::npos;
    CHECK(noted);
  }
  SUBCASE("empty grid is rejected") {
    CHECK_THROWS_AS(table1_report(ra, {}), ValidationError);
  }
  SUBCASE("exploratory t_c runs are flagged and skip the dual forms") {
    const Table1Report r3 = table1_report(ra, {0.0}, DisturbanceConfig{0.5, 1.0});
    CHECK(r3.rows.size() == 2);
    bool noted = false;
    for (const auto& n : r3.notes) noted |= n.find("outside") != std::string::npos;
    CHECK(noted);
  }
}

TEST_CASE("validate_ra rejects malformed instances") {
  auto ra = heterogeneous_ra();
  ra.q(0) = -1.0;
  CHECK_THROWS_AS(validate_ra(ra), ValidationError);
  ra = heterogeneous_ra();
  ra.graph = OrientedGraph{2, {}};
  CHECK_THROWS_AS(validate_ra(ra), ValidationError);
}
