#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "deadcore/nodal.hpp"
#include "deadcore/radial.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace deadcore;

TEST_CASE("mountain pass on the interval lands on the even two-bump saddle") {
  Grid g = make_grid(1, 257, 3.0);
  Shape omega = oracles::unit_interval();
  Nonlinearity nl = make_nonlinearity(1.0);
  NodalRecord mp = mountain_pass(g, omega, nl);
  REQUIRE(mp.sol.converged);
  CHECK(mp.kind == NodalKind::mountain_pass);
  CHECK(mp.sol.classification == FieldClass::sign_changing);
  CHECK(mp.positive_mass > 0.0);
  CHECK(mp.negative_mass > 0.0);
  CHECK(mp.path_rounds > 0);

  ExplicitNodal1D prof = explicit_nodal_1d();
  CHECK(std::fabs(mp.level - prof.energy()) <= 1e-2);
  double dist = oracles::sup_dist_either_sign(mp.sol.u, [&](double x) { return prof.value(x); });
  CHECK(dist <= 1e-2);

  // strictly between the ground level and zero
  SolutionRecord ground = solve_ground_state(g, omega, nl);
  CHECK(ground.report.value < mp.level);
  CHECK(mp.level < 0.0);
}

TEST_CASE("least-energy nodal state is the odd profile") {
  Grid g = make_grid(1, 257, 3.0);
  Shape omega = oracles::unit_interval();
  Nonlinearity nl = make_nonlinearity(1.0);
  NodalRecord le = least_energy_nodal(g, omega, nl);
  REQUIRE(le.sol.converged);
  CHECK(le.sol.classification == FieldClass::sign_changing);

  // odd closed form: (2 - sqrt 2) x - x^2/2 inside, a parabola landing flat
  // at sqrt 2, zero beyond, extended oddly; its energy is the nodal floor
  const double s2 = std::sqrt(2.0);
  auto odd = [&](double x) {
    double t = std::fabs(x);
    double v = t < 1.0 ? (2.0 - s2) * t - 0.5 * t * t
               : t < s2 ? 0.5 * (t - s2) * (t - s2)
                        : 0.0;
    return x < 0.0 ? -v : v;
  };
  double e_odd = 0.0;
  {
    // I = dirichlet/2 - int q |u|: evaluate by fine quadrature of the closed form
    const int m = 200000;
    const double a = 2.0, dx = 2.0 * a / m;
    for (int i = 0; i < m; ++i) {
      double x = -a + (i + 0.5) * dx;
      double t = std::fabs(x);
      double du = t < 1.0 ? (2.0 - s2) - t : t < s2 ? (t - s2) : 0.0;
      double q = t < 1.0 ? 1.0 : -1.0;
      e_odd += (0.5 * du * du - q * std::fabs(odd(x))) * dx;
    }
  }
  CHECK(e_odd == doctest::Approx(-0.114382).epsilon(1e-4));  // frozen reference
  CHECK(std::fabs(le.level - e_odd) <= 1e-2);
  double dist = oracles::sup_dist_either_sign(le.sol.u, odd);
  CHECK(dist <= 1e-2);

  // the even saddle sits strictly above the odd minimizer
  CHECK(le.level < explicit_nodal_1d().energy() - 1e-2);
}

TEST_CASE("equivariant solve returns an exactly odd field") {
  Grid g = make_grid(1, 257, 3.0);
  Shape omega = oracles::unit_interval();
  NodalRecord eq = equivariant_solve(g, omega, make_nonlinearity(1.0), Equivariance::odd_reflection);
  REQUIRE(eq.sol.converged);
  CHECK(eq.kind == NodalKind::equivariant);
  CHECK(eq.level < 0.0);
  const Field& u = eq.sol.u;
  for (int i = 0; i < g.n; ++i) {
    double defect = u[static_cast<std::size_t>(i)] +
                    u[static_cast<std::size_t>(g.n - 1 - i)];
    CHECK(std::fabs(defect) <= 1e-12);
  }
  // coincides with the unconstrained nodal floor on a symmetric interval
  NodalRecord le = least_energy_nodal(g, omega, make_nonlinearity(1.0));
  CHECK(std::fabs(eq.level - le.level) <= 1e-3);
}

TEST_CASE("equivariant solve under the half turn in 2d") {
  Grid g = make_grid(2, 129, 2.5);
  Shape omega = oracles::unit_disc();
  NodalRecord eq = equivariant_solve(g, omega, make_nonlinearity(1.5), Equivariance::half_turn);
  REQUIRE(eq.sol.converged);
  CHECK(eq.level < 0.0);
  CHECK(eq.sol.classification == FieldClass::sign_changing);
  const Field& u = eq.sol.u;
  const int n = g.n;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double defect = u[g.index(ix, iy)] + u[g.index(n - 1 - ix, n - 1 - iy)];
      CHECK(std::fabs(defect) <= 1e-12);
    }
}

TEST_CASE("a three-image string still climbs") {
  Grid g = make_grid(1, 129, 3.0);
  PathConfig path;
  path.images = 3;
  path.max_rounds = 6000;
  NodalRecord mp = mountain_pass(g, oracles::unit_interval(), make_nonlinearity(1.0), {}, path);
  CHECK(mp.sol.converged);
  CHECK(std::fabs(mp.level - explicit_nodal_1d().energy()) <= 5e-2);
}

TEST_CASE("nodal guards") {
  Grid g = make_grid(1, 65, 3.0);
  PathConfig bad;
  bad.images = 2;
  CHECK_THROWS(mountain_pass(g, oracles::unit_interval(), make_nonlinearity(1.0), {}, bad));
  CHECK_THROWS(
      equivariant_solve(g, oracles::unit_interval(), make_nonlinearity(1.0), Equivariance::half_turn));
  // the odd projector needs a mirror-symmetric domain
  Shape off = make_ball(1, Point{0.4, 0.0}, 1.0);
  CHECK_THROWS(equivariant_solve(g, off, make_nonlinearity(1.0), Equivariance::odd_reflection));
}

TEST_CASE("dumbbell rows compare levels at a coarse resolution") {
  DumbbellReport rep = dumbbell_experiment({0.4}, 1.5, 1.0 / 16.0);
  REQUIRE(rep.rows.size() == 1);
  const DumbbellRow& r = rep.rows[0];
  CHECK(r.delta == doctest::Approx(0.4));
  CHECK(r.mu < 0.0);
  CHECK(r.mu < rep.mu_limit);       // the corridor can only lower the minimum
  CHECK(r.nodal_level < 0.0);
  CHECK(r.mu < r.nodal_level);      // ground below any sign-changing level
  CHECK(r.margin == doctest::Approx(r.mp_level - r.nodal_level));
  CHECK(rep.csv.rfind("delta,", 0) == 0);
}
