#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "deadcore/overdetermined.hpp"
#include "deadcore/radial.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace deadcore;

TEST_CASE("outer set of an interval is the double interval") {
  Grid g = make_grid(1, 513, 3.0);
  OuterSetReport rep = outer_set_solve(g, oracles::unit_interval());
  REQUIRE(rep.ground.converged);
  CHECK(rep.contains_domain);
  const double h = rep.ground.u.grid.h();
  CHECK(std::fabs(rep.u_radius_refined - 2.0) <= h);
  CHECK(std::fabs(rep.support.measure_refined - 4.0) <= 0.005 * 4.0);
  CHECK(rep.flux.pass);
  CHECK(rep.flux.band_nodes > 0);
  CHECK(rep.flux.boundary_value_max <= rep.flux.value_tol);
  CHECK(rep.flux.boundary_grad_max <= rep.flux.grad_tol);
}

TEST_CASE("outer set of a disc is the root-two disc") {
  Grid g = make_grid(2, 385, 3.0);
  OuterSetReport rep = outer_set_solve(g, oracles::unit_disc());
  REQUIRE(rep.ground.converged);
  CHECK(rep.contains_domain);
  const double h = rep.ground.u.grid.h();
  CHECK(std::fabs(rep.u_radius_refined - std::sqrt(2.0)) <= h);
  const double target = 2.0 * std::numbers::pi;  // twice the unit disc
  CHECK(std::fabs(rep.support.measure_refined - target) <= 0.02 * target);
  CHECK(rep.flux.pass);
}

TEST_CASE("outer set of an annulus doubles its area") {
  Grid g = make_grid(2, 385, 3.0);
  Shape ring = make_annulus(2, Point{0.0, 0.0}, 0.6, 1.0);
  OuterSetReport rep = outer_set_solve(g, ring);
  REQUIRE(rep.ground.converged);
  CHECK(rep.contains_domain);
  const double target = 2.0 * std::numbers::pi * (1.0 - 0.36);
  CHECK(std::fabs(rep.support.measure_refined - target) <= 0.02 * target);
  CHECK(rep.flux.pass);
}

TEST_CASE("flux check rejects a profile with a kinked contact") {
  // a hat lands on zero with slope one: the value condition holds but the
  // normal derivative does not vanish at the free boundary
  Grid g = make_grid(1, 513, 3.0);
  Field hat(g);
  for (std::size_t i = 0; i < hat.size(); ++i) {
    double x = std::fabs(g.point(i).x);
    hat[i] = x < 1.0 ? 1.0 - x : 0.0;
  }
  SupportInfo info = extract_support(hat);
  FluxReport rep = flux_check(hat, info);
  CHECK(!rep.pass);
  CHECK(rep.boundary_grad_max > rep.grad_tol);
}

TEST_CASE("flux check accepts the explicit compact profile") {
  Grid g = make_grid(1, 513, 3.0);
  ExplicitW w = explicit_w(1);
  Field u = sample_radial(g, Point{0, 0}, [&](double r) { return w.value(r); });
  FluxReport rep = flux_check(u, extract_support(u));
  CHECK(rep.pass);
}

TEST_CASE("recovering the inclusion from the outer set is reported open") {
  CHECK(inner_set_status().find("no general construction") != std::string::npos);
}

TEST_CASE("outer solves reject domains that cannot fit") {
  Grid g = make_grid(1, 65, 2.0);
  CHECK_THROWS(outer_set_solve(g, make_ball(1, Point{0.0, 0.0}, 3.0)));
}
