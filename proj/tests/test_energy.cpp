#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "deadcore/energy.hpp"
#include "deadcore/grid.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace deadcore;

TEST_CASE("nonlinearity closed forms and parameter guards") {
  Nonlinearity nl = make_nonlinearity(1.5);
  CHECK(nl.f(4.0) == doctest::Approx(2.0));
  CHECK(nl.f(-4.0) == doctest::Approx(-2.0));
  CHECK(nl.f(0.0) == 0.0);
  CHECK(nl.potential(4.0) == doctest::Approx(std::pow(4.0, 1.5) / 1.5));
  CHECK(nl.potential(-4.0) == doctest::Approx(std::pow(4.0, 1.5) / 1.5));

  Nonlinearity sm = make_nonlinearity(1.0, 1e-3);
  CHECK(sm.f(1.0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(sm.f(-1.0) == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(std::fabs(sm.f(0.0)) == 0.0);
  CHECK(sm.potential(0.0) == 0.0);  // the eps offset keeps F(0) = 0

  CHECK_THROWS(make_nonlinearity(0.5));
  CHECK_THROWS(make_nonlinearity(2.0));
  CHECK_THROWS(make_nonlinearity(1.0, -1e-3));
}

TEST_CASE("smoothed potential differentiates back to f") {
  for (double eps : {1e-2, 1e-4}) {
    Nonlinearity nl = make_nonlinearity(1.0, eps);
    for (double t : {-0.7, -1e-3, 1e-5, 0.2, 3.0}) {
      // the curvature of F scales like 1/eps^2 inside the smoothing core, so
      // the probe step must shrink with eps to keep the truncation term down
      double step = 1e-3 * std::max(eps, std::fabs(t));
      double fd = (nl.potential(t + step) - nl.potential(t - step)) / (2.0 * step);
      CHECK(fd == doctest::Approx(nl.f(t)).epsilon(1e-6));
    }
  }
  for (double p : {1.25, 1.5, 1.75}) {
    Nonlinearity nl = make_nonlinearity(p);
    for (double t : {-2.0, -0.3, 0.4, 1.7}) {
      double step = 1e-6;
      double fd = (nl.potential(t + step) - nl.potential(t - step)) / (2.0 * step);
      CHECK(fd == doctest::Approx(nl.f(t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("energy on a hand-checked field") {
  // u spike of height 1 at the center of (-1,1), weight +1 everywhere inside
  Grid g{1, 5, 1.0};  // h = 0.5, nodes -1,-0.5,0,0.5,1
  Field u(g);
  u[2] = 1.0;
  std::vector<double> w(u.size(), 1.0);
  Nonlinearity nl = make_nonlinearity(1.5);
  EnergyReport rep = energy_weighted(u, w, nl);
  // dirichlet: 2 edges with slope 2 -> 0.5 * sum (du)^2/h = 0.5*(1/0.5+1/0.5) = 2
  CHECK(rep.dirichlet == doctest::Approx(2.0));
  CHECK(rep.potential == doctest::Approx(0.5 * (1.0 / 1.5)));
  CHECK(rep.value == doctest::Approx(rep.dirichlet - rep.potential));
}

TEST_CASE("assembled gradient matches finite differences") {
  std::mt19937_64 rng(42);
  for (int dim : {1, 2}) {
    Grid g = dim == 1 ? make_grid(1, 65, 1.0) : make_grid(2, 17, 1.0);
    std::vector<double> w = interface_weights(g, make_ball(dim, Point{0, 0}, 0.6));
    for (double p : {1.25, 1.5, 1.75}) {
      double defect = oracles::gradient_fd_defect(g, w, make_nonlinearity(p), rng);
      CHECK(defect <= 1e-5);
    }
    double defect = oracles::gradient_fd_defect(g, w, make_nonlinearity(1.0, 1e-3), rng);
    CHECK(defect <= 1e-5);
  }
}

TEST_CASE("gradient refuses the nonsmooth limit") {
  Grid g = make_grid(1, 33, 1.0);
  Field u(g);
  std::vector<double> w(u.size(), 1.0);
  CHECK_THROWS(energy_gradient_weighted(u, w, make_nonlinearity(1.0, 0.0)));
}

TEST_CASE("energy via q field agrees with unit weights") {
  Grid g = make_grid(1, 129, 2.0);
  Shape omega = oracles::unit_interval();
  QField q = sample_q(g, omega);
  std::mt19937_64 rng(5);
  Field u = oracles::random_interior_field(g, rng);
  Nonlinearity nl = make_nonlinearity(1.5);

  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<double>(q.q[i]);
  EnergyReport a = energy(u, q, nl);
  EnergyReport b = energy_weighted(u, w, nl);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
  CHECK(a.residual_sup == doctest::Approx(b.residual_sup).epsilon(1e-14));
}

TEST_CASE("identity defect vanishes only at critical points") {
  // -u'' = w f(u) is false for a generic field, so the defect is visible
  Grid g = make_grid(1, 65, 1.0);
  std::mt19937_64 rng(9);
  Field u = oracles::random_interior_field(g, rng);
  std::vector<double> w(u.size(), 1.0);
  EnergyReport rep = energy_weighted(u, w, make_nonlinearity(1.5));
  CHECK(rep.identity_defect > 1e-3);
}
