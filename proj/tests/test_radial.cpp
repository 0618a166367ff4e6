#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "deadcore/radial.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace deadcore;

namespace {
// second derivative of a closed form from its analytic first derivative
double dderiv(const std::function<double(double)>& d, double r) {
  const double s = 1e-6;
  return (d(r + s) - d(r - s)) / (2.0 * s);
}
}  // namespace

TEST_CASE("explicit compact profile: frozen constants") {
  ExplicitW w1 = explicit_w(1);
  CHECK(w1.a == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w1.R == doctest::Approx(2.0).epsilon(1e-15));

  ExplicitW w2 = explicit_w(2);
  CHECK(w2.a == doctest::Approx(0.34657359027997264).epsilon(1e-15));  // (ln 2)/2
  CHECK(w2.R == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  ExplicitW w3 = explicit_w(3);
  CHECK(w3.a == doctest::Approx(0.20629947401590026).epsilon(1e-15));  // 1 - 2^{-1/3}
  CHECK(w3.R == doctest::Approx(std::cbrt(2.0)).epsilon(1e-15));
}

TEST_CASE("explicit compact profile: C1 gluing and flat contact") {
  for (int N : {1, 2, 3}) {
    ExplicitW w = explicit_w(N);
    CHECK(std::fabs(w.inner(1.0) - w.middle(1.0)) <= 1e-14);
    CHECK(std::fabs(w.deriv(1.0 - 1e-9) - w.deriv(1.0 + 1e-9)) <= 1e-8);
    CHECK(w.deriv(1.0) == doctest::Approx(-1.0 / N).epsilon(1e-12));
    CHECK(std::fabs(w.value(w.R)) <= 1e-14);
    CHECK(std::fabs(w.deriv(w.R)) <= 1e-12);
    CHECK(w.value(0.0) == doctest::Approx(w.a));
    CHECK(w.value(w.R + 0.5) == 0.0);
  }
}

TEST_CASE("explicit compact profile solves the equation on both branches") {
  // -u'' - (N-1)/r u' = q with q = +1 inside, -1 between 1 and R
  for (int N : {1, 2, 3}) {
    ExplicitW w = explicit_w(N);
    auto d = [&](double r) { return w.deriv(r); };
    for (double r : {0.25, 0.6, 0.95}) {
      double lhs = -dderiv(d, r) - (N - 1) / r * w.deriv(r);
      CHECK(lhs == doctest::Approx(1.0).epsilon(1e-5));
    }
    for (double r : {1.05, 1.2, 0.5 * (1.0 + w.R)}) {
      double lhs = -dderiv(d, r) - (N - 1) / r * w.deriv(r);
      CHECK(lhs == doctest::Approx(-1.0).epsilon(1e-5));
    }
  }
}

TEST_CASE("explicit even sign-changing profile: frozen constants") {
  ExplicitNodal1D n = explicit_nodal_1d();
  const double s2 = std::sqrt(2.0);
  CHECK(n.r1 == doctest::Approx((4.0 - s2) / 7.0).epsilon(1e-15));
  CHECK(n.c1 == doctest::Approx((9.0 - 4.0 * s2) / 49.0).epsilon(1e-15));
  CHECK(n.c2 == doctest::Approx(2.0 * n.r1).epsilon(1e-15));
  CHECK(n.r2 == doctest::Approx(2.0 * (3.0 + s2) / 7.0).epsilon(1e-15));

  CHECK(n.value(0.0) == doctest::Approx(n.c1));
  // the well value at the inclusion edge
  CHECK(n.value(1.0) == doctest::Approx(-(9.0 - 4.0 * s2) / 98.0).epsilon(1e-13));
  CHECK(n.value(1.0) == doctest::Approx(-0.0341136776).epsilon(1e-7));
  CHECK(std::fabs(n.value(n.r2)) <= 1e-14);
  CHECK(std::fabs(n.deriv(n.r2 - 1e-9)) <= 1e-8);
  CHECK(n.value(n.r2 + 0.1) == 0.0);
  CHECK(n.value(-0.5) == doctest::Approx(n.value(0.5)));  // even

  // energy = -(2/3)(r1^3 + rho^3) with rho = (2 sqrt 2 - 1)/7
  double rho = (2.0 * s2 - 1.0) / 7.0;
  double mass = n.r1 * n.r1 * n.r1 + rho * rho * rho;
  CHECK(n.energy() == doctest::Approx(-2.0 / 3.0 * mass).epsilon(1e-13));
  CHECK(n.energy() == doctest::Approx(-0.045484976197).epsilon(1e-10));
  CHECK(n.dirichlet() == doctest::Approx(4.0 / 3.0 * mass).epsilon(1e-13));
}

TEST_CASE("explicit even profile is continuous across its three seams") {
  ExplicitNodal1D n = explicit_nodal_1d();
  for (double s : {n.r1, 1.0}) {
    CHECK(n.value(s - 1e-10) == doctest::Approx(n.value(s + 1e-10)).epsilon(1e-7));
    CHECK(std::fabs(n.deriv(s - 1e-7) - n.deriv(s + 1e-7)) <= 1e-5);
  }
}

TEST_CASE("shooting reproduces the closed forms at p = 1") {
  for (int N : {1, 2, 3}) {
    ExplicitW w = explicit_w(N);
    ShootResult sr = shoot_ground_state(N, make_nonlinearity(1.0));
    CHECK(std::fabs(sr.a - w.a) <= 1e-6);
    CHECK(std::fabs(sr.R_supp - w.R) <= 1e-6);
    CHECK(sr.u_end <= 1e-10);
    CHECK(sr.du_end <= 1e-10);
    // interior agreement, not only the matched endpoints
    for (double r : {0.3, 0.9, 1.1}) CHECK(std::fabs(sr.profile.value(r) - w.value(r)) <= 1e-7);
  }
}

TEST_CASE("shooting scales quadratically with the inclusion radius at p = 1") {
  ShootResult one = shoot_ground_state(2, make_nonlinearity(1.0), 1.0);
  ShootResult two = shoot_ground_state(2, make_nonlinearity(1.0), 2.0);
  CHECK(std::fabs(two.a - 4.0 * one.a) <= 1e-5);
  CHECK(std::fabs(two.R_supp - 2.0 * one.R_supp) <= 1e-5);
}

TEST_CASE("shooting lands flat for the sublinear range") {
  for (double p : {1.25, 1.5, 1.75}) {
    ShootResult sr = shoot_ground_state(2, make_nonlinearity(p));
    CHECK(sr.R_supp > 1.0);
    CHECK(sr.u_end <= 1e-10 * std::max(1.0, sr.a));
    CHECK(sr.du_end <= 1e-10 * std::max(1.0, sr.a));
    CHECK(sr.profile.value(0.0) == doctest::Approx(sr.a));
    CHECK(verify_profile(sr.profile, make_nonlinearity(p)) <= 1e-8);
  }
}

TEST_CASE("profile verification flags a corrupted node") {
  ShootResult sr = shoot_ground_state(1, make_nonlinearity(1.5));
  RadialProfile bad = sr.profile;
  bad.u[bad.u.size() / 2] += 1e-4;
  CHECK(verify_profile(bad, make_nonlinearity(1.5)) >= 1e-5);
}

TEST_CASE("tabulated closed forms evaluate like the originals") {
  RadialProfile w2 = tabulate_explicit_w(2, 4097);
  ExplicitW w = explicit_w(2);
  for (double r : {0.0, 0.37, 0.999, 1.0, 1.001, 1.3, w.R - 1e-3, w.R + 0.2})
    CHECK(std::fabs(w2.value(r) - w.value(r)) <= 1e-10);

  RadialProfile nod = tabulate_explicit_nodal(4097);
  ExplicitNodal1D n = explicit_nodal_1d();
  for (double r : {0.0, 0.2, n.r1, 0.8, 1.0, 1.1, n.r2 - 1e-3})
    CHECK(std::fabs(nod.value(r) - n.value(r)) <= 1e-10);
}

TEST_CASE("barrier envelope constants") {
  CHECK(barrier_exponent(1.0) == doctest::Approx(2.0));
  CHECK(barrier_exponent(1.5) == doctest::Approx(4.0));
  CHECK(barrier_constant(1.0) == doctest::Approx(0.5).epsilon(1e-12));
  // q = -1, u > 0 outside: u'' = u^{p-1}; C^{2-p} = 1 / (m (m-1))
  double m = barrier_exponent(1.5);
  CHECK(barrier_constant(1.5) == doctest::Approx(std::pow(m * (m - 1.0), -2.0)).epsilon(1e-12));
}

TEST_CASE("radial field sampling respects the boundary") {
  Grid g = make_grid(2, 65, 2.0);
  ExplicitW w = explicit_w(2);
  Field f = sample_radial(g, Point{0, 0}, [&](double r) { return w.value(r); });
  CHECK(f[g.index(32, 32)] == doctest::Approx(w.a));
  for (std::size_t i = 0; i < f.size(); ++i)
    if (g.on_boundary(i)) CHECK(f[i] == 0.0);
}
