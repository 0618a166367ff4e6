#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <random>

#include "deadcore/grid.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace deadcore;

TEST_CASE("grid bookkeeping") {
  Grid g{2, 5, 1.0};  // aggregate, below the factory's size floor on purpose
  CHECK(g.h() == doctest::Approx(0.5));
  CHECK(g.size() == 25);
  CHECK(g.index(2, 3) == 17);
  CHECK(g.point(17).x == doctest::Approx(0.0));
  CHECK(g.point(17).y == doctest::Approx(0.5));
  CHECK(g.on_boundary(g.index(0, 2)));
  CHECK(g.on_boundary(g.index(2, 4)));
  CHECK_FALSE(g.on_boundary(g.index(2, 2)));
  CHECK(g.cell_volume() == doctest::Approx(0.25));
  CHECK_THROWS(make_grid(3, 33, 1.0));
  CHECK_THROWS(make_grid(1, 8, 1.0));
  CHECK_THROWS(make_grid(1, 33, -1.0));
}

TEST_CASE("five-point laplacian is exact on quadratics") {
  Grid g = make_grid(2, 33, 1.0);
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Point p = g.point(i);
    u[i] = p.x * p.x + 2.0 * p.y * p.y;
  }
  Field lap = laplacian_apply(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (g.on_boundary(i)) {
      CHECK(lap[i] == 0.0);
      continue;
    }
    CHECK(lap[i] == doctest::Approx(6.0).epsilon(1e-12));
  }
}

TEST_CASE("laplacian commutes with the mirror bitwise") {
  // stencil terms are grouped symmetrically, so a symmetric input gives a
  // bitwise-symmetric output; the nodal projectors rely on this
  Grid g = make_grid(2, 17, 1.0);
  std::mt19937_64 rng(7);
  Field u = oracles::random_interior_field(g, rng);
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n / 2; ++ix) u[g.index(g.n - 1 - ix, iy)] = u[g.index(ix, iy)];
  Field lap = laplacian_apply(u);
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix)
      CHECK(lap[g.index(ix, iy)] == lap[g.index(g.n - 1 - ix, iy)]);
}

TEST_CASE("dirichlet energy and integral on a hand case") {
  Grid g{1, 3, 1.0};  // nodes -1, 0, 1
  Field u(g);
  u[1] = 2.0;
  // edges (0,1) and (1,2): (du)^2 h^{-1} summed with the 1/2 convention folded
  // into dirichlet_energy's definition: sum (du/h)^2 h = 4 + 4
  CHECK(dirichlet_energy(u) == doctest::Approx(8.0));
  CHECK(integrate(u) == doctest::Approx(2.0));
  CHECK(sup_norm(u) == doctest::Approx(2.0));
}

TEST_CASE("q sampling and interface weights agree away from the boundary") {
  Grid g = make_grid(1, 257, 2.0);
  Shape omega = oracles::unit_interval();
  QField q = sample_q(g, omega);
  std::vector<double> w = interface_weights(g, omega);
  int disagree = 0;
  for (std::size_t i = 0; i < q.q.size(); ++i) {
    double qc = static_cast<double>(q.q[i]);
    if (std::fabs(w[i] - qc) > 1e-12) ++disagree;
    CHECK(w[i] >= -1.0 - 1e-12);
    CHECK(w[i] <= 1.0 + 1e-12);
  }
  CHECK(disagree <= 4);  // only cells cut by the two interface points

  // signed volume identity up to the half-cell overhang at the box edge:
  // sum w * cell = 2|omega| - |box| + O(h)
  double s = 0.0;
  for (double v : w) s += v;
  s *= g.cell_volume();
  CHECK(std::fabs(s - (2.0 * 2.0 - 4.0)) <= 2.0 * g.h());
}

TEST_CASE("support scan measures a hat field") {
  Grid g = make_grid(1, 401, 2.0);
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::max(0.0, 1.0 - std::fabs(g.point(i).x));
  SupportScan sc = support_scan(u, 0.1);
  CHECK(std::fabs(sc.radius - 0.9) <= g.h());
  CHECK(std::fabs(sc.inradius - 0.9) <= g.h());
  CHECK(std::fabs(sc.measure - 1.8) <= 2.0 * g.h());
  CHECK(sc.clearance == doctest::Approx(g.L - sc.cheb_radius));
  CHECK(sc.count > 0);
}

TEST_CASE("bilinear sampling is exact on affine fields and zero outside") {
  Grid g2 = make_grid(2, 33, 1.0);
  Field u(g2);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Point p = g2.point(i);
    u[i] = 0.25 + 0.5 * p.x - 0.75 * p.y + 0.3 * p.x * p.y;  // bilinear
  }
  for (Point p : {Point{0.13, -0.41}, Point{-0.77, 0.66}, Point{0.0, 0.0}}) {
    double want = 0.25 + 0.5 * p.x - 0.75 * p.y + 0.3 * p.x * p.y;
    CHECK(sample_bilinear(u, p) == doctest::Approx(want).epsilon(1e-12));
  }
  CHECK(sample_bilinear(u, Point{1.5, 0.0}) == 0.0);

  Grid g1 = make_grid(1, 17, 1.0);
  Field v(g1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 3.0 * g1.point(i).x - 1.0;
  CHECK(sample_bilinear(v, Point{0.3, 0.0}) == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("rescaling covariance maps supports exactly") {
  // v(x) = r^{2/(2-p)} u(x/r) with p = 1.5 gives a factor 16 at r = 2
  Grid src = make_grid(1, 513, 2.0);
  Field u(src);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double x = src.point(i).x;
    double t = std::max(0.0, 1.0 - x * x);
    u[i] = t * t;
  }
  Grid dst = make_grid(1, 513, 4.0);
  Field v = restrict_rescale(u, 2.0, 1.5, dst);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double x = dst.point(i).x;
    double t = std::max(0.0, 1.0 - (x / 2.0) * (x / 2.0));
    worst = std::max(worst, std::fabs(v[i] - 16.0 * t * t));
  }
  CHECK(worst <= 1e-3);

  Grid tiny = make_grid(1, 65, 1.0);
  CHECK_THROWS(restrict_rescale(u, 4.0, 1.5, tiny));  // rescaled support spills out
}

TEST_CASE("field dump/load round trip preserves values and rejects bad data") {
  Grid g = make_grid(2, 17, 1.0);
  std::mt19937_64 rng(11);
  Field u = oracles::random_interior_field(g, rng);
  std::string path = "test_grid_dump.txt";
  dump_field(path, u, 1.25);
  double p = 0.0;
  Field v = load_field(path, &p);
  CHECK(p == doctest::Approx(1.25));
  REQUIRE(v.size() == u.size());
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(v[i] == u[i]);

  // nonzero boundary data must be refused on load
  u[0] = 1.0;
  dump_field(path, u, 1.25);
  CHECK_THROWS(load_field(path));
  std::remove(path.c_str());
}

TEST_CASE("pgm writer emits a parseable graymap") {
  Grid g = make_grid(2, 17, 1.0);
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = g.on_boundary(i) ? 0.0 : 1.0;
  std::string path = "test_grid_img.pgm";
  write_pgm(path, u);
  FILE* f = std::fopen(path.c_str(), "rb");
  REQUIRE(f != nullptr);
  char magic[3] = {0, 0, 0};
  REQUIRE(std::fread(magic, 1, 2, f) == 2);
  std::fclose(f);
  CHECK(magic[0] == 'P');
  std::remove(path.c_str());
}
