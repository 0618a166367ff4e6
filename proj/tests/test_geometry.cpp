#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "deadcore/geometry.hpp"
#include "doctest.h"

using namespace deadcore;

TEST_CASE("ball membership is open and dimension-aware") {
  Shape b1 = make_ball(1, Point{0.5, 0.0}, 1.0);
  CHECK(shape_contains(b1, Point{0.5, 0.0}));
  CHECK(shape_contains(b1, Point{1.4999, 0.0}));
  CHECK_FALSE(shape_contains(b1, Point{1.5, 0.0}));  // boundary excluded
  CHECK_FALSE(shape_contains(b1, Point{-0.6, 0.0}));

  Shape b2 = make_ball(2, Point{0.0, 0.0}, 1.0);
  CHECK(shape_contains(b2, Point{0.6, 0.6}));
  CHECK_FALSE(shape_contains(b2, Point{0.8, 0.8}));
  CHECK(q_omega_eval(b2, Point{0.0, 0.0}) == 1);
  CHECK(q_omega_eval(b2, Point{2.0, 0.0}) == -1);
  CHECK(q_omega_eval(b2, Point{1.0, 0.0}) == -1);  // boundary counts as outside
}

TEST_CASE("measures match closed forms within quadrature error") {
  MeasureResult m1 = shape_measure(make_ball(1, Point{0, 0}, 1.5));
  CHECK(std::fabs(m1.value - 3.0) <= 1e-9);

  MeasureResult m2 = shape_measure(make_ball(2, Point{0.2, -0.3}, 1.0));
  CHECK(std::fabs(m2.value - std::numbers::pi) <= 1e-12);
  CHECK(!m2.quadrature);  // a lone ball is handled in closed form

  MeasureResult ma = shape_measure(make_annulus(2, Point{0, 0}, 0.5, 1.0));
  CHECK(std::fabs(ma.value - std::numbers::pi * 0.75) <= 1e-12);

  // overlapping parts force the midpoint fallback; area = 2 pi - lens
  Shape lens = make_union({make_ball(2, Point{0, 0}, 1.0), make_ball(2, Point{1, 0}, 1.0)});
  MeasureResult mo = shape_measure(lens);
  CHECK(mo.quadrature);
  const double lens_area = 2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0);
  CHECK(std::fabs(mo.value - (2.0 * std::numbers::pi - lens_area)) <= 5e-3);
}

TEST_CASE("isometries move points the right way") {
  Shape b = make_ball(2, Point{1.0, 0.0}, 0.5);
  Shape r = rotate(b, std::numbers::pi / 2);  // ball center moves to (0, 1)
  CHECK(shape_contains(r, Point{0.0, 1.0}));
  CHECK_FALSE(shape_contains(r, Point{1.0, 0.0}));

  Shape t = translate(b, Point{-1.0, 2.0});
  CHECK(shape_contains(t, Point{0.0, 2.0}));
}

TEST_CASE("union splits into connected components") {
  Shape two = make_union({make_ball(1, Point{-5, 0}, 1.0), make_ball(1, Point{5, 0}, 1.0)});
  std::vector<Shape> parts = component_split(two);
  REQUIRE(parts.size() == 2);
  double vsum = 0.0;
  for (const Shape& s : parts) vsum += shape_measure(s).value;
  CHECK(std::fabs(vsum - 4.0) <= 1e-6);

  // overlapping balls fuse into one component
  Shape blob = make_union({make_ball(2, Point{-0.4, 0}, 1.0), make_ball(2, Point{0.4, 0}, 1.0)});
  CHECK(component_split(blob).size() == 1);
}

TEST_CASE("dumbbell geometry: corridor, fillets, disjointness guard") {
  Shape d = make_dumbbell(Point{-1.5, 0}, Point{1.5, 0}, 1.0, 0.05);
  CHECK(shape_contains(d, Point{0.0, 0.0}));       // corridor midline
  CHECK(shape_contains(d, Point{0.0, 0.049}));     // inside the half-width
  CHECK_FALSE(shape_contains(d, Point{0.0, 0.06}));
  CHECK(shape_contains(d, Point{-1.5, 0.9}));      // deep in the left ball
  CHECK_THROWS(make_dumbbell(Point{-0.9, 0}, Point{0.9, 0}, 1.0, 0.05));
  CHECK_THROWS(make_dumbbell(Point{-1.5, 0}, Point{1.5, 0}, 1.0, 1.5));
}

TEST_CASE("polar star table interpolates with wraparound") {
  std::vector<double> tab(8, 1.0);
  tab[0] = 2.0;  // bulge along +x
  Shape s = make_star_polar(Point{0, 0}, tab);
  CHECK(shape_contains(s, Point{1.5, 0.0}));
  CHECK_FALSE(shape_contains(s, Point{0.0, 1.5}));
  CHECK(shape_contains(s, Point{0.0, 0.9}));
  CHECK_THROWS(make_star_polar(Point{0, 0}, {1.0, 2.0}));
}

TEST_CASE("bounding radius is the max-norm box radius about the origin") {
  Shape b = make_ball(2, Point{1.0, 1.0}, 0.5);
  CHECK(bounding_radius(b) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(bounding_radius(make_ball(2, Point{0.0, 0.0}, 2.0)) == doctest::Approx(2.0));
  // every support point fits in the box of that radius
  CHECK(bounding_radius(b) >= 1.0 + 0.5 - 1e-12);
}

TEST_CASE("shape text parses and rejects malformed input") {
  const char* text =
      "[domain]\n"
      "dim = 2\n"
      "[shape]\n"
      "type = ball\n"
      "center = 0 0\n"
      "radius = 1\n"
      "[shape]\n"
      "type = ball\n"
      "center = 3 0\n"
      "radius = 0.5\n";
  Shape s = parse_shape_text(text, "test");
  CHECK(shape_contains(s, Point{0, 0}));
  CHECK(shape_contains(s, Point{3, 0.2}));
  CHECK_FALSE(shape_contains(s, Point{1.8, 0}));

  CHECK_THROWS(parse_shape_text("[shape]\ntype = ball\n", "test"));          // missing domain
  CHECK_THROWS(parse_shape_text("[domain]\ndim = 3\n", "test"));             // bad dimension
  CHECK_THROWS(parse_shape_text("[domain]\ndim = 1\n", "test"));             // no shapes
  CHECK_THROWS(parse_shape_text("[domain]\ndim = 1\n[shape]\ntype = blob\n", "test"));
  CHECK_THROWS(parse_shape_text("[domain]\ndim = 1\n[shape]\ntype = ball\nradius = 1\nwobble = 2\n",
                                "test"));  // unknown key
}

TEST_CASE("rotation applies before translation in shape text") {
  // ball at (1,0), rotated 90 degrees -> (0,1), then shifted by (1,0) -> (1,1)
  const char* text =
      "[domain]\ndim = 2\n[shape]\ntype = ball\ncenter = 1 0\nradius = 0.3\n"
      "rotate = 1.5707963267948966\ntranslate = 1 0\n";
  Shape s = parse_shape_text(text, "test");
  CHECK(shape_contains(s, Point{1.0, 1.0}));
  CHECK_FALSE(shape_contains(s, Point{1.0, 0.0}));
}
