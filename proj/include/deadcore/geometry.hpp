#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace deadcore {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Rigid map p -> M p + t with M orthogonal. 1D shapes use the x row only,
// so M[0][0] is +-1 and the rest stays at identity.
struct Isometry {
  double m[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
  Point t;

  static Isometry translation(Point d);
  static Isometry rotation(double angle);
  static Isometry reflection1d();

  Point apply(Point p) const;
  Point apply_inverse(Point p) const;
  Isometry compose(const Isometry& inner) const;  // (*this) after inner
  bool is_identity() const;
  bool orthogonal(double tol = 1e-12) const;
};

struct Shape;

struct Ball {
  Point center;
  double radius = 1.0;
};

struct BoxShape {
  Point lo, hi;  // open axis-aligned box; 1D uses x only
};

struct AnnulusShape {  // 2D only; the 1D analogue is normalized to two intervals
  Point center;
  double r_inner = 0.5;
  double r_outer = 1.0;
};

// Two balls joined by a straight corridor along the center line; the four
// reentrant corners where corridor meets ball are filled by tangent discs of
// half the corridor halfwidth, which keeps the boundary from forming a cusp.
struct DumbbellShape {
  Point center1, center2;
  double ball_radius = 1.0;
  double corridor_halfwidth = 0.1;
};

// Region r < rho(theta) around `center`; rho is a positive table on a uniform
// angle grid over [0, 2pi), interpolated piecewise-linearly with wraparound.
struct StarPolarShape {
  Point center;
  std::vector<double> radius;
};

struct UnionShape {
  std::vector<Shape> parts;
};

struct MappedShape {
  Isometry iso;
  std::shared_ptr<const Shape> base;
};

struct Shape {
  int dim = 1;
  std::variant<Ball, BoxShape, AnnulusShape, DumbbellShape, StarPolarShape, UnionShape,
               MappedShape>
      node;
};

Shape make_ball(int dim, Point center, double radius);
Shape make_box(int dim, Point lo, Point hi);
Shape make_annulus(int dim, Point center, double r_inner, double r_outer);
Shape make_dumbbell(Point c1, Point c2, double ball_radius, double corridor_halfwidth);
Shape make_star_polar(Point center, std::vector<double> radius_table);
Shape make_union(std::vector<Shape> parts);
Shape translate(const Shape& s, Point d);
Shape rotate(const Shape& s, double angle);
Shape mapped(const Shape& s, const Isometry& iso);

// Membership in the open set; boundary points count as outside.
bool shape_contains(const Shape& s, Point p);

// Indefinite weight sample: +1 on the open set, -1 everywhere else.
int q_omega_eval(const Shape& s, Point p);

struct MeasureResult {
  double value = 0.0;
  bool quadrature = false;  // true when a midpoint-rule fallback was used
};

// Lebesgue measure. Closed forms for primitives and for unions whose leaves
// have pairwise disjoint bounding boxes; otherwise midpoint quadrature at
// `quad_resolution` cells per axis (floored at 1024), flagged in the result.
MeasureResult shape_measure(const Shape& s, int quad_resolution = 1024);

// Connected components at raster resolution. Leaves are connected by
// construction, so components are groupings of leaves; the raster only decides
// which leaves touch. Throws on an empty shape.
std::vector<Shape> component_split(const Shape& s, int raster_per_axis = 1024);

void bounding_box(const Shape& s, Point& lo, Point& hi);  // conservative, axis-aligned
double bounding_radius(const Shape& s);                   // sup |x| over the bounding box
bool has_corner_leaves(const Shape& s);                   // true when a box leaf is present

// Shape description files: [domain] dim = 1|2, then one [shape] section per
// primitive (united). Optional per-section keys rotate / translate apply the
// isometry about the global origin, rotation first.
Shape load_shape(const std::string& path);
Shape parse_shape_text(const std::string& text, const std::string& origin);

}  // namespace deadcore
