#include "deadcore/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "deadcore/kvfile.hpp"

namespace deadcore {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_dim(int dim) { require(dim == 1 || dim == 2, "shape dimension must be 1 or 2"); }

bool finite(double v) { return std::isfinite(v); }
bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

Isometry Isometry::translation(Point d) {
  Isometry iso;
  iso.t = d;
  return iso;
}

Isometry Isometry::rotation(double angle) {
  Isometry iso;
  double c = std::cos(angle), s = std::sin(angle);
  iso.m[0][0] = c;
  iso.m[0][1] = -s;
  iso.m[1][0] = s;
  iso.m[1][1] = c;
  return iso;
}

Isometry Isometry::reflection1d() {
  Isometry iso;
  iso.m[0][0] = -1.0;
  return iso;
}

Point Isometry::apply(Point p) const {
  return Point{m[0][0] * p.x + m[0][1] * p.y + t.x, m[1][0] * p.x + m[1][1] * p.y + t.y};
}

Point Isometry::apply_inverse(Point p) const {
  double ux = p.x - t.x, uy = p.y - t.y;
  return Point{m[0][0] * ux + m[1][0] * uy, m[0][1] * ux + m[1][1] * uy};
}

Isometry Isometry::compose(const Isometry& inner) const {
  Isometry out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.m[i][j] = m[i][0] * inner.m[0][j] + m[i][1] * inner.m[1][j];
  Point mt = Point{m[0][0] * inner.t.x + m[0][1] * inner.t.y,
                   m[1][0] * inner.t.x + m[1][1] * inner.t.y};
  out.t = Point{mt.x + t.x, mt.y + t.y};
  return out;
}

bool Isometry::is_identity() const {
  return m[0][0] == 1.0 && m[0][1] == 0.0 && m[1][0] == 0.0 && m[1][1] == 1.0 && t.x == 0.0 &&
         t.y == 0.0;
}

bool Isometry::orthogonal(double tol) const {
  // Rows of an orthogonal matrix are orthonormal; |det| = 1 follows.
  double r00 = m[0][0] * m[0][0] + m[0][1] * m[0][1];
  double r11 = m[1][0] * m[1][0] + m[1][1] * m[1][1];
  double dot = m[0][0] * m[1][0] + m[0][1] * m[1][1];
  return std::abs(r00 - 1.0) <= tol && std::abs(r11 - 1.0) <= tol && std::abs(dot) <= tol;
}

Shape make_ball(int dim, Point center, double radius) {
  require_dim(dim);
  require(finite(center) && finite(radius), "ball parameters must be finite");
  require(radius > 0.0, "ball radius must be positive");
  if (dim == 1) center.y = 0.0;
  return Shape{dim, Ball{center, radius}};
}

Shape make_box(int dim, Point lo, Point hi) {
  require_dim(dim);
  require(finite(lo) && finite(hi), "box parameters must be finite");
  require(hi.x > lo.x, "box needs hi.x > lo.x");
  if (dim == 2) require(hi.y > lo.y, "box needs hi.y > lo.y");
  if (dim == 1) lo.y = hi.y = 0.0;
  return Shape{dim, BoxShape{lo, hi}};
}

Shape make_annulus(int dim, Point center, double r_inner, double r_outer) {
  require_dim(dim);
  require(finite(center) && finite(r_inner) && finite(r_outer), "annulus parameters must be finite");
  require(r_inner >= 0.0 && r_outer >= r_inner, "annulus needs 0 <= r_inner <= r_outer");
  if (dim == 1) {
    // Two disjoint intervals; keeping leaves connected makes component
    // grouping exact later on.
    std::vector<Shape> parts;
    parts.push_back(make_box(1, Point{center.x - r_outer, 0}, Point{center.x - r_inner, 0}));
    parts.push_back(make_box(1, Point{center.x + r_inner, 0}, Point{center.x + r_outer, 0}));
    return Shape{1, UnionShape{std::move(parts)}};
  }
  return Shape{2, AnnulusShape{center, r_inner, r_outer}};
}

Shape make_dumbbell(Point c1, Point c2, double ball_radius, double corridor_halfwidth) {
  require(finite(c1) && finite(c2) && finite(ball_radius) && finite(corridor_halfwidth),
          "dumbbell parameters must be finite");
  require(ball_radius > 0.0, "dumbbell ball radius must be positive");
  require(corridor_halfwidth > 0.0 && corridor_halfwidth < ball_radius,
          "dumbbell corridor halfwidth must lie in (0, ball_radius)");
  double dx = c2.x - c1.x, dy = c2.y - c1.y;
  require(std::hypot(dx, dy) > 2.0 * ball_radius, "dumbbell balls must be disjoint");
  return Shape{2, DumbbellShape{c1, c2, ball_radius, corridor_halfwidth}};
}

Shape make_star_polar(Point center, std::vector<double> radius_table) {
  require(finite(center), "star_polar center must be finite");
  require(radius_table.size() >= 3, "star_polar needs at least 3 radius entries");
  for (double r : radius_table)
    require(finite(r) && r > 0.0, "star_polar radii must be positive and finite");
  return Shape{2, StarPolarShape{center, std::move(radius_table)}};
}

Shape make_union(std::vector<Shape> parts) {
  require(!parts.empty(), "union needs at least one part");
  int dim = parts.front().dim;
  for (const Shape& s : parts) require(s.dim == dim, "union parts must share a dimension");
  return Shape{dim, UnionShape{std::move(parts)}};
}

Shape mapped(const Shape& s, const Isometry& iso) {
  require(iso.orthogonal(), "isometry must be orthogonal to 1e-12");
  if (s.dim == 1)
    require(iso.m[0][1] == 0.0 && iso.m[1][0] == 0.0 && std::abs(std::abs(iso.m[0][0]) - 1.0) <= 1e-12,
            "1D isometries are shifts and reflections only");
  return Shape{s.dim, MappedShape{iso, std::make_shared<const Shape>(s)}};
}

Shape translate(const Shape& s, Point d) {
  require(finite(d), "translation must be finite");
  return mapped(s, Isometry::translation(d));
}

Shape rotate(const Shape& s, double angle) {
  require(s.dim == 2, "rotation needs a 2D shape");
  require(finite(angle), "rotation angle must be finite");
  return mapped(s, Isometry::rotation(angle));
}

namespace {

double star_rho(const StarPolarShape& s, double theta) {
  size_t M = s.radius.size();
  double step = kTwoPi / static_cast<double>(M);
  double u = theta / step;
  double fl = std::floor(u);
  double frac = u - fl;
  size_t i = static_cast<size_t>(fl) % M;
  size_t j = (i + 1) % M;
  return s.radius[i] * (1.0 - frac) + s.radius[j] * frac;
}

bool in_ball(Point c, double r, Point p, int dim) {
  double dx = p.x - c.x;
  double dy = (dim == 2) ? p.y - c.y : 0.0;
  return dx * dx + dy * dy < r * r;
}

bool dumbbell_contains(const DumbbellShape& d, Point p) {
  if (in_ball(d.center1, d.ball_radius, p, 2) || in_ball(d.center2, d.ball_radius, p, 2))
    return true;
  double ax = d.center2.x - d.center1.x, ay = d.center2.y - d.center1.y;
  double len = std::hypot(ax, ay);
  ax /= len;
  ay /= len;
  double sx = p.x - d.center1.x, sy = p.y - d.center1.y;
  double s = sx * ax + sy * ay;
  double t = -sx * ay + sy * ax;
  double w = d.corridor_halfwidth;
  if (s > 0.0 && s < len && std::abs(t) < w) return true;
  // Fillet discs centered on the corridor/ball junction corners.
  double off = std::sqrt(d.ball_radius * d.ball_radius - w * w);
  double fr = 0.5 * w;
  for (double sc : {off, len - off})
    for (double tc : {w, -w}) {
      double ds = s - sc, dt = t - tc;
      if (ds * ds + dt * dt < fr * fr) return true;
    }
  return false;
}

}  // namespace

bool shape_contains(const Shape& s, Point p) {
  if (!finite(p)) return false;
  struct Visitor {
    const Shape& s;
    Point p;
    bool operator()(const Ball& b) const { return in_ball(b.center, b.radius, p, s.dim); }
    bool operator()(const BoxShape& b) const {
      bool in = p.x > b.lo.x && p.x < b.hi.x;
      if (s.dim == 2) in = in && p.y > b.lo.y && p.y < b.hi.y;
      return in;
    }
    bool operator()(const AnnulusShape& a) const {
      double dx = p.x - a.center.x, dy = p.y - a.center.y;
      double r2 = dx * dx + dy * dy;
      return r2 > a.r_inner * a.r_inner && r2 < a.r_outer * a.r_outer;
    }
    bool operator()(const DumbbellShape& d) const { return dumbbell_contains(d, p); }
    bool operator()(const StarPolarShape& st) const {
      double dx = p.x - st.center.x, dy = p.y - st.center.y;
      double r = std::hypot(dx, dy);
      if (r == 0.0) return true;
      double theta = std::atan2(dy, dx);
      if (theta < 0.0) theta += kTwoPi;
      return r < star_rho(st, theta);
    }
    bool operator()(const UnionShape& u) const {
      for (const Shape& part : u.parts)
        if (shape_contains(part, p)) return true;
      return false;
    }
    bool operator()(const MappedShape& mp) const {
      return shape_contains(*mp.base, mp.iso.apply_inverse(p));
    }
  };
  return std::visit(Visitor{s, p}, s.node);
}

int q_omega_eval(const Shape& s, Point p) { return shape_contains(s, p) ? 1 : -1; }

namespace {

// Leaves with their accumulated isometry baked in as a MappedShape wrapper.
void collect_leaves(const Shape& s, const Isometry& acc, std::vector<Shape>& out) {
  if (const auto* u = std::get_if<UnionShape>(&s.node)) {
    for (const Shape& part : u->parts) collect_leaves(part, acc, out);
    return;
  }
  if (const auto* mp = std::get_if<MappedShape>(&s.node)) {
    collect_leaves(*mp->base, acc.compose(mp->iso), out);
    return;
  }
  if (acc.is_identity())
    out.push_back(s);
  else
    out.push_back(Shape{s.dim, MappedShape{acc, std::make_shared<const Shape>(s)}});
}

std::vector<Shape> leaves_of(const Shape& s) {
  std::vector<Shape> out;
  collect_leaves(s, Isometry{}, out);
  return out;
}

void hull(Point& lo, Point& hi, Point l2, Point h2) {
  lo.x = std::min(lo.x, l2.x);
  lo.y = std::min(lo.y, l2.y);
  hi.x = std::max(hi.x, h2.x);
  hi.y = std::max(hi.y, h2.y);
}

// Measure of a single leaf, or no value when only quadrature can handle it.
bool leaf_measure(const Shape& s, double& out) {
  if (const auto* mp = std::get_if<MappedShape>(&s.node)) return leaf_measure(*mp->base, out);
  if (const auto* b = std::get_if<Ball>(&s.node)) {
    out = (s.dim == 1) ? 2.0 * b->radius : std::numbers::pi * b->radius * b->radius;
    return true;
  }
  if (const auto* b = std::get_if<BoxShape>(&s.node)) {
    out = (b->hi.x - b->lo.x) * ((s.dim == 2) ? (b->hi.y - b->lo.y) : 1.0);
    return true;
  }
  if (const auto* a = std::get_if<AnnulusShape>(&s.node)) {
    out = std::numbers::pi * (a->r_outer * a->r_outer - a->r_inner * a->r_inner);
    return true;
  }
  if (const auto* st = std::get_if<StarPolarShape>(&s.node)) {
    // 0.5 * integral of rho^2; rho is linear per segment, integrated exactly.
    size_t M = st->radius.size();
    double step = kTwoPi / static_cast<double>(M);
    double acc = 0.0;
    for (size_t i = 0; i < M; ++i) {
      double a = st->radius[i], b = st->radius[(i + 1) % M];
      acc += step * (a * a + a * b + b * b) / 3.0;
    }
    out = 0.5 * acc;
    return true;
  }
  return false;  // dumbbell
}

double quadrature_measure(const Shape& s, int resolution) {
  Point lo, hi;
  bounding_box(s, lo, hi);
  int S = std::max(1024, resolution);
  std::int64_t count = 0;
  if (s.dim == 1) {
    double dx = (hi.x - lo.x) / S;
    for (int i = 0; i < S; ++i)
      if (shape_contains(s, Point{lo.x + (i + 0.5) * dx, 0})) ++count;
    return count * dx;
  }
  double dx = (hi.x - lo.x) / S, dy = (hi.y - lo.y) / S;
  for (int j = 0; j < S; ++j) {
    double y = lo.y + (j + 0.5) * dy;
    for (int i = 0; i < S; ++i)
      if (shape_contains(s, Point{lo.x + (i + 0.5) * dx, y})) ++count;
  }
  return count * dx * dy;
}

}  // namespace

void bounding_box(const Shape& s, Point& lo, Point& hi) {
  struct Visitor {
    const Shape& s;
    Point& lo;
    Point& hi;
    void operator()(const Ball& b) const {
      lo = Point{b.center.x - b.radius, (s.dim == 2) ? b.center.y - b.radius : 0.0};
      hi = Point{b.center.x + b.radius, (s.dim == 2) ? b.center.y + b.radius : 0.0};
    }
    void operator()(const BoxShape& b) const {
      lo = b.lo;
      hi = b.hi;
    }
    void operator()(const AnnulusShape& a) const {
      lo = Point{a.center.x - a.r_outer, a.center.y - a.r_outer};
      hi = Point{a.center.x + a.r_outer, a.center.y + a.r_outer};
    }
    void operator()(const DumbbellShape& d) const {
      double pad = d.ball_radius + 1.5 * d.corridor_halfwidth;
      lo = Point{std::min(d.center1.x, d.center2.x) - pad, std::min(d.center1.y, d.center2.y) - pad};
      hi = Point{std::max(d.center1.x, d.center2.x) + pad, std::max(d.center1.y, d.center2.y) + pad};
    }
    void operator()(const StarPolarShape& st) const {
      double r = *std::max_element(st.radius.begin(), st.radius.end());
      lo = Point{st.center.x - r, st.center.y - r};
      hi = Point{st.center.x + r, st.center.y + r};
    }
    void operator()(const UnionShape& u) const {
      bounding_box(u.parts.front(), lo, hi);
      for (size_t i = 1; i < u.parts.size(); ++i) {
        Point l2, h2;
        bounding_box(u.parts[i], l2, h2);
        hull(lo, hi, l2, h2);
      }
    }
    void operator()(const MappedShape& mp) const {
      Point l0, h0;
      bounding_box(*mp.base, l0, h0);
      Point corners[4] = {l0, h0, Point{l0.x, h0.y}, Point{h0.x, l0.y}};
      Point c0 = mp.iso.apply(corners[0]);
      lo = hi = c0;
      for (int i = 1; i < 4; ++i) {
        Point c = mp.iso.apply(corners[i]);
        hull(lo, hi, c, c);
      }
    }
  };
  std::visit(Visitor{s, lo, hi}, s.node);
}

double bounding_radius(const Shape& s) {
  Point lo, hi;
  bounding_box(s, lo, hi);
  double r = std::max(std::abs(lo.x), std::abs(hi.x));
  if (s.dim == 2) r = std::max({r, std::abs(lo.y), std::abs(hi.y)});
  return r;
}

bool has_corner_leaves(const Shape& s) {
  for (const Shape& leaf : leaves_of(s)) {
    const Shape* l = &leaf;
    if (const auto* mp = std::get_if<MappedShape>(&l->node)) l = mp->base.get();
    if (std::holds_alternative<BoxShape>(l->node)) return true;
  }
  return false;
}

MeasureResult shape_measure(const Shape& s, int quad_resolution) {
  std::vector<Shape> leaves = leaves_of(s);
  bool analytic = true;
  std::vector<Point> los(leaves.size()), his(leaves.size());
  std::vector<double> values(leaves.size());
  for (size_t i = 0; i < leaves.size(); ++i) {
    bounding_box(leaves[i], los[i], his[i]);
    if (!leaf_measure(leaves[i], values[i])) analytic = false;
  }
  if (analytic && leaves.size() > 1) {
    for (size_t i = 0; i < leaves.size() && analytic; ++i)
      for (size_t j = i + 1; j < leaves.size(); ++j) {
        bool apart = his[i].x <= los[j].x || his[j].x <= los[i].x;
        if (s.dim == 2) apart = apart || his[i].y <= los[j].y || his[j].y <= los[i].y;
        if (!apart) {
          analytic = false;
          break;
        }
      }
  }
  if (analytic) {
    double total = 0.0;
    for (double v : values) total += v;
    return MeasureResult{total, false};
  }
  return MeasureResult{quadrature_measure(s, quad_resolution), true};
}

std::vector<Shape> component_split(const Shape& s, int raster_per_axis) {
  std::vector<Shape> leaves = leaves_of(s);
  Point lo, hi;
  bounding_box(s, lo, hi);
  int S = std::max(64, raster_per_axis);
  double dx = (hi.x - lo.x) / S;
  double dy = (s.dim == 2) ? (hi.y - lo.y) / S : 0.0;
  int nx = S + 4, ny = (s.dim == 2) ? S + 4 : 1;
  auto cell_point = [&](int i, int j) {
    return Point{lo.x + (i - 2 + 0.5) * dx, (s.dim == 2) ? lo.y + (j - 2 + 0.5) * dy : 0.0};
  };

  std::vector<int> label(static_cast<size_t>(nx) * ny, -1);
  auto at = [&](int i, int j) -> int& { return label[static_cast<size_t>(j) * nx + i]; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (shape_contains(s, cell_point(i, j))) at(i, j) = -2;  // occupied, unlabeled

  int nlabels = 0;
  for (int j0 = 0; j0 < ny; ++j0)
    for (int i0 = 0; i0 < nx; ++i0) {
      if (at(i0, j0) != -2) continue;
      int id = nlabels++;
      std::queue<std::pair<int, int>> q;
      at(i0, j0) = id;
      q.push({i0, j0});
      while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        int nn = (s.dim == 2) ? 4 : 2;
        for (int k = 0; k < nn; ++k) {
          int i2 = i + di[k], j2 = j + dj[k];
          if (i2 < 0 || i2 >= nx || j2 < 0 || j2 >= ny) continue;
          if (at(i2, j2) == -2) {
            at(i2, j2) = id;
            q.push({i2, j2});
          }
        }
      }
    }
  if (nlabels == 0) throw std::runtime_error("component_split: shape rasterizes to the empty set");

  // A connected leaf that shows up under several raster labels bridges them.
  std::vector<int> parent(nlabels);
  for (int i = 0; i < nlabels; ++i) parent[i] = i;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<int> leaf_label(leaves.size(), -1);
  for (size_t li = 0; li < leaves.size(); ++li) {
    int first = -1;
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (at(i, j) < 0) continue;
        if (!shape_contains(leaves[li], cell_point(i, j))) continue;
        if (first == -1) {
          first = find(at(i, j));
          leaf_label[li] = first;
        } else {
          parent[find(at(i, j))] = first;
        }
      }
    if (first == -1)
      throw std::runtime_error("component_split: a leaf is below raster resolution; raise it");
  }

  std::vector<int> roots;
  std::vector<std::vector<Shape>> groups;
  for (size_t li = 0; li < leaves.size(); ++li) {
    int r = find(leaf_label[li]);
    auto it = std::find(roots.begin(), roots.end(), r);
    size_t gi;
    if (it == roots.end()) {
      roots.push_back(r);
      groups.emplace_back();
      gi = groups.size() - 1;
    } else {
      gi = static_cast<size_t>(it - roots.begin());
    }
    groups[gi].push_back(leaves[li]);
  }

  std::vector<Shape> components;
  for (auto& g : groups) {
    if (g.size() == 1)
      components.push_back(std::move(g.front()));
    else
      components.push_back(Shape{s.dim, UnionShape{std::move(g)}});
  }
  return components;
}

namespace {

Point parse_point(const std::string& value, int dim, const std::string& ctx) {
  std::vector<double> v = kv_doubles(value, ctx);
  if (static_cast<int>(v.size()) != dim)
    throw std::runtime_error(ctx + ": expected " + std::to_string(dim) + " coordinate(s)");
  return Point{v[0], dim == 2 ? v[1] : 0.0};
}

}  // namespace

Shape parse_shape_text(const std::string& text, const std::string& origin) {
  std::vector<KvSection> sections = parse_kv_text(text, origin);
  if (sections.empty() || sections.front().name != "domain")
    throw std::runtime_error(origin + ": shape file must start with a [domain] section");

  int dim = 0;
  for (const auto& [k, v] : sections.front().entries) {
    if (k == "dim")
      dim = static_cast<int>(kv_long(v, origin + ": [domain] dim"));
    else
      throw std::runtime_error(origin + ": unknown [domain] key '" + k + "'");
  }
  if (dim != 1 && dim != 2) throw std::runtime_error(origin + ": [domain] dim must be 1 or 2");

  std::vector<Shape> parts;
  for (size_t si = 1; si < sections.size(); ++si) {
    const KvSection& sec = sections[si];
    std::string ctx = origin + ":" + std::to_string(sec.line);
    if (sec.name != "shape") throw std::runtime_error(ctx + ": unexpected section [" + sec.name + "]");

    std::string type;
    Point center{}, center1{}, center2{}, lo{}, hi{}, trans{};
    double radius = 0, inner = -1, outer = -1, ball_radius = 0, halfwidth = 0, angle = 0;
    std::vector<double> table;
    bool has_rotate = false, has_translate = false;
    bool has_center = false, has_lo = false, has_hi = false, has_c1 = false, has_c2 = false;

    for (const auto& [k, v] : sec.entries) {
      if (k == "type")
        type = v;
      else if (k == "center")
        center = parse_point(v, dim, ctx + " center"), has_center = true;
      else if (k == "center1")
        center1 = parse_point(v, dim, ctx + " center1"), has_c1 = true;
      else if (k == "center2")
        center2 = parse_point(v, dim, ctx + " center2"), has_c2 = true;
      else if (k == "lo")
        lo = parse_point(v, dim, ctx + " lo"), has_lo = true;
      else if (k == "hi")
        hi = parse_point(v, dim, ctx + " hi"), has_hi = true;
      else if (k == "radius")
        radius = kv_double(v, ctx + " radius");
      else if (k == "inner")
        inner = kv_double(v, ctx + " inner");
      else if (k == "outer")
        outer = kv_double(v, ctx + " outer");
      else if (k == "ball_radius")
        ball_radius = kv_double(v, ctx + " ball_radius");
      else if (k == "corridor_halfwidth")
        halfwidth = kv_double(v, ctx + " corridor_halfwidth");
      else if (k == "radius_table")
        table = kv_doubles(v, ctx + " radius_table");
      else if (k == "rotate")
        angle = kv_double(v, ctx + " rotate"), has_rotate = true;
      else if (k == "translate")
        trans = parse_point(v, dim, ctx + " translate"), has_translate = true;
      else
        throw std::runtime_error(ctx + ": unknown [shape] key '" + k + "'");
    }

    Shape shape{dim, Ball{}};
    try {
      if (type == "ball") {
        if (!has_center) throw std::invalid_argument("ball needs a center");
        shape = make_ball(dim, center, radius);
      } else if (type == "box") {
        if (!has_lo || !has_hi) throw std::invalid_argument("box needs lo and hi");
        shape = make_box(dim, lo, hi);
      } else if (type == "annulus") {
        if (!has_center || inner < 0 || outer < 0)
          throw std::invalid_argument("annulus needs center, inner, outer");
        shape = make_annulus(dim, center, inner, outer);
      } else if (type == "dumbbell") {
        if (dim != 2) throw std::invalid_argument("dumbbell is 2D only");
        if (!has_c1 || !has_c2) throw std::invalid_argument("dumbbell needs center1 and center2");
        shape = make_dumbbell(center1, center2, ball_radius, halfwidth);
      } else if (type == "star_polar") {
        if (dim != 2) throw std::invalid_argument("star_polar is 2D only");
        if (!has_center) throw std::invalid_argument("star_polar needs a center");
        shape = make_star_polar(center, table);
      } else if (type.empty()) {
        throw std::invalid_argument("[shape] section is missing 'type'");
      } else {
        throw std::invalid_argument("unknown shape type '" + type + "'");
      }
      if (has_rotate) shape = rotate(shape, angle);
      if (has_translate) shape = translate(shape, trans);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(ctx + ": " + e.what());
    }
    parts.push_back(std::move(shape));
  }
  if (parts.empty()) throw std::runtime_error(origin + ": no [shape] sections");
  if (parts.size() == 1) return parts.front();
  return make_union(std::move(parts));
}

Shape load_shape(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open shape file '" + path + "'");
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_shape_text(raw, path);
}

}  // namespace deadcore
