#include "deadcore/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <variant>

namespace deadcore {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Grid make_grid(int dim, int n, double L) {
  require(dim == 1 || dim == 2, "grid dimension must be 1 or 2");
  require(n >= 16, "grid needs at least 16 nodes per axis");
  require(std::isfinite(L) && L > 0.0, "grid half-extent must be positive");
  return Grid{dim, n, L};
}

QField sample_q(const Grid& g, const Shape& omega) {
  require(g.dim == omega.dim, "grid and shape dimensions differ");
  QField out{g, std::vector<std::int8_t>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i)
    out.q[i] = static_cast<std::int8_t>(q_omega_eval(omega, g.point(i)));
  return out;
}

namespace {

// 1D leaves are intervals by construction; extract them with isometries baked in.
void collect_intervals(const Shape& s, double shift, double flip,
                       std::vector<std::pair<double, double>>& out) {
  if (const auto* u = std::get_if<UnionShape>(&s.node)) {
    for (const Shape& part : u->parts) collect_intervals(part, shift, flip, out);
    return;
  }
  if (const auto* mp = std::get_if<MappedShape>(&s.node)) {
    collect_intervals(*mp->base, flip * mp->iso.t.x + shift, flip * mp->iso.m[0][0], out);
    return;
  }
  double a, b;
  if (const auto* bl = std::get_if<Ball>(&s.node)) {
    a = bl->center.x - bl->radius;
    b = bl->center.x + bl->radius;
  } else if (const auto* bx = std::get_if<BoxShape>(&s.node)) {
    a = bx->lo.x;
    b = bx->hi.x;
  } else {
    throw std::logic_error("unexpected 1D leaf shape");
  }
  double p1 = flip * a + shift, p2 = flip * b + shift;
  out.emplace_back(std::min(p1, p2), std::max(p1, p2));
}

std::vector<std::pair<double, double>> merged_intervals(const Shape& omega) {
  std::vector<std::pair<double, double>> iv;
  collect_intervals(omega, 0.0, 1.0, iv);
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> merged;
  for (auto [a, b] : iv) {
    if (!merged.empty() && a <= merged.back().second)
      merged.back().second = std::max(merged.back().second, b);
    else
      merged.emplace_back(a, b);
  }
  return merged;
}

}  // namespace

std::vector<double> interface_weights(const Grid& g, const Shape& omega) {
  require(g.dim == omega.dim, "grid and shape dimensions differ");
  std::vector<double> w(g.size(), -1.0);
  double h = g.h();
  if (g.dim == 1) {
    auto iv = merged_intervals(omega);
    for (int i = 0; i < g.n; ++i) {
      double cl = g.coord(i) - 0.5 * h, cr = g.coord(i) + 0.5 * h;
      double covered = 0.0;
      for (auto [a, b] : iv) covered += std::max(0.0, std::min(b, cr) - std::max(a, cl));
      w[static_cast<std::size_t>(i)] = 2.0 * covered / h - 1.0;
    }
    return w;
  }
  constexpr int kSub = 64;
  for (int iy = 0; iy < g.n; ++iy)
    for (int ix = 0; ix < g.n; ++ix) {
      double cx = g.coord(ix), cy = g.coord(iy);
      int probe = 0, total = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          ++total;
          if (shape_contains(omega, Point{cx + 0.5 * h * dx, cy + 0.5 * h * dy})) ++probe;
        }
      std::size_t idx = g.index(ix, iy);
      if (probe == 0) {
        w[idx] = -1.0;
      } else if (probe == total) {
        w[idx] = 1.0;
      } else {
        int inside = 0;
        for (int sy = 0; sy < kSub; ++sy) {
          double y = cy + h * ((sy + 0.5) / kSub - 0.5);
          for (int sx = 0; sx < kSub; ++sx) {
            double x = cx + h * ((sx + 0.5) / kSub - 0.5);
            if (shape_contains(omega, Point{x, y})) ++inside;
          }
        }
        w[idx] = 2.0 * inside / double(kSub * kSub) - 1.0;
      }
    }
  return w;
}

Field laplacian_apply(const Field& u) {
  const Grid& g = u.grid;
  Field out(g);
  double inv_h2 = 1.0 / (g.h() * g.h());
  if (g.dim == 1) {
    // neighbor pair first: addition commutes, so a mirror-symmetric field
    // gets a bitwise mirror-symmetric image
    for (int i = 1; i < g.n - 1; ++i)
      out.v[i] = ((u.v[i - 1] + u.v[i + 1]) - 2.0 * u.v[i]) * inv_h2;
    return out;
  }
  int n = g.n;
  for (int iy = 1; iy < n - 1; ++iy)
    for (int ix = 1; ix < n - 1; ++ix) {
      std::size_t k = g.index(ix, iy);
      out.v[k] =
          ((u.v[k - 1] + u.v[k + 1]) + (u.v[k - n] + u.v[k + n]) - 4.0 * u.v[k]) * inv_h2;
    }
  return out;
}

double dirichlet_energy(const Field& u) {
  const Grid& g = u.grid;
  double scale = std::pow(g.h(), g.dim - 2);
  double acc = 0.0;
  if (g.dim == 1) {
    for (int i = 0; i + 1 < g.n; ++i) {
      double d = u.v[i + 1] - u.v[i];
      acc += d * d;
    }
    return acc * scale;
  }
  int n = g.n;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix + 1 < n; ++ix) {
      double d = u.v[g.index(ix + 1, iy)] - u.v[g.index(ix, iy)];
      acc += d * d;
    }
  for (int iy = 0; iy + 1 < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double d = u.v[g.index(ix, iy + 1)] - u.v[g.index(ix, iy)];
      acc += d * d;
    }
  return acc * scale;
}

double integrate(const Field& u) {
  double acc = 0.0;
  for (double x : u.v) acc += x;
  return acc * u.grid.cell_volume();
}

double sup_norm(const Field& u) {
  double m = 0.0;
  for (double x : u.v) m = std::max(m, std::abs(x));
  return m;
}

double sup_dist(const Field& a, const Field& b) {
  require(a.grid == b.grid, "fields live on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

namespace {

double interp(const Field& u, Point p) {
  const Grid& g = u.grid;
  double h = g.h();
  if (std::abs(p.x) > g.L || (g.dim == 2 && std::abs(p.y) > g.L)) return 0.0;
  double fx = (p.x + g.L) / h;
  int ix = std::min(static_cast<int>(std::floor(fx)), g.n - 2);
  double tx = fx - ix;
  if (g.dim == 1) return u.v[ix] * (1.0 - tx) + u.v[ix + 1] * tx;
  double fy = (p.y + g.L) / h;
  int iy = std::min(static_cast<int>(std::floor(fy)), g.n - 2);
  double ty = fy - iy;
  double v00 = u.v[g.index(ix, iy)], v10 = u.v[g.index(ix + 1, iy)];
  double v01 = u.v[g.index(ix, iy + 1)], v11 = u.v[g.index(ix + 1, iy + 1)];
  return v00 * (1 - tx) * (1 - ty) + v10 * tx * (1 - ty) + v01 * (1 - tx) * ty + v11 * tx * ty;
}

}  // namespace

Field restrict_rescale(const Field& u, double r, double p, const Grid& target) {
  require(std::isfinite(r) && r > 0.0, "scale factor must be positive");
  require(p >= 1.0 && p < 2.0, "exponent must lie in [1,2)");
  require(target.dim == u.grid.dim, "source and target dimensions differ");
  double supp = 0.0;
  for (std::size_t i = 0; i < u.v.size(); ++i)
    if (u.v[i] != 0.0) {
      Point pt = u.grid.point(i);
      supp = std::max({supp, std::abs(pt.x), u.grid.dim == 2 ? std::abs(pt.y) : 0.0});
    }
  if (r * supp > target.L + 1e-12)
    throw std::domain_error("restrict_rescale: rescaled support exits the target box");
  double factor = std::pow(r, 2.0 / (2.0 - p));
  Field out(target);
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    if (target.on_boundary(i)) continue;
    Point x = target.point(i);
    out.v[i] = factor * interp(u, Point{x.x / r, x.y / r});
  }
  return out;
}

void dump_field(const std::string& path, const Field& u, double p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write field file '" + path + "'");
  out << "deadcore-field\n";
  out << "dim " << u.grid.dim << "\n";
  out << "n " << u.grid.n << "\n";
  out << "L " << fmt_double(u.grid.L) << "\n";
  out << "p " << fmt_double(p) << "\n";
  out << "values " << u.v.size() << "\n";
  for (double v : u.v) out << fmt_double(v) << "\n";
  if (!out) throw std::runtime_error("short write on '" + path + "'");
}

Field load_field(const std::string& path, double* p_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field file '" + path + "'");
  std::string magic;
  std::getline(in, magic);
  if (magic != "deadcore-field") throw std::runtime_error(path + ": not a field file");
  std::string key;
  int dim = 0, n = 0;
  double L = 0, p = 0;
  std::size_t count = 0;
  for (int i = 0; i < 5; ++i) {
    in >> key;
    if (key == "dim")
      in >> dim;
    else if (key == "n")
      in >> n;
    else if (key == "L")
      in >> L;
    else if (key == "p")
      in >> p;
    else if (key == "values")
      in >> count;
    else
      throw std::runtime_error(path + ": unexpected header key '" + key + "'");
  }
  Grid g = make_grid(dim, n, L);
  if (count != g.size()) throw std::runtime_error(path + ": value count does not match grid");
  Field u(g);
  for (std::size_t i = 0; i < count; ++i)
    if (!(in >> u.v[i])) throw std::runtime_error(path + ": truncated values");
  for (std::size_t i = 0; i < count; ++i)
    if (g.on_boundary(i) && u.v[i] != 0.0)
      throw std::runtime_error(path + ": nonzero boundary node violates the Dirichlet frame");
  if (p_out) *p_out = p;
  return u;
}

void write_pgm(const std::string& path, const Field& u) {
  require(u.grid.dim == 2, "PGM export needs a 2D field");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  int n = u.grid.n;
  double m = sup_norm(u);
  out << "P2\n# field render, signed values centered at gray 128\n" << n << " " << n << "\n255\n";
  for (int iy = n - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < n; ++ix) {
      int gray = 128;
      if (m > 0.0) {
        double t = u.v[u.grid.index(ix, iy)] / m;
        gray = static_cast<int>(std::lround(127.5 * (1.0 + t)));
        gray = std::clamp(gray, 0, 255);
      }
      out << gray << (ix + 1 == n ? "" : " ");
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("short write on '" + path + "'");
}

SupportScan support_scan(const Field& u, double tau) {
  const Grid& g = u.grid;
  SupportScan s;
  s.tau = tau;
  double in2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (g.on_boundary(i)) continue;
    Point pt = g.point(i);
    double ax = std::abs(pt.x), ay = g.dim == 2 ? std::abs(pt.y) : 0.0;
    double r2 = ax * ax + ay * ay;
    if (std::abs(u.v[i]) > tau) {
      ++s.count;
      s.radius = std::max(s.radius, r2);
      s.cheb_radius = std::max(s.cheb_radius, std::max(ax, ay));
    } else {
      in2 = std::min(in2, r2);
    }
  }
  s.radius = std::sqrt(s.radius);
  s.measure = s.count * g.cell_volume();
  s.inradius = std::isinf(in2) ? g.L : std::sqrt(in2);
  s.clearance = g.L - s.cheb_radius;
  return s;
}

double sample_bilinear(const Field& u, Point x) {
  const Grid& g = u.grid;
  const double h = g.h();
  const double top = static_cast<double>(g.n - 1);
  double sx = (x.x + g.L) / h;
  if (sx < 0.0 || sx > top) return 0.0;
  long ix = std::min(static_cast<long>(sx), static_cast<long>(g.n) - 2);
  double tx = sx - static_cast<double>(ix);
  if (g.dim == 1) {
    const double* row = u.v.data() + ix;
    return (1.0 - tx) * row[0] + tx * row[1];
  }
  double sy = (x.y + g.L) / h;
  if (sy < 0.0 || sy > top) return 0.0;
  long iy = std::min(static_cast<long>(sy), static_cast<long>(g.n) - 2);
  double ty = sy - static_cast<double>(iy);
  const double* row = u.v.data() + iy * g.n + ix;
  double lo = (1.0 - tx) * row[0] + tx * row[1];
  double hi = (1.0 - tx) * row[g.n] + tx * row[g.n + 1];
  return (1.0 - ty) * lo + ty * hi;
}

}  // namespace deadcore
