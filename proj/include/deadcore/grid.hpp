#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "deadcore/geometry.hpp"

namespace deadcore {

// Uniform tensor grid on [-L, L]^dim with n nodes per axis, h = 2L/(n-1).
// Boundary nodes carry homogeneous Dirichlet data: every operation writes 0
// there and fields loaded from disk are validated against that.
struct Grid {
  int dim = 1;
  int n = 17;
  double L = 1.0;

  double h() const { return 2.0 * L / (n - 1); }
  std::size_t size() const { return dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n; }
  double coord(int i) const { return -L + i * h(); }
  std::size_t index(int ix, int iy = 0) const { return static_cast<std::size_t>(iy) * n + ix; }
  Point point(std::size_t idx) const {
    if (dim == 1) return Point{coord(static_cast<int>(idx)), 0.0};
    return Point{coord(static_cast<int>(idx % n)), coord(static_cast<int>(idx / n))};
  }
  bool on_boundary(std::size_t idx) const {
    int ix = static_cast<int>(idx % n);
    int iy = static_cast<int>(idx / n);
    if (dim == 1) return ix == 0 || ix == n - 1;
    return ix == 0 || ix == n - 1 || iy == 0 || iy == n - 1;
  }
  double cell_volume() const { return dim == 1 ? h() : h() * h(); }
  bool operator==(const Grid&) const = default;
};

Grid make_grid(int dim, int n, double L);

struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), v(g.size(), 0.0) {}
  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
  std::size_t size() const { return v.size(); }
};

// Indefinite weight sampled at nodes: +1 inside the open domain, -1 otherwise
// (domain boundary points resolve to -1).
struct QField {
  Grid grid;
  std::vector<std::int8_t> q;
};

QField sample_q(const Grid& g, const Shape& omega);

// Signed dual-cell coverage in [-1, 1]: (fraction of the node's cell inside
// the domain) minus (fraction outside). Matches sample_q away from the
// interface; cells straddling it get the exact (1D) or subsampled (2D)
// fraction. The sharp-interface variant q places the transition half a cell
// off, which costs one order of accuracy at the free boundary; these weights
// restore it without leaving the finite-difference frame.
std::vector<double> interface_weights(const Grid& g, const Shape& omega);

Field laplacian_apply(const Field& u);             // 3/5-point stencil, boundary rows 0
double dirichlet_energy(const Field& u);           // sum over edges of (du)^2 h^(dim-2)
double integrate(const Field& u);                  // h^dim * sum
double sup_norm(const Field& u);
double sup_dist(const Field& a, const Field& b);

// v(x) = r^(2/(2-p)) u(x/r) interpolated onto `target`. Errors out when the
// rescaled support of u does not fit inside the target box.
Field restrict_rescale(const Field& u, double r, double p, const Grid& target);

// Threshold census of {|u| > tau}. radius is Euclidean, cheb_radius is the
// max-norm radius used for box clearance; inradius is the largest rho such
// that every interior node with |x| <= rho lies in the set (L when all do).
struct SupportScan {
  double tau = 0.0;
  long count = 0;
  double measure = 0.0;
  double radius = 0.0;
  double cheb_radius = 0.0;
  double inradius = 0.0;
  double clearance = 0.0;  // L - cheb_radius
};
SupportScan support_scan(const Field& u, double tau);

// Piecewise-linear (1D) or bilinear (2D) sample; zero outside the box, which
// matches the zero Dirichlet boundary.
double sample_bilinear(const Field& u, Point x);

void dump_field(const std::string& path, const Field& u, double p);
Field load_field(const std::string& path, double* p_out = nullptr);
void write_pgm(const std::string& path, const Field& u);  // 2D only

}  // namespace deadcore
