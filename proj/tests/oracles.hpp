#pragma once

// Shared fixtures for the unit tests: independent finite-difference gradient
// probe, closed-form field sampling, and small reusable builders. Everything
// here is deliberately naive; the point is to disagree with the library when
// the library is wrong.

#include <cmath>
#include <functional>
#include <random>

#include "deadcore/energy.hpp"
#include "deadcore/geometry.hpp"
#include "deadcore/grid.hpp"
#include "deadcore/radial.hpp"

namespace oracles {

using namespace deadcore;

// Random field vanishing on the boundary, amplitude O(1).
inline Field random_interior_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = g.on_boundary(i) ? 0.0 : U(rng);
  return u;
}

// Central-difference directional derivatives of the weighted energy against
// the assembled gradient field. Returns the worst relative defect over a
// sample of coordinates.
inline double gradient_fd_defect(const Grid& g, const std::vector<double>& w, const Nonlinearity& nl,
                                 std::mt19937_64& rng, int probes = 24, double step = 1e-6) {
  Field u = random_interior_field(g, rng);
  Field grad = energy_gradient_weighted(u, w, nl);  // already scaled: dJ/du_i
  std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    std::size_t i = pick(rng);
    if (g.on_boundary(i)) continue;
    Field up = u, um = u;
    up[i] += step;
    um[i] -= step;
    double fd = (energy_weighted(up, w, nl).value - energy_weighted(um, w, nl).value) / (2.0 * step);
    double an = grad[i];
    double scale = std::max({std::fabs(fd), std::fabs(an), 1e-8});
    worst = std::max(worst, std::fabs(fd - an) / scale);
  }
  return worst;
}

// Sup distance from a grid field to a radial closed form about the origin.
inline double sup_dist_radial(const Field& u, const std::function<double(double)>& radial) {
  const Grid& g = u.grid;
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    Point x = g.point(i);
    double r = g.dim == 1 ? std::fabs(x.x) : std::hypot(x.x, x.y);
    worst = std::max(worst, std::fabs(u[i] - radial(r)));
  }
  return worst;
}

// Sup distance to a 1D closed form with sign ambiguity resolved by taking the
// better of the two orientations.
inline double sup_dist_either_sign(const Field& u, const std::function<double(double)>& f) {
  const Grid& g = u.grid;
  double wp = 0.0, wm = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double v = f(g.point(i).x);
    wp = std::max(wp, std::fabs(u[i] - v));
    wm = std::max(wm, std::fabs(u[i] + v));
  }
  return std::min(wp, wm);
}

inline Shape unit_interval() { return make_ball(1, Point{0.0, 0.0}, 1.0); }
inline Shape unit_disc() { return make_ball(2, Point{0.0, 0.0}, 1.0); }

}  // namespace oracles
