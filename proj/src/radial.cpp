#include "deadcore/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace deadcore {

ExplicitW explicit_w(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  ExplicitW w;
  w.dim = dim;
  w.R = std::pow(2.0, 1.0 / dim);
  w.a = dim == 2 ? 0.5 * std::log(2.0)
                 : (1.0 - std::pow(2.0, (2.0 - dim) / double(dim))) / (dim - 2.0);
  return w;
}

double ExplicitW::inner(double r) const { return a - r * r / (2.0 * dim); }

double ExplicitW::middle(double r) const {
  if (dim == 2) return 0.5 * (std::log(2.0) - 1.0) - std::log(r) + 0.25 * r * r;
  double n = dim;
  return -std::pow(2.0, (2.0 - n) / n) / (n - 2.0) +
         2.0 / (n * (n - 2.0)) * std::pow(r, 2.0 - n) + r * r / (2.0 * n);
}

double ExplicitW::value(double r) const {
  r = std::abs(r);
  if (r < 1.0) return inner(r);
  if (r < R) return middle(r);
  return 0.0;
}

double ExplicitW::deriv(double r) const {
  r = std::abs(r);
  if (r < 1.0) return -r / dim;
  if (r < R) return (r - 2.0 * std::pow(r, 1.0 - dim)) / dim;
  return 0.0;
}

ExplicitNodal1D explicit_nodal_1d() {
  ExplicitNodal1D u;
  double s2 = std::sqrt(2.0);
  u.r1 = (4.0 - s2) / 7.0;
  u.c1 = (9.0 - 4.0 * s2) / 49.0;
  u.c2 = 2.0 * u.r1;
  u.r2 = 2.0 * (3.0 + s2) / 7.0;
  return u;
}

double ExplicitNodal1D::cap(double t) const { return c1 - t * t / 2.0; }
double ExplicitNodal1D::well(double t) const { return (t - c2) * (t - c2) / 2.0 - c1; }
double ExplicitNodal1D::tail(double t) const { return -(t - r2) * (t - r2) / 2.0; }

double ExplicitNodal1D::value(double x) const {
  double t = std::abs(x);
  if (t < r1) return cap(t);
  if (t < 1.0) return well(t);
  if (t < r2) return tail(t);
  return 0.0;
}

double ExplicitNodal1D::deriv(double x) const {
  double t = std::abs(x);
  double s = x < 0.0 ? -1.0 : 1.0;
  if (t < r1) return -s * t;
  if (t < 1.0) return s * (t - c2);
  if (t < r2) return s * (r2 - t);
  return 0.0;
}

double ExplicitNodal1D::dirichlet() const {
  double rho = r2 - 1.0;
  return (4.0 / 3.0) * (r1 * r1 * r1 + rho * rho * rho);
}

double ExplicitNodal1D::energy() const { return -0.5 * dirichlet(); }

double barrier_exponent(double p) { return 2.0 / (2.0 - p); }

double barrier_constant(double p) {
  return std::pow(2.0 * p / ((2.0 - p) * (2.0 - p)), 1.0 / (p - 2.0));
}

namespace {

// cubic Hermite interpolation on [x0, x1]; slope=true evaluates the derivative
double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x,
               bool slope) {
  double w = x1 - x0;
  double t = (x - x0) / w;
  double t2 = t * t, t3 = t2 * t;
  if (!slope) {
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * w * d0 + (3 * t2 - 2 * t3) * y1 +
           (t3 - t2) * w * d1;
  }
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * w * d0 + (6 * t - 6 * t2) * y1 +
          (3 * t2 - 2 * t) * w * d1) / w;
}

}  // namespace

double RadialProfile::value(double radius) const {
  radius = std::abs(radius);
  if (r.size() < 2 || radius >= r.back()) return 0.0;
  auto it = std::upper_bound(r.begin(), r.end(), radius);
  std::size_t j = static_cast<std::size_t>(it - r.begin());
  if (j == 0) return u.front();
  return hermite(r[j - 1], r[j], u[j - 1], u[j], du[j - 1], du[j], radius, false);
}

double RadialProfile::slope(double radius) const {
  radius = std::abs(radius);
  if (r.size() < 2 || radius >= r.back()) return 0.0;
  auto it = std::upper_bound(r.begin(), r.end(), radius);
  std::size_t j = static_cast<std::size_t>(it - r.begin());
  if (j == 0) return du.front();
  return hermite(r[j - 1], r[j], u[j - 1], u[j], du[j - 1], du[j], radius, true);
}

double radial_rhs(int dim, const Nonlinearity& nl, double q, double r, double u, double du) {
  if (r < 0.0) throw std::invalid_argument("radius must be nonnegative");
  if (r == 0.0) return -q * nl.f(u) / dim;
  return -(dim - 1) * du / r - q * nl.f(u);
}

namespace {

struct Y2 {
  double u = 0.0, v = 0.0;
};

struct OdeCtx {
  int dim = 1;
  const Nonlinearity* nl = nullptr;
  double q = 1.0;
};

inline Y2 rhs(const OdeCtx& c, double r, const Y2& y) {
  double drift = (c.dim > 1 && r > 0.0) ? -(c.dim - 1) * y.v / r : 0.0;
  return Y2{y.v, drift - c.q * c.nl->f(y.u)};
}

struct StepOut {
  Y2 y;      // 5th-order result
  Y2 klast;  // stage at the step end (first-same-as-last)
  double err = 0.0;
};

StepOut dp45(const OdeCtx& c, double r, const Y2& y, const Y2& k1, double h, double atol,
             double rtol) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Y2 k2 = rhs(c, r + h / 5, {y.u + h * a21 * k1.u, y.v + h * a21 * k1.v});
  Y2 k3 = rhs(c, r + h * 3 / 10,
              {y.u + h * (a31 * k1.u + a32 * k2.u), y.v + h * (a31 * k1.v + a32 * k2.v)});
  Y2 k4 = rhs(c, r + h * 4 / 5, {y.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                                 y.v + h * (a41 * k1.v + a42 * k2.v + a43 * k3.v)});
  Y2 k5 = rhs(c, r + h * 8 / 9, {y.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                                 y.v + h * (a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v)});
  Y2 k6 = rhs(c, r + h,
              {y.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u),
               y.v + h * (a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v + a65 * k5.v)});
  StepOut out;
  out.y = {y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u),
           y.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v)};
  out.klast = rhs(c, r + h, out.y);
  double eu = h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * out.klast.u);
  double ev = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * out.klast.v);
  double su = atol + rtol * std::max(std::abs(y.u), std::abs(out.y.u));
  double sv = atol + rtol * std::max(std::abs(y.v), std::abs(out.y.v));
  eu /= su;
  ev /= sv;
  out.err = std::sqrt(0.5 * (eu * eu + ev * ev));
  return out;
}

struct March {
  OdeCtx c;
  double atol = 1e-12;
  double rtol = 1e-10;
  double h_min = 1e-9;
  double h_max = std::numeric_limits<double>::infinity();
};

struct Rec {
  std::vector<double> r, u, du;
  void push(double rr, const Y2& y) {
    if (!r.empty() && rr <= r.back()) return;
    r.push_back(rr);
    u.push_back(y.u);
    du.push_back(y.v);
  }
};

// integrates to exactly r1, no event handling
Y2 march_to(const March& m, double r0, Y2 y, double r1, Rec* rec = nullptr) {
  if (r1 <= r0) return y;
  double r = r0;
  Y2 k1 = rhs(m.c, r, y);
  double h = std::min(m.h_max, r1 - r0);
  long guard = 0;
  while (r < r1) {
    if (++guard > 4000000) throw std::runtime_error("radial integrator stalled");
    h = std::min(h, r1 - r);
    StepOut s = dp45(m.c, r, y, k1, h, m.atol, m.rtol);
    if (s.err <= 1.0 || h <= m.h_min) {
      r += h;
      y = s.y;
      k1 = s.klast;
      if (rec) rec->push(r, y);
      double grow = s.err > 0.0 ? 0.9 * std::pow(s.err, -0.2) : 5.0;
      h = std::clamp(h * std::clamp(grow, 0.2, 5.0), m.h_min, m.h_max);
    } else {
      h = std::max(h * std::clamp(0.9 * std::pow(s.err, -0.2), 0.2, 0.9), m.h_min);
    }
  }
  return y;
}

// bisection for the first point in (ra, rb] where `past` flips to true,
// re-integrating from the bracket's left state each halving
std::pair<double, Y2> locate(const March& m, double ra, Y2 ya, double rb,
                             const std::function<bool(const Y2&)>& past) {
  double lo = ra, hi = rb;
  Y2 ylo = ya;
  for (int it = 0; it < 100 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    Y2 ym = march_to(m, lo, ylo, mid);
    if (past(ym)) {
      hi = mid;
    } else {
      lo = mid;
      ylo = ym;
    }
  }
  return {hi, march_to(m, lo, ylo, hi)};
}

struct LegEvent {
  int kind = 0;  // 0 reached the end, 1 value crossed zero, 2 slope flattened
  double r = 0.0;
  Y2 y;
};

LegEvent march_events(const March& m, double r0, Y2 y, double r1, bool arm_vertex, Rec* rec) {
  double r = r0;
  Y2 k1 = rhs(m.c, r, y);
  double h = std::min(m.h_max, r1 - r0);
  long guard = 0;
  while (r < r1) {
    if (++guard > 4000000) throw std::runtime_error("radial integrator stalled");
    h = std::min(h, r1 - r);
    StepOut s = dp45(m.c, r, y, k1, h, m.atol, m.rtol);
    if (s.err <= 1.0 || h <= m.h_min) {
      double ra = r;
      Y2 ya = y;
      r += h;
      y = s.y;
      bool cross = ya.u > 0.0 && y.u <= 0.0;
      bool vert = arm_vertex && ya.v < 0.0 && y.v >= 0.0;
      if (cross || vert) {
        LegEvent ev;
        ev.kind = cross ? 1 : 2;
        std::pair<double, Y2> hit{0.0, Y2{}};
        if (cross) hit = locate(m, ra, ya, r, [](const Y2& p) { return p.u <= 0.0; });
        if (vert) {
          auto hv = locate(m, ra, ya, r, [](const Y2& p) { return p.v >= 0.0; });
          if (!cross || hv.first < hit.first) {
            hit = hv;
            ev.kind = 2;
          }
        }
        ev.r = hit.first;
        ev.y = hit.second;
        if (rec) rec->push(ev.r, ev.y);
        return ev;
      }
      if (rec) rec->push(r, y);
      k1 = s.klast;
      double grow = s.err > 0.0 ? 0.9 * std::pow(s.err, -0.2) : 5.0;
      h = std::clamp(h * std::clamp(grow, 0.2, 5.0), m.h_min, m.h_max);
    } else {
      h = std::max(h * std::clamp(0.9 * std::pow(s.err, -0.2), 0.2, 0.9), m.h_min);
    }
  }
  return {0, r1, y};
}

struct Shot {
  int kind = 0;
  double r = 0.0;
  Y2 y;
  Rec rec;
};

// One radial shot from u(0)=a. Leg one runs inside the inclusion (weight +1)
// with the step capped well under the width of the small-amplitude arches the
// sign nonlinearity can produce there, so a zero crossing cannot straddle a
// single step. Leg two (weight -1) watches for both the crossing and the
// flattening event.
Shot fire(int dim, const Nonlinearity& nl, double r_omega, double a, bool record) {
  Shot shot;
  Rec* rec = record ? &shot.rec : nullptr;
  double f0 = nl.f(a);
  double rs = 1e-6 * std::min(1.0, r_omega);
  Y2 ys{a - f0 * rs * rs / (2.0 * dim), -f0 * rs / dim};
  if (record) {
    shot.rec.push(0.0, {a, 0.0});
    shot.rec.push(rs, ys);
  }
  if (ys.u <= 0.0) {
    shot.kind = 1;
    shot.r = rs;
    shot.y = ys;
    return shot;
  }
  March inner;
  inner.c = {dim, &nl, +1.0};
  inner.h_max = 0.05 * r_omega;
  LegEvent ev = march_events(inner, rs, ys, r_omega, false, rec);
  if (ev.kind != 0) {
    shot.kind = ev.kind;
    shot.r = ev.r;
    shot.y = ev.y;
    return shot;
  }
  March outer;
  outer.c = {dim, &nl, -1.0};
  outer.h_max = 0.1 * std::max(r_omega, 1.0);
  double r_cap = r_omega * (1.0 + 60.0 / (2.0 - nl.p));
  ev = march_events(outer, r_omega, ev.y, r_cap, true, rec);
  shot.kind = ev.kind;
  shot.r = ev.r;
  shot.y = ev.y;
  return shot;
}

}  // namespace

ShootResult shoot_ground_state(int dim, const Nonlinearity& nl, double r_omega,
                               std::optional<std::pair<double, double>> a_bracket) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(r_omega > 0.0)) throw std::invalid_argument("inclusion radius must be positive");
  if (!(nl.p >= 1.0 && nl.p < 2.0)) throw std::invalid_argument("exponent must lie in [1,2)");

  int evals = 0;
  // undershoot (slope flattens with value still positive) gives +value,
  // overshoot (value crosses zero first) gives the negative slope there
  auto defect = [&](double a) {
    ++evals;
    Shot s = fire(dim, nl, r_omega, a, false);
    if (s.kind == 0) throw std::runtime_error("radial shot reached the radius cap with no event");
    return s.kind == 2 ? s.y.u : s.y.v;
  };

  double scale = std::pow(r_omega, barrier_exponent(nl.p));
  double lo, hi, flo, fhi;
  if (a_bracket) {
    lo = a_bracket->first;
    hi = a_bracket->second;
    if (!(0.0 < lo && lo < hi)) throw std::invalid_argument("bracket must satisfy 0 < lo < hi");
    flo = defect(lo);
    fhi = defect(hi);
    if (!(flo <= 0.0 && fhi >= 0.0))
      throw std::runtime_error("matching defect does not change sign over the bracket");
  } else {
    hi = scale;
    fhi = defect(hi);
    lo = hi;
    flo = fhi;
    for (int k = 0; k < 150 && flo > 0.0; ++k) {
      hi = lo;
      fhi = flo;
      lo *= 0.5;
      if (lo < 1e-300) throw std::runtime_error("no overshoot found while shrinking the start");
      flo = defect(lo);
    }
    for (int k = 0; k < 150 && fhi < 0.0; ++k) {
      lo = hi;
      flo = fhi;
      hi *= 2.0;
      if (hi > 1e300) throw std::runtime_error("no undershoot found while growing the start");
      fhi = defect(hi);
    }
  }

  double best_a = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double best_f = std::abs(flo) < std::abs(fhi) ? flo : fhi;
  double tol_f = 1e-13 * std::max(1.0, scale);
  int last = 0;
  for (int it = 0; it < 256 && std::abs(best_f) > tol_f; ++it) {
    double span = hi - lo;
    if (span <= 1e-16 * std::max(1.0, hi)) break;
    double denom = fhi - flo;
    double mid = denom != 0.0 ? (lo * fhi - hi * flo) / denom : 0.5 * (lo + hi);
    if (it % 3 == 2 || !(mid > lo + 1e-12 * span && mid < hi - 1e-12 * span))
      mid = 0.5 * (lo + hi);
    double fm = defect(mid);
    if (std::abs(fm) < std::abs(best_f)) {
      best_a = mid;
      best_f = fm;
    }
    if (fm == 0.0) break;
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
      if (last == -1) fhi *= 0.5;  // Illinois cut against one-sided stalling
      last = -1;
    } else {
      hi = mid;
      fhi = fm;
      if (last == +1) flo *= 0.5;
      last = +1;
    }
  }

  Shot fin = fire(dim, nl, r_omega, best_a, true);
  ShootResult out;
  out.a = best_a;
  out.R_supp = fin.r;
  out.u_end = std::abs(fin.y.u);
  out.du_end = std::abs(fin.y.v);
  out.iterations = evals;
  if (std::max(out.u_end, out.du_end) > 1e-10 * std::max(1.0, scale))
    throw std::runtime_error("dead-core matching defect stayed above tolerance");
  out.profile.dim = dim;
  out.profile.p = nl.p;
  out.profile.a = best_a;
  out.profile.R_supp = fin.r;
  out.profile.r = std::move(fin.rec.r);
  out.profile.u = std::move(fin.rec.u);
  out.profile.du = std::move(fin.rec.du);
  return out;
}

double verify_profile(const RadialProfile& prof, const Nonlinearity& nl, double r_omega) {
  if (prof.r.size() < 2) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < prof.r.size(); ++i) {
    double ra = prof.r[i], rb = prof.r[i + 1];
    Y2 y{prof.u[i], prof.du[i]};
    if (ra == 0.0) {
      // symmetric expansion through the coordinate singularity
      double f0 = nl.f(y.u);
      double rcut = std::min(1e-6 * std::max(1.0, r_omega), 0.5 * rb);
      y = {y.u - f0 * rcut * rcut / (2.0 * prof.dim), -f0 * rcut / prof.dim};
      ra = rcut;
    }
    March m;
    m.atol = 1e-13;
    m.rtol = 1e-12;
    if (ra < r_omega && rb > r_omega) {
      m.c = {prof.dim, &nl, +1.0};
      y = march_to(m, ra, y, r_omega);
      m.c = {prof.dim, &nl, -1.0};
      y = march_to(m, r_omega, y, rb);
    } else {
      m.c = {prof.dim, &nl, ra < r_omega ? +1.0 : -1.0};
      y = march_to(m, ra, y, rb);
    }
    worst = std::max({worst, std::abs(y.u - prof.u[i + 1]), std::abs(y.v - prof.du[i + 1])});
  }
  return worst;
}

RadialProfile tabulate_radial(int dim, double p, double R_supp,
                              const std::vector<double>& breakpoints, int samples,
                              const std::function<double(double)>& value,
                              const std::function<double(double)>& deriv) {
  if (samples < 2) throw std::invalid_argument("need at least two samples");
  if (!(R_supp > 0.0)) throw std::invalid_argument("support radius must be positive");
  std::vector<double> rs;
  rs.reserve(static_cast<std::size_t>(samples) + breakpoints.size());
  for (int i = 0; i < samples; ++i) rs.push_back(R_supp * i / double(samples - 1));
  for (double b : breakpoints)
    if (b > 0.0 && b < R_supp) rs.push_back(b);
  std::sort(rs.begin(), rs.end());
  RadialProfile prof;
  prof.dim = dim;
  prof.p = p;
  prof.a = value(0.0);
  prof.R_supp = R_supp;
  double tol = 1e-12 * R_supp;
  for (double r : rs) {
    if (!prof.r.empty() && r - prof.r.back() < tol) continue;
    prof.r.push_back(r);
    prof.u.push_back(value(r));
    prof.du.push_back(deriv(r));
  }
  return prof;
}

RadialProfile tabulate_explicit_w(int dim, int samples) {
  ExplicitW w = explicit_w(dim);
  return tabulate_radial(
      dim, 1.0, w.R, {1.0}, samples, [w](double r) { return w.value(r); },
      [w](double r) { return w.deriv(r); });
}

RadialProfile tabulate_explicit_nodal(int samples) {
  ExplicitNodal1D nod = explicit_nodal_1d();
  return tabulate_radial(
      1, 1.0, nod.r2, {nod.r1, 1.0}, samples, [nod](double r) { return nod.value(r); },
      [nod](double r) { return nod.deriv(r); });
}

Field sample_radial(const Grid& g, Point center,
                    const std::function<double(double)>& radial_value) {
  Field out(g);
  for (std::size_t i = 0; i < out.v.size(); ++i) {
    if (g.on_boundary(i)) continue;
    Point pt = g.point(i);
    double dx = pt.x - center.x;
    double dy = g.dim == 2 ? pt.y - center.y : 0.0;
    out.v[i] = radial_value(std::sqrt(dx * dx + dy * dy));
  }
  return out;
}

}  // namespace deadcore
