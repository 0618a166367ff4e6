#include "deadcore/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "deadcore/energy.hpp"

namespace deadcore {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Area of {|u| > tau}. Cells whose corners all sit on one side are decided
// exactly (bilinear extrema live at cell corners); mixed cells get a midpoint
// subsample. Sign changes inside a cell can hide a sub-tau sliver from the
// corner test, but that band is O(tau) wide and irrelevant at tau = h^2.
double masked_area(const Field& u, double tau) {
  const Grid& g = u.grid;
  const int sub = g.dim == 1 ? 256 : 8;
  double full_cells = 0.0, mixed = 0.0;
  if (g.dim == 1) {
    for (long i = 0; i + 1 < g.n; ++i) {
      const double a = u.v[static_cast<std::size_t>(i)];
      const double b = u.v[static_cast<std::size_t>(i) + 1];
      const bool ina = std::abs(a) > tau, inb = std::abs(b) > tau;
      if (ina && inb) {
        full_cells += 1.0;
        continue;
      }
      if (!ina && !inb) continue;
      int cnt = 0;
      for (int s = 0; s < sub; ++s) {
        double t = (s + 0.5) / sub;
        if (std::abs((1.0 - t) * a + t * b) > tau) ++cnt;
      }
      mixed += static_cast<double>(cnt) / sub;
    }
    return (full_cells + mixed) * g.cell_volume();
  }
  const long n = g.n;
  for (long iy = 0; iy + 1 < n; ++iy) {
    for (long ix = 0; ix + 1 < n; ++ix) {
      const double* c = u.v.data() + iy * n + ix;
      const double c00 = c[0], c10 = c[1], c01 = c[n], c11 = c[n + 1];
      const int above = (std::abs(c00) > tau) + (std::abs(c10) > tau) + (std::abs(c01) > tau) +
                        (std::abs(c11) > tau);
      if (above == 4) {
        full_cells += 1.0;
        continue;
      }
      if (above == 0) continue;
      int cnt = 0;
      for (int a = 0; a < sub; ++a) {
        double ty = (a + 0.5) / sub;
        double lo0 = (1.0 - ty) * c00 + ty * c01;
        double lo1 = (1.0 - ty) * c10 + ty * c11;
        for (int b = 0; b < sub; ++b) {
          double tx = (b + 0.5) / sub;
          if (std::abs((1.0 - tx) * lo0 + tx * lo1) > tau) ++cnt;
        }
      }
      mixed += static_cast<double>(cnt) / (sub * sub);
    }
  }
  return (full_cells + mixed) * g.cell_volume();
}

// Outermost tau-crossing of |u| along rays from the origin, with a linear
// refinement between samples. Returns -1 when no ray crosses.
double ray_radius(const Field& u, double tau, int rays) {
  const Grid& g = u.grid;
  const double step = 0.5 * g.h();
  const double tmax = (g.dim == 1 ? 1.0 : std::sqrt(2.0)) * g.L;
  const int nray = g.dim == 1 ? 2 : rays;
  double best = -1.0;
  for (int k = 0; k < nray; ++k) {
    double cx, cy;
    if (g.dim == 1) {
      cx = k == 0 ? 1.0 : -1.0;
      cy = 0.0;
    } else {
      double th = 2.0 * kPi * k / nray;
      cx = std::cos(th);
      cy = std::sin(th);
    }
    double prev = std::abs(sample_bilinear(u, Point{0.0, 0.0}));
    double prev_t = 0.0, found = -1.0;
    for (double t = step; t <= tmax + step; t += step) {
      double cur = std::abs(sample_bilinear(u, Point{t * cx, t * cy}));
      if (prev > tau && cur <= tau) {
        double frac = (prev - tau) / std::max(prev - cur, 1e-300);
        found = prev_t + frac * (t - prev_t);
      }
      prev = cur;
      prev_t = t;
    }
    best = std::max(best, found);
  }
  return best;
}

}  // namespace

SupportInfo extract_support(const Field& u, double clearance_margin) {
  const Grid& g = u.grid;
  const double tau = g.h() * g.h();
  SupportInfo out;
  out.scan = support_scan(u, tau);
  if (out.scan.count == 0) throw std::runtime_error("field has no support above the threshold");
  if (out.scan.clearance < clearance_margin * g.L)
    throw std::runtime_error(
        "support reaches the box clearance margin; increase the computational box");
  out.mask.assign(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i)
    out.mask[i] = !g.on_boundary(i) && std::abs(u.v[i]) > tau ? 1 : 0;
  out.measure_refined = 2.0 * masked_area(u, tau) - masked_area(u, 4.0 * tau);
  const double r1 = ray_radius(u, tau, 720);
  const double r4 = ray_radius(u, 4.0 * tau, 720);
  if (r1 > 0.0 && r4 > 0.0)
    out.radius_refined = 2.0 * r1 - r4;
  else if (r1 > 0.0)
    out.radius_refined = r1;
  else
    out.radius_refined = out.scan.radius;
  return out;
}

CompatibilityReport compatibility_check(const Field& u, const Shape& omega, double rel_tol) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  SupportInfo info = extract_support(u, 0.0);
  MeasureResult m = shape_measure(omega);
  if (!(m.value > 0.0)) throw std::invalid_argument("domain has nonpositive measure");
  CompatibilityReport rep;
  rep.support_measure = info.measure_refined;
  rep.omega_measure = m.value;
  rep.ratio_error = std::abs(rep.support_measure - 2.0 * m.value) / (2.0 * m.value);
  rep.pass = rep.ratio_error <= rel_tol;
  return rep;
}

StarshapedReport starshaped_check(const Field& u, Point center, int rays) {
  const Grid& g = u.grid;
  if (g.dim != 2) throw std::invalid_argument("the ray check needs a 2d field");
  if (rays < 8) throw std::invalid_argument("too few rays");
  const double h = g.h();
  const double tau = h * h;
  const double step = 0.5 * h;
  StarshapedReport rep;
  rep.rays = rays;
  if (std::abs(sample_bilinear(u, center)) <= tau) {
    // the anchor itself carries no support; every ray is detached
    rep.violations = rays;
    rep.worst_gap = 2.0 * g.L;
    rep.pass = false;
    return rep;
  }
  const double tmax = 2.5 * g.L;  // samples outside the box read as zero
  for (int k = 0; k < rays; ++k) {
    const double th = 2.0 * kPi * k / rays;
    const double cx = std::cos(th), cy = std::sin(th);
    long gap_run = 0, worst_run = 0;
    for (double t = step; t <= tmax; t += step) {
      Point p{center.x + t * cx, center.y + t * cy};
      if (std::abs(sample_bilinear(u, p)) > tau) {
        // a closed gap: below-threshold samples strictly inside the support
        worst_run = std::max(worst_run, gap_run);
        gap_run = 0;
      } else {
        ++gap_run;
      }
    }
    const double gap_len = static_cast<double>(worst_run) * step;
    rep.worst_gap = std::max(rep.worst_gap, gap_len);
    if (gap_len > h + 1e-12) ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

GrowthReport containment_growth(const std::vector<SweepRow>& rows, double h) {
  if (rows.size() < 2) throw std::invalid_argument("need at least two sweep rows");
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  GrowthReport rep;
  rep.monotone_within_h = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i && !(rows[i].p > rows[i - 1].p))
      throw std::invalid_argument("sweep rows must be ascending in p");
    if (i && rows[i].inradius < rows[i - 1].inradius - h) rep.monotone_within_h = false;
    rep.inradius.push_back(rows[i].inradius);
  }
  rep.total_growth = rows.back().inradius - rows.front().inradius;
  return rep;
}

CensusReport multiplicity_census(const Grid& g, const Shape& omega, const Nonlinearity& nl,
                                 const SolveConfig& cfg) {
  validate_domain(g, omega, g.h());
  std::vector<Shape> comps = component_split(omega, std::max(1024L, 4L * g.n));
  const int ell = static_cast<int>(comps.size());
  if (ell > 12) throw std::invalid_argument("too many components for a census");

  CensusReport rep;
  rep.components = ell;
  const double tau = g.h() * g.h();
  rep.distinct_tol = 10.0 * tau;

  const std::vector<double> w_full = interface_weights(g, omega);
  const Nonlinearity rep_nl = reporting_nonlinearity(nl, cfg);

  std::vector<Field> parts;
  std::vector<double> part_energy;
  parts.reserve(comps.size());
  for (const Shape& c : comps) {
    SolutionRecord r = solve_ground_state(g, c, nl, cfg);
    if (!(r.u.grid == g))
      throw std::runtime_error("a component solve outgrew the shared grid; enlarge the box");
    part_energy.push_back(energy_weighted(r.u, w_full, rep_nl).value);
    parts.push_back(std::move(r.u));
  }

  rep.disjoint_supports = true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    int covered = 0;
    for (const Field& f : parts)
      if (std::abs(f.v[i]) > tau) ++covered;
    if (covered > 1) {
      rep.disjoint_supports = false;
      break;
    }
  }

  const unsigned total = 1u << ell;
  for (unsigned s = 1; s < total; ++s) {
    CensusEntry e;
    e.pattern.assign(ell, 0);
    Field u(g);
    double esum = 0.0;
    for (int b = 0; b < ell; ++b) {
      if (!((s >> b) & 1u)) continue;
      e.pattern[b] = 1;
      const Field& part = parts[static_cast<std::size_t>(b)];
      for (std::size_t i = 0; i < g.size(); ++i) u.v[i] += part.v[i];
      esum += part_energy[static_cast<std::size_t>(b)];
    }
    EnergyReport er = energy_weighted(u, w_full, rep_nl);
    e.energy = er.value;
    e.residual_sup = er.residual_sup;
    e.additivity_defect = std::abs(er.value - esum);
    e.validated = er.residual_sup <= cfg.census_residual_tol;
    if (e.validated) ++rep.validated_count;
    e.u = std::move(u);
    rep.entries.push_back(std::move(e));
  }

  rep.all_distinct = true;
  for (std::size_t i = 0; i < rep.entries.size() && rep.all_distinct; ++i) {
    if (!rep.entries[i].validated) continue;
    for (std::size_t j = i + 1; j < rep.entries.size(); ++j) {
      if (!rep.entries[j].validated) continue;
      if (sup_dist(rep.entries[i].u, rep.entries[j].u) <= rep.distinct_tol) {
        rep.all_distinct = false;
        break;
      }
    }
  }
  return rep;
}

SeparationResult separation_threshold_search(const Grid& g, double gap_lo, double gap_hi,
                                             const SolveConfig& cfg) {
  if (g.dim != 1) throw std::invalid_argument("the separation search is one dimensional");
  if (!(gap_lo >= 0.0 && gap_hi > gap_lo)) throw std::invalid_argument("bad gap bracket");
  const double h = g.h();
  const Nonlinearity nl = make_nonlinearity(1.0);
  const Nonlinearity rep_nl = reporting_nonlinearity(nl, cfg);

  // interval centers +-c sit on grid nodes, so admissible gaps 2(c - 1) move
  // on a 2h lattice
  auto center_index = [&](double gap) { return std::llround((1.0 + 0.5 * gap) / h); };
  auto gap_of = [&](long long k) { return 2.0 * (static_cast<double>(k) * h - 1.0); };

  SeparationResult res;
  auto validates = [&](long long k) {
    ++res.evaluations;
    const double c = static_cast<double>(k) * h;
    Shape left = make_ball(1, Point{-c, 0.0}, 1.0);
    Shape both = make_union({left, make_ball(1, Point{c, 0.0}, 1.0)});
    SolutionRecord r = solve_ground_state(g, left, nl, cfg);
    if (!(r.u.grid == g))
      throw std::runtime_error("a separation solve outgrew the grid; enlarge the box");
    // the right part is the exact mirror: node coordinates are symmetric, so
    // mirrored weights and residuals carry over bitwise
    Field sum = r.u;
    for (long i = 0; i < g.n; ++i)
      sum.v[static_cast<std::size_t>(i)] += r.u.v[static_cast<std::size_t>(g.n - 1 - i)];
    const std::vector<double> w = interface_weights(g, both);
    return energy_weighted(sum, w, rep_nl).residual_sup <= cfg.census_residual_tol;
  };

  long long klo = center_index(gap_lo), khi = center_index(gap_hi);
  if (klo >= khi) throw std::invalid_argument("gap bracket collapses on the grid lattice");
  if (validates(klo))
    throw std::runtime_error("lower gap already validates; widen the bracket downward");
  if (!validates(khi))
    throw std::runtime_error("upper gap fails to validate; widen the bracket upward");
  while (khi - klo > 1) {
    const long long mid = klo + (khi - klo) / 2;
    (validates(mid) ? khi : klo) = mid;
  }
  res.d_lo = gap_of(klo);
  res.d_hi = gap_of(khi);
  return res;
}

NearTwoReport uniqueness_near_two(const Grid& g, const Shape& omega,
                                  const std::vector<double>& ps, int starts,
                                  const SolveConfig& cfg) {
  if (ps.empty()) throw std::invalid_argument("empty p list");
  NearTwoReport rep;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i && !(ps[i] > ps[i - 1]))
      throw std::invalid_argument("p values must be strictly ascending");
    if (ps[i] > 1.95 + 1e-12)
      throw std::invalid_argument("p beyond 1.95 needs amplitudes outside the desk-scale range");
  }
  for (double p : ps) {
    rep.tested.push_back(p);
    UniquenessReport u = verify_uniqueness(g, omega, make_nonlinearity(p), starts, cfg);
    if (!u.pass) {
      rep.p_threshold = p;
      rep.uniqueness_held = false;
      return rep;
    }
  }
  rep.p_threshold = 2.0;
  rep.uniqueness_held = true;
  return rep;
}

}  // namespace deadcore
