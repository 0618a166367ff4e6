#include "deadcore/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "deadcore/energy.hpp"
#include "deadcore/geometry.hpp"
#include "deadcore/poisson.hpp"
#include "deadcore/radial.hpp"

namespace deadcore {

namespace {

constexpr double kPi = 3.14159265358979323846;

using IndexMap = std::function<std::size_t(std::size_t)>;

IndexMap mirror_map(const Grid& g, int axis) {
  const long n = g.n;
  if (g.dim == 1 || axis == 0) {
    if (g.dim == 1)
      return [n](std::size_t i) { return static_cast<std::size_t>(n - 1) - i; };
    return [n](std::size_t i) {
      const long ix = static_cast<long>(i) % n, iy = static_cast<long>(i) / n;
      return static_cast<std::size_t>(iy * n + (n - 1 - ix));
    };
  }
  return [n](std::size_t i) {
    const long ix = static_cast<long>(i) % n, iy = static_cast<long>(i) / n;
    return static_cast<std::size_t>((n - 1 - iy) * n + ix);
  };
}

IndexMap half_turn_map(const Grid& g) {
  const long n = g.n;
  return [n](std::size_t i) {
    const long ix = static_cast<long>(i) % n, iy = static_cast<long>(i) / n;
    return static_cast<std::size_t>((n - 1 - iy) * n + (n - 1 - ix));
  };
}

bool weights_invariant(const std::vector<double>& w, const IndexMap& map) {
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    worst = std::max(worst, std::abs(w[i] - w[map(i)]));
  return worst <= 1e-9;
}

// Averaging over an index involution; pairs touched once, so the result is
// exactly invariant in floating point.
void even_project(Field& u, const std::vector<IndexMap>& maps) {
  for (const IndexMap& map : maps) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::size_t j = map(i);
      if (j <= i) continue;
      const double a = 0.5 * (u.v[i] + u.v[j]);
      u.v[i] = a;
      u.v[j] = a;
    }
  }
}

void odd_project(Field& u, const IndexMap& map) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::size_t j = map(i);
    if (j < i) continue;
    if (j == i) {
      u.v[i] = 0.0;
      continue;
    }
    const double a = 0.5 * (u.v[i] - u.v[j]);
    u.v[i] = a;
    u.v[j] = -a;
  }
}

double residual_field(const Field& u, const std::vector<double>& w, const Nonlinearity& nl,
                      Field& r) {
  const Grid& g = u.grid;
  Field lap = laplacian_apply(u);
  double sup = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.on_boundary(i)) {
      r.v[i] = 0.0;
      continue;
    }
    r.v[i] = -lap.v[i] - w[i] * nl.f(u.v[i]);
    sup = std::max(sup, std::abs(r.v[i]));
  }
  return sup;
}

void canonical_sign(Field& u) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = std::abs(u.v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (u.v[arg] < 0.0)
    for (std::size_t i = 0; i < u.size(); ++i) u.v[i] = -u.v[i];
}

NodalRecord finish_nodal(Field&& u, NodalKind kind, const Shape& omega,
                         const std::vector<double>& w, const Nonlinearity& rep_nl,
                         const SolveConfig& cfg, long iters, long rounds) {
  const Grid& g = u.grid;
  const double tau = g.h() * g.h();
  const QField qf = sample_q(g, omega);
  const EnergyReport er = energy_weighted(u, w, rep_nl);
  const SupportScan sc = support_scan(u, tau);
  const FieldClass cls = classify(u, tau);
  double posmin = std::numeric_limits<double>::infinity();
  long npos = 0, nneg = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (qf.q[i] > 0) posmin = std::min(posmin, u.v[i]);
    if (g.on_boundary(i)) continue;
    if (u.v[i] > tau) ++npos;
    if (u.v[i] < -tau) ++nneg;
  }
  NodalRecord rec;
  rec.kind = kind;
  rec.level = er.value;
  rec.positive_mass = static_cast<double>(npos) * g.cell_volume();
  rec.negative_mass = static_cast<double>(nneg) * g.cell_volume();
  rec.path_rounds = rounds;
  rec.sol = SolutionRecord{std::move(u), er,  cls,   tau,  sc.measure,
                           sc.radius,    sc.inradius, posmin, iters,
                           rep_nl.p == 1.0 ? rep_nl.eps : 0.0, true, config_hash(cfg)};
  return rec;
}

// Detected mirror symmetries of the weight field; the path projector is the
// average over this subgroup.
std::vector<IndexMap> detect_mirrors(const Grid& g, const std::vector<double>& w) {
  std::vector<IndexMap> maps;
  IndexMap mx = mirror_map(g, 0);
  if (weights_invariant(w, mx)) maps.push_back(mx);
  if (g.dim == 2) {
    IndexMap my = mirror_map(g, 1);
    if (weights_invariant(w, my)) maps.push_back(my);
  }
  return maps;
}

Field ring_intermediate(const Field& anchor, double r_eff) {
  const Grid& g = anchor.grid;
  Field mid(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.point(i);
    const double r = std::sqrt(p.x * p.x + (g.dim == 2 ? p.y * p.y : 0.0));
    mid.v[i] = anchor.v[i] * std::cos(kPi * std::min(r / r_eff, 1.0));
  }
  return mid;
}

}  // namespace

NodalRecord mountain_pass(const Grid& g0, const Shape& omega, const Nonlinearity& nl,
                          const SolveConfig& cfg, const PathConfig& path) {
  if (path.images < 3) throw std::invalid_argument("need at least three path images");
  if (path.max_rounds < 1 || path.steps_per_round < 1)
    throw std::invalid_argument("bad path configuration");

  SolutionRecord gs = solve_ground_state(g0, omega, nl, cfg);
  const Grid g = gs.u.grid;
  const std::vector<double> w = interface_weights(g, omega);
  const Nonlinearity rep_nl = reporting_nonlinearity(nl, cfg);
  const double tau = g.h() * g.h();

  if (component_split(omega).size() > 1)
    std::fprintf(stderr,
                 "warning: mountain pass on a disconnected domain; the min-max level may "
                 "degenerate to a broken path\n");

  const std::vector<IndexMap> mirrors = detect_mirrors(g, w);
  std::function<void(Field&)> project;
  if (!mirrors.empty()) project = [mirrors](Field& u) { even_project(u, mirrors); };

  // endpoints must be critical inside the symmetry class, so the anchor is
  // symmetrized and re-tightened
  Field anchor = gs.u;
  long iters = gs.iterations;
  if (project) {
    project(anchor);
    iters += descend(anchor, w, rep_nl, cfg, project).iterations;
  }

  const double r_eff = support_scan(anchor, tau).radius;
  if (!(r_eff > 0.0)) throw std::runtime_error("ground state carries no support");
  Field mid = ring_intermediate(anchor, r_eff);
  if (project) project(mid);
  if (classify(mid, tau) != FieldClass::sign_changing) {
    // fall back to a deep central dip; the anchor is positive, so pushing the
    // center down two amplitudes forces a sign change
    const double amp = sup_norm(anchor);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.on_boundary(i)) continue;
      const Point p = g.point(i);
      const double r2 = p.x * p.x + (g.dim == 2 ? p.y * p.y : 0.0);
      const double s = 0.3 * r_eff;
      mid.v[i] = anchor.v[i] - 2.0 * amp * std::exp(-r2 / (s * s));
    }
    if (project) project(mid);
    if (classify(mid, tau) != FieldClass::sign_changing)
      throw std::runtime_error("failed to build a sign-changing intermediate state");
  }

  // The projected descent flow has exactly two attractors, the signed grounds,
  // and the pass is an index-1 crossing on the boundary between their basins,
  // hence attracting for the flow restricted to that boundary. A descent
  // started on the boundary therefore converges to the pass itself. Bisection
  // on which basin a start commits to drives the start onto the boundary; the
  // best sign-changing iterate any flow passes is the saddle candidate, and it
  // must meet the gradient tolerance like every other solve.
  auto path_state = [&](double t) {
    Field s(g);
    if (t <= 0.5) {
      const double b = t / 0.5;
      for (std::size_t i = 0; i < g.size(); ++i) s.v[i] = (1.0 - b) * -anchor.v[i] + b * mid.v[i];
    } else {
      const double b = (t - 0.5) / 0.5;
      for (std::size_t i = 0; i < g.size(); ++i) s.v[i] = (1.0 - b) * mid.v[i] + b * anchor.v[i];
    }
    return s;
  };

  const double mass_anchor = integrate(anchor);
  if (!(std::abs(mass_anchor) > 0.0)) throw std::runtime_error("ground state carries no mass");

  long rounds_total = 0;
  double best_res = std::numeric_limits<double>::infinity();
  Field best(g), rbuf(g);

  // runs the flow until it commits to a basin (+1/-1) or goes critical (0)
  auto flow_basin = [&](Field u) {
    SolveConfig bcfg = cfg;
    double res = residual_field(u, w, rep_nl, rbuf);
    double s = 0.0;
    while (rounds_total < path.max_rounds) {
      ++rounds_total;
      // snapshot every step once a critical point is near, so the closest
      // pass is not skipped over
      bcfg.max_iterations = res < 1e-3 ? 1 : path.steps_per_round;
      iters += descend(u, w, rep_nl, bcfg, project).iterations;
      res = residual_field(u, w, rep_nl, rbuf);
      s = integrate(u) / mass_anchor;
      if (res < best_res && classify(u, tau) == FieldClass::sign_changing) {
        best_res = res;
        best = u;
      }
      if (std::getenv("DC_MP_TRACE") && rounds_total % 50 == 0)
        std::fprintf(stderr, "round %ld res %.3e s %.3f best %.3e\n", rounds_total, res, s,
                     best_res);
      if (res <= cfg.grad_tol && std::abs(s) <= 0.75) return 0;
      if (std::abs(s) > 0.75) return s > 0.0 ? 1 : -1;
    }
    return s >= 0.0 ? 1 : -1;  // budget spent; commit to the mass tendency
  };

  const int M = path.images;
  double lo = 0.0, hi = 1.0;
  const int basin_lo = mass_anchor > 0.0 ? -1 : 1;
  bool bracketed = false, critical = false;
  for (int j = 1; j + 1 < M; ++j) {
    const double t = static_cast<double>(j) / (M - 1);
    const int b = flow_basin(path_state(t));
    if (b == 0) {
      critical = true;
      break;
    }
    if (b != basin_lo) {
      hi = t;
      bracketed = true;
      break;
    }
    lo = t;
  }
  if (!bracketed && !critical) hi = 1.0;  // the far anchor flips by construction

  while (!critical && best_res > cfg.grad_tol && rounds_total < path.max_rounds) {
    const double tm = 0.5 * (lo + hi);
    if (!(tm > lo && tm < hi)) break;  // theta resolved to an ulp
    const int b = flow_basin(path_state(tm));
    if (b == 0) break;
    if (b == basin_lo)
      lo = tm;
    else
      hi = tm;
  }
  if (best_res > cfg.grad_tol)
    throw std::runtime_error("mountain pass failed to converge within the round budget");

  // polish: the candidate already satisfies the first-order condition, so
  // plain descent accepts it immediately; a lost sign change downstream
  // means the saddle was not sign-changing at all
  Field u = best;
  iters += descend(u, w, rep_nl, cfg, project).iterations;
  if (classify(u, tau) != FieldClass::sign_changing)
    throw std::runtime_error("mountain pass degenerated");
  canonical_sign(u);
  return finish_nodal(std::move(u), NodalKind::mountain_pass, omega, w, rep_nl, cfg, iters,
                      rounds_total);
}

NodalRecord least_energy_nodal(const Grid& g0, const Shape& omega, const Nonlinearity& nl,
                               const SolveConfig& cfg, const std::vector<Field>& seeds) {
  SolutionRecord gs = solve_ground_state(g0, omega, nl, cfg);
  const Grid g = gs.u.grid;
  const std::vector<double> w = interface_weights(g, omega);
  const Nonlinearity rep_nl = reporting_nonlinearity(nl, cfg);
  const double tau = g.h() * g.h();

  std::vector<Field> pool;
  std::vector<std::function<void(Field&)>> post;
  if (!seeds.empty()) {
    for (const Field& s : seeds) {
      if (!(s.grid == g))
        throw std::invalid_argument("seed grid does not match the solve grid");
      pool.push_back(s);
      post.emplace_back();
    }
  } else {
    const double r_eff = support_scan(gs.u, tau).radius;
    IndexMap mx = mirror_map(g, 0);
    if (weights_invariant(w, mx)) {
      Field s = gs.u;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.point(i).x;
        s.v[i] *= x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
      }
      odd_project(s, mx);
      pool.push_back(std::move(s));
      post.emplace_back([mx](Field& u) { odd_project(u, mx); });
    }
    if (g.dim == 2) {
      IndexMap my = mirror_map(g, 1);
      if (weights_invariant(w, my)) {
        Field s = gs.u;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double y = g.point(i).y;
          s.v[i] *= y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
        }
        odd_project(s, my);
        pool.push_back(std::move(s));
        post.emplace_back([my](Field& u) { odd_project(u, my); });
      }
      IndexMap rot = half_turn_map(g);
      if (weights_invariant(w, rot)) {
        Field s = gs.u;
        for (std::size_t i = 0; i < g.size(); ++i) {
          const double x = g.point(i).x;
          s.v[i] *= x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        }
        odd_project(s, rot);
        pool.push_back(std::move(s));
        post.emplace_back([rot](Field& u) { odd_project(u, rot); });
      }
    }
    pool.push_back(ring_intermediate(gs.u, r_eff > 0.0 ? r_eff : 1.0));
    post.emplace_back();
    std::mt19937_64 rng(cfg.seed + 101);
    std::uniform_real_distribution<double> off(-0.5 * r_eff, 0.5 * r_eff);
    for (int k = 0; k < 2; ++k) {
      const int axis = g.dim == 2 ? static_cast<int>(rng() & 1u) : 0;
      const double c = off(rng);
      Field s = gs.u;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const Point p = g.point(i);
        const double coord = axis == 0 ? p.x : p.y;
        s.v[i] *= coord < c ? -1.0 : 1.0;
      }
      pool.push_back(std::move(s));
      post.emplace_back();
    }
  }

  bool found = false;
  double best_e = 0.0;
  Field best(g);
  long iters = gs.iterations;
  long used_rounds = 0;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    Field u = std::move(pool[k]);
    if (post[k]) post[k](u);
    DescentStats st = descend_continuation(u, w, nl, cfg, post[k]);
    iters += st.iterations;
    if (!st.converged) continue;
    if (classify(u, tau) != FieldClass::sign_changing) continue;
    const double e = energy_weighted(u, w, rep_nl).value;
    ++used_rounds;
    if (!found || e < best_e) {
      found = true;
      best_e = e;
      best = std::move(u);
    }
  }
  if (!found) throw std::runtime_error("no sign-changing critical point found");
  canonical_sign(best);
  return finish_nodal(std::move(best), NodalKind::least_energy, omega, w, rep_nl, cfg, iters,
                      used_rounds);
}

NodalRecord equivariant_solve(const Grid& g, const Shape& omega, const Nonlinearity& nl,
                              Equivariance sym, const SolveConfig& cfg) {
  validate_domain(g, omega, g.h());
  if (sym == Equivariance::half_turn && g.dim != 2)
    throw std::invalid_argument("half-turn equivariance needs a 2d grid");
  const std::vector<double> w = interface_weights(g, omega);
  const IndexMap map = sym == Equivariance::odd_reflection ? mirror_map(g, 0) : half_turn_map(g);
  if (!weights_invariant(w, map))
    throw std::invalid_argument("domain is not symmetric under the requested equivariance");
  auto proj = [map](Field& u) { odd_project(u, map); };

  Field u = torsion_init(g, w);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.point(i).x;
    u.v[i] *= x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  }
  proj(u);
  if (!(sup_norm(u) > 0.0)) throw std::runtime_error("equivariant seed vanished");

  DescentStats st = descend_continuation(u, w, nl, cfg, proj);
  if (!st.converged)
    throw std::runtime_error("equivariant solve failed to converge within the iteration budget");
  const Nonlinearity rep_nl = reporting_nonlinearity(nl, cfg);
  return finish_nodal(std::move(u), NodalKind::equivariant, omega, w, rep_nl, cfg, st.iterations,
                      0);
}

DumbbellReport dumbbell_experiment(const std::vector<double>& deltas, double p, double target_h,
                                   const SolveConfig& cfg) {
  if (deltas.empty()) throw std::invalid_argument("empty delta list");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] <= 1.0))
      throw std::invalid_argument("corridor widths must lie in (0,1]");
    if (i && !(deltas[i] < deltas[i - 1]))
      throw std::invalid_argument("corridor widths must be strictly descending");
  }
  if (!(p >= 1.0 && p < 2.0)) throw std::invalid_argument("exponent must lie in [1,2)");
  if (!(target_h > 0.0)) throw std::invalid_argument("grid spacing must be positive");

  // box sized from the radial halo of a unit ball at this exponent
  const ShootResult shot = shoot_ground_state(2, make_nonlinearity(p), 1.0);
  const double extent = 1.5 + shot.R_supp;
  double L = std::max(4.5, extent + 1.0);
  long n = std::llround(2.0 * L / target_h) + 1;
  L = 0.5 * static_cast<double>(n - 1) * target_h;
  const Grid g{2, static_cast<int>(n), L};

  const Point c1{-1.5, 0.0}, c2{1.5, 0.0};
  const Nonlinearity nl = make_nonlinearity(p);

  // single-ball states feed the antisymmetric nodal seed; they are reused for
  // every corridor width
  SolutionRecord ball_l = solve_ground_state(g, make_ball(2, c1, 1.0), nl, cfg);
  if (!(ball_l.u.grid == g))
    throw std::runtime_error("the ball solve outgrew the planned box");
  const IndexMap mx = mirror_map(g, 0);
  Field odd_seed(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    odd_seed.v[i] = ball_l.u.v[i] - ball_l.u.v[mx(i)];

  DumbbellReport rep;
  std::ostringstream csv;
  csv.precision(12);
  csv << "delta,mu,mp_estimate,nodal_estimate,margin\n";
  for (double delta : deltas) {
    const Shape shape = make_dumbbell(c1, c2, 1.0, 0.5 * delta);
    SolutionRecord ground = solve_ground_state(g, shape, nl, cfg);
    if (!(ground.u.grid == g))
      throw std::runtime_error("a dumbbell solve outgrew the planned box");
    NodalRecord mp = mountain_pass(g, shape, nl, cfg);
    NodalRecord nodal =
        least_energy_nodal(g, shape, nl, cfg, std::vector<Field>{odd_seed, mp.sol.u});
    DumbbellRow row;
    row.delta = delta;
    row.mu = ground.report.value;
    row.mp_level = mp.level;
    row.nodal_level = nodal.level;
    row.margin = mp.level - nodal.level;
    rep.rows.push_back(row);
    csv << row.delta << ',' << row.mu << ',' << row.mp_level << ',' << row.nodal_level << ','
        << row.margin << '\n';
  }

  const Shape limit = make_union({make_ball(2, c1, 1.0), make_ball(2, c2, 1.0)});
  SolutionRecord lim = solve_ground_state(g, limit, nl, cfg);
  rep.mu_limit = lim.report.value;
  rep.csv = csv.str();
  return rep;
}

}  // namespace deadcore
