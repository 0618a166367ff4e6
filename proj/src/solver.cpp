#include "deadcore/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "deadcore/kvfile.hpp"
#include "deadcore/poisson.hpp"

namespace deadcore {

std::string describe(const SolveConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "max_iterations=" << c.max_iterations << " grad_tol=" << c.grad_tol << " window="
     << c.nonmonotone_window << " armijo=" << c.armijo_c << " eps=" << c.eps_start << ":"
     << c.eps_factor << ":" << c.eps_end << " multistart=" << c.multistart << " seed=" << c.seed
     << " clearance=" << c.clearance_margin << " census_tol=" << c.census_residual_tol
     << " box_retries=" << c.max_box_retries;
  return os.str();
}

std::uint64_t config_hash(const SolveConfig& c) { return fnv1a(describe(c)); }

const char* to_string(FieldClass c) {
  switch (c) {
    case FieldClass::nonnegative: return "nonnegative";
    case FieldClass::nonpositive: return "nonpositive";
    default: return "sign-changing";
  }
}

FieldClass classify(const Field& u, double tau) {
  bool pos = false, neg = false;
  for (double v : u.v) {
    pos = pos || v > tau;
    neg = neg || v < -tau;
  }
  if (pos && neg) return FieldClass::sign_changing;
  return neg ? FieldClass::nonpositive : FieldClass::nonnegative;
}

long dead_core_clamp(Field& u, const std::vector<double>& w, const Nonlinearity& nl,
                     double screen) {
  const Grid& g = u.grid;
  if (w.size() != u.size()) throw std::invalid_argument("weight vector size mismatch");
  const int n = g.n;
  const double hd2 = std::pow(g.h(), g.dim - 2);
  const double h2 = g.h() * g.h();
  // Zeroing node i changes J by hd2*u_i*(sum_nb - d*u_i) + hd2*h2*w_i*F(u_i);
  // accept only nonpositive changes. Decisions are gathered against the frozen
  // field and applied in one batch so symmetric fields stay exactly symmetric.
  std::vector<std::size_t> kill;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (g.on_boundary(i) || w[i] >= 0.0) continue;
    double a = u.v[i];
    if (a == 0.0 || std::abs(a) > screen) continue;
    double nb = 0.0;
    if (g.dim == 1) {
      nb = u.v[i - 1] + u.v[i + 1];
    } else {
      nb = u.v[i - 1] + u.v[i + 1] + u.v[i - n] + u.v[i + n];
    }
    double dJ = hd2 * (a * (nb - g.dim * a) + h2 * w[i] * nl.potential(a));
    if (dJ <= 0.0) kill.push_back(i);
  }
  for (std::size_t i : kill) u.v[i] = 0.0;
  return static_cast<long>(kill.size());
}

DescentStats descend(Field& u, const std::vector<double>& w, const Nonlinearity& nl,
                     const SolveConfig& cfg, const std::function<void(Field&)>& post_step) {
  const Grid& g = u.grid;
  if (w.size() != u.size()) throw std::invalid_argument("weight vector size mismatch");
  if (cfg.nonmonotone_window < 1 || cfg.armijo_c <= 0.0 || cfg.grad_tol <= 0.0)
    throw std::invalid_argument("bad descent configuration");
  const double vol = g.cell_volume();

  auto energy_of = [&](const Field& x) {
    double pot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) pot += w[i] * nl.potential(x.v[i]);
    return 0.5 * dirichlet_energy(x) - vol * pot;
  };
  // Euler-Lagrange residual; its vol-multiple is the coefficient gradient of J
  auto residual_of = [&](const Field& x, Field& d) {
    Field lap = laplacian_apply(x);
    double sup = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (g.on_boundary(i)) {
        d.v[i] = 0.0;
        continue;
      }
      double r = -lap.v[i] - w[i] * nl.f(x.v[i]);
      d.v[i] = r;
      sup = std::max(sup, std::abs(r));
    }
    return sup;
  };

  DescentStats st;
  if (post_step) post_step(u);
  Field grad(g), dir(g), trial(g);
  std::vector<double> shift(u.size(), 0.0);
  double J = energy_of(u);
  if (!std::isfinite(J)) throw std::runtime_error("nonfinite energy at the initial iterate");
  std::vector<double> window{J};

  for (long it = 0; it < cfg.max_iterations; ++it) {
    double sup = residual_of(u, grad);
    st.residual_sup = sup;
    if (sup <= cfg.grad_tol) {
      st.converged = true;
      break;
    }
    // Quasi-Newton direction (-lap + shift)^{-1} r. The shift absorbs the
    // potential's convex curvature, which is unbounded where the iterate
    // vanishes against the negative weight (up to 1/eps after smoothing);
    // explicit steps would have to resolve that stiffness and stall.
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (g.on_boundary(i)) {
        shift[i] = 0.0;
        continue;
      }
      double c = -w[i] * nl.fprime(u.v[i]);
      shift[i] = std::clamp(c, 0.0, 1e12);  // +inf at an exact zero lands on the cap
    }
    dir = shifted_poisson_solve(g, shift, grad, 1e-2, 6);
    double gd = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) gd += grad.v[i] * dir.v[i];
    if (!(gd > 0.0)) {
      // inner solve returned a non-descent direction; take a plain explicit
      // step scaled to the stencil's stability limit
      const double scale = 0.25 * g.h() * g.h();
      gd = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        dir.v[i] = scale * grad.v[i];
        gd += grad.v[i] * dir.v[i];
      }
    }
    double J_ref = *std::max_element(window.begin(), window.end());
    double lambda = 1.0;
    double J_new;
    for (;;) {
      for (std::size_t i = 0; i < u.size(); ++i) trial.v[i] = u.v[i] - lambda * dir.v[i];
      if (post_step) post_step(trial);
      J_new = energy_of(trial);
      if (J_new <= J_ref - cfg.armijo_c * lambda * vol * gd || lambda <= 1e-12) break;
      lambda *= 0.5;
    }
    u = trial;
    J = J_new;
    // Land the dead core exactly: descent alone only approaches the zeros
    // asymptotically (the closer p is to 1, the more slowly f vanishes at 0).
    if (dead_core_clamp(u, w, nl, g.h()) > 0) J = energy_of(u);
    window.push_back(J);
    if (static_cast<int>(window.size()) > cfg.nonmonotone_window) window.erase(window.begin());
    ++st.iterations;
  }
  st.energy = energy_of(u);
  return st;
}

DescentStats descend_continuation(Field& u, const std::vector<double>& w, const Nonlinearity& nl,
                                  const SolveConfig& cfg,
                                  const std::function<void(Field&)>& post_step) {
  if (nl.p != 1.0) return descend(u, w, nl, cfg, post_step);
  if (!(cfg.eps_start >= cfg.eps_end && cfg.eps_end > 0.0 && cfg.eps_factor > 0.0 &&
        cfg.eps_factor < 1.0))
    throw std::invalid_argument("bad smoothing schedule");
  DescentStats total;
  double eps = cfg.eps_start;
  for (;;) {
    bool last = eps <= cfg.eps_end * (1.0 + 1e-12);
    SolveConfig stage = cfg;
    if (!last) stage.grad_tol = std::max(cfg.grad_tol, 0.01 * eps);
    DescentStats st = descend(u, w, make_nonlinearity(1.0, eps), stage, post_step);
    total.iterations += st.iterations;
    total.residual_sup = st.residual_sup;
    total.energy = st.energy;
    total.converged = st.converged;
    if (last) break;
    eps = std::max(eps * cfg.eps_factor, cfg.eps_end);
  }
  return total;
}

Nonlinearity reporting_nonlinearity(const Nonlinearity& nl, const SolveConfig& cfg) {
  return nl.p == 1.0 ? make_nonlinearity(1.0, cfg.eps_end) : nl;
}

Field torsion_init(const Grid& g, const std::vector<double>& w) {
  if (w.size() != g.size()) throw std::invalid_argument("weight vector size mismatch");
  Field x(g), r(g), p(g);
  double rs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.on_boundary(i)) continue;
    r.v[i] = std::max(w[i], 0.0);
    rs += r.v[i] * r.v[i];
  }
  if (rs == 0.0) throw std::invalid_argument("domain does not reach the grid interior");
  p = r;
  const double rs0 = rs;
  const long cap = 60L * g.n + 2000;
  for (long it = 0; it < cap && rs > 1e-16 * rs0; ++it) {
    Field lap = laplacian_apply(p);
    double pAp = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!g.on_boundary(i)) pAp += p.v[i] * -lap.v[i];
    if (pAp <= 0.0) break;
    double a = rs / pAp;
    double rs_new = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.on_boundary(i)) continue;
      x.v[i] += a * p.v[i];
      r.v[i] -= a * -lap.v[i];
      rs_new += r.v[i] * r.v[i];
    }
    double beta = rs_new / rs;
    rs = rs_new;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!g.on_boundary(i)) p.v[i] = r.v[i] + beta * p.v[i];
  }
  double s = sup_norm(x);
  if (!(s > 0.0)) throw std::runtime_error("torsion initialization vanished");
  for (auto& val : x.v) val /= s;
  return x;
}

void validate_domain(const Grid& g, const Shape& omega, double margin) {
  if (omega.dim != g.dim) throw std::invalid_argument("domain and grid dimensions differ");
  Point lo, hi;
  bounding_box(omega, lo, hi);
  double d = std::min(lo.x + g.L, g.L - hi.x);
  if (g.dim == 2) d = std::min({d, lo.y + g.L, g.L - hi.y});
  if (!(d > 0.0) || d < margin)
    throw std::invalid_argument("omega must be bounded with positive distance to the box boundary");
}

namespace {

SolutionRecord finish_record(Field u, const std::vector<double>& w, const Shape& omega,
                             const Nonlinearity& nl, const SolveConfig& cfg,
                             const DescentStats& st) {
  const Grid g = u.grid;
  SolutionRecord rec;
  rec.report = energy_weighted(u, w, reporting_nonlinearity(nl, cfg));
  rec.tau = g.h() * g.h();
  SupportScan scan = support_scan(u, rec.tau);
  rec.support_measure = scan.measure;
  rec.support_radius = scan.radius;
  rec.inradius = scan.inradius;
  rec.classification = classify(u, rec.tau);
  QField qf = sample_q(g, omega);
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (qf.q[i] > 0) mn = std::min(mn, u.v[i]);
  rec.positivity_min = std::isinf(mn) ? 0.0 : mn;
  rec.iterations = st.iterations;
  rec.eps_final = nl.p == 1.0 ? cfg.eps_end : 0.0;
  rec.converged = st.converged;
  rec.cfg_hash = config_hash(cfg);
  rec.u = std::move(u);
  return rec;
}

}  // namespace

SolutionRecord solve_ground_state(Grid g, const Shape& omega, const Nonlinearity& nl,
                                  const SolveConfig& cfg) {
  if (!(nl.p >= 1.0 && nl.p < 2.0)) throw std::invalid_argument("exponent must lie in [1,2)");
  for (int attempt = 0;; ++attempt) {
    validate_domain(g, omega, g.h());
    std::vector<double> w = interface_weights(g, omega);
    Field u = torsion_init(g, w);
    DescentStats st = descend_continuation(u, w, nl, cfg);
    if (!st.converged) {
      std::ostringstream os;
      os << "ground state failed to converge: residual " << st.residual_sup << " after "
         << st.iterations << " iterations at p=" << nl.p;
      throw std::runtime_error(os.str());
    }
    SupportScan scan = support_scan(u, g.h() * g.h());
    if (scan.clearance < cfg.clearance_margin * g.L) {
      if (attempt >= cfg.max_box_retries)
        throw std::runtime_error(
            "support kept touching the clearance margin after box enlargement");
      g = make_grid(g.dim, g.n, 1.5 * g.L);
      continue;
    }
    return finish_record(std::move(u), w, omega, nl, cfg, st);
  }
}

UniquenessReport verify_uniqueness(const Grid& g, const Shape& omega, const Nonlinearity& nl,
                                   int starts, const SolveConfig& cfg) {
  if (starts < 1) throw std::invalid_argument("need at least one start");
  validate_domain(g, omega, g.h());
  std::vector<double> w = interface_weights(g, omega);
  Field base = torsion_init(g, w);
  std::vector<SolutionRecord> recs(static_cast<std::size_t>(starts));
  auto run_one = [&](int k) {
    Field u = base;
    if (k > 0) {
      std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(k));
      std::uniform_real_distribution<double> d(0.5, 1.5);
      for (std::size_t i = 0; i < u.size(); ++i)
        if (!g.on_boundary(i)) u.v[i] *= d(rng);
    }
    DescentStats st = descend_continuation(u, w, nl, cfg);
    recs[static_cast<std::size_t>(k)] = finish_record(std::move(u), w, omega, nl, cfg, st);
  };
  int workers = std::min(std::max(1, cfg.workers), starts);
  if (workers > 1) {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (int k = next.fetch_add(1); k < starts; k = next.fetch_add(1)) run_one(k);
      });
    for (auto& th : pool) th.join();
  } else {
    for (int k = 0; k < starts; ++k) run_one(k);
  }
  UniquenessReport rep;
  rep.tolerance = 10.0 * (cfg.grad_tol + g.h() * g.h());
  rep.all_converged = true;
  for (const auto& r : recs) {
    rep.all_converged = rep.all_converged && r.converged;
    rep.energies.push_back(r.report.value);
  }
  for (int i = 0; i < starts; ++i)
    for (int j = i + 1; j < starts; ++j)
      rep.max_pairwise = std::max(rep.max_pairwise, sup_dist(recs[static_cast<std::size_t>(i)].u,
                                                             recs[static_cast<std::size_t>(j)].u));
  rep.pass = rep.all_converged && rep.max_pairwise <= rep.tolerance;
  rep.records = std::move(recs);
  return rep;
}

EigenRecord solve_lambda1(const Grid& g, const Shape& omega, const SolveConfig& cfg) {
  validate_domain(g, omega, 0.0);
  QField qf = sample_q(g, omega);
  const double vol = g.cell_volume();
  auto qdot = [&](const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += static_cast<double>(qf.q[i]) * a.v[i] * b.v[i];
    return s * vol;
  };
  auto reinit = [&](Field& u) {
    for (std::size_t i = 0; i < u.size(); ++i)
      u.v[i] = (!g.on_boundary(i) && qf.q[i] > 0) ? 1.0 : 0.0;
  };
  Field u(g);
  reinit(u);
  if (qdot(u, u) <= 0.0)
    throw std::runtime_error("constraint manifold unreachable: the domain misses the grid");
  EigenRecord rec;
  Field grad(g), grad_prev(g), u_prev(g);
  bool have_prev = false;
  double alpha = 0.25 * g.h() * g.h();
  const long cap = std::max(cfg.max_iterations, 200000L);
  for (long it = 0; it < cap; ++it) {
    double m = qdot(u, u);
    if (m <= 0.0) {
      reinit(u);
      m = qdot(u, u);
      have_prev = false;
    }
    double s = 1.0 / std::sqrt(m);
    for (auto& val : u.v) val *= s;
    Field lap = laplacian_apply(u);
    double lam = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) lam += u.v[i] * -lap.v[i];
    lam *= vol;
    double sup = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (g.on_boundary(i)) {
        grad.v[i] = 0.0;
        continue;
      }
      double r = -lap.v[i] - lam * static_cast<double>(qf.q[i]) * u.v[i];
      grad.v[i] = r;
      sup = std::max(sup, std::abs(r));
    }
    rec.lambda = lam;
    rec.residual_sup = sup;
    rec.iterations = it;
    if (sup <= cfg.grad_tol * std::max(1.0, std::abs(lam))) break;
    if (have_prev) {
      double ss = 0.0, sy = 0.0, yy = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        double sd = u.v[i] - u_prev.v[i];
        double yd = grad.v[i] - grad_prev.v[i];
        ss += sd * sd;
        sy += sd * yd;
        yy += yd * yd;
      }
      if (sy > 1e-300)
        alpha = ss / sy;
      else if (yy > 1e-300)
        alpha = std::sqrt(ss / yy);
      alpha = std::clamp(alpha, 1e-12, 1e8);
    }
    u_prev = u;
    grad_prev = grad;
    have_prev = true;
    for (std::size_t i = 0; i < u.size(); ++i) u.v[i] -= alpha * grad.v[i];
  }
  if (rec.residual_sup > cfg.grad_tol * std::max(1.0, std::abs(rec.lambda)))
    throw std::runtime_error("eigen solve stalled before reaching the constraint manifold");
  double total = 0.0;
  for (double v : u.v) total += v;
  if (total < 0.0)
    for (auto& v : u.v) v = -v;
  for (auto& v : u.v) v = std::abs(v);
  rec.constraint = qdot(u, u);
  rec.mode = std::move(u);
  return rec;
}

std::vector<SweepRow> sweep_p(Grid g, const Shape& omega, const std::vector<double>& ps,
                              const SolveConfig& cfg, std::vector<Field>* fields) {
  if (ps.empty()) throw std::invalid_argument("empty p list");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(ps[i] >= 1.0 && ps[i] < 2.0)) throw std::invalid_argument("p values must lie in [1,2)");
    if (i && !(ps[i] > ps[i - 1]))
      throw std::invalid_argument("p values must be strictly ascending");
  }
  std::vector<SweepRow> rows;
  Field prev;
  bool have_prev = false;
  for (double p : ps) {
    Nonlinearity nl = make_nonlinearity(p, 0.0);
    SolutionRecord rec;
    if (have_prev && prev.grid == g) {
      std::vector<double> w = interface_weights(g, omega);
      Field u = prev;
      DescentStats st = descend_continuation(u, w, nl, cfg);
      if (!st.converged) {
        std::ostringstream os;
        os << "sweep row p=" << p << " failed to converge: residual " << st.residual_sup
           << " after " << st.iterations << " iterations";
        throw std::runtime_error(os.str());
      }
      SupportScan scan = support_scan(u, g.h() * g.h());
      if (scan.clearance < cfg.clearance_margin * g.L) {
        rec = solve_ground_state(make_grid(g.dim, g.n, 1.5 * g.L), omega, nl, cfg);
        g = rec.u.grid;
      } else {
        rec = finish_record(std::move(u), w, omega, nl, cfg, st);
      }
    } else {
      rec = solve_ground_state(g, omega, nl, cfg);
      g = rec.u.grid;
    }
    SweepRow row;
    row.p = p;
    row.energy = rec.report.value;
    row.sup = sup_norm(rec.u);
    row.support_measure = rec.support_measure;
    row.support_radius = rec.support_radius;
    row.inradius = rec.inradius;
    row.drift_prev = !have_prev ? 0.0
                     : prev.grid == rec.u.grid
                         ? sup_dist(prev, rec.u)
                         : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
    prev = rec.u;
    have_prev = true;
    if (fields) fields->push_back(std::move(rec.u));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "p,energy,sup,support_measure,support_radius,inradius,drift_prev\n";
  os.precision(12);
  for (const auto& r : rows)
    os << r.p << ',' << r.energy << ',' << r.sup << ',' << r.support_measure << ','
       << r.support_radius << ',' << r.inradius << ',' << r.drift_prev << '\n';
  return os.str();
}

}  // namespace deadcore
