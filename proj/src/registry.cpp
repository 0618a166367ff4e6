#include "deadcore/registry.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "deadcore/analysis.hpp"
#include "deadcore/energy.hpp"
#include "deadcore/grid.hpp"
#include "deadcore/kvfile.hpp"
#include "deadcore/nodal.hpp"
#include "deadcore/overdetermined.hpp"
#include "deadcore/radial.hpp"
#include "deadcore/solver.hpp"

namespace deadcore {
namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ';';
  return s;
}

void add_check(RunManifest& m, const std::string& name, bool pass, double observed, double tolerance,
               const std::string& note) {
  m.checks.push_back(CheckResult{name, pass, observed, tolerance, one_line(note)});
}

void save_text(RunManifest& m, const std::string& dir, const std::string& rel, const std::string& text) {
  write_text_file(dir + "/" + rel, text);
  m.artifacts.push_back(rel);
}

void save_field_artifact(RunManifest& m, const std::string& dir, const std::string& stem, const Field& u,
                         double p) {
  dump_field(dir + "/" + stem + ".txt", u, p);
  m.artifacts.push_back(stem + ".txt");
  if (u.grid.dim == 2) {
    write_pgm(dir + "/" + stem + ".pgm", u);
    m.artifacts.push_back(stem + ".pgm");
  }
}

const std::string* extra_find(const RunConfig& rc, const std::string& key) {
  auto it = rc.extra.find(key);
  return it == rc.extra.end() ? nullptr : &it->second;
}

double extra_double(const RunConfig& rc, const std::string& key, double fallback) {
  const std::string* s = extra_find(rc, key);
  return s ? kv_double(*s, rc.experiment + " key '" + key + "'") : fallback;
}

long extra_long(const RunConfig& rc, const std::string& key, long fallback) {
  const std::string* s = extra_find(rc, key);
  return s ? kv_long(*s, rc.experiment + " key '" + key + "'") : fallback;
}

std::string extra_string(const RunConfig& rc, const std::string& key, const std::string& fallback) {
  const std::string* s = extra_find(rc, key);
  return s ? *s : fallback;
}

std::vector<double> extra_doubles(const RunConfig& rc, const std::string& key,
                                  const std::vector<double>& fallback) {
  const std::string* s = extra_find(rc, key);
  return s ? kv_doubles(*s, rc.experiment + " key '" + key + "'") : fallback;
}

void require_shape(const RunConfig& rc) {
  if (!rc.has_shape)
    throw std::runtime_error("experiment '" + rc.experiment + "' needs a [shape] section or shape file");
}

Grid config_grid(const RunConfig& rc) { return make_grid(rc.dim, rc.n, rc.L); }

std::string record_text(const SolutionRecord& r, double p) {
  std::ostringstream os;
  os.precision(17);
  os << "[record]\n";
  os << "p = " << p << "\n";
  os << "classification = " << to_string(r.classification) << "\n";
  os << "converged = " << (r.converged ? "true" : "false") << "\n";
  os << "iterations = " << r.iterations << "\n";
  os << "eps_final = " << r.eps_final << "\n";
  os << "energy = " << r.report.value << "\n";
  os << "dirichlet = " << r.report.dirichlet << "\n";
  os << "potential = " << r.report.potential << "\n";
  os << "residual_sup = " << r.report.residual_sup << "\n";
  os << "identity_defect = " << r.report.identity_defect << "\n";
  os << "tau = " << r.tau << "\n";
  os << "support_measure = " << r.support_measure << "\n";
  os << "support_radius = " << r.support_radius << "\n";
  os << "inradius = " << r.inradius << "\n";
  os << "positivity_min = " << r.positivity_min << "\n";
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, r.cfg_hash);
  os << "config_hash = " << hash << "\n";
  return os.str();
}

std::string energy_csv(const EnergyReport& e) {
  std::ostringstream os;
  os << "value,dirichlet,potential,residual_sup,identity_defect\n";
  os << fmt(e.value) << "," << fmt(e.dirichlet) << "," << fmt(e.potential) << "," << fmt(e.residual_sup)
     << "," << fmt(e.identity_defect) << "\n";
  return os.str();
}

std::string profile_csv(const RadialProfile& prof) {
  std::ostringstream os;
  os << "r,u,du\n";
  for (size_t i = 0; i < prof.r.size(); ++i)
    os << fmt(prof.r[i]) << "," << fmt(prof.u[i]) << "," << fmt(prof.du[i]) << "\n";
  return os.str();
}

// Invariants every converged critical point must satisfy, independent of kind.
void solution_checks(RunManifest& m, const SolutionRecord& r, const SolveConfig& cfg) {
  add_check(m, "converged", r.converged, static_cast<double>(r.iterations), 0.0,
            "descent reached the gradient tolerance inside the iteration budget");
  add_check(m, "residual_sup", r.report.residual_sup <= cfg.grad_tol, r.report.residual_sup, cfg.grad_tol,
            "sup norm of the discrete Euler-Lagrange residual");
  add_check(m, "energy_negative", r.report.value < 0.0, r.report.value, 0.0,
            "critical value must sit strictly below zero");
  double rel = r.report.identity_defect / std::max(2.0 * r.report.dirichlet, 1e-300);
  add_check(m, "energy_identity", rel <= 1e-6, rel, 1e-6,
            "relative defect of |grad u|^2 = int q f(u) u at the critical point");
}

void nodal_common_checks(RunManifest& m, const NodalRecord& nr, const SolveConfig& cfg) {
  add_check(m, "converged", nr.sol.converged, static_cast<double>(nr.sol.iterations), 0.0,
            "polished state reached the gradient tolerance");
  add_check(m, "residual_sup", nr.sol.report.residual_sup <= cfg.grad_tol, nr.sol.report.residual_sup,
            cfg.grad_tol, "sup norm of the discrete Euler-Lagrange residual");
  double cell = nr.sol.u.grid.cell_volume();
  bool two_signs = nr.positive_mass >= 3.0 * cell && nr.negative_mass >= 3.0 * cell;
  add_check(m, "sign_changing", two_signs, std::min(nr.positive_mass, nr.negative_mass), 3.0 * cell,
            "both sign regions must cover at least three cells");
  add_check(m, "level_negative", nr.level < 0.0, nr.level, 0.0, "nodal level must sit below zero");
}

std::string nodal_text(const NodalRecord& nr, double p) {
  const char* kind = nr.kind == NodalKind::mountain_pass ? "mountain_pass"
                     : nr.kind == NodalKind::least_energy ? "least_energy"
                                                          : "equivariant";
  std::ostringstream os;
  os.precision(17);
  os << "[nodal]\n";
  os << "kind = " << kind << "\n";
  os << "level = " << nr.level << "\n";
  os << "positive_mass = " << nr.positive_mass << "\n";
  os << "negative_mass = " << nr.negative_mass << "\n";
  os << "path_rounds = " << nr.path_rounds << "\n\n";
  os << record_text(nr.sol, p);
  return os.str();
}

// ---------------------------------------------------------------------------
// experiments

void run_ground_state(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  SolutionRecord rec = solve_ground_state(config_grid(rc), rc.shape, make_nonlinearity(rc.p), rc.solve);
  save_text(m, dir, "record.txt", record_text(rec, rc.p));
  save_text(m, dir, "energy.csv", energy_csv(rec.report));
  save_field_artifact(m, dir, "field", rec.u, rc.p);

  solution_checks(m, rec, rc.solve);
  add_check(m, "positive_inside_domain", rec.positivity_min > 0.0, rec.positivity_min, 0.0,
            "minimum of u over nodes strictly inside the inclusion");
  SupportScan sc = support_scan(rec.u, rec.tau);
  double margin = rc.solve.clearance_margin * rec.u.grid.L;
  add_check(m, "box_clearance", sc.clearance >= margin - 1e-12, sc.clearance, margin,
            "distance from the support to the box edge; at least the clearance margin");
  if (rc.p == 1.0) {
    double tol = rc.dim == 1 ? 0.005 : 0.02;
    CompatibilityReport comp = compatibility_check(rec.u, rc.shape, tol);
    add_check(m, "support_twice_domain", comp.pass, comp.ratio_error, tol,
              "relative defect of |support| = 2 |domain|, forced by the equation at p = 1");
  }
}

void run_uniqueness(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  int starts = static_cast<int>(extra_long(rc, "starts", rc.solve.multistart));
  UniquenessReport rep =
      verify_uniqueness(config_grid(rc), rc.shape, make_nonlinearity(rc.p), starts, rc.solve);

  std::ostringstream os;
  os << "start,energy,classification\n";
  for (size_t i = 0; i < rep.records.size(); ++i)
    os << i << "," << fmt(rep.energies[i]) << "," << to_string(rep.records[i].classification) << "\n";
  save_text(m, dir, "uniqueness.csv", os.str());

  add_check(m, "all_starts_converged", rep.all_converged, static_cast<double>(rep.records.size()), 0.0,
            "every randomized start must converge");
  bool mixed = std::any_of(rep.records.begin(), rep.records.end(), [](const SolutionRecord& r) {
    return r.classification != FieldClass::nonnegative;
  });
  if (mixed)
    add_check(m, "pairwise_agreement", true, rep.max_pairwise, rep.tolerance,
              "not asserted: starts reached critical points of different sign classes");
  else
    add_check(m, "pairwise_agreement", rep.pass, rep.max_pairwise, rep.tolerance,
              "largest sup distance between any two converged starts");
}

void run_sweep(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  std::vector<double> ps = extra_doubles(rc, "p_list", {});
  if (ps.empty()) throw std::runtime_error("sweep-p needs p_list in the [experiment] section");
  Grid g = config_grid(rc);
  std::vector<SweepRow> rows = sweep_p(g, rc.shape, ps, rc.solve);
  save_text(m, dir, "sweep.csv", sweep_csv(rows));

  GrowthReport gr = containment_growth(rows, g.h());
  add_check(m, "rows_emitted", rows.size() == ps.size(), static_cast<double>(rows.size()),
            static_cast<double>(ps.size()), "one row per requested exponent");
  add_check(m, "inradius_monotone", gr.monotone_within_h, gr.total_growth, g.h(),
            "inradius of the support nondecreasing in p up to one cell");
}

void run_mountain_pass(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  PathConfig path;
  path.images = static_cast<int>(extra_long(rc, "images", path.images));
  path.max_rounds = extra_long(rc, "max_rounds", path.max_rounds);
  path.steps_per_round = static_cast<int>(extra_long(rc, "steps_per_round", path.steps_per_round));
  Grid g = config_grid(rc);
  Nonlinearity nl = make_nonlinearity(rc.p);
  NodalRecord nr = mountain_pass(g, rc.shape, nl, rc.solve, path);
  SolutionRecord ground = solve_ground_state(g, rc.shape, nl, rc.solve);

  save_text(m, dir, "nodal.txt", nodal_text(nr, rc.p));
  save_field_artifact(m, dir, "field", nr.sol.u, rc.p);

  nodal_common_checks(m, nr, rc.solve);
  double h = nr.sol.u.grid.h();
  double slack = 2.0 * (rc.solve.grad_tol + h * h);
  add_check(m, "level_above_ground", ground.report.value - nr.level <= slack,
            ground.report.value - nr.level, slack,
            "saddle level must not drop below the ground-state level");
}

void run_least_energy(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  Grid g = config_grid(rc);
  Nonlinearity nl = make_nonlinearity(rc.p);
  NodalRecord nr = least_energy_nodal(g, rc.shape, nl, rc.solve);
  SolutionRecord ground = solve_ground_state(g, rc.shape, nl, rc.solve);

  save_text(m, dir, "nodal.txt", nodal_text(nr, rc.p));
  save_field_artifact(m, dir, "field", nr.sol.u, rc.p);

  nodal_common_checks(m, nr, rc.solve);
  double h = nr.sol.u.grid.h();
  double slack = 2.0 * (rc.solve.grad_tol + h * h);
  add_check(m, "level_above_ground", ground.report.value - nr.level <= slack,
            ground.report.value - nr.level, slack,
            "sign-changing level must not drop below the ground-state level");
}

void run_equivariant(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  std::string sym_s = extra_string(rc, "symmetry", rc.dim == 1 ? "odd" : "half-turn");
  Equivariance sym;
  if (sym_s == "odd")
    sym = Equivariance::odd_reflection;
  else if (sym_s == "half-turn")
    sym = Equivariance::half_turn;
  else
    throw std::runtime_error("unknown symmetry '" + sym_s + "' (odd, half-turn)");

  NodalRecord nr = equivariant_solve(config_grid(rc), rc.shape, make_nonlinearity(rc.p), sym, rc.solve);
  save_text(m, dir, "nodal.txt", nodal_text(nr, rc.p));
  save_field_artifact(m, dir, "field", nr.sol.u, rc.p);

  const Grid& gg = nr.sol.u.grid;
  double worst = 0.0;
  for (size_t i = 0; i < nr.sol.u.size(); ++i) {
    size_t j;
    if (sym == Equivariance::half_turn || gg.dim == 1) {
      j = nr.sol.u.size() - 1 - i;
    } else {
      size_t ix = i % gg.n, iy = i / gg.n;
      j = iy * gg.n + (gg.n - 1 - ix);
    }
    worst = std::max(worst, std::fabs(nr.sol.u[i] + nr.sol.u[j]));
  }
  add_check(m, "antisymmetry_exact", worst <= 1e-12, worst, 1e-12,
            "output must be antisymmetric to rounding under the requested action");
  nodal_common_checks(m, nr, rc.solve);
}

void run_dumbbell(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  std::vector<double> deltas = extra_doubles(rc, "deltas", {0.4, 0.2, 0.1});
  double target_h = extra_double(rc, "h", 1.0 / 64);
  DumbbellReport rep = dumbbell_experiment(deltas, rc.p, target_h, rc.solve);

  save_text(m, dir, "dumbbell.csv", rep.csv);
  save_text(m, dir, "summary.txt", "mu_limit = " + fmt(rep.mu_limit) + "\n");

  double slack = 1e-4 * (1.0 + std::fabs(rep.mu_limit));
  bool below = true, shrinking = true;
  double worst_excess = -1e300, last_gap = 0.0;
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    worst_excess = std::max(worst_excess, rep.rows[i].mu - rep.mu_limit);
    below = below && rep.rows[i].mu <= rep.mu_limit + slack;
    double gap = std::fabs(rep.rows[i].mu - rep.mu_limit);
    if (i > 0 && gap > last_gap + slack) shrinking = false;
    last_gap = gap;
  }
  add_check(m, "ground_below_limit", below, worst_excess, slack,
            "corridor domain contains the two balls, so its level sits below the limit");
  add_check(m, "ground_monotone_to_limit", shrinking, last_gap, slack,
            "|mu(delta) - mu_limit| must shrink as the corridor narrows");
  if (!rep.rows.empty()) {
    const DumbbellRow& rown = rep.rows.back();
    if (rown.delta <= 0.5)
      add_check(m, "nodal_below_mountain_pass", rown.margin > 0.0, rown.margin, 0.0,
                "strict gap between the best sign-changing level and the saddle at the narrowest corridor");
    else
      add_check(m, "nodal_below_mountain_pass", true, rown.margin, 0.0,
                "not asserted: corridor too wide for the two-well regime");
  }
}

void run_compare(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  Grid g = config_grid(rc);
  Nonlinearity nl = make_nonlinearity(rc.p);
  NodalRecord mp = mountain_pass(g, rc.shape, nl, rc.solve);
  NodalRecord len = least_energy_nodal(g, rc.shape, nl, rc.solve);

  Field neg(len.sol.u.grid);
  for (size_t i = 0; i < neg.size(); ++i) neg[i] = -len.sol.u[i];
  double dist = std::min(sup_dist(mp.sol.u, len.sol.u), sup_dist(mp.sol.u, neg));

  std::ostringstream os;
  os << "mountain_pass_level,least_energy_level,gap,sup_distance\n";
  os << fmt(mp.level) << "," << fmt(len.level) << "," << fmt(mp.level - len.level) << "," << fmt(dist)
     << "\n";
  save_text(m, dir, "compare.csv", os.str());
  save_field_artifact(m, dir, "field_mountain_pass", mp.sol.u, rc.p);
  save_field_artifact(m, dir, "field_least_energy", len.sol.u, rc.p);

  add_check(m, "mountain_pass_residual", mp.sol.report.residual_sup <= rc.solve.grad_tol,
            mp.sol.report.residual_sup, rc.solve.grad_tol, "saddle residual");
  add_check(m, "least_energy_residual", len.sol.report.residual_sup <= rc.solve.grad_tol,
            len.sol.report.residual_sup, rc.solve.grad_tol, "least-energy residual");
  double h = g.h();
  double slack = 2.0 * (rc.solve.grad_tol + h * h);
  add_check(m, "levels_ordered", len.level <= mp.level + slack, len.level - mp.level, slack,
            "least sign-changing level cannot exceed the saddle level");
  add_check(m, "levels_reported", true, mp.level - len.level, 0.0,
            "difference of the two levels; whether they coincide is left open, nothing is asserted");
}

void run_radial_shoot(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  int N = static_cast<int>(extra_long(rc, "N", rc.dim));
  double r_omega = extra_double(rc, "r_omega", 1.0);
  ShootResult sr = shoot_ground_state(N, make_nonlinearity(rc.p), r_omega);
  save_text(m, dir, "profile.csv", profile_csv(sr.profile));

  double scale = std::max(1.0, std::fabs(sr.a));
  add_check(m, "contact_value", sr.u_end <= 1e-10 * scale, sr.u_end, 1e-10 * scale,
            "matched value at the contact radius");
  add_check(m, "contact_slope", sr.du_end <= 1e-10 * scale, sr.du_end, 1e-10 * scale,
            "matched slope at the contact radius");
  if (rc.p == 1.0) {
    ExplicitW w = explicit_w(N);
    double a_exact = w.a * r_omega * r_omega;
    double R_exact = w.R * r_omega;
    add_check(m, "center_value_closed_form", std::fabs(sr.a - a_exact) <= 1e-6, std::fabs(sr.a - a_exact),
              1e-6, "shot center value against the closed-form profile, a = " + fmt(a_exact));
    add_check(m, "support_radius_closed_form", std::fabs(sr.R_supp - R_exact) <= 1e-6,
              std::fabs(sr.R_supp - R_exact), 1e-6,
              "contact radius against the closed form, R = " + fmt(R_exact));
    double ratio = std::pow(sr.R_supp / r_omega, N);
    add_check(m, "support_volume_ratio", std::fabs(ratio - 2.0) <= 1e-5, std::fabs(ratio - 2.0), 1e-5,
              "support volume must double the inclusion volume");
  } else {
    add_check(m, "support_exceeds_inclusion", sr.R_supp > r_omega, sr.R_supp, r_omega,
              "contact radius lies outside the inclusion");
  }
}

void run_radial_verify(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  int N = static_cast<int>(extra_long(rc, "N", rc.dim));
  double r_omega = extra_double(rc, "r_omega", 1.0);
  Nonlinearity nl = make_nonlinearity(rc.p);
  ShootResult sr = shoot_ground_state(N, nl, r_omega);
  save_text(m, dir, "profile.csv", profile_csv(sr.profile));

  double dev = verify_profile(sr.profile, nl, r_omega);
  add_check(m, "reintegration_deviation", dev <= 1e-8, dev, 1e-8,
            "worst value/slope deviation when every step is re-integrated at tightened tolerance");
  double scale = std::max(1.0, std::fabs(sr.a));
  add_check(m, "contact_value", sr.u_end <= 1e-10 * scale, sr.u_end, 1e-10 * scale,
            "matched value at the contact radius");
  add_check(m, "contact_slope", sr.du_end <= 1e-10 * scale, sr.du_end, 1e-10 * scale,
            "matched slope at the contact radius");
}

void run_radial_explicit(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  int N = static_cast<int>(extra_long(rc, "N", rc.dim));
  int samples = static_cast<int>(extra_long(rc, "samples", 4097));
  RadialProfile prof = tabulate_explicit_w(N, samples);
  save_text(m, dir, "profile.csv", profile_csv(prof));

  ExplicitW w = explicit_w(N);
  add_check(m, "center_value", std::fabs(prof.value(0.0) - w.a) <= 1e-15, std::fabs(prof.value(0.0) - w.a),
            1e-15, "tabulated center value, a = " + fmt(w.a));
  add_check(m, "contact_value", std::fabs(w.value(w.R)) <= 1e-15, std::fabs(w.value(w.R)), 1e-15,
            "closed form vanishes at the contact radius R = " + fmt(w.R));
  double jump = std::fabs(w.deriv(1.0 - 1e-9) - w.deriv(1.0 + 1e-9));
  add_check(m, "seam_slope_match", jump <= 1e-8, jump, 1e-8,
            "the two branches glue with a continuous slope at the inclusion boundary");
}

void run_multiplicity(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  CensusReport rep = multiplicity_census(config_grid(rc), rc.shape, make_nonlinearity(rc.p), rc.solve);

  std::ostringstream os;
  os << "pattern,energy,residual_sup,additivity_defect,validated\n";
  for (const CensusEntry& e : rep.entries) {
    std::string pat;
    for (int b : e.pattern) pat += b ? '1' : '0';
    os << pat << "," << fmt(e.energy) << "," << fmt(e.residual_sup) << "," << fmt(e.additivity_defect)
       << "," << (e.validated ? "true" : "false") << "\n";
  }
  save_text(m, dir, "census.csv", os.str());

  double expected = std::pow(2.0, rep.components) - 1.0;
  add_check(m, "validated_patterns", rep.validated_count == static_cast<int>(expected),
            rep.validated_count, expected, "every nonzero component pattern must validate");
  add_check(m, "supports_disjoint", rep.disjoint_supports, static_cast<double>(rep.components), 0.0,
            "single-component supports must not overlap");
  double worst_add = 0.0;
  for (const CensusEntry& e : rep.entries)
    if (e.validated) worst_add = std::max(worst_add, e.additivity_defect);
  add_check(m, "energies_additive", worst_add <= 1e-8, worst_add, 1e-8,
            "pattern energy equals the sum of its parts");
  add_check(m, "states_distinct", rep.all_distinct, rep.distinct_tol, 0.0,
            "validated states pairwise distinct in sup norm beyond the support threshold");
}

void run_separation(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  double gap_lo = extra_double(rc, "gap_lo", 1.0);
  double gap_hi = extra_double(rc, "gap_hi", 3.0);
  Grid g = config_grid(rc);
  SeparationResult sr = separation_threshold_search(g, gap_lo, gap_hi, rc.solve);

  std::ostringstream os;
  os << "gap_fail,gap_validate,evaluations\n";
  os << fmt(sr.d_lo) << "," << fmt(sr.d_hi) << "," << sr.evaluations << "\n";
  save_text(m, dir, "separation.csv", os.str());

  add_check(m, "bracket_ordered", sr.d_lo < sr.d_hi, sr.d_hi - sr.d_lo, 0.0,
            "failing gap strictly below the validating gap");
  add_check(m, "bracket_width", sr.d_hi - sr.d_lo <= 4.0 * g.h() + 1e-12, sr.d_hi - sr.d_lo, 4.0 * g.h(),
            "bisection must resolve the threshold to a few cells");
}

void run_outer_set(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  OuterSetReport rep = outer_set_solve(config_grid(rc), rc.shape, rc.solve);

  save_text(m, dir, "record.txt", record_text(rep.ground, 1.0));
  save_field_artifact(m, dir, "field", rep.ground.u, 1.0);
  {
    const Grid& gg = rep.ground.u.grid;
    std::ostringstream os;
    os << gg.dim << " " << gg.n << " " << fmt(gg.L) << "\n";
    int rows = gg.dim == 1 ? 1 : gg.n;
    for (int y = 0; y < rows; ++y) {
      for (int x = 0; x < gg.n; ++x) os << (rep.support.mask[gg.index(x, y)] ? '1' : '0');
      os << "\n";
    }
    save_text(m, dir, "mask.txt", os.str());
  }
  {
    std::ostringstream os;
    os << "boundary_value_max,boundary_grad_max,value_tol,grad_tol,band_nodes\n";
    os << fmt(rep.flux.boundary_value_max) << "," << fmt(rep.flux.boundary_grad_max) << ","
       << fmt(rep.flux.value_tol) << "," << fmt(rep.flux.grad_tol) << "," << rep.flux.band_nodes << "\n";
    save_text(m, dir, "flux.csv", os.str());
  }

  solution_checks(m, rep.ground, rc.solve);
  add_check(m, "domain_inside_support", rep.contains_domain, 0.0, 0.0,
            "the inclusion must sit strictly inside the recovered outer set");
  add_check(m, "free_boundary_value", rep.flux.boundary_value_max <= rep.flux.value_tol,
            rep.flux.boundary_value_max, rep.flux.value_tol,
            "u must vanish along the outer-set boundary band");
  add_check(m, "free_boundary_gradient", rep.flux.boundary_grad_max <= rep.flux.grad_tol,
            rep.flux.boundary_grad_max, rep.flux.grad_tol,
            "grad u must vanish along the outer-set boundary band");
  MeasureResult mr = shape_measure(rc.shape);
  double ratio_err = std::fabs(rep.support.measure_refined / (2.0 * mr.value) - 1.0);
  double tol = rc.dim == 1 ? 0.005 : 0.02;
  add_check(m, "outer_measure_ratio", ratio_err <= tol, ratio_err, tol,
            "|U| must double |D|; refined support measure against the quadrature measure");
}

void run_lambda1(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  EigenRecord er = solve_lambda1(config_grid(rc), rc.shape, rc.solve);

  std::ostringstream os;
  os << "lambda,constraint,residual_sup,iterations\n";
  os << fmt(er.lambda) << "," << fmt(er.constraint) << "," << fmt(er.residual_sup) << "," << er.iterations
     << "\n";
  save_text(m, dir, "eigen.csv", os.str());
  save_field_artifact(m, dir, "mode", er.mode, 2.0);

  add_check(m, "lambda_positive", er.lambda > 0.0, er.lambda, 0.0,
            "principal indefinite eigenvalue must be positive");
  add_check(m, "normalization", std::fabs(er.constraint - 1.0) <= 1e-10, std::fabs(er.constraint - 1.0),
            1e-10, "weighted mass constraint int q v^2 = 1");
  double tol = rc.solve.grad_tol * std::max(1.0, er.lambda);
  add_check(m, "eigen_residual", er.residual_sup <= tol, er.residual_sup, tol,
            "sup norm of -lap v - lambda q v");
}

void run_starshaped(const RunConfig& rc, RunManifest& m, const std::string& dir) {
  require_shape(rc);
  SolutionRecord rec = solve_ground_state(config_grid(rc), rc.shape, make_nonlinearity(rc.p), rc.solve);
  std::vector<double> cvec = extra_doubles(rc, "center", {0.0, 0.0});
  Point center{cvec[0], cvec.size() > 1 ? cvec[1] : 0.0};
  int rays = static_cast<int>(extra_long(rc, "rays", 720));
  StarshapedReport rep = starshaped_check(rec.u, center, rays);

  std::ostringstream os;
  os << "rays,violations,worst_gap\n";
  os << rep.rays << "," << rep.violations << "," << fmt(rep.worst_gap) << "\n";
  save_text(m, dir, "star.csv", os.str());
  save_field_artifact(m, dir, "field", rec.u, rc.p);

  solution_checks(m, rec, rc.solve);
  std::string expect = extra_string(rc, "expect", "pass");
  if (expect == "fail")
    add_check(m, "expected_failure", !rep.pass, static_cast<double>(rep.violations), 0.0,
              "negative control: the ray test must reject this support");
  else
    add_check(m, "rays_star_shaped", rep.pass, static_cast<double>(rep.violations), 0.0,
              "rays whose support trace detaches from the center");
}

struct ExpEntry {
  const char* name;
  void (*fn)(const RunConfig&, RunManifest&, const std::string&);
};

constexpr ExpEntry kExperiments[] = {
    {"ground-state", run_ground_state},
    {"uniqueness", run_uniqueness},
    {"sweep-p", run_sweep},
    {"nodal.mountain-pass", run_mountain_pass},
    {"nodal.least-energy", run_least_energy},
    {"nodal.equivariant", run_equivariant},
    {"nodal.dumbbell", run_dumbbell},
    {"nodal.compare", run_compare},
    {"radial.shoot", run_radial_shoot},
    {"radial.verify", run_radial_verify},
    {"radial.explicit", run_radial_explicit},
    {"multiplicity", run_multiplicity},
    {"separation-search", run_separation},
    {"outer-set", run_outer_set},
    {"lambda1", run_lambda1},
    {"starshaped", run_starshaped},
};

// ---------------------------------------------------------------------------
// suite plans

std::string ball_text(int dim, double cx, double cy, double radius) {
  std::ostringstream os;
  os << "[domain]\ndim = " << dim << "\n\n[shape]\ntype = ball\ncenter = " << fmt(cx);
  if (dim == 2) os << " " << fmt(cy);
  os << "\nradius = " << fmt(radius) << "\n";
  return os.str();
}

std::string two_balls_text(double c, double radius) {
  std::ostringstream os;
  os << "[domain]\ndim = 1\n\n[shape]\ntype = ball\ncenter = " << fmt(-c)
     << "\nradius = " << fmt(radius) << "\n\n[shape]\ntype = ball\ncenter = " << fmt(c)
     << "\nradius = " << fmt(radius) << "\n";
  return os.str();
}

std::string annulus_text(double inner, double outer) {
  std::ostringstream os;
  os << "[domain]\ndim = 2\n\n[shape]\ntype = annulus\ncenter = 0 0\ninner = " << fmt(inner)
     << "\nouter = " << fmt(outer) << "\n";
  return os.str();
}

std::string star_table_text(const std::string& label, const std::vector<double>& table) {
  std::ostringstream os;
  os << "[domain]\ndim = 2\n\n[shape]\n# " << label << "\ntype = star_polar\ncenter = 0 0\nradius_table =";
  for (double r : table) os << " " << fmt(r);
  os << "\n";
  return os.str();
}

std::vector<double> ellipse_table(double a, double b, int samples) {
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) {
    double th = 2.0 * std::numbers::pi * i / samples;
    t[i] = a * b / std::hypot(b * std::cos(th), a * std::sin(th));
  }
  return t;
}

std::vector<double> petal_table(double base, double amp, int petals, int samples) {
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) {
    double th = 2.0 * std::numbers::pi * i / samples;
    t[i] = base + amp * std::cos(petals * th);
  }
  return t;
}

struct PlanItem {
  std::string label;
  RunConfig rc;
};

RunConfig base_rc(const std::string& experiment, int dim, int n, double L, double p) {
  RunConfig rc;
  rc.experiment = experiment;
  rc.dim = dim;
  rc.n = n;
  rc.L = L;
  rc.p = p;
  rc.origin = "suite";
  return rc;
}

void with_shape(RunConfig& rc, const std::string& text) {
  rc.shape = parse_shape_text(text, "suite");
  rc.has_shape = true;
  rc.shape_text = text;
}

std::vector<PlanItem> build_plan(const std::string& tier) {
  std::vector<PlanItem> plan;
  auto add = [&](const std::string& label, RunConfig rc) { plan.push_back({label, std::move(rc)}); };

  // smoke: closed-form radial shots and a fast 1d ground state with the
  // energy-identity checks attached.
  for (int N : {1, 2, 3}) {
    RunConfig rc = base_rc("radial.shoot", 1, 257, 4.0, 1.0);
    rc.extra["N"] = std::to_string(N);
    add("radial-shoot-n" + std::to_string(N), rc);
  }
  {
    RunConfig rc = base_rc("radial.explicit", 1, 257, 4.0, 1.0);
    rc.extra["N"] = "2";
    add("radial-explicit-n2", rc);
  }
  {
    RunConfig rc = base_rc("radial.verify", 1, 257, 4.0, 1.3);
    rc.extra["N"] = "2";
    add("radial-verify-n2", rc);
  }
  {
    RunConfig rc = base_rc("ground-state", 1, 513, 4.0, 1.0);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("ground-interval", rc);
  }
  {
    RunConfig rc = base_rc("ground-state", 1, 257, 4.0, 1.5);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("ground-interval-p15", rc);
  }
  if (tier == "smoke") return plan;

  // desk: one representative of every experiment at working resolution.
  {
    RunConfig rc = base_rc("uniqueness", 1, 257, 3.0, 1.3);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("uniqueness-interval", rc);
  }
  {
    RunConfig rc = base_rc("uniqueness", 2, 129, 2.5, 1.5);
    rc.extra["starts"] = "3";
    with_shape(rc, ball_text(2, 0, 0, 1));
    add("uniqueness-disc", rc);
  }
  {
    RunConfig rc = base_rc("sweep-p", 1, 257, 4.0, 1.0);
    rc.extra["p_list"] = "1.0 1.1 1.2 1.3 1.4 1.5 1.6 1.7 1.8 1.9";
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("sweep-interval", rc);
  }
  {
    RunConfig rc = base_rc("nodal.mountain-pass", 1, 257, 3.0, 1.0);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("mountain-pass-interval", rc);
  }
  {
    RunConfig rc = base_rc("nodal.least-energy", 1, 257, 3.0, 1.0);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("least-energy-interval", rc);
  }
  {
    RunConfig rc = base_rc("nodal.equivariant", 1, 257, 3.0, 1.0);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("equivariant-interval", rc);
  }
  {
    RunConfig rc = base_rc("nodal.equivariant", 2, 129, 2.5, 1.5);
    rc.extra["symmetry"] = "half-turn";
    with_shape(rc, ball_text(2, 0, 0, 1));
    add("equivariant-disc", rc);
  }
  {
    RunConfig rc = base_rc("nodal.compare", 1, 257, 3.0, 1.0);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("compare-interval", rc);
  }
  {
    RunConfig rc = base_rc("multiplicity", 1, 1025, 8.0, 1.0);
    with_shape(rc, two_balls_text(5.0, 1.0));
    add("multiplicity-two-intervals", rc);
  }
  {
    RunConfig rc = base_rc("separation-search", 1, 1537, 6.0, 1.0);
    rc.extra["gap_lo"] = "1.5";
    rc.extra["gap_hi"] = "2.5";
    add("separation-search", rc);
  }
  {
    RunConfig rc = base_rc("outer-set", 1, 513, 4.0, 1.0);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("outer-set-interval", rc);
  }
  {
    RunConfig rc = base_rc("outer-set", 2, 385, 3.0, 1.0);
    with_shape(rc, ball_text(2, 0, 0, 1));
    add("outer-set-disc", rc);
  }
  {
    RunConfig rc = base_rc("lambda1", 1, 513, 4.0, 1.0);
    with_shape(rc, ball_text(1, 0, 0, 1));
    add("lambda1-interval", rc);
  }
  {
    RunConfig rc = base_rc("starshaped", 2, 257, 4.0, 1.5);
    with_shape(rc, star_table_text("ellipse 1.4 x 0.9", ellipse_table(1.4, 0.9, 720)));
    add("starshaped-ellipse", rc);
  }
  {
    RunConfig rc = base_rc("starshaped", 2, 257, 4.0, 1.5);
    with_shape(rc, star_table_text("five petals", petal_table(0.8, 0.25, 5, 720)));
    add("starshaped-petals", rc);
  }
  {
    RunConfig rc = base_rc("starshaped", 2, 257, 4.0, 1.0);
    rc.extra["expect"] = "fail";
    with_shape(rc, annulus_text(0.45, 1.0));
    add("starshaped-annulus-control", rc);
  }
  {
    RunConfig rc = base_rc("nodal.dumbbell", 2, 257, 4.0, 1.5);
    rc.extra["deltas"] = "0.4 0.2 0.1";
    add("dumbbell", rc);
  }
  if (tier == "desk") return plan;

  // full: fine grids and the extended corridor sweep.
  {
    RunConfig rc = base_rc("ground-state", 2, 769, 3.0, 1.0);
    with_shape(rc, ball_text(2, 0, 0, 1));
    add("ground-disc-fine", rc);
  }
  {
    RunConfig rc = base_rc("sweep-p", 2, 257, 3.0, 1.0);
    rc.extra["p_list"] = "1.1 1.3 1.5 1.7 1.9";
    with_shape(rc, ball_text(2, 0, 0, 1));
    add("sweep-disc", rc);
  }
  {
    RunConfig rc = base_rc("starshaped", 2, 513, 4.0, 1.5);
    with_shape(rc, star_table_text("five petals", petal_table(0.8, 0.25, 5, 720)));
    add("starshaped-petals-fine", rc);
  }
  {
    RunConfig rc = base_rc("nodal.dumbbell", 2, 257, 4.0, 1.5);
    rc.extra["deltas"] = "0.4 0.3 0.2 0.15 0.1 0.07";
    add("dumbbell-extended", rc);
  }
  return plan;
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const ExpEntry& e : kExperiments) out.push_back(e.name);
  return out;
}

bool has_experiment(const std::string& name) {
  for (const ExpEntry& e : kExperiments)
    if (name == e.name) return true;
  return false;
}

RunManifest run_experiment(const RunConfig& rc) {
  const ExpEntry* entry = nullptr;
  for (const ExpEntry& e : kExperiments)
    if (rc.experiment == e.name) entry = &e;
  if (!entry) {
    std::string msg = "unknown experiment '" + rc.experiment + "'; available:";
    for (const ExpEntry& e : kExperiments) msg += std::string(" ") + e.name;
    throw std::runtime_error(msg);
  }

  ensure_directory(rc.out_dir);
  RunManifest m;
  m.experiment = rc.experiment;
  m.config_hash = run_config_hash(rc);
  auto t0 = std::chrono::steady_clock::now();
  entry->fn(rc, m, rc.out_dir);
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.pass = std::all_of(m.checks.begin(), m.checks.end(), [](const CheckResult& c) { return c.pass; });
  write_manifest(rc.out_dir, m);
  return m;
}

RunManifest run_suite(const std::string& tier, const std::string& out_dir, int workers) {
  if (tier != "smoke" && tier != "desk" && tier != "full")
    throw std::runtime_error("unknown suite tier '" + tier + "' (smoke, desk, full)");
  std::vector<PlanItem> plan = build_plan(tier);
  ensure_directory(out_dir);

  struct Outcome {
    bool ran = false;
    bool pass = false;
    double wall = 0.0;
    std::string note;
  };
  std::vector<Outcome> results(plan.size());
  std::mutex io;
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= plan.size()) return;
      RunConfig rc = plan[i].rc;
      rc.out_dir = out_dir + "/" + plan[i].label;
      Outcome& out = results[i];
      auto t0 = std::chrono::steady_clock::now();
      try {
        RunManifest mm = run_experiment(rc);
        out.ran = true;
        out.pass = mm.pass;
        out.wall = mm.wall_seconds;
        out.note = mm.pass ? "all checks held" : "a member check failed; see its manifest";
      } catch (const std::exception& e) {
        out.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.note = std::string("error: ") + e.what();
      }
      std::lock_guard<std::mutex> lk(io);
      std::fprintf(stderr, "[suite] %-28s %s (%.1f s)\n", plan[i].label.c_str(),
                   out.pass ? "PASS" : "FAIL", out.wall);
    }
  };

  int nw = std::max(1, std::min<int>(workers, static_cast<int>(plan.size())));
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  RunManifest agg;
  agg.experiment = "suite." + tier;
  std::string key = tier;
  for (const PlanItem& it : plan) key += ":" + it.label;
  agg.config_hash = fnv1a(key);
  double total = 0.0;
  for (size_t i = 0; i < plan.size(); ++i) {
    if (results[i].ran) agg.artifacts.push_back(plan[i].label + "/manifest.txt");
    agg.checks.push_back(
        CheckResult{plan[i].label, results[i].pass, results[i].wall, 0.0, one_line(results[i].note)});
    total += results[i].wall;
  }
  agg.wall_seconds = total;
  agg.pass = std::all_of(results.begin(), results.end(), [](const Outcome& o) { return o.pass; });
  write_manifest(out_dir, agg);
  return agg;
}

}  // namespace deadcore
