#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "deadcore/energy.hpp"
#include "deadcore/geometry.hpp"
#include "deadcore/grid.hpp"

namespace deadcore {

struct SolveConfig {
  long max_iterations = 50000;
  double grad_tol = 1e-8;  // sup norm of the Euler-Lagrange residual
  int nonmonotone_window = 10;
  double armijo_c = 1e-4;
  double eps_start = 1e-2;  // p=1 smoothing schedule, multiplicative
  double eps_end = 1e-8;
  double eps_factor = 0.1;
  int multistart = 5;
  std::uint64_t seed = 12345;
  double clearance_margin = 0.10;  // support must keep this fraction of L to the box edge
  double census_residual_tol = 1e-3;
  int max_box_retries = 3;
  int workers = 1;  // independent multistart solves run on this many threads
};

// canonical one-line rendering, also the hashing key for provenance
std::string describe(const SolveConfig& cfg);
std::uint64_t config_hash(const SolveConfig& cfg);

enum class FieldClass { nonnegative, nonpositive, sign_changing };
const char* to_string(FieldClass c);
FieldClass classify(const Field& u, double tau);

struct DescentStats {
  long iterations = 0;
  double residual_sup = 0.0;
  double energy = 0.0;
  bool converged = false;
};

// Zeroes every interior node with w < 0 and |u| <= screen whose removal does
// not increase J against the frozen field (decisions are batch-applied, so
// symmetric fields stay exactly symmetric). Near p = 1 the forcing vanishes
// so slowly at 0 that smooth descent meets a sup-residual target only with
// absurdly deep dead-core values; the discrete minimizer sits at exact
// zeros, and this pass lands there. Returns the number of nodes zeroed.
long dead_core_clamp(Field& u, const std::vector<double>& w, const Nonlinearity& nl,
                     double screen);

// Quasi-Newton descent on J(u) = dirichlet/2 - vol*sum w_i F(u_i): each step
// solves (-lap + diag(max(0, -w f'(u)))) d = r for the direction, then runs a
// nonmonotone Armijo search over the last `nonmonotone_window` values. The
// diagonal shift carries the potential's stiff curvature at near-zero nodes
// against the negative weight, so steps stay O(1) where explicit schemes
// stall. post_step reprojects every trial iterate; it must not increase J
// materially (meant for exact symmetry projections).
DescentStats descend(Field& u, const std::vector<double>& w, const Nonlinearity& nl,
                     const SolveConfig& cfg, const std::function<void(Field&)>& post_step = {});

// Runs descend through the smoothing schedule when nl.p == 1 (the gradient is
// undefined at eps = 0); plain descend otherwise. Stats accumulate iterations
// across stages and report the final stage's residual.
DescentStats descend_continuation(Field& u, const std::vector<double>& w, const Nonlinearity& nl,
                                  const SolveConfig& cfg,
                                  const std::function<void(Field&)>& post_step = {});

// nonlinearity used for residuals/energies of returned records: the final
// smoothing width at p = 1, the exact power otherwise
Nonlinearity reporting_nonlinearity(const Nonlinearity& nl, const SolveConfig& cfg);

// conjugate-gradient solve of -lap v = max(w,0), scaled to sup 1
Field torsion_init(const Grid& g, const std::vector<double>& w);

struct SolutionRecord {
  Field u;
  EnergyReport report;  // against the solver's interface weights
  FieldClass classification = FieldClass::nonnegative;
  double tau = 0.0;  // support threshold h^2
  double support_measure = 0.0;
  double support_radius = 0.0;
  double inradius = 0.0;
  double positivity_min = 0.0;  // min of u over nodes strictly inside omega
  long iterations = 0;
  double eps_final = 0.0;
  bool converged = false;
  std::uint64_t cfg_hash = 0;
};

// rejects domains that spill out of, or hug, the computational box
void validate_domain(const Grid& g, const Shape& omega, double margin);

// Ground state: torsion-profile start, continuation at p=1, box enlarged by
// 1.5 (up to max_box_retries) whenever the support eats into the clearance
// margin. The grid inside the returned record is the one actually used.
SolutionRecord solve_ground_state(Grid g, const Shape& omega, const Nonlinearity& nl,
                                  const SolveConfig& cfg = {});

struct UniquenessReport {
  bool pass = false;
  bool all_converged = false;
  double max_pairwise = 0.0;
  double tolerance = 0.0;  // 10 * (grad_tol + h^2)
  std::vector<double> energies;
  std::vector<SolutionRecord> records;
};

// `starts` randomized positive initializations; PASS when every pair of
// converged solutions agrees in sup norm within `tolerance`
UniquenessReport verify_uniqueness(const Grid& g, const Shape& omega, const Nonlinearity& nl,
                                   int starts, const SolveConfig& cfg = {});

struct EigenRecord {
  double lambda = 0.0;
  Field mode;              // nonnegative representative
  double constraint = 0.0;  // int q mode^2, renormalized to 1
  double residual_sup = 0.0;
  long iterations = 0;
};

// smallest positive eigenvalue of -lap v = lambda q v subject to int q v^2 = 1,
// by projected spectral descent of the Dirichlet energy with renormalization
EigenRecord solve_lambda1(const Grid& g, const Shape& omega, const SolveConfig& cfg = {});

struct SweepRow {
  double p = 0.0;
  double energy = 0.0;
  double sup = 0.0;
  double support_measure = 0.0;
  double support_radius = 0.0;
  double inradius = 0.0;
  double drift_prev = 0.0;  // sup distance to the previous row's field; NaN on grid change
};

// ground state per p (ascending), each row warm-started from the previous
// solution while the grid stays unchanged; optional out-param collects fields
std::vector<SweepRow> sweep_p(Grid g, const Shape& omega, const std::vector<double>& ps,
                              const SolveConfig& cfg = {}, std::vector<Field>* fields = nullptr);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace deadcore
