#pragma once

#include <cstdint>
#include <vector>

#include "deadcore/geometry.hpp"
#include "deadcore/grid.hpp"
#include "deadcore/solver.hpp"

namespace deadcore {

// Support at threshold tau = h^2 plus measurements that cancel the leading
// threshold bias. Counting {|u| > tau} puts the detected edge where the field
// crosses tau, a band sqrt(2 tau) wide at a quadratic contact, so the raw
// mask systematically undershoots; evaluating at tau and 4 tau and
// extrapolating in sqrt(tau) removes that term.
struct SupportInfo {
  std::vector<std::uint8_t> mask;
  SupportScan scan;
  double measure_refined = 0.0;
  double radius_refined = 0.0;
};

SupportInfo extract_support(const Field& u, double clearance_margin = 0.10);

struct CompatibilityReport {
  double support_measure = 0.0;
  double omega_measure = 0.0;
  double ratio_error = 0.0;  // relative defect of |K| = 2 |Omega|
  bool pass = false;
};

// p = 1 only: integrating the equation over the support forces |K| = 2 |Omega|
CompatibilityReport compatibility_check(const Field& u, const Shape& omega, double rel_tol);

struct StarshapedReport {
  bool pass = false;
  int rays = 0;
  int violations = 0;
  double worst_gap = 0.0;  // longest below-threshold run inside the support, absolute units
};

// every ray from `center` must meet {|u| > tau} in one interval anchored at
// the center; gaps up to one grid cell are rasterization slack
StarshapedReport starshaped_check(const Field& u, Point center, int rays = 720);

struct GrowthReport {
  bool monotone_within_h = false;
  double total_growth = 0.0;
  std::vector<double> inradius;
};

GrowthReport containment_growth(const std::vector<SweepRow>& rows, double h);

struct CensusEntry {
  std::vector<int> pattern;  // 0/1 per component
  double energy = 0.0;
  double residual_sup = 0.0;
  double additivity_defect = 0.0;
  bool validated = false;
  Field u;
};

struct CensusReport {
  int components = 0;
  std::vector<CensusEntry> entries;  // the 2^l - 1 nonzero patterns
  int validated_count = 0;
  bool disjoint_supports = false;
  bool all_distinct = false;
  double distinct_tol = 0.0;  // 10 tau
};

// per-component ground states on the shared grid, then every nonzero sum
// validated against the full-domain equation
CensusReport multiplicity_census(const Grid& g, const Shape& omega, const Nonlinearity& nl,
                                 const SolveConfig& cfg = {});

struct SeparationResult {
  double d_lo = 0.0;  // largest tested gap whose summed candidate fails validation
  double d_hi = 0.0;  // smallest tested gap that validates
  int evaluations = 0;
};

// two radius-1 intervals at p = 1, gap bisection on the grid lattice
SeparationResult separation_threshold_search(const Grid& g, double gap_lo, double gap_hi,
                                             const SolveConfig& cfg = {});

struct NearTwoReport {
  double p_threshold = 2.0;  // first tested p whose multistart agreement fails, 2 if none
  bool uniqueness_held = false;
  std::vector<double> tested;
};

NearTwoReport uniqueness_near_two(const Grid& g, const Shape& omega,
                                  const std::vector<double>& ps, int starts,
                                  const SolveConfig& cfg = {});

}  // namespace deadcore
