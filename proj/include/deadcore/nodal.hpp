#pragma once

#include <string>
#include <vector>

#include "deadcore/solver.hpp"

namespace deadcore {

enum class NodalKind { mountain_pass, least_energy, equivariant };

struct NodalRecord {
  SolutionRecord sol;
  NodalKind kind = NodalKind::least_energy;
  double level = 0.0;          // energy at the reported critical point
  double positive_mass = 0.0;  // measure of {u > tau}
  double negative_mass = 0.0;  // measure of {u < -tau}
  long path_rounds = 0;        // string rounds (mountain pass only)
};

// String resolution and per-round work. Production runs want images >= 9;
// three images is the smallest string that still carries a climbing image.
struct PathConfig {
  int images = 17;
  long max_rounds = 4000;
  int steps_per_round = 6;
};

// Min-max saddle between -w and +w by a climbing-image string. When the
// domain has mirror symmetries the whole string is confined to the symmetric
// subspace exactly, which pins the sign-changing saddle instead of letting
// the path slide toward a one-signed state.
NodalRecord mountain_pass(const Grid& g, const Shape& omega, const Nonlinearity& nl,
                          const SolveConfig& cfg = {}, const PathConfig& path = {});

// Descends every seed and keeps the lowest converged sign-changing critical
// point. An empty seed list selects a built-in family: antisymmetric
// reflections of the ground state where the domain allows them, a
// ring-modulated even dip, and seeded random sign splits.
NodalRecord least_energy_nodal(const Grid& g, const Shape& omega, const Nonlinearity& nl,
                               const SolveConfig& cfg = {},
                               const std::vector<Field>& seeds = {});

enum class Equivariance { odd_reflection, half_turn };

// Critical point inside an exact antisymmetry class: odd under the x mirror,
// or odd under the half-turn about the origin (2D). The projector runs after
// every accepted step, so the output antisymmetry is exact in floating point.
NodalRecord equivariant_solve(const Grid& g, const Shape& omega, const Nonlinearity& nl,
                              Equivariance sym, const SolveConfig& cfg = {});

struct DumbbellRow {
  double delta = 0.0;        // corridor width
  double mu = 0.0;           // ground-state energy
  double mp_level = 0.0;     // mountain-pass estimate
  double nodal_level = 0.0;  // best sign-changing energy
  double margin = 0.0;       // mp_level - nodal_level
};

struct DumbbellReport {
  std::vector<DumbbellRow> rows;
  double mu_limit = 0.0;  // two disjoint balls, the corridor removed
  std::string csv;
};

// Two unit balls at (+-3/2, 0) joined by a corridor of width delta, one row
// per delta (given descending). The nodal estimate is seeded by the mirror
// difference of the single-ball states and by the mountain-pass output.
DumbbellReport dumbbell_experiment(const std::vector<double>& deltas, double p, double target_h,
                                   const SolveConfig& cfg = {});

}  // namespace deadcore
