#pragma once

#include <string>

#include "deadcore/analysis.hpp"
#include "deadcore/solver.hpp"

namespace deadcore {

// Free-boundary conditions along the support edge: both the value and the
// gradient of u must vanish there up to discretization noise. The band holds
// every interior node within two cells of a mask transition.
struct FluxReport {
  double boundary_value_max = 0.0;
  double boundary_grad_max = 0.0;
  double value_tol = 0.0;  // 10 tau
  double grad_tol = 0.0;   // 20 h
  long band_nodes = 0;
  bool pass = false;
};

FluxReport flux_check(const Field& u, const SupportInfo& info);

// Solves the p = 1 problem with inclusion D and reads off U as the interior
// of the support; the pair (D, U) then satisfies the overdetermined torsion
// relation, with D compactly inside U.
struct OuterSetReport {
  SolutionRecord ground;
  SupportInfo support;
  bool contains_domain = false;  // D inside the support with a one-cell margin
  double u_radius_refined = 0.0;
  FluxReport flux;
};

OuterSetReport outer_set_solve(Grid g, const Shape& d_omega, const SolveConfig& cfg = {});

// The reverse direction, prescribing U and recovering D, has no general
// construction; this reports that status for tooling that lists experiments.
std::string inner_set_status();

}  // namespace deadcore
